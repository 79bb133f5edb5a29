//! Canonical representatives of positive definite forms up to isometry.
//!
//! The canonical Gram matrix is the lexicographically smallest one over all
//! bases, where the key is read column by column as
//! `(dᵢ, g₁ᵢ, …, gᵢ₋₁ᵢ)` and off-diagonal entries are ordered
//! `0 < 1 < −1 < 2 < −2 < …`. The minimum is found by a branch-and-bound over
//! short vectors: at each level only primitive extensions of minimal column
//! key survive. Minimal column keys force `|2gᵢⱼ| ≤ dᵢ`, so the result is
//! size-reduced with non-decreasing diagonal.

use num_bigint::BigInt;
use num_integer::Integer;

use super::enumerate::{Ellipsoid, ShortVector};
use super::gram::{GramMatrix, UnimodularMap};
use crate::error::{Error, Result};

const OVF: Error = Error::Overflow("canonical form");

fn ord(g: i128) -> i128 {
    2 * g.abs() - (g > 0) as i128
}

struct Cand {
    coords: Vec<i64>,
    qv: Vec<i128>,
    norm: i128,
}

struct Search<'a> {
    n: usize,
    cands: &'a [Cand],
    chosen: Vec<usize>,
    keys: Vec<Vec<i128>>,
    best: Option<(Vec<Vec<i128>>, Vec<usize>)>,
}

enum Outcome {
    Done,
    NeedLongerVectors,
}

impl<'a> Search<'a> {
    /// `v` is a unimodular transform with `[b₁..bᵢ]ᵀ·v = [L | 0]`, `L` unit lower triangular.
    fn level(&mut self, i: usize, v: &[Vec<i128>]) -> Result<Outcome> {
        if i == self.n {
            if self.best.as_ref().map_or(true, |(bk, _)| self.keys < *bk) {
                self.best = Some((self.keys.clone(), self.chosen.clone()));
            }
            return Ok(Outcome::Done);
        }
        // Gather valid candidates of minimal norm, then of minimal key.
        let mut group_norm = None;
        let mut found: Vec<(Vec<i128>, usize)> = Vec::new();
        for (idx, c) in self.cands.iter().enumerate() {
            if let Some(nm) = group_norm {
                if c.norm > nm {
                    break;
                }
            }
            if !self.extends(i, v, &c.coords)? {
                continue;
            }
            group_norm = Some(c.norm);
            let mut key = Vec::with_capacity(i + 1);
            key.push(c.norm);
            for &j in &self.chosen {
                let g: i128 = dot(&c.qv, &self.cands[j].coords)?;
                key.push(ord(g));
            }
            found.push((key, idx));
        }
        if found.is_empty() {
            return Ok(Outcome::NeedLongerVectors);
        }
        let min = found.iter().map(|f| &f.0).min().unwrap().clone();
        for (key, idx) in found.into_iter().filter(|f| f.0 == min) {
            if self.worse_than_best(&key) {
                return Ok(Outcome::Done);
            }
            let nv = self.push_vector(i, v, &self.cands[idx].coords)?;
            self.chosen.push(idx);
            self.keys.push(key);
            let out = self.level(i + 1, &nv)?;
            self.keys.pop();
            self.chosen.pop();
            if let Outcome::NeedLongerVectors = out {
                return Ok(out);
            }
        }
        Ok(Outcome::Done)
    }

    /// Current prefix extended by `key` already exceeds the best prefix.
    fn worse_than_best(&self, key: &[i128]) -> bool {
        let Some((bk, _)) = &self.best else { return false };
        let i = self.keys.len();
        for l in 0..i {
            match self.keys[l].cmp(&bk[l]) {
                std::cmp::Ordering::Equal => continue,
                o => return o == std::cmp::Ordering::Greater,
            }
        }
        key > bk[i].as_slice()
    }

    fn extends(&self, i: usize, v: &[Vec<i128>], x: &[i64]) -> Result<bool> {
        let mut g: i128 = 0;
        for col in i..self.n {
            let w = row_times(x, v, col)?;
            g = g.gcd(&w);
            if g == 1 {
                return Ok(true);
            }
        }
        Ok(g == 1)
    }

    fn push_vector(&self, i: usize, v: &[Vec<i128>], x: &[i64]) -> Result<Vec<Vec<i128>>> {
        let n = self.n;
        let mut v = v.to_vec();
        let mut w: Vec<i128> = (0..n).map(|c| row_times(x, &v, c)).collect::<Result<_>>()?;
        loop {
            let piv = (i..n).filter(|&c| w[c] != 0).min_by_key(|&c| w[c].abs());
            let Some(p) = piv else { break };
            if p != i {
                w.swap(p, i);
                for row in v.iter_mut() {
                    row.swap(p, i);
                }
            }
            let mut clean = true;
            for c in i + 1..n {
                if w[c] == 0 {
                    continue;
                }
                let f = Integer::div_floor(&w[c], &w[i]);
                w[c] -= f * w[i];
                for row in v.iter_mut() {
                    row[c] = row[c].checked_sub(f.checked_mul(row[i]).ok_or(OVF)?).ok_or(OVF)?;
                }
                clean &= w[c] == 0;
            }
            if clean {
                break;
            }
        }
        debug_assert_eq!(w[i].abs(), 1);
        Ok(v)
    }
}

fn row_times(x: &[i64], v: &[Vec<i128>], col: usize) -> Result<i128> {
    let mut s: i128 = 0;
    for (k, &xk) in x.iter().enumerate() {
        if xk != 0 {
            s = s.checked_add((xk as i128).checked_mul(v[k][col]).ok_or(OVF)?).ok_or(OVF)?;
        }
    }
    Ok(s)
}

fn dot(a: &[i128], b: &[i64]) -> Result<i128> {
    let mut s: i128 = 0;
    for (x, &y) in a.iter().zip(b) {
        if y != 0 {
            s = s.checked_add(x.checked_mul(y as i128).ok_or(OVF)?).ok_or(OVF)?;
        }
    }
    Ok(s)
}

fn candidates(e: &Ellipsoid, q: &[Vec<i128>], bound: i128) -> Result<Vec<Cand>> {
    let mut raw: Vec<ShortVector> = Vec::new();
    e.walk(bound, 1, |v, norm| {
        raw.push(ShortVector { coords: v.to_vec(), norm });
        true
    })?;
    raw.sort_by(|a, b| a.norm.cmp(&b.norm).then_with(|| a.coords.cmp(&b.coords)));
    raw.into_iter()
        .map(|s| {
            let qv = q
                .iter()
                .map(|row| dot(row, &s.coords))
                .collect::<Result<Vec<_>>>()?;
            Ok(Cand { coords: s.coords, qv, norm: s.norm })
        })
        .collect()
}

/// Pairwise size reduction (`|2gᵢⱼ| ≤ gᵢᵢ` for all `i ≠ j`) followed by a
/// sort on the diagonal. Keeps the short-vector bounds below small.
fn pair_reduce(q: &GramMatrix) -> Result<(GramMatrix, UnimodularMap)> {
    let n = q.rank();
    let mut g: Vec<Vec<i128>> = q
        .to_i64()
        .ok_or(OVF)?
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i128).collect())
        .collect();
    let mut b: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j || 2 * g[i][j].abs() <= g[i][i] {
                    continue;
                }
                // bⱼ −= c·bᵢ with c the nearest integer to gᵢⱼ/gᵢᵢ.
                let c = Integer::div_floor(&(2 * g[i][j] + g[i][i]), &(2 * g[i][i]));
                let gjj = g[j][j]
                    .checked_sub(c.checked_mul(2 * g[i][j]).ok_or(OVF)?)
                    .and_then(|x| x.checked_add(c.checked_mul(c)?.checked_mul(g[i][i])?))
                    .ok_or(OVF)?;
                for k in 0..n {
                    if k != j {
                        let v = g[j][k].checked_sub(c.checked_mul(g[i][k]).ok_or(OVF)?).ok_or(OVF)?;
                        g[j][k] = v;
                        g[k][j] = v;
                    }
                }
                g[j][j] = gjj;
                for row in b.iter_mut() {
                    row[j] = row[j].checked_sub(c.checked_mul(row[i]).ok_or(OVF)?).ok_or(OVF)?;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| g[i][i]);
    let basis: Vec<Vec<BigInt>> =
        (0..n).map(|r| order.iter().map(|&c| BigInt::from(b[r][c])).collect()).collect();
    let map = UnimodularMap::new(basis)?;
    Ok((map.apply(q), map))
}

/// Canonical reduced form together with the basis change producing it.
pub fn minkowski_reduce(q: &GramMatrix) -> Result<(GramMatrix, UnimodularMap)> {
    let (pre, pre_map) = pair_reduce(q)?;
    let (g, map) = lex_min(&pre)?;
    Ok((g, pre_map.compose(&map)))
}

fn lex_min(q: &GramMatrix) -> Result<(GramMatrix, UnimodularMap)> {
    let e = Ellipsoid::new(q)?;
    let n = q.rank();
    let qi: Vec<Vec<i128>> = q
        .to_i64()
        .ok_or(OVF)?
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i128).collect())
        .collect();
    let mut bound = (0..n).map(|i| qi[i][i]).max().unwrap();
    loop {
        let cands = candidates(&e, &qi, bound)?;
        let mut s = Search {
            n,
            cands: &cands,
            chosen: Vec::new(),
            keys: Vec::new(),
            best: None,
        };
        let ident: Vec<Vec<i128>> =
            (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
        match s.level(0, &ident)? {
            Outcome::NeedLongerVectors => {
                bound = bound.checked_mul(2).ok_or(OVF)?;
                continue;
            }
            Outcome::Done => {
                let (_, chosen) = s.best.expect("search always reaches a leaf");
                let basis: Vec<Vec<BigInt>> = (0..n)
                    .map(|r| chosen.iter().map(|&c| BigInt::from(cands[c].coords[r])).collect())
                    .collect();
                let map = UnimodularMap::new(basis)?;
                let g = map.apply(q);
                return Ok((g, map));
            }
        }
    }
}

pub fn canonical_form(q: &GramMatrix) -> Result<GramMatrix> {
    minkowski_reduce(q).map(|(g, _)| g)
}

/// Searches for `p` with `pᵀ·b·p = a`.
pub fn find_isometry(a: &GramMatrix, b: &GramMatrix) -> Result<Option<UnimodularMap>> {
    if a.rank() != b.rank() || a.determinant() != b.determinant() {
        return Ok(None);
    }
    let (ra, pa) = minkowski_reduce(a)?;
    let (b_red, pb) = pair_reduce(b)?;
    let Some(p) = match_reduced(&ra, &b_red)? else { return Ok(None) };
    // ra = pᵀ·b_red·p with b_red = pbᵀ·b·pb, and a = pa⁻ᵀ·ra·pa⁻¹.
    Ok(Some(pb.compose(&p).compose(&pa.inverse())))
}

/// Images in `b` of a basis with Gram matrix `target`.
fn match_reduced(target_form: &GramMatrix, b: &GramMatrix) -> Result<Option<UnimodularMap>> {
    let n = b.rank();
    let ra = target_form;
    let target = ra.to_i64().ok_or(OVF)?;
    let eb = Ellipsoid::new(b)?;
    let bi: Vec<Vec<i128>> = b
        .to_i64()
        .ok_or(OVF)?
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i128).collect())
        .collect();
    let maxd = (0..n).map(|i| target[i][i] as i128).max().unwrap();
    let cands = candidates(&eb, &bi, maxd)?;
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(
        i: usize,
        n: usize,
        target: &[Vec<i64>],
        cands: &[Cand],
        chosen: &mut Vec<usize>,
    ) -> Result<bool> {
        if i == n {
            return Ok(true);
        }
        for (idx, c) in cands.iter().enumerate() {
            if c.norm != target[i][i] as i128 {
                continue;
            }
            let mut ok = true;
            for (j, &cj) in chosen.iter().enumerate() {
                if dot(&c.qv, &cands[cj].coords)? != target[j][i] as i128 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            chosen.push(idx);
            if rec(i + 1, n, target, cands, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    if !rec(0, n, &target, &cands, &mut chosen)? {
        return Ok(None);
    }
    // Images of the reduced basis of `a`; equal Gram and determinant make it unimodular.
    let img: Vec<Vec<BigInt>> = (0..n)
        .map(|r| chosen.iter().map(|&c| BigInt::from(cands[c].coords[r])).collect())
        .collect();
    Ok(Some(UnimodularMap::new(img)?))
}

pub fn is_isometric(a: &GramMatrix, b: &GramMatrix) -> Result<bool> {
    Ok(find_isometry(a, b)?.is_some())
}
