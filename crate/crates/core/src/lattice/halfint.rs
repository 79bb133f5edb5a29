//! Half-integer surgery type: a basis `x₁..x_r, y₁..y_r` with `xᵢ·xⱼ = 2δᵢⱼ`
//! and `xᵢ·yⱼ = δᵢⱼ`, so the Gram matrix is `[[2I, I], [I, X]]`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::enumerate::short_vectors;
use super::gram::{GramMatrix, UnimodularMap};
use super::intmat::{self, Mat};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Certificate: `basis_change` has columns `x₁..x_r, y₁..y_r` in the
/// coordinates of the form it certifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfIntBasis {
    pub r: usize,
    pub basis_change: UnimodularMap,
    pub parities: Vec<Parity>,
}

impl HalfIntBasis {
    pub fn n_even(&self) -> usize {
        self.parities.iter().filter(|p| **p == Parity::Even).count()
    }

    /// Gram matrix in the certified basis.
    pub fn gram(&self, q: &GramMatrix) -> GramMatrix {
        self.basis_change.apply(q)
    }

    pub fn validate(&self, q: &GramMatrix) -> Result<()> {
        if q.rank() != 2 * self.r || self.parities.len() != self.r {
            return Err(Error::InvalidCertificate("rank mismatch".into()));
        }
        let g = self.gram(q);
        check_block_shape(&g, self.r).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        for i in 0..self.r {
            let y2 = g.get(self.r + i, self.r + i);
            let p = if y2.is_even() { Parity::Even } else { Parity::Odd };
            if p != self.parities[i] {
                return Err(Error::InvalidCertificate(format!("parity of y{}", i + 1)));
            }
        }
        Ok(())
    }
}

fn check_block_shape(g: &GramMatrix, r: usize) -> Result<()> {
    for i in 0..r {
        for j in 0..r {
            let want = BigInt::from(if i == j { 2 } else { 0 });
            if *g.get(i, j) != want {
                return Err(Error::BlockShape(format!("x{}·x{} = {}", i + 1, j + 1, g.get(i, j))));
            }
            let want = BigInt::from((i == j) as i64);
            if *g.get(i, r + j) != want {
                return Err(Error::BlockShape(format!("x{}·y{} = {}", i + 1, j + 1, g.get(i, r + j))));
            }
        }
    }
    Ok(())
}

/// `[[2I, I], [I, X]]` from the symmetric block `X`.
pub fn half_integer_gram(x: &Mat) -> Result<GramMatrix> {
    let r = x.len();
    let mut m = intmat::zeros(2 * r, 2 * r);
    for i in 0..r {
        m[i][i] = BigInt::from(2);
        m[i][r + i] = BigInt::one();
        m[r + i][i] = BigInt::one();
        for j in 0..r {
            m[r + i][r + j] = x[i][j].clone();
        }
    }
    GramMatrix::new(m)
}

/// `det Q mod 4` predicted from the parities: `Π(2mᵢ − 1) ≡ (−1)^{#even}`.
pub fn det_mod4_from_parities(parities: &[Parity]) -> u8 {
    let n_even = parities.iter().filter(|p| **p == Parity::Even).count();
    if n_even % 2 == 0 {
        1
    } else {
        3
    }
}

/// `det Q ≡ Π(2mᵢ − 1) (mod 4)` with `mᵢ = yᵢ·yᵢ` read off the certified
/// basis. Always true for a valid certificate; kept as a self-check.
pub fn mod4_congruence_holds(q: &GramMatrix, b: &HalfIntBasis) -> Result<bool> {
    b.validate(q)?;
    let g = b.gram(q);
    let four = BigInt::from(4);
    let mut prod = BigInt::one();
    for i in 0..b.r {
        let m: BigInt = g.get(b.r + i, b.r + i) * 2 - 1;
        prod = (prod * m).mod_floor(&four);
    }
    Ok(q.determinant().mod_floor(&four) == prod)
}

/// Lifts a matrix invertible over F₂ to an integer matrix of determinant 1
/// with the same reduction mod 2.
pub fn lift_gl_mod2(r: &[Vec<i64>]) -> Result<UnimodularMap> {
    let n = r.len();
    if n == 0 || r.iter().any(|row| row.len() != n) {
        return Err(Error::Degenerate);
    }
    let bits: Vec<Vec<u8>> = r.iter().map(|row| row.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
    if intmat::rank_mod2(&bits) != n {
        return Err(Error::SingularMod2);
    }
    UnimodularMap::new(lift_rec(&bits))
}

fn lift_rec(bits: &[Vec<u8>]) -> Mat {
    let n = bits.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let minor = |j: usize| -> Vec<Vec<u8>> {
        bits[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
            .collect()
    };
    // Expansion along the first row has an odd term.
    let j = (0..n)
        .find(|&j| bits[0][j] == 1 && intmat::rank_mod2(&minor(j)) == n - 1)
        .expect("an odd determinant has an odd cofactor term");
    let lifted = lift_rec(&minor(j));
    let mut m = intmat::zeros(n, n);
    for k in 0..n {
        m[0][k] = BigInt::from(bits[0][k]);
    }
    for i in 1..n {
        let mut c = 0;
        for k in 0..n {
            if k == j {
                m[i][k] = BigInt::from(bits[i][k]);
            } else {
                m[i][k] = lifted[i - 1][c].clone();
                c += 1;
            }
        }
    }
    // The (0, j) cofactor is ±1, so one even correction fixes the determinant.
    let cof = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let d = intmat::det(&m);
    let adj = (BigInt::one() - d) * &cof;
    m[0][j] += adj;
    debug_assert!(intmat::det(&m).is_one());
    m
}

/// For `Q ≡ [[2I, I], [I, *]] (mod 2)` with the top-left block exactly `2I`,
/// returns `P = [[I, S], [0, I]]` making `PᵀQP` exactly half-integer shaped.
pub fn normalize_mod2_block(q: &GramMatrix) -> Result<(UnimodularMap, GramMatrix)> {
    let n = q.rank();
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    let r = n / 2;
    for i in 0..r {
        for j in 0..r {
            let want = BigInt::from(if i == j { 2 } else { 0 });
            if *q.get(i, j) != want {
                return Err(Error::BlockShape(format!("top-left block is not 2I at ({}, {})", i, j)));
            }
            let b = q.get(i, r + j);
            if intmat::mod2(b) != (i == j) as u8 {
                return Err(Error::BlockShape(format!("off-diagonal block is not I mod 2 at ({}, {})", i, j)));
            }
        }
    }
    let mut p = intmat::identity(n);
    for i in 0..r {
        for j in 0..r {
            let b = q.get(i, r + j);
            let delta = BigInt::from((i == j) as i64);
            p[i][r + j] = (delta - b) / 2;
        }
    }
    let p = UnimodularMap::new(p)?;
    let g = p.apply(q);
    check_block_shape(&g, r)?;
    Ok((p, g))
}

/// Result of passing to the overlattice: the new Gram matrix and the basis
/// (columns, in the coordinates of the ambient form) that realizes it.
#[derive(Clone, Debug)]
pub struct ExtendedBasis {
    pub gram: GramMatrix,
    pub basis: Mat,
}

/// `q_m` is a form on `M`; `inclusion` has columns spanning a full-rank
/// sublattice `L` of odd index; `b_l` certifies `L` as half-integer. Returns a
/// basis of `M` whose first `r` vectors are the `xᵢ` of `L` and whose Gram
/// matrix is half-integer shaped mod 2.
pub fn extend_basis_odd_index(q_m: &GramMatrix, inclusion: &Mat, b_l: &HalfIntBasis) -> Result<ExtendedBasis> {
    let n = q_m.rank();
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    if inclusion.len() != n || inclusion.iter().any(|r| r.len() != n) {
        return Err(Error::Degenerate);
    }
    let r = n / 2;
    let index = intmat::det(inclusion);
    if index.is_zero() {
        return Err(Error::NotFullRank);
    }
    if index.is_even() {
        return Err(Error::EvenIndex(index.abs()));
    }
    let q_l = GramMatrix::new(intmat::congruence(q_m.entries(), inclusion))?;
    b_l.validate(&q_l)?;
    // Columns x₁..x_r, y₁..y_r of L, written in M.
    let w = intmat::mul(inclusion, b_l.basis_change.matrix());
    let xs: Vec<Vec<BigInt>> = (0..r).map(|j| intmat::column(&w, j)).collect();
    let u = intmat::extend_to_basis(&xs, n)
        .ok_or_else(|| Error::InvalidCertificate("x vectors are not primitive in the overlattice".into()))?;
    let u_inv = intmat::inverse_unimodular(&u).ok_or(Error::NotUnimodular)?;
    let p = intmat::mul(&u_inv, &w);
    // p = [[I, S], [0, R]] with det R = ±index.
    for i in 0..n {
        for j in 0..r {
            let want = BigInt::from((i == j) as i64);
            if p[i][j] != want {
                return Err(Error::BlockShape("unexpected inclusion shape".into()));
            }
        }
    }
    let rbits: Vec<Vec<i64>> = (r..n)
        .map(|i| (r..n).map(|j| intmat::mod2(&p[i][j]) as i64).collect())
        .collect();
    let r_lift = lift_gl_mod2(&rbits)?;
    let mut pt = p.clone();
    for i in r..n {
        for j in r..n {
            pt[i][j] = r_lift.matrix()[i - r][j - r].clone();
        }
    }
    let basis = intmat::mul(&u, &pt);
    if !intmat::det(&basis).abs().is_one() {
        return Err(Error::NotUnimodular);
    }
    let gram = GramMatrix::new(intmat::congruence(q_m.entries(), &basis))?;
    Ok(ExtendedBasis { gram, basis })
}

/// Odd-index overlattices of half-integer lattices are half-integer.
pub fn promote_half_integer(q_m: &GramMatrix, inclusion: &Mat, b_l: &HalfIntBasis) -> Result<HalfIntBasis> {
    let ext = extend_basis_odd_index(q_m, inclusion, b_l)?;
    let (p, g) = normalize_mod2_block(&ext.gram)?;
    let basis = intmat::mul(&ext.basis, p.matrix());
    let r = q_m.rank() / 2;
    let parities = (0..r)
        .map(|i| if g.get(r + i, r + i).is_even() { Parity::Even } else { Parity::Odd })
        .collect();
    let out = HalfIntBasis { r, basis_change: UnimodularMap::new(basis)?, parities };
    out.validate(q_m)?;
    Ok(out)
}

/// All orthogonal `r`-sets of square-2 vectors (up to sign) whose pairing map
/// is surjective, visited in a fixed order. `visit` returns `false` to stop.
fn for_each_x_set<F>(q: &GramMatrix, r: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[Vec<i64>]) -> bool,
{
    let roots: Vec<Vec<i64>> = short_vectors(q, 2)?
        .into_iter()
        .filter(|s| s.norm == 2)
        .map(|s| s.coords)
        .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec<F: FnMut(&[Vec<i64>]) -> bool>(
        q: &GramMatrix,
        roots: &[Vec<i64>],
        r: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        visit: &mut F,
    ) -> bool {
        if chosen.len() == r {
            let xs: Vec<Vec<i64>> = chosen.iter().map(|&i| roots[i].clone()).collect();
            return visit(&xs);
        }
        for i in start..roots.len() {
            if chosen.iter().any(|&j| !q.inner(&roots[i], &roots[j]).is_zero()) {
                continue;
            }
            chosen.push(i);
            if pairing_surjective(q, &chosen.iter().map(|&k| roots[k].clone()).collect::<Vec<_>>())
                && !rec(q, roots, r, i + 1, chosen, visit)
            {
                chosen.pop();
                return false;
            }
            chosen.pop();
        }
        true
    }
    rec(q, &roots, r, 0, &mut chosen, &mut visit);
    Ok(())
}

/// Matrix of `v ↦ (x₁·v, …, x_k·v)`.
fn pairing_matrix(q: &GramMatrix, xs: &[Vec<i64>]) -> Mat {
    let n = q.rank();
    xs.iter()
        .map(|x| {
            (0..n)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for (i, &xi) in x.iter().enumerate() {
                        if xi != 0 {
                            s += q.get(i, j) * xi;
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn pairing_surjective(q: &GramMatrix, xs: &[Vec<i64>]) -> bool {
    intmat::rows_primitive(&pairing_matrix(q, xs))
}

/// Completes an admissible x-set to a half-integer basis.
fn complete_x_set(q: &GramMatrix, xs: &[Vec<i64>]) -> Result<Option<HalfIntBasis>> {
    let n = q.rank();
    let r = xs.len();
    let phi = pairing_matrix(q, xs);
    if !intmat::rows_primitive(&phi) {
        return Ok(None);
    }
    // ker φ has rank r and contains every xᵢ; we need kᵢ ∈ ker φ with kᵢ ≡ xᵢ (mod 2).
    let ker = intmat::kernel(&phi, n);
    debug_assert_eq!(ker.len(), r);
    let kbits: Vec<Vec<u8>> = (0..n).map(|i| ker.iter().map(|c| intmat::mod2(&c[i])).collect()).collect();
    let mut cols = Vec::with_capacity(r);
    for x in xs {
        let rhs: Vec<u8> = x.iter().map(|v| v.rem_euclid(2) as u8).collect();
        match intmat::solve_mod2(&kbits, &rhs) {
            Some(c) => cols.push(c),
            None => return Ok(None),
        }
    }
    let cmat: Vec<Vec<i64>> = (0..r).map(|i| cols.iter().map(|c| c[i] as i64).collect()).collect();
    if intmat::rank_mod2(&cmat.iter().map(|r| r.iter().map(|&x| x as u8).collect()).collect::<Vec<_>>()) != r {
        return Ok(None);
    }
    let c_lift = lift_gl_mod2(&cmat)?;
    let kmat = intmat::from_columns(&ker);
    let ks = intmat::mul(&kmat, c_lift.matrix());
    let mut basis_cols: Vec<Vec<BigInt>> = xs.iter().map(|x| x.iter().map(|&v| BigInt::from(v)).collect()).collect();
    for (i, x) in xs.iter().enumerate() {
        let y: Vec<BigInt> = (0..n)
            .map(|a| {
                let d = BigInt::from(x[a]) - &ks[a][i];
                debug_assert!(d.is_even());
                d / 2
            })
            .collect();
        basis_cols.push(y);
    }
    let basis = intmat::from_columns(&basis_cols);
    let Ok(map) = UnimodularMap::new(basis) else { return Ok(None) };
    let g = map.apply(q);
    let parities = (0..r)
        .map(|i| if g.get(r + i, r + i).is_even() { Parity::Even } else { Parity::Odd })
        .collect();
    let out = HalfIntBasis { r, basis_change: map, parities };
    out.validate(q)?;
    Ok(Some(out))
}

/// Decides whether `q` has half-integer surgery type and returns a certificate.
pub fn detect_half_integer_type(q: &GramMatrix) -> Result<Option<HalfIntBasis>> {
    detect_with(q, |_| true)
}

/// Like [`detect_half_integer_type`] but insists on exactly `n_even` even `yᵢ²`.
pub fn detect_with_even_count(q: &GramMatrix, n_even: usize) -> Result<Option<HalfIntBasis>> {
    detect_with(q, |b| b.n_even() == n_even)
}

fn detect_with(q: &GramMatrix, accept: impl Fn(&HalfIntBasis) -> bool) -> Result<Option<HalfIntBasis>> {
    let n = q.rank();
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    if !q.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let mut found = None;
    let mut err = None;
    for_each_x_set(q, n / 2, |xs| match complete_x_set(q, xs) {
        Ok(Some(b)) if accept(&b) => {
            found = Some(b);
            false
        }
        Ok(_) => true,
        Err(e) => {
            err = Some(e);
            false
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(found)
}

/// Every count of even `yᵢ²` realized by some half-integer basis of `q`.
pub fn achievable_even_counts(q: &GramMatrix) -> Result<BTreeSet<usize>> {
    let n = q.rank();
    if n % 2 == 1 {
        return Err(Error::OddRank(n));
    }
    let mut out = BTreeSet::new();
    let mut err = None;
    for_each_x_set(q, n / 2, |xs| {
        match complete_x_set(q, xs) {
            Ok(Some(b)) => {
                out.insert(b.n_even());
            }
            Ok(None) => {}
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        true
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

pub fn parity_of(x: &BigInt) -> Parity {
    if x.is_even() {
        Parity::Even
    } else {
        Parity::Odd
    }
}
