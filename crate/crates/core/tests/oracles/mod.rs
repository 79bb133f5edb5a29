//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use slicing_core::lattice::{achievable_even_counts, canonical_form, GramMatrix};

/// `σ(S(p, q)) = −Σ_{i<p} (−1)^{⌊i·q'/p⌋}` with `q' ∈ {q, q − p}` odd.
pub fn floor_sum_signature(p: i64, q: i64) -> i64 {
    let q = if q % 2 != 0 { q } else { q - p };
    -(1..p).map(|i| if (i * q).div_euclid(p) % 2 == 0 { 1 } else { -1 }).sum::<i64>()
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i64(&minor)
        })
        .sum()
}

fn positive_definite(m: &[Vec<i64>]) -> bool {
    (1..=m.len()).all(|k| det_i64(&m[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()) > 0)
}

/// Every positive definite form of rank `2r` (`r ≤ 2`) and determinant at
/// most `max_det` that is of half-integer type, bucketed by
/// `(det, #even yᵢ²)` as canonical forms.
///
/// Each class has a Minkowski-reduced member: sorted diagonal,
/// `|2qᵢⱼ| ≤ qᵢᵢ`, and `Π qᵢᵢ ≤ λ·det` with `λ = 4/3` in rank 2 and `4` in
/// rank 4. A half-integer form represents 2, so its minimum is at most 2.
pub fn box_forms(r: usize, max_det: i64) -> BTreeMap<(u64, usize), BTreeSet<GramMatrix>> {
    assert!(r == 1 || r == 2);
    let n = 2 * r;
    // Π qᵢᵢ ≤ λ·det, written as 3·Π ≤ 4·det in rank 2.
    let (lam_num, lam_den) = if r == 1 { (4, 3) } else { (4, 1) };
    let prod_cap = lam_num * max_det / lam_den;
    let mut diags = Vec::new();
    fn diag_rec(n: usize, cur: &mut Vec<i64>, prod: i64, cap: i64, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(1);
        let hi = if cur.is_empty() { 2 } else { cap };
        let mut d = lo;
        while d <= hi && prod * d <= cap {
            cur.push(d);
            diag_rec(n, cur, prod * d, cap, out);
            cur.pop();
            d += 1;
        }
    }
    diag_rec(n, &mut Vec::new(), 1, prod_cap, &mut diags);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen: BTreeSet<GramMatrix> = BTreeSet::new();
    for d in diags {
        let prod: i64 = d.iter().product();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = d[i];
        }
        let mut idx = vec![0usize; pairs.len()];
        let ranges: Vec<Vec<i64>> = pairs.iter().map(|&(i, _)| (-(d[i] / 2)..=d[i] / 2).collect()).collect();
        'outer: loop {
            for (k, &(i, j)) in pairs.iter().enumerate() {
                m[i][j] = ranges[k][idx[k]];
                m[j][i] = m[i][j];
            }
            let det = det_i64(&m);
            if det > 0 && det <= max_det && lam_den * prod <= lam_num * det && det % 2 == 1 && positive_definite(&m) {
                let g = GramMatrix::from_i64(&m).unwrap();
                seen.insert(canonical_form(&g).unwrap());
            }
            for k in 0..pairs.len() {
                idx[k] += 1;
                if idx[k] < ranges[k].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    let mut out: BTreeMap<(u64, usize), BTreeSet<GramMatrix>> = BTreeMap::new();
    for g in seen {
        let det: u64 = g.determinant().try_into().unwrap();
        for k in achievable_even_counts(&g).unwrap() {
            out.entry((det, k)).or_default().insert(g.clone());
        }
    }
    out
}
