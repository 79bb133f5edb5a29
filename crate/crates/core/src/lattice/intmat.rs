//! Dense integer matrix helpers over `BigInt`.
//!
//! Everything here is exact; matrices are small (rank ≤ a few dozen) so the
//! naive cubic algorithms are fine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Mat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// `pᵀ q p`.
pub fn congruence(q: &Mat, p: &Mat) -> Mat {
    mul(&transpose(p), &mul(q, p))
}

pub fn column(a: &Mat, j: usize) -> Vec<BigInt> {
    a.iter().map(|r| r[j].clone()).collect()
}

pub fn from_columns(cols: &[Vec<BigInt>]) -> Mat {
    if cols.is_empty() {
        return Vec::new();
    }
    (0..cols[0].len())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// Determinant by fraction-free elimination with row pivoting.
pub fn det(a: &Mat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse over the rationals, `None` when singular.
pub fn inverse_rational(a: &Mat) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from(x.clone())).collect();
            r.extend((0..n).map(|j| BigRational::from(BigInt::from((i == j) as i64))));
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(piv, k);
        let inv = m[k][k].recip();
        for x in m[k].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in 0..2 * n {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `det(a) · a⁻¹`, an integer matrix.
pub fn adjugate(a: &Mat) -> Mat {
    let d = det(a);
    if d.is_zero() {
        // Only ever called on nonsingular forms.
        panic!("adjugate of a singular matrix");
    }
    let inv = inverse_rational(a).expect("nonsingular");
    let dr = BigRational::from(d);
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let y = x * &dr;
                    debug_assert!(y.is_integer());
                    y.to_integer()
                })
                .collect()
        })
        .collect()
}

/// Integer inverse of a unimodular matrix.
pub fn inverse_unimodular(a: &Mat) -> Option<Mat> {
    let d = det(a);
    if d.abs() != BigInt::one() {
        return None;
    }
    let inv = inverse_rational(a)?;
    Some(
        inv.into_iter()
            .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
            .collect(),
    )
}

/// Column echelon form. Returns `(h, v, pivots)` with `a·v = h`, `v`
/// unimodular, and `h` having exactly `pivots.len()` nonzero leading columns;
/// `pivots[c]` is the row in which column `c` first becomes nonzero.
pub fn column_echelon(a: &Mat) -> (Mat, Mat, Vec<usize>) {
    let k = a.len();
    let m = if k == 0 { 0 } else { a[0].len() };
    let mut h = a.clone();
    let mut v = identity(m);
    let mut pivots = Vec::new();
    let mut c = 0;
    for i in 0..k {
        if c == m {
            break;
        }
        loop {
            let best = (c..m)
                .filter(|&j| !h[i][j].is_zero())
                .min_by(|&x, &y| h[i][x].abs().cmp(&h[i][y].abs()));
            let Some(b) = best else { break };
            swap_cols(&mut h, c, b);
            swap_cols(&mut v, c, b);
            let mut done = true;
            for j in c + 1..m {
                if h[i][j].is_zero() {
                    continue;
                }
                let f = h[i][j].div_floor(&h[i][c]);
                col_axpy(&mut h, j, c, &f);
                col_axpy(&mut v, j, c, &f);
                if !h[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[i][c].is_zero() {
            continue;
        }
        if h[i][c].is_negative() {
            negate_col(&mut h, c);
            negate_col(&mut v, c);
        }
        pivots.push(i);
        c += 1;
    }
    (h, v, pivots)
}

fn swap_cols(a: &mut Mat, x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}

/// column `dst` -= f · column `src`
fn col_axpy(a: &mut Mat, dst: usize, src: usize, f: &BigInt) {
    for row in a.iter_mut() {
        let t = &row[src] * f;
        row[dst] -= t;
    }
}

fn negate_col(a: &mut Mat, c: usize) {
    for row in a.iter_mut() {
        row[c] = -&row[c];
    }
}

/// Basis (as columns) of the integer kernel `{x : a·x = 0}`. The kernel is
/// saturated, so the basis extends to a basis of the ambient lattice.
pub fn kernel(a: &Mat, ambient: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return (0..ambient)
            .map(|j| (0..ambient).map(|i| BigInt::from((i == j) as i64)).collect())
            .collect();
    }
    let (_, v, piv) = column_echelon(a);
    (piv.len()..ambient).map(|j| column(&v, j)).collect()
}

/// Whether the rows of `a` span a saturated sublattice of full rank `a.len()`.
pub fn rows_primitive(a: &Mat) -> bool {
    let (h, _, piv) = column_echelon(a);
    piv.len() == a.len() && piv.iter().enumerate().all(|(c, &i)| h[i][c].abs().is_one())
}

/// Completes the given columns (which must span a saturated sublattice) to a
/// unimodular matrix whose leading columns are exactly `cols`.
pub fn extend_to_basis(cols: &[Vec<BigInt>], ambient: usize) -> Option<Mat> {
    let rows = transpose(&from_columns(cols));
    if !rows_primitive(&rows) {
        return None;
    }
    // rows·v = [L | 0] with L unimodular, so cols = v⁻ᵀ·[Lᵀ; 0] and the
    // trailing columns of v⁻ᵀ complete them to a basis.
    let (_, v, _) = column_echelon(&rows);
    let w = transpose(&inverse_unimodular(&v)?);
    let mut out = cols.to_vec();
    for j in cols.len()..ambient {
        out.push(column(&w, j));
    }
    let m = from_columns(&out);
    if det(&m).abs().is_one() {
        Some(m)
    } else {
        None
    }
}

/// Smith normal form `u·a·v = d` for a square nonsingular matrix. Returns the
/// invariant factors (positive, each dividing the next) with `u` and `v`.
pub fn smith(a: &Mat) -> (Vec<BigInt>, Mat, Mat) {
    let n = a.len();
    let mut d = a.clone();
    let mut u = identity(n);
    let mut v = identity(n);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !d[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            d.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut d, t, bj);
            swap_cols(&mut v, t, bj);
            let mut clean = true;
            for i in t + 1..n {
                if d[i][t].is_zero() {
                    continue;
                }
                let f = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let f = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &f);
                col_axpy(&mut v, j, t, &f);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility of the remaining block.
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::from(-1);
                    row_axpy(&mut d, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let inv = (0..n).map(|i| d[i][i].clone()).collect();
    (inv, u, v)
}

/// row `dst` -= f · row `src`
fn row_axpy(a: &mut Mat, dst: usize, src: usize, f: &BigInt) {
    let src_row = a[src].clone();
    for (x, s) in a[dst].iter_mut().zip(src_row) {
        *x -= s * f;
    }
}

pub fn is_symmetric(a: &Mat) -> Option<(usize, usize)> {
    for i in 0..a.len() {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Determinant of a 0/1 matrix over F₂.
pub fn det_mod2(a: &[Vec<u8>]) -> u8 {
    (rank_mod2(a) == a.len()) as u8
}

pub fn rank_mod2(a: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = a.iter().map(|r| r.iter().map(|x| x & 1).collect()).collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| m[i][c] == 1) else { continue };
        m.swap(rank, p);
        for i in 0..rows {
            if i != rank && m[i][c] == 1 {
                for j in 0..cols {
                    m[i][j] ^= m[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `a·x = b` over F₂, `a` having full column rank.
pub fn solve_mod2(a: &[Vec<u8>], b: &[u8]) -> Option<Vec<u8>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut m: Vec<Vec<u8>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r: Vec<u8> = r.iter().map(|x| x & 1).collect();
            r.push(bi & 1);
            r
        })
        .collect();
    let mut pivcol = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| m[i][c] == 1) else { continue };
        m.swap(rank, p);
        for i in 0..rows {
            if i != rank && m[i][c] == 1 {
                for j in 0..=cols {
                    m[i][j] ^= m[rank][j];
                }
            }
        }
        pivcol.push(c);
        rank += 1;
    }
    if (rank..rows).any(|i| m[i][cols] == 1) {
        return None;
    }
    let mut x = vec![0u8; cols];
    for (i, &c) in pivcol.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Some(x)
}

pub fn mod2(x: &BigInt) -> u8 {
    if x.is_odd() {
        1
    } else {
        0
    }
}
