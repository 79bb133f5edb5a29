//! Random instance generators for the property suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use slicing_core::lattice::intmat::{self, Mat};
use slicing_core::lattice::GramMatrix;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn big(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Product of random elementary moves, a permutation and sign changes.
pub fn unimodular(rng: &mut StdRng, n: usize) -> Mat {
    let mut m = intmat::identity(n);
    if n > 1 {
        for _ in 0..3 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c: i64 = *[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
            // column_i += c·column_j
            for row in m.iter_mut() {
                let add = &row[j] * c;
                row[i] += add;
            }
        }
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
    }
    for c in 0..n {
        if rng.gen_bool(0.5) {
            for row in m.iter_mut() {
                row[c] = -row[c].clone();
            }
        }
    }
    m
}

/// Symmetric `X` with `2X − I` diagonally dominant, so `[[2I, I], [I, X]]`
/// is positive definite.
pub fn x_block(rng: &mut StdRng, r: usize) -> Vec<Vec<i64>> {
    let mut x = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            x[i][j] = rng.gen_range(-2..=2);
            x[j][i] = x[i][j];
        }
    }
    for i in 0..r {
        let off: i64 = (0..r).filter(|&j| j != i).map(|j| x[i][j].abs()).sum();
        x[i][i] = off + 1 + rng.gen_range(0..4);
    }
    x
}

/// Diagonally dominant positive definite form.
pub fn definite(rng: &mut StdRng, n: usize, spread: i64) -> GramMatrix {
    let mut q = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            q[i][j] = rng.gen_range(-spread..=spread);
            q[j][i] = q[i][j];
        }
    }
    for i in 0..n {
        let off: i64 = (0..n).filter(|&j| j != i).map(|j| q[i][j].abs()).sum();
        q[i][i] = off + 1 + rng.gen_range(0..3);
    }
    GramMatrix::from_i64(&q).unwrap()
}
