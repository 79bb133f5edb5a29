//! Alternating diagram of a two-bridge knot from its negative continued
//! fraction, and its signature via the Goeritz matrix with the
//! Gordon–Litherland correction.
//!
//! The Tait graph is a hub `R₀` and a path `R₁ … R_m`; consecutive path
//! regions share one crossing and `Rᵢ` meets the hub in
//! `aᵢ − 2 + [i = 1] + [i = m]` crossings. Edges at each vertex are listed in
//! planar rotation order, and the knot is recovered by tracing the medial
//! graph.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::GramMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Side {
    Next,
    Prev,
}

/// Plane graph: edges as vertex pairs, and per-vertex rotation of edge ids.
#[derive(Clone, Debug)]
pub struct TaitGraph {
    pub edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    pub regions: usize,
}

impl TaitGraph {
    pub fn from_chain(chain: &[u64]) -> Result<Self> {
        let m = chain.len();
        if m == 0 || chain.iter().any(|&a| a < 2) {
            return Err(Error::Unsupported("chain entries must be at least 2".into()));
        }
        let mut edges = Vec::new();
        let mut right = vec![None; m + 1];
        let mut left = vec![None; m + 1];
        for i in 1..m {
            right[i] = Some(edges.len());
            left[i + 1] = Some(edges.len());
            edges.push((i, i + 1));
        }
        let mut hub = vec![Vec::new(); m + 1];
        for i in 1..=m {
            let k = chain[i - 1] as usize - 2 + (i == 1) as usize + (i == m) as usize;
            for _ in 0..k {
                hub[i].push(edges.len());
                edges.push((i, 0));
            }
        }
        let mut rotation = vec![Vec::new(); m + 1];
        for i in 1..=m {
            rotation[i].extend(right[i]);
            rotation[i].extend(hub[i].iter().copied());
            rotation[i].extend(left[i]);
        }
        rotation[0] = (1..=m).flat_map(|i| hub[i].iter().rev().copied()).collect();
        Ok(TaitGraph { edges, rotation, regions: m + 1 })
    }

    fn step(&self, x: usize, e: usize, forward: bool) -> usize {
        let r = &self.rotation[x];
        let k = r.iter().position(|&f| f == e).expect("edge at vertex");
        let len = r.len();
        if forward {
            r[(k + 1) % len]
        } else {
            r[(k + len - 1) % len]
        }
    }

    fn other(&self, e: usize, x: usize) -> usize {
        let (u, v) = self.edges[e];
        if x == u {
            v
        } else {
            u
        }
    }

    /// Reduced Laplacian with the hub deleted. Positive definite for a
    /// connected graph.
    pub fn goeritz(&self) -> Result<GramMatrix> {
        let m = self.regions - 1;
        let mut g = vec![vec![BigInt::from(0); m]; m];
        for &(u, v) in &self.edges {
            for (a, b) in [(u, v), (v, u)] {
                if a > 0 {
                    g[a - 1][a - 1] += 1;
                    if b > 0 {
                        g[a - 1][b - 1] -= 1;
                    }
                }
            }
        }
        GramMatrix::new(g)
    }

    /// Number of crossings of type II for the checkerboard colouring in
    /// which the Tait graph's vertices are shaded.
    pub fn type_two_crossings(&self) -> Result<usize> {
        let n = self.edges.len();
        let mut visits: HashMap<usize, Vec<((usize, Side), (usize, Side))>> = HashMap::new();
        let start = (self.edges[0].0, 0usize, Side::Next);
        let (mut x, mut e, mut side) = start;
        let mut steps = 0;
        loop {
            let (e2, s) = match side {
                Side::Next => (self.step(x, e, true), Side::Prev),
                Side::Prev => (self.step(x, e, false), Side::Next),
            };
            let w = self.other(e2, x);
            visits.entry(e2).or_default().push(((x, s), (w, s)));
            x = w;
            e = e2;
            side = s;
            steps += 1;
            if (x, e, side) == start || steps > 2 * n {
                break;
            }
        }
        if steps != 2 * n {
            return Err(Error::Unsupported("diagram traces a link, not a knot".into()));
        }
        let mut type_two = 0;
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let vs = &visits[&e];
            let (mut a, mut b) = (0i8, 0i8);
            for &((into, s), _) in vs {
                match s {
                    Side::Next => a = if into == u { 1 } else { -1 },
                    Side::Prev => b = if into == v { 1 } else { -1 },
                }
            }
            if a == b {
                type_two += 1;
            }
        }
        Ok(type_two)
    }

    pub fn signature(&self) -> Result<i64> {
        let g = self.goeritz()?;
        Ok(g.signature() - self.type_two_crossings()? as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_graph() {
        let t = TaitGraph::from_chain(&[3]).unwrap();
        assert_eq!(t.edges.len(), 3);
        assert_eq!(t.goeritz().unwrap(), GramMatrix::from_i64(&[vec![3]]).unwrap());
        assert_eq!(t.signature().unwrap(), -2);
        // The mirror, 3/2 = [2, 2].
        assert_eq!(TaitGraph::from_chain(&[2, 2]).unwrap().signature().unwrap(), 2);
    }

    #[test]
    fn figure_eight() {
        // 5/2 = [3, 2]
        assert_eq!(TaitGraph::from_chain(&[3, 2]).unwrap().signature().unwrap(), 0);
    }
}
