//! Ground truth: exhaustive search and the MaxCut subdivision reduction.

use crate::error::{Error, Result};
use crate::graph::{Assignment, Spin, WeightedGraph, TOLERANCE};
use crate::par;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 28;

/// Highest-indexed vertices fixed per work chunk.
const CHUNK_BITS: usize = 8;

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    /// Bit `n-1-v` is set iff `x_v = +1`; a smaller key is lexicographically
    /// smaller with `-1 < +1`.
    key: u64,
}

impl Best {
    fn improves_on(&self, other: &Best) -> bool {
        self.value > other.value + TOLERANCE
            || ((self.value - other.value).abs() <= TOLERANCE && self.key < other.key)
    }
}

/// Exact optimum by enumerating the `2^(n-1)` assignments with `x_1 = +1`.
///
/// Each chunk fixes the top vertices and walks the rest in Gray-code order,
/// updating the value with the single-flip identity. Among optima (within
/// [`TOLERANCE`]) the lexicographically smallest assignment wins, so serial
/// and parallel runs agree exactly.
pub fn brute_force(g: &WeightedGraph, cap: usize) -> Result<Assignment> {
    let n = g.vertex_count();
    if n > cap.min(63) {
        return Err(Error::capacity("brute-force vertex count", n, cap.min(63)));
    }
    if n <= 1 {
        return Ok(Assignment::all_plus(g));
    }
    let fixed = (n - 1).min(CHUNK_BITS);
    let inner = n - 1 - fixed;
    let results = par::map_range(1usize << fixed, |chunk| scan_chunk(g, chunk, fixed, inner));
    let best = results
        .into_iter()
        .reduce(|acc, b| if b.improves_on(&acc) { b } else { acc })
        .expect("at least one chunk");
    let spins: Vec<Spin> = (0..n)
        .map(|v| if best.key >> (n - 1 - v) & 1 == 1 { 1 } else { -1 })
        .collect();
    Assignment::new(g, spins)
}

fn scan_chunk(g: &WeightedGraph, chunk: usize, fixed: usize, inner: usize) -> Best {
    let n = g.vertex_count();
    let mut spins: Vec<Spin> = vec![1; n];
    for j in 0..fixed {
        if chunk >> j & 1 == 1 {
            spins[n - fixed + j] = -1;
        }
    }
    let mut field: Vec<f64> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|nb| nb.weight * f64::from(spins[nb.vertex()]))
                .sum()
        })
        .collect();
    let mut value = g.value_of(&spins);
    let mut key: u64 = (0..n)
        .filter(|&v| spins[v] == 1)
        .fold(0, |k, v| k | 1 << (n - 1 - v));
    let mut best = Best { value, key };
    for step in 1u64..(1u64 << inner) {
        let v = 1 + step.trailing_zeros() as usize;
        let old = spins[v];
        value -= 2.0 * f64::from(old) * field[v];
        spins[v] = -old;
        key ^= 1 << (n - 1 - v);
        let twice_new = 2.0 * f64::from(-old);
        for nb in g.neighbors(v) {
            field[nb.vertex()] += twice_new * nb.weight;
        }
        let cand = Best { value, key };
        if cand.improves_on(&best) {
            best = cand;
        }
    }
    best
}

/// Replaces every edge `{u, w}` (u < w) by a path `u - s - w` through a new
/// vertex `s = n + edge index`, with weight `+1` on `{u, s}` and `-1` on
/// `{s, w}`. Input weights are ignored. The optimum of the result is twice
/// the maximum cut of the input.
pub fn subdivide_for_maxcut(g: &WeightedGraph) -> WeightedGraph {
    let n = g.vertex_count();
    let entries = g.edges().iter().enumerate().flat_map(|(i, e)| {
        let s = n + i;
        [(e.u, s, 1.0), (e.v, s, -1.0)]
    });
    WeightedGraph::from_entries(n + g.edge_count(), entries)
        .expect("subdivision of a valid graph is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize, f64)]) -> WeightedGraph {
        WeightedGraph::from_entries(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn small_optima() {
        assert_eq!(brute_force(&graph(2, &[(0, 1, -1.0)]), 28).unwrap().value(), 1.0);
        let bad = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)]);
        assert_eq!(brute_force(&bad, 28).unwrap().value(), 1.0);
        let c4 = graph(4, &[(0, 1, -1.0), (1, 2, -1.0), (2, 3, -1.0), (0, 3, -1.0)]);
        let a = brute_force(&c4, 28).unwrap();
        assert_eq!(a.value(), 4.0);
        assert_eq!(a.spins(), &[1, -1, 1, -1]);
    }

    #[test]
    fn tie_break_prefers_minus_early() {
        // Bad triangle: six optima of value 1; with x_1 = +1 the smallest
        // lexicographic one has x_2 = -1.
        let bad = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)]);
        let a = brute_force(&bad, 28).unwrap();
        assert_eq!(a.spins(), &[1, -1, -1]);
    }

    #[test]
    fn cap_enforced() {
        let g = WeightedGraph::empty(30);
        assert!(matches!(brute_force(&g, 28), Err(Error::Capacity { .. })));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let e: Vec<_> = (0..11).map(|i| (i, (i * 5 + 3) % 12, if i % 3 == 0 { -1.5 } else { 0.75 })).collect();
        let g = graph(12, &e);
        let a = brute_force(&g, 28).unwrap();
        let b = par::sequential(|| brute_force(&g, 28).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn subdivision_shapes() {
        let edge = graph(2, &[(0, 1, 1.0)]);
        let s = subdivide_for_maxcut(&edge);
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.weight(0, 2), Some(1.0));
        assert_eq!(s.weight(1, 2), Some(-1.0));

        let tri = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        let s = subdivide_for_maxcut(&tri);
        assert_eq!((s.vertex_count(), s.edge_count()), (6, 6));
        assert!((0..6).all(|v| s.degree(v) == 2));
        // Max cut of a triangle is 2.
        assert_eq!(brute_force(&s, 28).unwrap().value(), 4.0);
    }
}
