//! Instance makers and independent exhaustive oracles shared by the
//! integration tests.
#![allow(dead_code)]

use maxqp::generate::SeededRng;
use maxqp::{Spin, WeightedGraph};

#[derive(Clone, Copy, Debug)]
pub enum Weights {
    Unit,
    Integer,
    Real,
}

fn draw(rng: &mut SeededRng, w: Weights) -> f64 {
    match w {
        Weights::Unit => rng.sign(),
        Weights::Integer => {
            let mag = 1 + rng.below(4) as i32;
            f64::from(mag) * rng.sign()
        }
        Weights::Real => rng.real_weight(),
    }
}

/// Erdős–Rényi style graph with edge probability `p`.
pub fn random_graph(rng: &mut SeededRng, n: usize, p: f64, w: Weights) -> WeightedGraph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit_f64() < p {
                e.push((u, v, draw(rng, w)));
            }
        }
    }
    WeightedGraph::from_entries(n, e).unwrap()
}

/// Random graph whose degrees never exceed `max_degree`.
pub fn bounded_degree_graph(rng: &mut SeededRng, n: usize, max_degree: usize, w: Weights) -> WeightedGraph {
    let mut deg = vec![0; n];
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    rng.shuffle(&mut pairs);
    let mut e = Vec::new();
    for (u, v) in pairs {
        if deg[u] < max_degree && deg[v] < max_degree && rng.unit_f64() < 0.6 {
            deg[u] += 1;
            deg[v] += 1;
            e.push((u, v, draw(rng, w)));
        }
    }
    WeightedGraph::from_entries(n, e).unwrap()
}

/// Unit graph in which each vertex has at most `d` earlier neighbours, so
/// its degeneracy is at most `d`.
pub fn degenerate_graph(rng: &mut SeededRng, n: usize, d: usize) -> WeightedGraph {
    let mut e = Vec::new();
    for v in 1..n {
        let mut earlier: Vec<usize> = (0..v).collect();
        rng.shuffle(&mut earlier);
        let k = rng.below(d + 1).min(v);
        for &u in &earlier[..k] {
            e.push((u, v, rng.sign()));
        }
    }
    WeightedGraph::from_entries(n, e).unwrap()
}

/// Unit graph where every vertex has at least one edge.
pub fn no_isolated_graph(rng: &mut SeededRng, n: usize, p: f64) -> WeightedGraph {
    let mut e = Vec::new();
    let mut touched = vec![false; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit_f64() < p {
                e.push((u, v, rng.sign()));
                touched[u] = true;
                touched[v] = true;
            }
        }
    }
    for v in 0..n {
        if !touched[v] {
            let mut u = rng.below(n - 1);
            if u >= v {
                u += 1;
            }
            e.push((u.min(v), u.max(v), rng.sign()));
            touched[u] = true;
            touched[v] = true;
        }
    }
    WeightedGraph::from_entries(n, e).unwrap()
}

/// Random partial `k`-tree: treewidth at most `k`.
pub fn partial_ktree(rng: &mut SeededRng, n: usize, k: usize, keep: f64, w: Weights) -> WeightedGraph {
    let k = k.min(n.saturating_sub(1)).max(1);
    let mut cliques: Vec<Vec<usize>> = vec![(0..k.min(n)).collect()];
    let mut pairs = Vec::new();
    for u in 0..k.min(n) {
        for v in u + 1..k.min(n) {
            pairs.push((u, v));
        }
    }
    for v in k.min(n)..n {
        let base = cliques[rng.below(cliques.len())].clone();
        for &u in &base {
            pairs.push((u, v));
        }
        for drop in 0..base.len() {
            let mut c: Vec<usize> = base.iter().copied().enumerate().filter(|&(i, _)| i != drop).map(|(_, u)| u).collect();
            c.push(v);
            cliques.push(c);
        }
    }
    let mut e = Vec::new();
    for (u, v) in pairs {
        if rng.unit_f64() < keep {
            e.push((u, v, draw(rng, w)));
        }
    }
    WeightedGraph::from_entries(n, e).unwrap()
}

pub fn spins_of(mask: u64, n: usize) -> Vec<Spin> {
    (0..n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect()
}

/// Optimum by evaluating all `2^n` assignments directly.
pub fn naive_opt(g: &WeightedGraph) -> f64 {
    let n = g.vertex_count();
    assert!(n <= 20);
    (0..1u64 << n)
        .map(|mask| g.evaluate(&spins_of(mask, n)).unwrap())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Maximum cut size of the underlying simple graph.
pub fn naive_maxcut(g: &WeightedGraph) -> usize {
    let n = g.vertex_count();
    (0..1u64 << n)
        .map(|mask| g.edges().iter().filter(|e| (mask >> e.u & 1) != (mask >> e.v & 1)).count())
        .max()
        .unwrap_or(0)
}

/// Maximum matching cardinality by exhaustive branching over edges.
pub fn naive_max_matching(g: &WeightedGraph) -> usize {
    fn go(edges: &[(usize, usize)], i: usize, used: u64) -> usize {
        if i == edges.len() {
            return 0;
        }
        let skip = go(edges, i + 1, used);
        let (u, v) = edges[i];
        if used >> u & 1 == 0 && used >> v & 1 == 0 {
            skip.max(1 + go(edges, i + 1, used | 1 << u | 1 << v))
        } else {
            skip
        }
    }
    let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    go(&edges, 0, 0)
}

pub fn is_bipartite(g: &WeightedGraph) -> bool {
    let n = g.vertex_count();
    let mut side = vec![-1i8; n];
    for s in 0..n {
        if side[s] >= 0 {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for nb in g.neighbors(u) {
                if side[nb.vertex()] < 0 {
                    side[nb.vertex()] = 1 - side[u];
                    stack.push(nb.vertex());
                } else if side[nb.vertex()] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// Degeneracy by repeatedly deleting a minimum-degree vertex, quadratic time.
pub fn naive_degeneracy(g: &WeightedGraph) -> usize {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| deg[v]).unwrap();
        best = best.max(deg[v]);
        alive[v] = false;
        for nb in g.neighbors(v) {
            if alive[nb.vertex()] {
                deg[nb.vertex()] -= 1;
            }
        }
    }
    best
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
