//! Maximal, weight-greedy and maximum-cardinality matchings.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par;

const NONE: usize = usize::MAX;

/// A set of vertex-disjoint edges, each stored with `u < v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
    total_abs_weight: f64,
    /// Partner of each vertex, `NONE` when unmatched.
    mate: Vec<usize>,
}

impl Matching {
    /// Validates that every pair is an edge of `g` and that pairs are disjoint.
    pub fn from_pairs(g: &WeightedGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut mate = vec![NONE; g.vertex_count()];
        let mut edges = Vec::with_capacity(pairs.len());
        let mut total = 0.0;
        for &(a, b) in pairs {
            let w = g.weight(a, b).ok_or_else(|| {
                Error::validation(format!("({}, {}) is not an edge", a + 1, b + 1))
            })?;
            if mate[a] != NONE || mate[b] != NONE {
                return Err(Error::validation(format!(
                    "matching edges overlap at ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
            mate[a] = b;
            mate[b] = a;
            edges.push((a.min(b), a.max(b)));
            total += w.abs();
        }
        Ok(Self {
            edges,
            total_abs_weight: total,
            mate,
        })
    }

    fn from_mates(g: &WeightedGraph, mate: Vec<usize>) -> Self {
        let mut edges = Vec::new();
        let mut total = 0.0;
        for (u, &v) in mate.iter().enumerate() {
            if v != NONE && u < v {
                edges.push((u, v));
                total += g.weight(u, v).expect("matched pair is an edge").abs();
            }
        }
        Self {
            edges,
            total_abs_weight: total,
            mate,
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `w(M)`, the sum of `|a_uv|` over matched edges.
    pub fn total_abs_weight(&self) -> f64 {
        self.total_abs_weight
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        (self.mate[v] != NONE).then_some(self.mate[v])
    }

    pub fn is_matched(&self, v: usize) -> bool {
        self.mate[v] != NONE
    }

    /// True if no edge of `g` has both endpoints unmatched.
    pub fn is_maximal(&self, g: &WeightedGraph) -> bool {
        g.edges()
            .iter()
            .all(|e| self.is_matched(e.u) || self.is_matched(e.v))
    }
}

/// The removed-edge groups `E_1, ..., E_t` of a greedy run: `groups[i]` holds
/// the indices of the edges discarded when the `i`-th matching edge was taken
/// (the matching edge itself included).
#[derive(Clone, Debug)]
pub struct GreedyTrace {
    pub matching: Matching,
    pub groups: Vec<Vec<usize>>,
}

/// Edge indices by non-increasing `|w|`, ties by `(u, v)`.
fn weight_order(g: &WeightedGraph) -> Vec<usize> {
    let edges = g.edges();
    // For non-negative floats the bit pattern orders like the value, so the
    // complemented bits sort by decreasing |w|; the index breaks ties in
    // lexicographic edge order.
    let mut keys: Vec<(u64, usize)> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (!e.weight.abs().to_bits(), i))
        .collect();
    par::sort_unstable(&mut keys);
    keys.into_iter().map(|(_, i)| i).collect()
}

/// Greedy matching over edges in non-increasing absolute weight.
/// `w(M) >= w(E) / (2 * max_degree)`.
pub fn greedy_sorted_matching(g: &WeightedGraph) -> Matching {
    // Same order as `weight_order`: edges are stored lexicographically, so
    // `(u, v)` breaks ties exactly like the edge index. Sorting the endpoints
    // along with the key avoids an indirection per edge on large graphs.
    let id = |v: usize| u32::try_from(v).expect("vertex ids fit in 32 bits");
    let mut keyed: Vec<(u64, u32, u32)> = g
        .edges()
        .iter()
        .map(|e| (!e.weight.abs().to_bits(), id(e.u), id(e.v)))
        .collect();
    par::sort_unstable(&mut keyed);
    let mut mate = vec![NONE; g.vertex_count()];
    let mut pairs = Vec::new();
    let mut total = 0.0;
    for (key, u, v) in keyed {
        let (u, v) = (u as usize, v as usize);
        if mate[u] == NONE && mate[v] == NONE {
            mate[u] = v;
            mate[v] = u;
            pairs.push((u, v));
            total += f64::from_bits(!key);
        }
    }
    Matching {
        edges: pairs,
        total_abs_weight: total,
        mate,
    }
}

/// Same selection as [`greedy_sorted_matching`], recording the removed sets.
pub fn greedy_sorted_matching_traced(g: &WeightedGraph) -> GreedyTrace {
    let edges = g.edges();
    let mut removed = vec![false; edges.len()];
    let mut pairs = Vec::new();
    let mut groups = Vec::new();
    for idx in weight_order(g) {
        if removed[idx] {
            continue;
        }
        let e = edges[idx];
        let mut group = Vec::new();
        for end in [e.u, e.v] {
            for nb in g.neighbors(end) {
                if !removed[nb.edge()] {
                    removed[nb.edge()] = true;
                    group.push(nb.edge());
                }
            }
        }
        pairs.push((e.u, e.v));
        groups.push(group);
    }
    let matching = Matching::from_pairs(g, &pairs).expect("greedy pairs form a matching");
    GreedyTrace { matching, groups }
}

/// Inclusion-wise maximal matching from one scan in canonical edge order.
pub fn maximal_matching(g: &WeightedGraph) -> Matching {
    let mut mate = vec![NONE; g.vertex_count()];
    for e in g.edges() {
        if mate[e.u] == NONE && mate[e.v] == NONE {
            mate[e.u] = e.v;
            mate[e.v] = e.u;
        }
    }
    Matching::from_mates(g, mate)
}

/// Maximum-cardinality matching by Edmonds' blossom algorithm.
///
/// Starts from the maximal matching and searches one alternating tree per
/// free vertex, contracting odd cycles by relabeling their base.
pub fn maximum_matching(g: &WeightedGraph) -> Matching {
    let n = g.vertex_count();
    let mut mate = vec![NONE; n];
    for e in g.edges() {
        if mate[e.u] == NONE && mate[e.v] == NONE {
            mate[e.u] = e.v;
            mate[e.v] = e.u;
        }
    }
    let mut search = BlossomSearch::new(n);
    for root in 0..n {
        if mate[root] == NONE && g.degree(root) > 0 {
            if let Some(end) = search.find_augmenting_path(g, &mate, root) {
                search.augment(&mut mate, end);
            }
        }
    }
    Matching::from_mates(g, mate)
}

struct BlossomSearch {
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    /// Vertices whose `parent`, `base` or `outer` entry changed in this search.
    touched: Vec<usize>,
    in_touched: Vec<bool>,
    lca_stamp: Vec<u32>,
    blossom_stamp: Vec<u32>,
    stamp: u32,
    queue: VecDeque<usize>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            touched: Vec::new(),
            in_touched: vec![false; n],
            lca_stamp: vec![0; n],
            blossom_stamp: vec![0; n],
            stamp: 0,
            queue: VecDeque::new(),
        }
    }

    fn touch(&mut self, v: usize) {
        if !self.in_touched[v] {
            self.in_touched[v] = true;
            self.touched.push(v);
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = NONE;
            self.base[v] = v;
            self.outer[v] = false;
            self.in_touched[v] = false;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp += 1;
        self.stamp
    }

    fn lowest_common_base(&mut self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let s = self.next_stamp();
        loop {
            a = self.base[a];
            self.lca_stamp[a] = s;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if self.lca_stamp[b] == s {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize, s: u32) {
        while self.base[v] != b {
            self.blossom_stamp[self.base[v]] = s;
            self.blossom_stamp[self.base[mate[v]]] = s;
            self.parent[v] = child;
            self.touch(v);
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn find_augmenting_path(
        &mut self,
        g: &WeightedGraph,
        mate: &[usize],
        root: usize,
    ) -> Option<usize> {
        self.reset();
        self.outer[root] = true;
        self.touch(root);
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for nb in g.neighbors(v) {
                let to = nb.vertex();
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let b = self.lowest_common_base(mate, v, to);
                    let s = self.next_stamp();
                    self.mark_path(mate, v, b, to, s);
                    self.mark_path(mate, to, b, v, s);
                    let members: Vec<usize> = self
                        .touched
                        .iter()
                        .copied()
                        .filter(|&i| self.blossom_stamp[self.base[i]] == s)
                        .collect();
                    for i in members {
                        self.base[i] = b;
                        if !self.outer[i] {
                            self.outer[i] = true;
                            self.queue.push_back(i);
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    self.touch(to);
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let next = mate[to];
                    self.outer[next] = true;
                    self.touch(next);
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&self, mate: &mut [usize], end: usize) {
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = next;
        }
    }
}
