//! Instance representation, objective evaluation and the sign-flip
//! composition primitives every solver is built from.
//!
//! Objective values are always the edge sum
//! `val_x(G) = sum over {u,v} in E of a_uv * x_u * x_v`, with each edge
//! counted once. The full quadratic form `x^T A x` of a symmetric matrix
//! counts every edge twice, so it equals `2 * val_x(G)`.

use crate::error::{Error, Result};

/// A single spin, always `-1` or `+1` once assigned.
pub type Spin = i8;

/// Absolute tolerance used for every floating point comparison of values.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Adjacency entry. Ids are stored in 32 bits to keep the lists compact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    vertex: u32,
    edge: u32,
    pub weight: f64,
}

impl Neighbor {
    pub fn vertex(&self) -> usize {
        self.vertex as usize
    }

    /// Index into [`WeightedGraph::edges`].
    pub fn edge(&self) -> usize {
        self.edge as usize
    }
}

/// Undirected graph of a symmetric, zero-diagonal instance matrix.
///
/// Edges are stored once with `u < v`, sorted lexicographically, and carry
/// nonzero finite weights. Adjacency lists are sorted by neighbor id.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Neighbors of `v` are `adjacency[offsets[v]..offsets[v + 1]]`.
    offsets: Vec<usize>,
    adjacency: Vec<Neighbor>,
    unit: bool,
}

impl WeightedGraph {
    /// Builds a graph from raw `(u, v, w)` entries with 0-based ids.
    ///
    /// Entries naming the same unordered pair are merged by averaging their
    /// weights, which is the symmetrization `a'_uv = (a_uv + a_vu) / 2` when
    /// both orientations are given. Pairs whose merged weight is zero are
    /// dropped.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut raw: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, w) in entries {
            if u >= n || v >= n {
                return Err(Error::validation(format!(
                    "edge ({}, {}) references a vertex outside 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::validation(format!("self-loop on vertex {}", u + 1)));
            }
            if !w.is_finite() {
                return Err(Error::validation(format!(
                    "edge ({}, {}) has non-finite weight",
                    u + 1,
                    v + 1
                )));
            }
            raw.push((u.min(v), u.max(v), w));
        }
        raw.sort_by_key(|&(u, v, _)| (u, v));

        let mut edges = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            let (u, v, _) = raw[i];
            let mut j = i;
            let mut sum = 0.0;
            while j < raw.len() && raw[j].0 == u && raw[j].1 == v {
                sum += raw[j].2;
                j += 1;
            }
            let weight = sum / (j - i) as f64;
            if weight != 0.0 {
                edges.push(Edge { u, v, weight });
            }
            i = j;
        }
        Ok(Self::from_canonical(n, edges))
    }

    /// `edges` must already be canonical: `u < v < n`, sorted, unique, nonzero.
    pub(crate) fn from_canonical(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|p| (p[0].u, p[0].v) < (p[1].u, p[1].v)));
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        assert!(
            u32::try_from(n).is_ok() && u32::try_from(edges.len()).is_ok(),
            "graphs are limited to 2^32 vertices and edges"
        );
        let blank = Neighbor {
            vertex: 0,
            edge: 0,
            weight: 0.0,
        };
        let mut adjacency = vec![blank; 2 * edges.len()];
        let mut next = offsets[..n].to_vec();
        // Sorted edge order yields sorted adjacency lists without a second sort.
        for (idx, e) in edges.iter().enumerate() {
            adjacency[next[e.u]] = Neighbor {
                vertex: e.v as u32,
                edge: idx as u32,
                weight: e.weight,
            };
            next[e.u] += 1;
            adjacency[next[e.v]] = Neighbor {
                vertex: e.u as u32,
                edge: idx as u32,
                weight: e.weight,
            };
            next[e.v] += 1;
        }
        let unit = edges.iter().all(|e| e.weight.abs() == 1.0);
        Self {
            n,
            edges,
            offsets,
            adjacency,
            unit,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[Neighbor] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// True iff every weight is `-1` or `+1`.
    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        if u >= self.n || v >= self.n {
            return None;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        let list = self.neighbors(a);
        list.binary_search_by(|nb| nb.vertex().cmp(&b))
            .ok()
            .map(|i| list[i].weight)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    /// `||A||` in the edge convention: the sum of `|w|` over stored edges.
    pub fn abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight.abs()).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.n).filter(|&v| self.degree(v) == 0).count()
    }

    /// Subgraph induced by `vertices` (duplicates ignored).
    pub fn induced(&self, vertices: &[usize]) -> Result<Subgraph> {
        let mut local = vec![usize::MAX; self.n];
        let mut to_parent: Vec<usize> = vertices.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();
        if let Some(&bad) = to_parent.iter().find(|&&v| v >= self.n) {
            return Err(Error::validation(format!(
                "vertex {} outside the graph",
                bad + 1
            )));
        }
        for (i, &v) in to_parent.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (lu, &u) in to_parent.iter().enumerate() {
            for nb in self.neighbors(u) {
                if nb.vertex() > u && local[nb.vertex()] != usize::MAX {
                    edges.push(Edge {
                        u: lu,
                        v: local[nb.vertex()],
                        weight: nb.weight,
                    });
                }
            }
        }
        Ok(Subgraph {
            graph: WeightedGraph::from_canonical(to_parent.len(), edges),
            to_parent,
        })
    }

    /// `val_x(G)`; fails if `spins` has the wrong length or a non-spin entry.
    pub fn evaluate(&self, spins: &[Spin]) -> Result<f64> {
        check_spins(self.n, spins)?;
        Ok(self.value_of(spins))
    }

    pub(crate) fn value_of(&self, spins: &[Spin]) -> f64 {
        self.edges
            .iter()
            .map(|e| e.weight * f64::from(spins[e.u] * spins[e.v]))
            .sum()
    }

    /// Change in value caused by flipping vertex `v`:
    /// `-2 * sum over u in N(v) of a_uv * x_u * x_v`.
    pub fn flip_delta(&self, spins: &[Spin], v: usize) -> f64 {
        let local: f64 = self
            .neighbors(v)
            .iter()
            .map(|nb| nb.weight * f64::from(spins[nb.vertex()]))
            .sum();
        -2.0 * f64::from(spins[v]) * local
    }

    pub fn stats(&self) -> InstanceStats {
        let n = self.n;
        let m = self.edges.len();
        InstanceStats {
            n,
            m,
            abs_weight: self.abs_weight(),
            max_degree: self.max_degree(),
            degeneracy: degeneracy_order(self).1,
            density: if n == 0 { 0.0 } else { m as f64 / n as f64 },
        }
    }
}

fn check_spins(n: usize, spins: &[Spin]) -> Result<()> {
    if spins.len() != n {
        return Err(Error::validation(format!(
            "assignment has {} entries, graph has {n} vertices",
            spins.len()
        )));
    }
    if let Some(i) = spins.iter().position(|&s| s != 1 && s != -1) {
        return Err(Error::validation(format!(
            "assignment entry {} is {}, expected -1 or +1",
            i + 1,
            spins[i]
        )));
    }
    Ok(())
}

/// An induced subgraph with the map from its local ids back to the parent.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: WeightedGraph,
    pub to_parent: Vec<usize>,
}

impl Subgraph {
    /// Lifts a full assignment of the subgraph to a partial one of the parent.
    pub fn lift(&self, assignment: &Assignment) -> PartialAssignment {
        PartialAssignment {
            vertices: self.to_parent.clone(),
            spins: assignment.spins().to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceStats {
    pub n: usize,
    pub m: usize,
    pub abs_weight: f64,
    pub max_degree: usize,
    pub degeneracy: usize,
    /// `m / n`.
    pub density: f64,
}

/// Smallest-last ordering by repeated minimum-degree removal (bucket queue,
/// `O(n + m)`). Returns the removal order and the degeneracy.
pub fn degeneracy_order(g: &WeightedGraph) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut low = 0;
    while order.len() < n {
        // Stale bucket entries are skipped lazily.
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("nonempty bucket");
            if !removed[v] && degree[v] == low {
                break v;
            }
        };
        removed[v] = true;
        degeneracy = degeneracy.max(low);
        order.push(v);
        for nb in g.neighbors(v) {
            let u = nb.vertex();
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                if degree[u] < low {
                    low = degree[u];
                }
            }
        }
    }
    (order, degeneracy)
}

/// A full solution with its cached objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    spins: Vec<Spin>,
    value: f64,
}

impl Assignment {
    pub fn new(g: &WeightedGraph, spins: Vec<Spin>) -> Result<Self> {
        let value = g.evaluate(&spins)?;
        Ok(Self { spins, value })
    }

    pub fn all_plus(g: &WeightedGraph) -> Self {
        let spins = vec![1; g.vertex_count()];
        let value = g.value_of(&spins);
        Self { spins, value }
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn into_spins(self) -> Vec<Spin> {
        self.spins
    }

    pub fn negated(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|s| -s).collect(),
            value: self.value,
        }
    }
}

/// Spins for a subset of the vertices of some graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialAssignment {
    pub vertices: Vec<usize>,
    pub spins: Vec<Spin>,
}

impl PartialAssignment {
    pub fn new(vertices: Vec<usize>, spins: Vec<Spin>) -> Result<Self> {
        if vertices.len() != spins.len() {
            return Err(Error::validation(
                "partial assignment: vertex and spin counts differ",
            ));
        }
        if let Some(&s) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::validation(format!(
                "partial assignment entry {s}, expected -1 or +1"
            )));
        }
        Ok(Self { vertices, spins })
    }

    pub fn from_full(a: &Assignment) -> Self {
        Self {
            vertices: (0..a.spins.len()).collect(),
            spins: a.spins.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Value of `G[vertices]` under these spins.
    pub fn value_on(&self, g: &WeightedGraph) -> Result<f64> {
        let labels = self.scatter(g)?;
        Ok(self
            .vertices
            .iter()
            .flat_map(|&v| {
                let labels = &labels;
                g.neighbors(v)
                    .iter()
                    .filter(move |nb| nb.vertex() > v && labels[nb.vertex()] != 0)
                    .map(move |nb| nb.weight * f64::from(labels[v] * labels[nb.vertex()]))
            })
            .sum())
    }

    /// Writes the spins into an `n`-vector with 0 for unassigned vertices.
    fn scatter(&self, g: &WeightedGraph) -> Result<Vec<Spin>> {
        let mut labels = vec![0 as Spin; g.vertex_count()];
        for (&v, &s) in self.vertices.iter().zip(&self.spins) {
            if v >= g.vertex_count() {
                return Err(Error::validation(format!(
                    "vertex {} outside the graph",
                    v + 1
                )));
            }
            if labels[v] != 0 {
                return Err(Error::validation(format!(
                    "vertex {} assigned twice",
                    v + 1
                )));
            }
            labels[v] = s;
        }
        Ok(labels)
    }
}

/// Returns a solution with nonnegative value in `O(n + m)`.
///
/// Vertices are scanned in increasing id; vertex `i` is flipped whenever its
/// back-edge sum `z_i` (edges to smaller ids) is negative. Starts from the
/// all-`+1` assignment when `start` is `None`.
pub fn normalize_nonneg(g: &WeightedGraph, start: Option<&[Spin]>) -> Result<Assignment> {
    let spins = match start {
        Some(s) => {
            check_spins(g.vertex_count(), s)?;
            s.to_vec()
        }
        None => vec![1; g.vertex_count()],
    };
    let mut builder = SolutionBuilder::new(g);
    builder.spins = spins;
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    builder.normalize_scan(&all, &vec![true; g.vertex_count()]);
    Ok(builder.finish_unchecked())
}

/// Back-edge sums `z_i` of the scan used by [`normalize_nonneg`].
pub fn back_edge_sums(g: &WeightedGraph, spins: &[Spin]) -> Vec<f64> {
    (0..g.vertex_count())
        .map(|i| {
            g.neighbors(i)
                .iter()
                .take_while(|nb| nb.vertex() < i)
                .map(|nb| nb.weight * f64::from(spins[i] * spins[nb.vertex()]))
                .sum()
        })
        .collect()
}

/// Joins solutions of two disjoint vertex sets, flipping `first` when the
/// edges between the sets contribute negatively. The result has value at
/// least `z1 + z2` on `G[V1 ∪ V2]`.
pub fn combine_disjoint(
    g: &WeightedGraph,
    first: &PartialAssignment,
    second: &PartialAssignment,
) -> Result<PartialAssignment> {
    let labels1 = first.scatter(g)?;
    let labels2 = second.scatter(g)?;
    if let Some(&v) = second.vertices.iter().find(|&&v| labels1[v] != 0) {
        return Err(Error::validation(format!(
            "vertex sets overlap at vertex {}",
            v + 1
        )));
    }
    let cross: f64 = first
        .vertices
        .iter()
        .flat_map(|&v| {
            let labels2 = &labels2;
            let s = labels1[v];
            g.neighbors(v)
                .iter()
                .filter(move |nb| labels2[nb.vertex()] != 0)
                .map(move |nb| nb.weight * f64::from(s * labels2[nb.vertex()]))
        })
        .sum();
    let sign: Spin = if cross >= 0.0 { 1 } else { -1 };
    let mut pairs: Vec<(usize, Spin)> = first
        .vertices
        .iter()
        .zip(&first.spins)
        .map(|(&v, &s)| (v, s * sign))
        .chain(second.vertices.iter().copied().zip(second.spins.iter().copied()))
        .collect();
    pairs.sort_unstable_by_key(|p| p.0);
    let (vertices, spins) = pairs.into_iter().unzip();
    Ok(PartialAssignment { vertices, spins })
}

/// Completes a solution of an induced subgraph `H` to all of `G` without
/// losing value: the remaining vertices are normalized to a nonnegative
/// value and then joined with [`combine_disjoint`] semantics.
pub fn extend_from_induced(g: &WeightedGraph, partial: &PartialAssignment) -> Result<Assignment> {
    partial.scatter(g)?;
    let mut builder = SolutionBuilder::new(g);
    builder.add_part(&partial.vertices, &partial.spins);
    Ok(builder.complete())
}

/// Incremental form of the composition lemmas: parts are added one at a
/// time, each flipped if its edges to the already-assigned vertices would
/// contribute negatively. Total work is `O(n + m)` over all parts.
pub(crate) struct SolutionBuilder<'g> {
    graph: &'g WeightedGraph,
    /// 0 marks an unassigned vertex.
    spins: Vec<Spin>,
}

impl<'g> SolutionBuilder<'g> {
    pub(crate) fn new(graph: &'g WeightedGraph) -> Self {
        Self {
            graph,
            spins: vec![0; graph.vertex_count()],
        }
    }

    /// Adds a part whose vertices must all be unassigned.
    pub(crate) fn add_part(&mut self, vertices: &[usize], spins: &[Spin]) {
        let mut cross = 0.0;
        for (&v, &s) in vertices.iter().zip(spins) {
            debug_assert_eq!(self.spins[v], 0);
            for nb in self.graph.neighbors(v) {
                let t = self.spins[nb.vertex()];
                if t != 0 {
                    cross += nb.weight * f64::from(s * t);
                }
            }
        }
        let sign: Spin = if cross >= 0.0 { 1 } else { -1 };
        for (&v, &s) in vertices.iter().zip(spins) {
            self.spins[v] = s * sign;
        }
    }

    /// Adds the edge `uv` as a part oriented to be good. Same result as
    /// [`Self::add_part`] without a separate weight lookup.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        let (mut w, mut cross_u) = (0.0, 0.0);
        for nb in self.graph.neighbors(u) {
            if nb.vertex() == v {
                w = nb.weight;
            }
            cross_u += nb.weight * f64::from(self.spins[nb.vertex()]);
        }
        debug_assert!(w != 0.0, "({u}, {v}) is not an edge");
        let cross_v: f64 = self
            .graph
            .neighbors(v)
            .iter()
            .map(|nb| nb.weight * f64::from(self.spins[nb.vertex()]))
            .sum();
        let sv: Spin = if w > 0.0 { 1 } else { -1 };
        let sign: Spin = if cross_u + f64::from(sv) * cross_v >= 0.0 { 1 } else { -1 };
        self.spins[u] = sign;
        self.spins[v] = sv * sign;
    }

    /// Assigns every remaining vertex and returns the full solution.
    pub(crate) fn complete(mut self) -> Assignment {
        let n = self.graph.vertex_count();
        let rest: Vec<usize> = (0..n).filter(|&v| self.spins[v] == 0).collect();
        if rest.is_empty() {
            return self.finish_unchecked();
        }
        let mut in_rest = vec![false; n];
        for &v in &rest {
            in_rest[v] = true;
            self.spins[v] = 1;
        }
        self.normalize_scan(&rest, &in_rest);
        let mut cross = 0.0;
        for &v in &rest {
            for nb in self.graph.neighbors(v) {
                if !in_rest[nb.vertex()] {
                    cross += nb.weight * f64::from(self.spins[v] * self.spins[nb.vertex()]);
                }
            }
        }
        if cross < 0.0 {
            for (s, &rest) in self.spins.iter_mut().zip(&in_rest) {
                if !rest {
                    *s = -*s;
                }
            }
        }
        self.finish_unchecked()
    }

    /// The back-edge scan restricted to `G[members]`; `order` is ascending.
    fn normalize_scan(&mut self, order: &[usize], member: &[bool]) {
        for &i in order {
            let z: f64 = self
                .graph
                .neighbors(i)
                .iter()
                .take_while(|nb| nb.vertex() < i)
                .filter(|nb| member[nb.vertex()])
                .map(|nb| nb.weight * f64::from(self.spins[i] * self.spins[nb.vertex()]))
                .sum();
            if z < 0.0 {
                self.spins[i] = -self.spins[i];
            }
        }
    }

    fn finish_unchecked(self) -> Assignment {
        let value = self.graph.value_of(&self.spins);
        Assignment {
            spins: self.spins,
            value,
        }
    }
}
