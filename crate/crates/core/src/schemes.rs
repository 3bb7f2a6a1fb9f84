//! Layering and partition schemes: `(1 - ε)`-approximations that delete a
//! slice of the graph, solve the remainder exactly by tree decomposition and
//! keep the best of the resulting solutions.

use std::collections::VecDeque;

use crate::drivers::{ApproxResult, Certificate};
use crate::error::{Error, Result};
use crate::graph::{combine_disjoint, extend_from_induced, Assignment, WeightedGraph, TOLERANCE};
use crate::par;
use crate::treewidth::solve_with_decomposition;

/// BFS layers; every connected component is layered from its own root and
/// layer indices are shared between components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerStructure {
    layer_of: Vec<usize>,
    layers: Vec<Vec<usize>>,
}

impl LayerStructure {
    pub fn layer_of(&self, v: usize) -> usize {
        self.layer_of[v]
    }

    /// `L_0, ..., L_ℓ`, each sorted by vertex id.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// `𝓛_0, ..., 𝓛_{k-1}`: class `i` unions the layers with index `≡ i (mod k)`.
    pub fn classes(&self, k: usize) -> Vec<Vec<usize>> {
        assert!(k >= 1, "class count must be positive");
        let mut classes = vec![Vec::new(); k];
        for (v, &l) in self.layer_of.iter().enumerate() {
            classes[l % k].push(v);
        }
        classes
    }
}

/// Breadth-first layering from `root`; other components start from their
/// smallest vertex.
pub fn bfs_layers(g: &WeightedGraph, root: usize) -> Result<LayerStructure> {
    let n = g.vertex_count();
    if n > 0 && root >= n {
        return Err(Error::validation(format!("root {} outside the graph", root + 1)));
    }
    let mut layer_of = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let starts = std::iter::once(root).chain(0..n).filter(|_| n > 0);
    for s in starts {
        if layer_of[s] != usize::MAX {
            continue;
        }
        layer_of[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for nb in g.neighbors(u) {
                if layer_of[nb.vertex()] == usize::MAX {
                    layer_of[nb.vertex()] = layer_of[u] + 1;
                    queue.push_back(nb.vertex());
                }
            }
        }
    }
    let depth = layer_of.iter().max().map_or(0, |&l| l + 1);
    let mut layers = vec![Vec::new(); depth];
    for (v, &l) in layer_of.iter().enumerate() {
        layers[l].push(v);
    }
    Ok(LayerStructure { layer_of, layers })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("epsilon must lie in (0, 1], got {epsilon}")))
    }
}

/// Smallest integer `k` with `c / k <= ε`.
fn smallest_k(c: f64, epsilon: f64) -> usize {
    let mut k = (c / epsilon).ceil().max(1.0) as usize;
    while k > 1 && c / (k - 1) as f64 <= epsilon {
        k -= 1;
    }
    while c / k as f64 > epsilon {
        k += 1;
    }
    k
}

/// Number of layer classes used by [`solve_baker`]: the smallest `k` with
/// `4 / k <= ε`.
pub fn baker_k(epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    Ok(smallest_k(4.0, epsilon))
}

/// Vertex sets of `G_i = G[V ∖ 𝓛_i]` and `H_i = G[N[𝓛_i]]` for class `i`.
pub fn baker_pieces(g: &WeightedGraph, layers: &LayerStructure, k: usize, i: usize) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let in_class: Vec<bool> = (0..n).map(|v| layers.layer_of(v) % k == i).collect();
    let rest = (0..n).filter(|&v| !in_class[v]).collect();
    let closed = (0..n)
        .filter(|&v| in_class[v] || g.neighbors(v).iter().any(|nb| in_class[nb.vertex()]))
        .collect();
    (rest, closed)
}

/// Exact solution of an induced piece, with the decomposition width used.
fn solve_piece(g: &WeightedGraph, cap: usize) -> Result<(Assignment, usize)> {
    if g.edge_count() == 0 {
        return Ok((Assignment::all_plus(g), 0));
    }
    solve_with_decomposition(g, cap)
}

fn rename_capacity(e: Error, piece: String) -> Error {
    match e {
        Error::Capacity { actual, limit, .. } => Error::Capacity {
            what: piece,
            actual,
            limit,
        },
        other => other,
    }
}

/// Index of the best candidate; ties within [`TOLERANCE`] go to the smallest index.
fn best_index(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] + TOLERANCE {
            best = i;
        }
    }
    best
}

struct Candidate {
    assignment: Assignment,
    width: usize,
}

fn pick(candidates: Vec<Result<Candidate>>) -> Result<(usize, Candidate, usize)> {
    let candidates: Vec<Candidate> = candidates.into_iter().collect::<Result<_>>()?;
    let values: Vec<f64> = candidates.iter().map(|c| c.assignment.value()).collect();
    let max_width = candidates.iter().map(|c| c.width).max().unwrap_or(0);
    let best = best_index(&values);
    let chosen = candidates.into_iter().nth(best).expect("k >= 1");
    Ok((best, chosen, max_width))
}

/// Baker-style layering scheme, `(1 - ε)`-approximate whenever every
/// `G_i` admits a decomposition within `width_cap`.
///
/// Layers come from BFS rooted at vertex 0. For each class `i < k` the graph
/// `G[V ∖ 𝓛_i]` is solved exactly and extended to all of `G`; the best of
/// the `k` solutions is returned.
pub fn solve_baker(g: &WeightedGraph, epsilon: f64, width_cap: usize) -> Result<ApproxResult> {
    let k = baker_k(epsilon)?;
    let layers = bfs_layers(g, 0)?;
    let classes = layers.classes(k);
    let n = g.vertex_count();
    let candidates = par::map_range(k, |i| {
        let mut removed = vec![false; n];
        for &v in &classes[i] {
            removed[v] = true;
        }
        let keep: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
        let sub = g.induced(&keep)?;
        let (local, width) = solve_piece(&sub.graph, width_cap)
            .map_err(|e| rename_capacity(e, format!("decomposition width of G_{i} (layer class {i} removed)")))?;
        let assignment = extend_from_induced(g, &sub.lift(&local))?;
        if assignment.value() < local.value() - TOLERANCE {
            return Err(Error::Internal(format!("extension of G_{i} lost value")));
        }
        Ok(Candidate { assignment, width })
    });
    let (best, chosen, max_width) = pick(candidates)?;
    let mut certificate = Certificate::default();
    certificate.push("epsilon", epsilon);
    certificate.push("k", k as f64);
    certificate.push("layers", layers.layers().len() as f64);
    certificate.push("best_class", best as f64);
    certificate.push("max_width", max_width as f64);
    Ok(ApproxResult {
        algorithm: "baker",
        assignment: chosen.assignment,
        guarantee: 1.0 - epsilon,
        certificate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionSource {
    External,
    BfsLayerHeuristic,
}

impl PartitionSource {
    pub fn name(self) -> &'static str {
        match self {
            PartitionSource::External => "external",
            PartitionSource::BfsLayerHeuristic => "bfs-layers",
        }
    }
}

/// Disjoint cover `V_0, ..., V_{k-1}` of the vertex set; parts may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    parts: Vec<Vec<usize>>,
    source: PartitionSource,
}

impl VertexPartition {
    pub fn new(n: usize, mut parts: Vec<Vec<usize>>, source: PartitionSource) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::validation("partition needs at least one part"));
        }
        let mut owner = vec![usize::MAX; n];
        for (i, part) in parts.iter_mut().enumerate() {
            part.sort_unstable();
            for &v in part.iter() {
                if v >= n {
                    return Err(Error::validation(format!("partition vertex {} outside the graph", v + 1)));
                }
                if owner[v] != usize::MAX {
                    return Err(Error::validation(format!(
                        "vertex {} appears in parts {} and {}",
                        v + 1,
                        owner[v] + 1,
                        i + 1
                    )));
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::validation(format!("vertex {} is in no part", v + 1)));
        }
        Ok(Self { parts, source })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn source(&self) -> PartitionSource {
        self.source
    }

    /// Number of edges between part `i` and the other parts.
    pub fn cut_edges(&self, g: &WeightedGraph, i: usize) -> usize {
        let mut inside = vec![false; g.vertex_count()];
        for &v in &self.parts[i] {
            inside[v] = true;
        }
        g.edges().iter().filter(|e| inside[e.u] != inside[e.v]).count()
    }
}

/// Assigns vertex `v` to part `(BFS layer of v) mod k`.
pub fn heuristic_partition(g: &WeightedGraph, k: usize) -> Result<VertexPartition> {
    if k == 0 {
        return Err(Error::validation("partition needs k >= 1"));
    }
    let parts = bfs_layers(g, 0)?.classes(k);
    VertexPartition::new(g.vertex_count(), parts, PartitionSource::BfsLayerHeuristic)
}

/// Density bound `h = max(1, ⌈m / n'⌉)` with `n'` the non-isolated vertices,
/// so that `m <= h · n'`.
pub fn density_bound(g: &WeightedGraph) -> usize {
    let active = g.vertex_count() - g.isolated_count();
    if active == 0 {
        1
    } else {
        g.edge_count().div_ceil(active).max(1)
    }
}

/// Part count required by [`solve_partition_scheme`]: smallest `k >= 6h / ε`.
pub fn partition_k(g: &WeightedGraph, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    Ok(smallest_k(6.0 * density_bound(g) as f64, epsilon))
}

/// Where [`solve_partition_scheme`] takes its vertex partition from.
#[derive(Clone, Copy, Debug)]
pub enum PartitionInput<'a> {
    Heuristic,
    Given(&'a VertexPartition),
}

/// Partition scheme for unit instances, `(1 - ε)`-approximate when all
/// pieces fit the width cap.
///
/// For each part `V_i`, both `G[V_i]` and `G[V ∖ V_i]` are solved exactly and
/// joined; the best of the `k` joined solutions is returned. A given
/// partition must have at least `⌈6h/ε⌉` parts.
pub fn solve_partition_scheme(
    g: &WeightedGraph,
    epsilon: f64,
    input: PartitionInput<'_>,
    width_cap: usize,
) -> Result<ApproxResult> {
    if !g.is_unit() {
        return Err(Error::validation("the partition scheme needs unit weights"));
    }
    let k_min = partition_k(g, epsilon)?;
    let owned;
    let partition = match input {
        PartitionInput::Heuristic => {
            owned = heuristic_partition(g, k_min)?;
            &owned
        }
        PartitionInput::Given(p) => {
            if p.len() < k_min {
                return Err(Error::validation(format!(
                    "partition has {} parts, epsilon {epsilon} needs at least {k_min}",
                    p.len()
                )));
            }
            p
        }
    };
    let n = g.vertex_count();
    let k = partition.len();
    let candidates = par::map_range(k, |i| {
        let part = &partition.parts()[i];
        let mut inside = vec![false; n];
        for &v in part {
            inside[v] = true;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
        let solve = |vertices: &[usize], label: String| -> Result<_> {
            let sub = g.induced(vertices)?;
            let (local, width) = solve_piece(&sub.graph, width_cap).map_err(|e| rename_capacity(e, label))?;
            Ok((sub.lift(&local), width))
        };
        let (inner, w1) = solve(part, format!("decomposition width of part {}", i + 1))?;
        let (outer, w2) = solve(&rest, format!("decomposition width of the complement of part {}", i + 1))?;
        let joined = combine_disjoint(g, &inner, &outer)?;
        let assignment = Assignment::new(g, joined.spins)?;
        Ok(Candidate {
            assignment,
            width: w1.max(w2),
        })
    });
    let (best, chosen, max_width) = pick(candidates)?;
    let mut certificate = Certificate::default();
    certificate.push("epsilon", epsilon);
    certificate.push("h", density_bound(g) as f64);
    certificate.push("k", k as f64);
    certificate.push("best_part", best as f64);
    certificate.push("max_width", max_width as f64);
    Ok(ApproxResult {
        algorithm: "partition",
        assignment: chosen.assignment,
        guarantee: 1.0 - epsilon,
        certificate,
    })
}
