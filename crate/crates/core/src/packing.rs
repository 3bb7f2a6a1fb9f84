//! Good/bad predicates, easy packings and their conversion to solutions.
//!
//! An easy subgraph has a center edge `(x, y)`; every other vertex of the
//! part is an outside vertex adjacent to `x`, `y`, or both, outside vertices
//! are pairwise non-adjacent, and every triangle through the center is good.

use crate::error::{Error, Result};
use crate::graph::{Assignment, SolutionBuilder, Spin, WeightedGraph};
use crate::matching::{maximal_matching, maximum_matching, Matching};

const NONE: usize = usize::MAX;

/// `a_uv * x_u * x_v > 0`.
pub fn edge_is_good(g: &WeightedGraph, spins: &[Spin], u: usize, v: usize) -> Result<bool> {
    let w = g
        .weight(u, v)
        .ok_or_else(|| Error::validation(format!("({}, {}) is not an edge", u + 1, v + 1)))?;
    if spins.len() != g.vertex_count() {
        return Err(Error::validation("assignment length does not match graph"));
    }
    Ok(w * f64::from(spins[u] * spins[v]) > 0.0)
}

/// A triangle of a unit instance is good iff its three weights multiply to `+1`.
pub fn triangle_is_good(g: &WeightedGraph, u: usize, v: usize, w: usize) -> Result<bool> {
    if !g.is_unit() {
        return Err(Error::validation("triangle predicate needs a unit-weight instance"));
    }
    let edge = |a: usize, b: usize| {
        g.weight(a, b)
            .ok_or_else(|| Error::validation(format!("({}, {}) is not an edge", a + 1, b + 1)))
    };
    Ok(edge(u, v)? * edge(v, w)? * edge(w, u)? > 0.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackPart {
    pub center: (usize, usize),
    pub outside: Vec<usize>,
}

impl PackPart {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        [self.center.0, self.center.1]
            .into_iter()
            .chain(self.outside.iter().copied())
    }

    pub fn len(&self) -> usize {
        2 + self.outside.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Disjoint vertex sets, each inducing an easy subgraph.
#[derive(Clone, Debug, PartialEq)]
pub struct EasyPacking {
    parts: Vec<PackPart>,
    edge_count: usize,
    leftover: Vec<usize>,
}

impl EasyPacking {
    /// Builds and validates a packing.
    pub fn new(g: &WeightedGraph, parts: Vec<PackPart>) -> Result<Self> {
        let edge_count = validate_parts(g, &parts)?;
        let mut covered = vec![false; g.vertex_count()];
        for p in &parts {
            for v in p.vertices() {
                covered[v] = true;
            }
        }
        let leftover = (0..g.vertex_count()).filter(|&v| !covered[v]).collect();
        Ok(Self {
            parts,
            edge_count,
            leftover,
        })
    }

    pub fn parts(&self) -> &[PackPart] {
        &self.parts
    }

    /// `m(F)`: edges induced inside the parts.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// `|V_F|`.
    pub fn covered_count(&self) -> usize {
        self.parts.iter().map(PackPart::len).sum()
    }

    /// `I* = V \ V_F`, ascending.
    pub fn leftover(&self) -> &[usize] {
        &self.leftover
    }

    /// Re-runs the structural checks against `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        validate_parts(g, &self.parts).map(|_| ())
    }

    /// True iff every part induces a star.
    pub fn is_star_packing(&self, g: &WeightedGraph) -> bool {
        self.parts.iter().all(|p| {
            let (x, y) = p.center;
            let on_x = p.outside.iter().filter(|&&o| g.has_edge(o, x)).count();
            let on_y = p.outside.iter().filter(|&&o| g.has_edge(o, y)).count();
            on_x + on_y == p.outside.len() && (on_x == 0 || on_y == 0)
        })
    }

    /// Largest number of leftover vertices adjacent to a single part.
    pub fn max_leftover_neighbors_per_part(&self, g: &WeightedGraph) -> usize {
        let mut part_of = vec![NONE; g.vertex_count()];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.vertices() {
                part_of[v] = i;
            }
        }
        let mut count = vec![0usize; self.parts.len()];
        let mut seen = vec![NONE; self.parts.len()];
        for &v in &self.leftover {
            for nb in g.neighbors(v) {
                let p = part_of[nb.vertex()];
                if p != NONE && seen[p] != v {
                    seen[p] = v;
                    count[p] += 1;
                }
            }
        }
        count.into_iter().max().unwrap_or(0)
    }
}

/// Checks the easy-packing invariants and returns `m(F)`.
fn validate_parts(g: &WeightedGraph, parts: &[PackPart]) -> Result<usize> {
    let n = g.vertex_count();
    let mut owner = vec![NONE; n];
    let mut edges = 0;
    for (i, p) in parts.iter().enumerate() {
        for v in p.vertices() {
            if v >= n {
                return Err(Error::validation(format!("part {i}: vertex {} out of range", v + 1)));
            }
            if owner[v] != NONE {
                return Err(Error::validation(format!(
                    "vertex {} appears in parts {} and {i}",
                    v + 1,
                    owner[v]
                )));
            }
            owner[v] = i;
        }
        let (x, y) = p.center;
        let center_w = g.weight(x, y).ok_or_else(|| {
            Error::validation(format!("part {i}: center ({}, {}) is not an edge", x + 1, y + 1))
        })?;
        edges += 1;
        for &o in &p.outside {
            let wx = g.weight(o, x);
            let wy = g.weight(o, y);
            match (wx, wy) {
                (None, None) => {
                    return Err(Error::validation(format!(
                        "part {i}: outside vertex {} not adjacent to the center",
                        o + 1
                    )))
                }
                (Some(a), Some(b)) => {
                    if a * b * center_w <= 0.0 {
                        return Err(Error::validation(format!(
                            "part {i}: bad triangle through vertex {}",
                            o + 1
                        )));
                    }
                    edges += 2;
                }
                _ => edges += 1,
            }
            if let Some(nb) = g
                .neighbors(o)
                .iter()
                .find(|nb| owner[nb.vertex()] == i && nb.vertex() != x && nb.vertex() != y)
            {
                return Err(Error::validation(format!(
                    "part {i}: outside vertices {} and {} are adjacent",
                    o + 1,
                    nb.vertex() + 1
                )));
            }
        }
    }
    Ok(edges)
}

/// A solution of value at least `w(M)`: each matched edge is oriented to be
/// good, then the edges are joined one by one and the rest is completed.
pub fn matching_to_solution(g: &WeightedGraph, m: &Matching) -> Assignment {
    let mut builder = SolutionBuilder::new(g);
    // Vertex order keeps the adjacency reads local on large graphs.
    let mut pairs = m.edges().to_vec();
    pairs.sort_unstable();
    for (u, v) in pairs {
        builder.add_edge(u, v);
    }
    builder.complete()
}

/// A solution of value at least `m(F)` for a unit instance.
pub fn packing_to_solution(g: &WeightedGraph, packing: &EasyPacking) -> Result<Assignment> {
    if !g.is_unit() {
        return Err(Error::validation("packing conversion needs a unit-weight instance"));
    }
    let sign = |w: f64| -> Spin { if w > 0.0 { 1 } else { -1 } };
    let mut builder = SolutionBuilder::new(g);
    let mut vertices = Vec::new();
    let mut spins = Vec::new();
    for (i, p) in packing.parts().iter().enumerate() {
        let (x, y) = p.center;
        let center_w = g
            .weight(x, y)
            .ok_or_else(|| Error::validation(format!("part {i}: center is not an edge")))?;
        vertices.clear();
        spins.clear();
        vertices.extend([x, y]);
        spins.extend([1, sign(center_w)]);
        for &o in &p.outside {
            let s = match (g.weight(o, x), g.weight(o, y)) {
                (Some(w), _) => sign(w),
                (None, Some(w)) => sign(w) * spins[1],
                (None, None) => {
                    return Err(Error::validation(format!(
                        "part {i}: outside vertex {} not adjacent to the center",
                        o + 1
                    )))
                }
            };
            if let (Some(_), Some(wy)) = (g.weight(o, x), g.weight(o, y)) {
                if wy * f64::from(s * spins[1]) <= 0.0 {
                    return Err(Error::validation(format!(
                        "part {i}: bad triangle through vertex {}",
                        o + 1
                    )));
                }
            }
            vertices.push(o);
            spins.push(s);
        }
        builder.add_part(&vertices, &spins);
    }
    Ok(builder.complete())
}

/// Intermediate state of [`easypack_traced`].
#[derive(Clone, Debug)]
pub struct EasyPackTrace {
    /// The maximal matching `M` of step 1.
    pub matching: Matching,
    /// `M*` after step 3, in construction order.
    pub refined: Vec<(usize, usize)>,
    /// `I*` after step 3, ascending.
    pub unmatched_after_refine: Vec<usize>,
    pub packing: EasyPacking,
}

impl EasyPackTrace {
    /// Largest number of `I*` vertices (after step 3) forming a triangle with
    /// one edge of `M*`.
    pub fn max_triangles_per_refined_edge(&self, g: &WeightedGraph) -> usize {
        let mut free = vec![false; g.vertex_count()];
        for &v in &self.unmatched_after_refine {
            free[v] = true;
        }
        self.refined
            .iter()
            .map(|&(x, y)| {
                g.neighbors(x)
                    .iter()
                    .filter(|nb| free[nb.vertex()] && g.has_edge(nb.vertex(), y))
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

/// Algorithm EasyPack on a unit instance.
pub fn easypack(g: &WeightedGraph) -> Result<EasyPacking> {
    easypack_traced(g).map(|t| t.packing)
}

pub fn easypack_traced(g: &WeightedGraph) -> Result<EasyPackTrace> {
    if !g.is_unit() {
        return Err(Error::validation("easypack needs a unit-weight instance"));
    }
    let n = g.vertex_count();
    let matching = maximal_matching(g);
    let mut free: Vec<bool> = (0..n).map(|v| !matching.is_matched(v)).collect();

    // Step 3: split a matching edge into two when two free vertices each
    // close a triangle with it.
    let mut refined = Vec::with_capacity(matching.len());
    let mut near_y = vec![NONE; n];
    for &(x, y) in matching.edges() {
        for nb in g.neighbors(y) {
            near_y[nb.vertex()] = y;
        }
        let mut common = g
            .neighbors(x)
            .iter()
            .map(|nb| nb.vertex())
            .filter(|&u| free[u] && near_y[u] == y);
        match (common.next(), common.next()) {
            (Some(u), Some(v)) => {
                free[u] = false;
                free[v] = false;
                refined.push((u.min(x), u.max(x)));
                refined.push((v.min(y), v.max(y)));
            }
            _ => refined.push((x, y)),
        }
    }
    let unmatched_after_refine: Vec<usize> = (0..n).filter(|&v| free[v]).collect();

    // Steps 4-5: seed parts with M*, attach each free vertex to the first part
    // with which it induces a path or a good triangle.
    let mut part_of = vec![NONE; n];
    let mut parts: Vec<PackPart> = refined
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            part_of[x] = i;
            part_of[y] = i;
            PackPart {
                center: (x, y),
                outside: Vec::new(),
            }
        })
        .collect();
    for &v in &unmatched_after_refine {
        let mut best = NONE;
        for nb in g.neighbors(v) {
            let p = part_of[nb.vertex()];
            if p == NONE || p >= best {
                continue;
            }
            let (x, y) = parts[p].center;
            let eligible = match (g.weight(v, x), g.weight(v, y)) {
                (Some(a), Some(b)) => a * b * g.weight(x, y).expect("center edge") > 0.0,
                _ => true,
            };
            if eligible {
                best = p;
            }
        }
        if best != NONE {
            parts[best].outside.push(v);
        }
    }
    let packing = EasyPacking::new(g, parts)?;
    Ok(EasyPackTrace {
        matching,
        refined,
        unmatched_after_refine,
        packing,
    })
}

/// Star packing seeded from a maximum matching. Isolated vertices are left
/// over; the driver completes them afterwards.
pub fn star_packing(g: &WeightedGraph) -> Result<EasyPacking> {
    if !g.is_unit() {
        return Err(Error::validation("star packing needs a unit-weight instance"));
    }
    let n = g.vertex_count();
    let matching = maximum_matching(g);
    let mut part_of = vec![NONE; n];
    let mut hub = Vec::with_capacity(matching.len());
    let mut parts: Vec<PackPart> = matching
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            part_of[x] = i;
            part_of[y] = i;
            hub.push(NONE);
            PackPart {
                center: (x, y),
                outside: Vec::new(),
            }
        })
        .collect();
    for v in (0..n).filter(|&v| !matching.is_matched(v)) {
        let mut best = NONE;
        let mut best_hub = NONE;
        for nb in g.neighbors(v) {
            let p = part_of[nb.vertex()];
            if p == NONE || p >= best {
                continue;
            }
            let (x, y) = parts[p].center;
            let to_x = g.has_edge(v, x);
            let to_y = g.has_edge(v, y);
            // Unmatched vertices are independent, so only the center matters:
            // the new leaf must hang off the star's hub (either end while the
            // part is still a single edge).
            let h = match (to_x, to_y) {
                (true, true) => continue,
                (true, false) => x,
                (false, true) => y,
                (false, false) => continue,
            };
            if hub[p] == NONE || hub[p] == h {
                best = p;
                best_hub = h;
            }
        }
        if best != NONE {
            hub[best] = best_hub;
            parts[best].outside.push(v);
        }
    }
    EasyPacking::new(g, parts)
}
