//! Exact solving on bounded-treewidth graphs: min-fill decompositions, nice
//! form conversion, and the bag-assignment dynamic program.
//!
//! Bag assignments are bitmasks over the sorted bag: bit `j` set means the
//! `j`-th bag vertex has spin `-1`.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Assignment, Spin, WeightedGraph, TOLERANCE};
use crate::oracle;

pub const DEFAULT_WIDTH_CAP: usize = 20;

/// Graphs up to this many vertices fall back to exhaustive search in
/// [`solve_exact_auto`] when the width cap is exceeded.
pub const BRUTE_FORCE_FALLBACK_LIMIT: usize = 24;

/// Hard ceiling independent of the configured cap: table rows are indexed by `u32`.
const MAX_BAG: usize = 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    root: Option<usize>,
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and `(parent, child)` tree links.
    /// Checks the tree shape only; see [`TreeDecomposition::validate`].
    pub fn new(bags: Vec<Vec<usize>>, links: &[(usize, usize)]) -> Result<Self> {
        let mut parent = vec![None; bags.len()];
        for &(p, c) in links {
            if p >= bags.len() || c >= bags.len() {
                return Err(Error::validation(format!("tree link ({p}, {c}) names a missing bag")));
            }
            if parent[c].replace(p).is_some() {
                return Err(Error::validation(format!("bag {c} has two parents")));
            }
        }
        let roots: Vec<usize> = (0..bags.len()).filter(|&b| parent[b].is_none()).collect();
        let root = match roots.as_slice() {
            [] if bags.is_empty() => None,
            [r] => Some(*r),
            _ => {
                return Err(Error::validation(format!(
                    "decomposition tree must have exactly one root, found {}",
                    roots.len()
                )))
            }
        };
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let td = Self { bags, parent, root };
        if td.bags.iter().any(Vec::is_empty) {
            return Err(Error::validation("decomposition contains an empty bag"));
        }
        td.check_tree()?;
        Ok(td)
    }

    fn check_tree(&self) -> Result<()> {
        let children = self.children_lists();
        let mut seen = 0;
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        while let Some(b) = stack.pop() {
            seen += 1;
            stack.extend(&children[b]);
        }
        if seen != self.bags.len() {
            return Err(Error::validation("decomposition links do not form a tree"));
        }
        Ok(())
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn parent(&self, bag: usize) -> Option<usize> {
        self.parent[bag]
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn children_lists(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.bags.len()];
        for (c, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(c);
            }
        }
        children
    }

    /// Largest bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks vertex coverage, edge coverage and connectivity of every
    /// vertex's bag set against `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let n = g.vertex_count();
        let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (b, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(Error::validation(format!("bag {b} names vertex {} outside the graph", v + 1)));
                }
                containing[v].push(b);
            }
        }
        for (v, list) in containing.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::validation(format!("vertex {} is in no bag", v + 1)));
            }
            // Connected iff exactly one containing bag has a parent lacking v.
            let tops = list
                .iter()
                .filter(|&&b| match self.parent[b] {
                    Some(p) => self.bags[p].binary_search(&v).is_err(),
                    None => true,
                })
                .count();
            if tops != 1 {
                return Err(Error::validation(format!(
                    "bags containing vertex {} are not connected",
                    v + 1
                )));
            }
        }
        for e in g.edges() {
            let (a, b) = (&containing[e.u], &containing[e.v]);
            if !sorted_intersect(a, b) {
                return Err(Error::validation(format!(
                    "edge ({}, {}) is not covered by any bag",
                    e.u + 1,
                    e.v + 1
                )));
            }
        }
        Ok(())
    }
}

fn sorted_intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Min-fill elimination ordering turned into a clique-tree decomposition.
///
/// Ties are broken by degree, then vertex id. Elimination stops with a
/// capacity error as soon as a bag would exceed `width_cap + 1` vertices; the
/// reported width is a lower bound for what min-fill would have produced.
pub fn build_decomposition(g: &WeightedGraph, width_cap: usize) -> Result<TreeDecomposition> {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::new(Vec::new(), &[]);
    }
    let mut adj: Vec<HashSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|nb| nb.vertex()).collect())
        .collect();
    let fill_of = |adj: &[HashSet<usize>], v: usize| -> usize {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut key: Vec<(usize, usize)> = (0..n).map(|v| (fill_of(&adj, v), adj[v].len())).collect();
    let mut queue: BTreeSet<(usize, usize, usize)> =
        (0..n).map(|v| (key[v].0, key[v].1, v)).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0usize; n];
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(n);

    while let Some((_, _, v)) = queue.pop_first() {
        let nbrs: Vec<usize> = {
            let mut l: Vec<usize> = adj[v].iter().copied().collect();
            l.sort_unstable();
            l
        };
        if nbrs.len() > width_cap {
            return Err(Error::capacity(
                "decomposition width (lower bound at abort)",
                nbrs.len(),
                width_cap,
            ));
        }
        position[v] = order.len();
        order.push(v);
        eliminated[v] = true;
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);

        let mut added_fill = false;
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                    added_fill = true;
                }
            }
        }
        let mut affected: BTreeSet<usize> = nbrs.iter().copied().collect();
        if added_fill {
            for &a in &nbrs {
                affected.extend(adj[a].iter().copied());
            }
        }
        for w in affected {
            if eliminated[w] {
                continue;
            }
            let new_key = (fill_of(&adj, w), adj[w].len());
            if new_key != key[w] {
                queue.remove(&(key[w].0, key[w].1, w));
                key[w] = new_key;
                queue.insert((new_key.0, new_key.1, w));
            }
        }
    }

    // Bag i belongs to order[i]; its parent is the bag of the earliest
    // eliminated later neighbor. Component roots hang off the final bag.
    let last = n - 1;
    let mut links = Vec::with_capacity(n - 1);
    for (i, bag) in bags.iter().enumerate() {
        let v = order[i];
        let parent = bag
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| position[u])
            .min();
        match parent {
            Some(p) => links.push((p, i)),
            None if i != last => links.push((last, i)),
            None => {}
        }
    }
    TreeDecomposition::new(bags, &links)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub bag: Vec<usize>,
    pub kind: NiceKind,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Children always have smaller indices than
/// their parent, so index order is a valid bottom-up order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: Option<usize>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the four node-kind constraints.
    pub fn validate_shape(&self) -> Result<()> {
        let bad = |i: usize, why: &str| Err(Error::validation(format!("nice node {i}: {why}")));
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= i) {
                return bad(i, "child index not below parent");
            }
            let child_bag = |k: usize| &self.nodes[node.children[k]].bag;
            match node.kind {
                NiceKind::Leaf => {
                    if !node.children.is_empty() || node.bag.len() != 1 {
                        return bad(i, "leaf must have one vertex and no children");
                    }
                }
                NiceKind::Introduce(v) => {
                    if node.children.len() != 1 {
                        return bad(i, "introduce needs one child");
                    }
                    let mut expect = child_bag(0).clone();
                    if expect.contains(&v) {
                        return bad(i, "introduced vertex already in child");
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if expect != node.bag {
                        return bad(i, "introduce bag is not child plus one vertex");
                    }
                }
                NiceKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return bad(i, "forget needs one child");
                    }
                    let mut expect = node.bag.clone();
                    if expect.contains(&v) {
                        return bad(i, "forgotten vertex still in bag");
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if &expect != child_bag(0) {
                        return bad(i, "forget bag is not child minus one vertex");
                    }
                }
                NiceKind::Join => {
                    if node.children.len() != 2 {
                        return bad(i, "join needs two children");
                    }
                    if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return bad(i, "join children must share its bag");
                    }
                }
            }
        }
        let parents = self.nodes.iter().map(|n| n.children.len()).sum::<usize>();
        if !self.nodes.is_empty() && (parents + 1 != self.nodes.len() || self.root != Some(self.nodes.len() - 1)) {
            return Err(Error::validation("nice decomposition is not a single rooted tree"));
        }
        Ok(())
    }

    /// Shape checks plus the decomposition properties against `g`.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        self.validate_shape()?;
        self.as_tree_decomposition()?.validate(g)
    }

    pub fn as_tree_decomposition(&self) -> Result<TreeDecomposition> {
        let links: Vec<(usize, usize)> = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c)))
            .collect();
        // Nice forms may pass through empty bags between components.
        let mut parent = vec![None; self.nodes.len()];
        for &(p, c) in &links {
            parent[c] = Some(p);
        }
        let td = TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            parent,
            root: self.root,
        };
        td.check_tree()?;
        Ok(td)
    }

    /// Vertices appearing in the subtree rooted at `node`.
    pub fn subtree_vertices(&self, node: usize) -> Vec<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(i) = stack.pop() {
            out.extend(self.nodes[i].bag.iter().copied());
            stack.extend(&self.nodes[i].children);
        }
        out.into_iter().collect()
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<usize>, kind: NiceKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    /// Rewrites the bag of node `from` into `target` by forgets then introduces.
    fn morph(&mut self, mut from: usize, target: &[usize]) -> usize {
        let current = self.nodes[from].bag.clone();
        let mut bag = current.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            bag.retain(|&u| u != v);
            from = self.push(bag.clone(), NiceKind::Forget(v), vec![from]);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            from = self.push(bag.clone(), NiceKind::Introduce(v), vec![from]);
        }
        from
    }
}

/// Converts a decomposition to nice form of the same width in `O(width * bags)` nodes.
pub fn to_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    td.check_tree()?;
    let Some(root) = td.root() else {
        return Ok(NiceTreeDecomposition {
            nodes: Vec::new(),
            root: None,
        });
    };
    let children = td.children_lists();
    // Iterative post-order.
    let mut post = Vec::with_capacity(td.bags.len());
    let mut stack = vec![(root, false)];
    while let Some((b, expanded)) = stack.pop() {
        if expanded {
            post.push(b);
        } else {
            stack.push((b, true));
            for &c in children[b].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    let mut builder = NiceBuilder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.bags.len()];
    for b in post {
        let bag = &td.bags[b];
        let node = if children[b].is_empty() {
            let leaf = builder.push(vec![bag[0]], NiceKind::Leaf, Vec::new());
            builder.morph(leaf, bag)
        } else {
            let mut tops = children[b].iter().map(|&c| top[c]).collect::<Vec<_>>().into_iter();
            let first = tops.next().expect("nonempty children");
            let mut acc = builder.morph(first, bag);
            for t in tops {
                let other = builder.morph(t, bag);
                acc = builder.push(bag.clone(), NiceKind::Join, vec![acc, other]);
            }
            acc
        };
        top[b] = node;
    }
    let root = Some(top[root]);
    let nice = NiceTreeDecomposition {
        nodes: builder.nodes,
        root,
    };
    debug_assert!(nice.validate_shape().is_ok());
    Ok(nice)
}

/// `D[X, ·]` for one node: `values[mask]` is the best value of `G_X` with the
/// bag fixed to `mask`.
#[derive(Clone, Debug, PartialEq)]
pub struct DpTable {
    pub bag: Vec<usize>,
    pub values: Vec<f64>,
}

struct DpRun {
    tables: Vec<Option<Vec<f64>>>,
    /// Per forget node, bit `mask` set when `x_v = -1` was chosen.
    choices: Vec<Vec<u64>>,
}

#[inline]
fn spin_of(mask: usize, j: usize) -> Spin {
    if mask >> j & 1 == 0 {
        1
    } else {
        -1
    }
}

#[inline]
fn same_sign(mask: usize, i: usize, j: usize) -> bool {
    (mask >> i ^ mask >> j) & 1 == 0
}

fn bag_edges(g: &WeightedGraph, bag: &[usize]) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for (i, &u) in bag.iter().enumerate() {
        for (j, &v) in bag.iter().enumerate().skip(i + 1) {
            if let Some(w) = g.weight(u, v) {
                out.push((i, j, w));
            }
        }
    }
    out
}

fn run_dp(g: &WeightedGraph, ntd: &NiceTreeDecomposition, keep_all: bool) -> DpRun {
    let nodes = ntd.nodes();
    let mut tables: Vec<Option<Vec<f64>>> = vec![None; nodes.len()];
    let mut choices: Vec<Vec<u64>> = vec![Vec::new(); nodes.len()];
    let take = |tables: &mut Vec<Option<Vec<f64>>>, i: usize| -> Vec<f64> {
        if keep_all {
            tables[i].clone().expect("child table computed")
        } else {
            tables[i].take().expect("child table computed")
        }
    };
    for (i, node) in nodes.iter().enumerate() {
        let size = 1usize << node.bag.len();
        let table = match node.kind {
            NiceKind::Leaf => vec![0.0; 2],
            NiceKind::Introduce(v) => {
                let child = take(&mut tables, node.children[0]);
                let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                let low = (1usize << p) - 1;
                let terms: Vec<(usize, f64)> = g
                    .neighbors(v)
                    .iter()
                    .filter_map(|nb| node.bag.binary_search(&nb.vertex()).ok().map(|j| (j, nb.weight)))
                    .collect();
                (0..size)
                    .map(|mask| {
                        let cm = (mask & low) | ((mask >> 1) & !low);
                        let local: f64 = terms
                            .iter()
                            .map(|&(j, w)| if same_sign(mask, p, j) { w } else { -w })
                            .sum();
                        child[cm] + local
                    })
                    .collect()
            }
            NiceKind::Forget(v) => {
                let child = take(&mut tables, node.children[0]);
                let child_bag = &nodes[node.children[0]].bag;
                let p = child_bag.binary_search(&v).expect("forgotten vertex in child");
                let low = (1usize << p) - 1;
                let mut bits = vec![0u64; size.div_ceil(64)];
                let table = (0..size)
                    .map(|mask| {
                        let m0 = (mask & low) | ((mask & !low) << 1);
                        let m1 = m0 | (1 << p);
                        if child[m1] > child[m0] {
                            bits[mask / 64] |= 1 << (mask % 64);
                            child[m1]
                        } else {
                            child[m0]
                        }
                    })
                    .collect();
                choices[i] = bits;
                table
            }
            NiceKind::Join => {
                let left = take(&mut tables, node.children[0]);
                let right = take(&mut tables, node.children[1]);
                let inner = bag_edges(g, &node.bag);
                (0..size)
                    .map(|mask| {
                        let shared: f64 = inner
                            .iter()
                            .map(|&(a, b, w)| if same_sign(mask, a, b) { w } else { -w })
                            .sum();
                        left[mask] + right[mask] - shared
                    })
                    .collect()
            }
        };
        tables[i] = Some(table);
    }
    DpRun { tables, choices }
}

fn check_width(ntd: &NiceTreeDecomposition, width_cap: usize) -> Result<()> {
    let width = ntd.width();
    let limit = width_cap.min(MAX_BAG - 1);
    if width > limit {
        return Err(Error::capacity("decomposition width", width, limit));
    }
    Ok(())
}

/// Every table of the dynamic program, indexed like `ntd.nodes()`.
pub fn dp_tables(g: &WeightedGraph, ntd: &NiceTreeDecomposition, width_cap: usize) -> Result<Vec<DpTable>> {
    check_width(ntd, width_cap)?;
    ntd.validate(g)?;
    let run = run_dp(g, ntd, true);
    Ok(run
        .tables
        .into_iter()
        .zip(ntd.nodes())
        .map(|(t, n)| DpTable {
            bag: n.bag.clone(),
            values: t.expect("all tables kept"),
        })
        .collect())
}

/// Optimal assignment by dynamic programming over a nice decomposition.
pub fn solve_treewidth(g: &WeightedGraph, ntd: &NiceTreeDecomposition, width_cap: usize) -> Result<Assignment> {
    check_width(ntd, width_cap)?;
    ntd.validate(g)?;
    let Some(root) = ntd.root() else {
        return Ok(Assignment::all_plus(g));
    };
    let mut run = run_dp(g, ntd, false);
    let root_table = run.tables[root].take().expect("root table");
    let (best_mask, best_value) = root_table
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (m, &v)| if v > acc.1 { (m, v) } else { acc });

    let nodes = ntd.nodes();
    let mut spins: Vec<Spin> = vec![0; g.vertex_count()];
    let mut masks = vec![usize::MAX; nodes.len()];
    masks[root] = best_mask;
    for i in (0..nodes.len()).rev() {
        let mask = masks[i];
        if mask == usize::MAX {
            continue;
        }
        let node = &nodes[i];
        for (j, &v) in node.bag.iter().enumerate() {
            spins[v] = spin_of(mask, j);
        }
        match node.kind {
            NiceKind::Leaf => {}
            NiceKind::Introduce(v) => {
                let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                let low = (1usize << p) - 1;
                masks[node.children[0]] = (mask & low) | ((mask >> 1) & !low);
            }
            NiceKind::Forget(v) => {
                let child_bag = &nodes[node.children[0]].bag;
                let p = child_bag.binary_search(&v).expect("forgotten vertex in child");
                let low = (1usize << p) - 1;
                let chose_minus = run.choices[i][mask / 64] >> (mask % 64) & 1 == 1;
                let m0 = (mask & low) | ((mask & !low) << 1);
                masks[node.children[0]] = if chose_minus { m0 | (1 << p) } else { m0 };
            }
            NiceKind::Join => {
                masks[node.children[0]] = mask;
                masks[node.children[1]] = mask;
            }
        }
    }
    let assignment = Assignment::new(g, spins)?;
    let tol = TOLERANCE * best_value.abs().max(1.0);
    if (assignment.value() - best_value).abs() > tol {
        return Err(Error::Internal(format!(
            "reconstructed value {} differs from table optimum {best_value}",
            assignment.value()
        )));
    }
    Ok(assignment)
}

/// Width of the decomposition used, plus the optimal assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    pub assignment: Assignment,
    /// `None` when exhaustive search was used instead of the decomposition.
    pub width: Option<usize>,
}

/// Decomposes, converts and solves; small graphs whose decomposition exceeds
/// the cap are solved exhaustively instead.
pub fn solve_exact_auto(g: &WeightedGraph, width_cap: usize) -> Result<ExactSolution> {
    if g.edge_count() == 0 {
        return Ok(ExactSolution {
            assignment: Assignment::all_plus(g),
            width: Some(0),
        });
    }
    match build_decomposition(g, width_cap) {
        Ok(td) => {
            let nice = to_nice(&td)?;
            let width = nice.width();
            let assignment = solve_treewidth(g, &nice, width_cap)?;
            Ok(ExactSolution {
                assignment,
                width: Some(width),
            })
        }
        Err(Error::Capacity { .. }) if g.vertex_count() <= BRUTE_FORCE_FALLBACK_LIMIT => Ok(ExactSolution {
            assignment: oracle::brute_force(g, BRUTE_FORCE_FALLBACK_LIMIT)?,
            width: None,
        }),
        Err(e) => Err(e),
    }
}

/// Convenience: decomposition, nice form and DP with an explicit cap.
pub fn solve_with_decomposition(g: &WeightedGraph, width_cap: usize) -> Result<(Assignment, usize)> {
    let td = build_decomposition(g, width_cap)?;
    let nice = to_nice(&td)?;
    let width = nice.width();
    Ok((solve_treewidth(g, &nice, width_cap)?, width))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize, f64)]) -> WeightedGraph {
        WeightedGraph::from_entries(n, e.iter().copied()).unwrap()
    }

    fn path(n: usize) -> WeightedGraph {
        graph(n, &(0..n - 1).map(|i| (i, i + 1, 1.0)).collect::<Vec<_>>())
    }

    fn grid(r: usize, c: usize) -> WeightedGraph {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    e.push((v, v + 1, 1.0));
                }
                if i + 1 < r {
                    e.push((v, v + c, -1.0));
                }
            }
        }
        graph(r * c, &e)
    }

    #[test]
    fn widths_of_simple_graphs() {
        let p = path(5);
        let td = build_decomposition(&p, DEFAULT_WIDTH_CAP).unwrap();
        td.validate(&p).unwrap();
        assert_eq!(td.width(), 1);

        let tri = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]);
        assert_eq!(build_decomposition(&tri, DEFAULT_WIDTH_CAP).unwrap().width(), 2);

        let g = grid(4, 4);
        let td = build_decomposition(&g, DEFAULT_WIDTH_CAP).unwrap();
        td.validate(&g).unwrap();
        assert!(td.width() >= 4 && td.width() <= 5, "width {}", td.width());
    }

    #[test]
    fn width_cap_is_enforced() {
        let g = grid(5, 5);
        let err = build_decomposition(&g, 2).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn nice_form_of_single_edge() {
        let g = graph(2, &[(0, 1, 1.0)]);
        let td = TreeDecomposition::new(vec![vec![0, 1]], &[]).unwrap();
        let nice = to_nice(&td).unwrap();
        assert_eq!(nice.nodes().len(), 2);
        assert_eq!(nice.nodes()[0].kind, NiceKind::Leaf);
        assert_eq!(nice.nodes()[1].kind, NiceKind::Introduce(1));
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn nice_form_of_star() {
        let g = graph(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![0, 2], vec![0, 3]], &[(0, 1), (0, 2)]).unwrap();
        td.validate(&g).unwrap();
        let nice = to_nice(&td).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
        assert!(nice.nodes().iter().any(|n| n.kind == NiceKind::Join));
    }

    #[test]
    fn invalid_decompositions_rejected() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        // Edge (1,2) uncovered.
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2]], &[(0, 1)]).unwrap();
        assert!(td.validate(&g).is_err());
        // Vertex 0 in two disconnected bags.
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![0]], &[(0, 1), (1, 2)]).unwrap();
        assert!(td.validate(&g).is_err());
        // Two roots.
        assert!(TreeDecomposition::new(vec![vec![0], vec![1]], &[]).is_err());
        // Cycle.
        assert!(TreeDecomposition::new(vec![vec![0], vec![1]], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn dp_small_cases() {
        let g = graph(2, &[(0, 1, 1.0)]);
        let (a, _) = solve_with_decomposition(&g, DEFAULT_WIDTH_CAP).unwrap();
        assert_eq!(a.value(), 1.0);
        assert_eq!(a.spins()[0], a.spins()[1]);

        let g = graph(3, &[(0, 1, 1.0), (1, 2, -1.0)]);
        let (a, w) = solve_with_decomposition(&g, DEFAULT_WIDTH_CAP).unwrap();
        assert_eq!((a.value(), w), (2.0, 1));
    }

    #[test]
    fn dp_matches_bruteforce_on_grid() {
        let g = grid(3, 4);
        let (a, _) = solve_with_decomposition(&g, DEFAULT_WIDTH_CAP).unwrap();
        let b = oracle::brute_force(&g, 28).unwrap();
        assert_eq!(a.value(), b.value());
    }

    #[test]
    fn exact_auto_handles_empty_and_isolated() {
        let g = WeightedGraph::empty(3);
        assert_eq!(solve_exact_auto(&g, DEFAULT_WIDTH_CAP).unwrap().assignment.value(), 0.0);
        let g = graph(4, &[(0, 1, -2.0)]);
        assert_eq!(solve_exact_auto(&g, DEFAULT_WIDTH_CAP).unwrap().assignment.value(), 2.0);
    }

    #[test]
    fn exact_auto_falls_back_to_bruteforce() {
        let g = grid(4, 4);
        let sol = solve_exact_auto(&g, 2).unwrap();
        assert_eq!(sol.width, None);
        assert_eq!(sol.assignment.value(), oracle::brute_force(&g, 28).unwrap().value());
    }
}
