//! Approximation drivers for bounded degree, bounded degeneracy and bounded
//! density instances. Each driver reports the bound quantities that justify
//! its guarantee and re-checks them before returning.

use crate::error::{Error, Result};
use crate::graph::{Assignment, WeightedGraph, TOLERANCE};
use crate::matching::greedy_sorted_matching;
use crate::packing::{easypack, matching_to_solution, packing_to_solution, star_packing};

/// Named bound quantities backing a guarantee, in report order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Certificate(Vec<(&'static str, f64)>);

impl Certificate {
    pub fn push(&mut self, name: &'static str, value: f64) {
        self.0.push((name, value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }

    pub fn entries(&self) -> &[(&'static str, f64)] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult {
    pub algorithm: &'static str,
    pub assignment: Assignment,
    /// Claimed approximation factor against `opt(G)`.
    pub guarantee: f64,
    pub certificate: Certificate,
}

impl ApproxResult {
    pub fn value(&self) -> f64 {
        self.assignment.value()
    }
}

fn ensure(holds: bool, what: impl FnOnce() -> String) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::Internal(what()))
    }
}

/// Greedy matching driver, `1/(2Δ)`-approximate for any weights.
pub fn solve_bounded_degree(g: &WeightedGraph) -> Result<ApproxResult> {
    let max_degree = g.max_degree();
    let abs_weight = g.abs_weight();
    let matching = greedy_sorted_matching(g);
    let assignment = matching_to_solution(g, &matching);
    let wm = matching.total_abs_weight();
    let guarantee = if max_degree == 0 {
        1.0
    } else {
        1.0 / (2 * max_degree) as f64
    };
    ensure(assignment.value() >= wm - TOLERANCE, || {
        format!("matching solution {} below w(M) {wm}", assignment.value())
    })?;
    ensure(wm >= abs_weight * guarantee - TOLERANCE, || {
        format!("w(M) {wm} below ||A||/(2Δ)")
    })?;
    let mut certificate = Certificate::default();
    certificate.push("matching_weight", wm);
    certificate.push("abs_weight", abs_weight);
    certificate.push("max_degree", max_degree as f64);
    Ok(ApproxResult {
        algorithm: "greedy-matching",
        assignment,
        guarantee,
        certificate,
    })
}

/// EasyPack driver, `1/(2d)`-approximate on unit instances of degeneracy `d`.
pub fn solve_degenerate(g: &WeightedGraph) -> Result<ApproxResult> {
    let packing = easypack(g)?;
    let assignment = packing_to_solution(g, &packing)?;
    let d = g.stats().degeneracy;
    let covered = packing.covered_count();
    let packed_edges = packing.edge_count();
    ensure(assignment.value() >= packed_edges as f64 - TOLERANCE, || {
        format!("packing solution {} below m(F) {packed_edges}", assignment.value())
    })?;
    ensure(2 * packed_edges >= covered, || {
        format!("m(F) {packed_edges} below |V_F|/2 = {covered}/2")
    })?;
    let mut certificate = Certificate::default();
    certificate.push("packed_edges", packed_edges as f64);
    certificate.push("covered", covered as f64);
    certificate.push("degeneracy", d as f64);
    Ok(ApproxResult {
        algorithm: "easypack",
        assignment,
        guarantee: if d == 0 { 1.0 } else { 1.0 / (2 * d) as f64 },
        certificate,
    })
}

/// Star-packing driver, `1/(3δ)`-approximate on unit instances with
/// `δ = m / n'`, where `n'` counts non-isolated vertices.
pub fn solve_dense(g: &WeightedGraph) -> Result<ApproxResult> {
    let packing = star_packing(g)?;
    let assignment = packing_to_solution(g, &packing)?;
    let m = g.edge_count();
    let active = g.vertex_count() - g.isolated_count();
    let packed_edges = packing.edge_count();
    ensure(assignment.value() >= packed_edges as f64 - TOLERANCE, || {
        format!("packing solution {} below m(F) {packed_edges}", assignment.value())
    })?;
    // m(F) >= m / (3δ) = n' / 3.
    ensure(3 * packed_edges >= active, || {
        format!("m(F) {packed_edges} below n'/3 = {active}/3")
    })?;
    let mut certificate = Certificate::default();
    certificate.push("packed_edges", packed_edges as f64);
    certificate.push("edges", m as f64);
    certificate.push("active_vertices", active as f64);
    let (density, guarantee) = if m == 0 {
        (0.0, 1.0)
    } else {
        let density = m as f64 / active as f64;
        (density, 1.0 / (3.0 * density))
    };
    certificate.push("density", density);
    Ok(ApproxResult {
        algorithm: "star-pack",
        assignment,
        guarantee,
        certificate,
    })
}
