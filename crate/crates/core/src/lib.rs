//! Combinatorial solvers for MaxQP: maximize `Σ a_uv x_u x_v` over
//! `x ∈ {-1, +1}^n`, with the sum taken once per edge of the instance graph.
//! (The matrix form `x^T A x` counts every edge twice.)
//!
//! - [`drivers`]: matching and packing approximations with certified ratios.
//! - [`treewidth`]: exact dynamic programming over tree decompositions.
//! - [`schemes`]: `(1 - ε)` layering and partition schemes.
//! - [`oracle`]: exhaustive search and the MaxCut subdivision reduction.
//! - [`generate`], [`io`], [`solve`], [`bench`]: instances, files, reports.
//!
//! With the default `parallel` feature, exhaustive search, the schemes and
//! benchmark suites spread work over rayon; results do not depend on it.

pub mod bench;
pub mod drivers;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod packing;
pub mod par;
pub mod schemes;
pub mod solve;
pub mod treewidth;

pub use drivers::{solve_bounded_degree, solve_degenerate, solve_dense, ApproxResult, Certificate};
pub use error::{Error, Result};
pub use generate::{generate, GeneratorKind, GeneratorSpec};
pub use graph::{
    combine_disjoint, extend_from_induced, normalize_nonneg, Assignment, InstanceStats, PartialAssignment, Spin,
    WeightedGraph, TOLERANCE,
};
pub use matching::{greedy_sorted_matching, maximal_matching, maximum_matching, Matching};
pub use oracle::{brute_force, subdivide_for_maxcut};
pub use packing::{easypack, packing_to_solution, star_packing, EasyPacking};
pub use schemes::{bfs_layers, heuristic_partition, solve_baker, solve_partition_scheme, VertexPartition};
pub use solve::{solve, Algorithm, SolveOptions, SolveReport};
pub use treewidth::{build_decomposition, solve_exact_auto, solve_treewidth, to_nice, TreeDecomposition};
