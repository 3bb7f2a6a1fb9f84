//! Algorithm selection and the one-line `key=value` solve report.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::drivers::{solve_bounded_degree, solve_degenerate, solve_dense, ApproxResult, Certificate};
use crate::error::{Error, Result};
use crate::graph::{Assignment, WeightedGraph, TOLERANCE};
use crate::oracle::{brute_force, DEFAULT_BRUTE_FORCE_CAP};
use crate::schemes::{solve_baker, solve_partition_scheme, PartitionInput, VertexPartition};
use crate::treewidth::{build_decomposition, solve_treewidth, to_nice, TreeDecomposition, DEFAULT_WIDTH_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Auto,
    GreedyMatching,
    EasyPack,
    StarPack,
    ExactTw,
    Baker,
    Partition,
    BruteForce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Auto,
        Algorithm::GreedyMatching,
        Algorithm::EasyPack,
        Algorithm::StarPack,
        Algorithm::ExactTw,
        Algorithm::Baker,
        Algorithm::Partition,
        Algorithm::BruteForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::GreedyMatching => "greedy-matching",
            Algorithm::EasyPack => "easypack",
            Algorithm::StarPack => "star-pack",
            Algorithm::ExactTw => "exact-tw",
            Algorithm::Baker => "baker",
            Algorithm::Partition => "partition",
            Algorithm::BruteForce => "brute-force",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Algorithm::ExactTw | Algorithm::BruteForce)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
    pub width_cap: usize,
    pub brute_force_cap: usize,
    /// Used by `partition`; the BFS-layer heuristic otherwise.
    pub partition: Option<VertexPartition>,
    /// Used by `exact-tw` instead of building one.
    pub decomposition: Option<TreeDecomposition>,
    /// Exact solver whose value is reported as `oracle=` with the ratio.
    pub oracle: Option<Algorithm>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Auto,
            epsilon: None,
            width_cap: DEFAULT_WIDTH_CAP,
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
            partition: None,
            decomposition: None,
            oracle: None,
        }
    }
}

impl SolveOptions {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn with_oracle(mut self, oracle: Algorithm) -> Self {
        self.oracle = Some(oracle);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub instance: String,
    /// The algorithm that actually ran (never `auto`).
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    pub value: f64,
    pub guarantee: f64,
    pub certificate: Certificate,
    pub width: Option<usize>,
    pub oracle: Option<f64>,
    pub elapsed: Duration,
    pub assignment: Assignment,
}

impl SolveReport {
    /// `value / oracle`, taken as 1 when both are zero.
    pub fn ratio(&self) -> Option<f64> {
        self.oracle.map(|o| ratio(self.value, o))
    }

    /// The report as one line of `key=value` pairs. Wall time is included
    /// only when `timing` is set, so that reruns print identical lines.
    pub fn line(&self, timing: bool) -> String {
        let mut fields = vec![
            format!("instance={}", self.instance),
            format!("algo={}", self.algorithm),
            format!("n={}", self.n),
            format!("m={}", self.m),
            format!("value={}", self.value),
            format!("guarantee={}", self.guarantee),
        ];
        if let Some(w) = self.width {
            fields.push(format!("width={w}"));
        }
        for (k, v) in self.certificate.entries() {
            fields.push(format!("{k}={v}"));
        }
        if let (Some(o), Some(r)) = (self.oracle, self.ratio()) {
            fields.push(format!("oracle={o}"));
            fields.push(format!("ratio={r}"));
        }
        if timing {
            fields.push(format!("millis={:.3}", self.elapsed.as_secs_f64() * 1e3));
        }
        fields.join(" ")
    }
}

pub(crate) fn ratio(value: f64, oracle: f64) -> f64 {
    if oracle.abs() <= TOLERANCE {
        1.0
    } else {
        value / oracle
    }
}

/// What one algorithm run produced, before reporting.
struct Outcome {
    algorithm: Algorithm,
    assignment: Assignment,
    guarantee: f64,
    certificate: Certificate,
    width: Option<usize>,
}

impl From<(Algorithm, ApproxResult)> for Outcome {
    fn from((algorithm, r): (Algorithm, ApproxResult)) -> Self {
        let width = r.certificate.get("max_width").map(|w| w as usize);
        Outcome {
            algorithm,
            assignment: r.assignment,
            guarantee: r.guarantee,
            certificate: r.certificate,
            width,
        }
    }
}

fn need_epsilon(opts: &SolveOptions, algo: Algorithm) -> Result<f64> {
    opts.epsilon
        .ok_or_else(|| Error::validation(format!("{algo} needs an epsilon")))
}

fn exact_tw(g: &WeightedGraph, opts: &SolveOptions, td: Option<&TreeDecomposition>) -> Result<(Assignment, usize)> {
    let built;
    let td = match td.or(opts.decomposition.as_ref()) {
        Some(td) => {
            td.validate(g)?;
            td
        }
        None => {
            built = build_decomposition(g, opts.width_cap)?;
            &built
        }
    };
    let nice = to_nice(td)?;
    let width = nice.width();
    Ok((solve_treewidth(g, &nice, opts.width_cap)?, width))
}

fn run(g: &WeightedGraph, opts: &SolveOptions, algorithm: Algorithm) -> Result<Outcome> {
    let exact = |assignment, width| Outcome {
        algorithm,
        assignment,
        guarantee: 1.0,
        certificate: Certificate::default(),
        width,
    };
    Ok(match algorithm {
        Algorithm::Auto => {
            let td = if opts.decomposition.is_some() {
                None
            } else {
                match build_decomposition(g, opts.width_cap) {
                    Ok(td) => Some(td),
                    Err(Error::Capacity { .. }) => {
                        let fallback = if opts.epsilon.is_some() {
                            Algorithm::Baker
                        } else {
                            Algorithm::GreedyMatching
                        };
                        return run(g, opts, fallback);
                    }
                    Err(e) => return Err(e),
                }
            };
            let (a, w) = exact_tw(g, opts, td.as_ref())?;
            Outcome {
                algorithm: Algorithm::ExactTw,
                ..exact(a, Some(w))
            }
        }
        Algorithm::GreedyMatching => (algorithm, solve_bounded_degree(g)?).into(),
        Algorithm::EasyPack => (algorithm, solve_degenerate(g)?).into(),
        Algorithm::StarPack => (algorithm, solve_dense(g)?).into(),
        Algorithm::ExactTw => {
            let (a, w) = exact_tw(g, opts, None)?;
            exact(a, Some(w))
        }
        Algorithm::Baker => (algorithm, solve_baker(g, need_epsilon(opts, algorithm)?, opts.width_cap)?).into(),
        Algorithm::Partition => {
            let input = match &opts.partition {
                Some(p) => PartitionInput::Given(p),
                None => PartitionInput::Heuristic,
            };
            let eps = need_epsilon(opts, algorithm)?;
            (algorithm, solve_partition_scheme(g, eps, input, opts.width_cap)?).into()
        }
        Algorithm::BruteForce => exact(brute_force(g, opts.brute_force_cap)?, None),
    })
}

/// Optimum value from an exact solver, for use as an oracle.
pub fn oracle_value(g: &WeightedGraph, oracle: Algorithm, opts: &SolveOptions) -> Result<f64> {
    if !oracle.is_exact() {
        return Err(Error::validation(format!("{oracle} is not an exact solver")));
    }
    let plain = SolveOptions {
        decomposition: None,
        ..opts.clone()
    };
    Ok(run(g, &plain, oracle)?.assignment.value())
}

/// Runs the selected algorithm (and the oracle, if any) on `g`.
pub fn solve(g: &WeightedGraph, instance: &str, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let outcome = run(g, opts, opts.algorithm)?;
    let elapsed = start.elapsed();
    let oracle = opts.oracle.map(|o| oracle_value(g, o, opts)).transpose()?;
    Ok(SolveReport {
        instance: instance.to_string(),
        algorithm: outcome.algorithm,
        n: g.vertex_count(),
        m: g.edge_count(),
        value: outcome.assignment.value(),
        guarantee: outcome.guarantee,
        certificate: outcome.certificate,
        width: outcome.width,
        oracle,
        elapsed,
        assignment: outcome.assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize, f64)]) -> WeightedGraph {
        WeightedGraph::from_entries(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("simulated-annealing".parse::<Algorithm>().is_err());
    }

    #[test]
    fn bad_triangle_brute_force_line() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)]);
        let r = solve(&g, "tri", &SolveOptions::new(Algorithm::BruteForce)).unwrap();
        assert_eq!(r.line(false), "instance=tri algo=brute-force n=3 m=3 value=1 guarantee=1");
    }

    #[test]
    fn path_exact_tw_reports_width() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, -1.0)]);
        let r = solve(&g, "p3", &SolveOptions::new(Algorithm::ExactTw)).unwrap();
        assert!(r.line(false).contains("value=2 guarantee=1 width=1"));
    }

    #[test]
    fn auto_falls_back() {
        let mut e = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                e.push((u, v, 1.0));
            }
        }
        let k6 = graph(6, &e);
        let mut opts = SolveOptions::new(Algorithm::Auto);
        assert_eq!(solve(&k6, "k6", &opts).unwrap().algorithm, Algorithm::ExactTw);
        opts.width_cap = 2;
        assert_eq!(solve(&k6, "k6", &opts).unwrap().algorithm, Algorithm::GreedyMatching);
        opts.epsilon = Some(1.0);
        assert!(matches!(solve(&k6, "k6", &opts), Err(Error::Capacity { .. })));
    }

    #[test]
    fn oracle_ratio() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)]);
        let opts = SolveOptions::new(Algorithm::GreedyMatching).with_oracle(Algorithm::BruteForce);
        let r = solve(&g, "tri", &opts).unwrap();
        assert_eq!(r.oracle, Some(1.0));
        assert!(r.ratio().unwrap() >= r.guarantee);
        assert!(r.line(false).ends_with("oracle=1 ratio=1"));
        let bad = SolveOptions::new(Algorithm::GreedyMatching).with_oracle(Algorithm::Baker);
        assert!(solve(&g, "tri", &bad).is_err());
    }
}
