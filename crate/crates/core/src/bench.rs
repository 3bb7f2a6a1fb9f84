//! Benchmark suites: a matrix of generated instances and algorithms, run in
//! parallel and written as CSV.
//!
//! Suite file:
//! ```text
//! # comment
//! instance kind=grid-spin-glass rows=6 cols=6 seed=1
//! instance kind=sparse-random n=200 m=400 seed=2
//! algo greedy-matching
//! algo baker epsilon=0.5
//! oracle exact-tw
//! width-cap 20
//! ```

use std::io::Write;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::generate::GeneratorSpec;
use crate::graph::WeightedGraph;
use crate::par;
use crate::solve::{oracle_value, ratio, solve, Algorithm, SolveOptions};

pub const CSV_COLUMNS: [&str; 9] = ["instance", "algo", "n", "m", "value", "oracle", "ratio", "guarantee", "millis"];

#[derive(Clone, Debug, PartialEq)]
pub struct AlgoCell {
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
}

impl AlgoCell {
    pub fn label(&self) -> String {
        match self.epsilon {
            Some(e) => format!("{} epsilon={e}", self.algorithm),
            None => self.algorithm.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSuite {
    pub instances: Vec<GeneratorSpec>,
    pub algorithms: Vec<AlgoCell>,
    pub oracle: Option<Algorithm>,
    pub width_cap: Option<usize>,
}

impl BenchSuite {
    pub fn parse(text: &str) -> Result<Self> {
        let mut suite = BenchSuite {
            instances: Vec::new(),
            algorithms: Vec::new(),
            oracle: None,
            width_cap: None,
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            let wrap = |e: Error| Error::parse(line, e.to_string());
            match head {
                "instance" => suite.instances.push(rest.parse().map_err(wrap)?),
                "algo" => {
                    let mut tokens = rest.split_whitespace();
                    let name = tokens.next().ok_or_else(|| Error::parse(line, "algo line needs a name"))?;
                    let algorithm: Algorithm = name.parse().map_err(wrap)?;
                    let mut epsilon = None;
                    for t in tokens {
                        match t.split_once('=') {
                            Some(("epsilon", v)) => {
                                epsilon = Some(v.parse().map_err(|_| Error::parse(line, format!("bad epsilon `{v}`")))?)
                            }
                            _ => return Err(Error::parse(line, format!("unknown algo option `{t}`"))),
                        }
                    }
                    suite.algorithms.push(AlgoCell { algorithm, epsilon });
                }
                "oracle" => suite.oracle = Some(rest.parse().map_err(wrap)?),
                "width-cap" => {
                    suite.width_cap =
                        Some(rest.parse().map_err(|_| Error::parse(line, format!("bad width cap `{rest}`")))?)
                }
                other => return Err(Error::parse(line, format!("unknown suite directive `{other}`"))),
            }
        }
        Ok(suite)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub value: Option<f64>,
    pub oracle: Option<f64>,
    pub guarantee: Option<f64>,
    pub millis: f64,
    pub error: Option<String>,
}

impl BenchRow {
    pub fn ratio(&self) -> Option<f64> {
        Some(ratio(self.value?, self.oracle?))
    }
}

struct Prepared {
    spec: String,
    graph: Result<WeightedGraph>,
    oracle: Option<f64>,
}

/// Runs every (instance, algorithm) cell. Rows come back in suite order:
/// instances in declaration order, algorithms in declaration order within each.
/// A failing cell yields a row with `error` set instead of aborting the run.
pub fn run_suite(suite: &BenchSuite) -> Vec<BenchRow> {
    let base = SolveOptions {
        width_cap: suite.width_cap.unwrap_or(SolveOptions::default().width_cap),
        ..SolveOptions::default()
    };
    let prepared: Vec<Prepared> = par::map_slice(&suite.instances, |spec| {
        let graph = spec.generate();
        let oracle = match (&graph, suite.oracle) {
            (Ok(g), Some(o)) => oracle_value(g, o, &base).ok(),
            _ => None,
        };
        Prepared {
            spec: spec.to_string(),
            graph,
            oracle,
        }
    });
    let cells: Vec<(usize, usize)> = (0..prepared.len())
        .flat_map(|i| (0..suite.algorithms.len()).map(move |j| (i, j)))
        .collect();
    par::map_slice(&cells, |&(i, j)| {
        let p = &prepared[i];
        let cell = &suite.algorithms[j];
        let mut row = BenchRow {
            instance: p.spec.clone(),
            algo: cell.label(),
            n: 0,
            m: 0,
            value: None,
            oracle: p.oracle,
            guarantee: None,
            millis: 0.0,
            error: None,
        };
        let g = match &p.graph {
            Ok(g) => g,
            Err(e) => {
                row.error = Some(e.to_string());
                return row;
            }
        };
        row.n = g.vertex_count();
        row.m = g.edge_count();
        let opts = SolveOptions {
            algorithm: cell.algorithm,
            epsilon: cell.epsilon,
            ..base.clone()
        };
        let start = Instant::now();
        match solve(g, &row.instance, &opts) {
            Ok(r) => {
                row.value = Some(r.value);
                row.guarantee = Some(r.guarantee);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row.millis = start.elapsed().as_secs_f64() * 1e3;
        row
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows as CSV. The `millis` column is left empty unless `timing`
/// is set, which keeps repeated runs byte-identical.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for r in rows {
        let millis = if timing { format!("{:.3}", r.millis) } else { String::new() };
        w.write_record([
            r.instance.clone(),
            r.algo.clone(),
            r.n.to_string(),
            r.m.to_string(),
            opt(r.value),
            opt(r.oracle),
            opt(r.ratio()),
            opt(r.guarantee),
            millis,
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUITE: &str = "\
# small suite
instance kind=grid-spin-glass rows=3 cols=3 seed=1
instance kind=perfect-matching n=6 seed=2
algo greedy-matching
algo baker epsilon=0.5
oracle brute-force
";

    #[test]
    fn parse_and_run() {
        let suite = BenchSuite::parse(SUITE).unwrap();
        assert_eq!(suite.instances.len(), 2);
        assert_eq!(suite.algorithms[1].label(), "baker epsilon=0.5");
        let rows = run_suite(&suite);
        assert_eq!(rows.len(), 4);
        for r in &rows {
            assert!(r.error.is_none());
            assert!(r.ratio().unwrap() >= r.guarantee.unwrap() - 1e-9);
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&rows, &mut a, false).unwrap();
        write_csv(&run_suite(&suite), &mut b, false).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("instance,algo,n,m,value,oracle,ratio,guarantee,millis\n"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(BenchSuite::parse("algo nope\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(BenchSuite::parse("\nfrobnicate\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn failing_cell_is_reported() {
        let suite = BenchSuite::parse("instance kind=d-regular n=5 d=3 seed=0\nalgo greedy-matching\n").unwrap();
        let rows = run_suite(&suite);
        assert!(rows[0].error.is_some());
        assert_eq!(rows[0].value, None);
    }
}
