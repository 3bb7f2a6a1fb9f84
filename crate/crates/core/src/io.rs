//! Text formats for instances, assignments, partitions and decompositions.
//!
//! Vertex ids are 1-based in every file and 0-based in memory.
//!
//! Instance:
//! ```text
//! # generator: kind=grid-spin-glass rows=2 cols=2 seed=7
//! p maxqp 4 4
//! e 1 2 -1
//! ...
//! ```
//! Assignment: one line of `+1` / `-1` tokens. Partition: line `i` lists the
//! vertices of part `i` (a blank line is an empty part). Decomposition:
//! `b <bag-id> <v...>` and `t <parent> <child>` lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::generate::GeneratorSpec;
use crate::graph::{Spin, WeightedGraph};
use crate::schemes::{PartitionSource, VertexPartition};
use crate::treewidth::TreeDecomposition;

const GENERATOR_PREFIX: &str = "# generator:";

/// Reads a file; I/O errors name the path.
pub fn read_to_string(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Non-comment lines with their 1-based line numbers, split into tokens.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn vertex_id(token: &str, n: usize, line: usize) -> Result<usize> {
    let id: usize = token
        .parse()
        .map_err(|_| Error::parse(line, format!("vertex id `{token}` is not a positive integer")))?;
    if id == 0 || id > n {
        return Err(Error::parse(line, format!("vertex id {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

fn count(token: &str, what: &str, line: usize) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("{what} `{token}` is not a nonnegative integer")))
}

pub fn parse_instance(text: &str) -> Result<WeightedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut entries = Vec::new();
    for (line, tokens) in records(text) {
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line, "second header line"));
                }
                if tokens.len() != 4 || tokens[1] != "maxqp" {
                    return Err(Error::parse(line, "header must read `p maxqp <n> <m>`"));
                }
                header = Some((count(tokens[2], "vertex count", line)?, count(tokens[3], "edge count", line)?));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "edge line before the header"))?;
                if tokens.len() != 4 {
                    return Err(Error::parse(line, "edge line must read `e <u> <v> <w>`"));
                }
                let u = vertex_id(tokens[1], n, line)?;
                let v = vertex_id(tokens[2], n, line)?;
                let w: f64 = tokens[3]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("weight `{}` is not a number", tokens[3])))?;
                if !w.is_finite() {
                    return Err(Error::parse(line, format!("weight `{}` is not finite", tokens[3])));
                }
                if u == v {
                    return Err(Error::validation(format!("line {line}: self-loop at vertex {}", u + 1)));
                }
                entries.push((u, v, w));
            }
            other => return Err(Error::parse(line, format!("unknown record type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing `p maxqp` header"))?;
    if entries.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("header declares {m} edges, found {}", entries.len()),
        ));
    }
    WeightedGraph::from_entries(n, entries)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_instance(&read_to_string(path)?)
}

/// Instance text; `comments` are written as `#` lines before the header.
pub fn format_instance(g: &WeightedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "p maxqp {} {}", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.weight);
    }
    out
}

/// Instance text with a `# generator:` line recording how it was made.
pub fn format_generated(g: &WeightedGraph, spec: &GeneratorSpec) -> String {
    format_instance(g, &[format!("generator: {spec}")])
}

/// The generator recorded in an instance's comments, if any.
pub fn generator_of(text: &str) -> Result<Option<GeneratorSpec>> {
    text.lines()
        .find_map(|l| l.trim().strip_prefix(GENERATOR_PREFIX))
        .map(|s| s.parse())
        .transpose()
}

pub fn parse_assignment(text: &str, n: usize) -> Result<Vec<Spin>> {
    let mut spins = Vec::with_capacity(n);
    for (line, tokens) in records(text) {
        for t in tokens {
            spins.push(match t {
                "+1" | "1" => 1,
                "-1" => -1,
                other => return Err(Error::parse(line, format!("assignment entry `{other}` is not +1 or -1"))),
            });
        }
    }
    if spins.len() != n {
        return Err(Error::validation(format!(
            "assignment has {} entries, graph has {n} vertices",
            spins.len()
        )));
    }
    Ok(spins)
}

pub fn format_assignment(spins: &[Spin]) -> String {
    let tokens: Vec<&str> = spins.iter().map(|&s| if s > 0 { "+1" } else { "-1" }).collect();
    format!("{}\n", tokens.join(" "))
}

/// One part per line; blank lines are empty parts, `#` lines are skipped.
pub fn parse_partition(text: &str, n: usize) -> Result<VertexPartition> {
    let mut parts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        if l.starts_with('#') {
            continue;
        }
        let part = l
            .split_whitespace()
            .map(|t| vertex_id(t, n, i + 1))
            .collect::<Result<Vec<_>>>()?;
        parts.push(part);
    }
    VertexPartition::new(n, parts, PartitionSource::External)
}

pub fn format_partition(p: &VertexPartition) -> String {
    let mut out = String::new();
    for part in p.parts() {
        let ids: Vec<String> = part.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

/// Bags are numbered `1..=B` in any order; each id must appear once.
pub fn parse_decomposition(text: &str, n: usize) -> Result<TreeDecomposition> {
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut links = Vec::new();
    let mut link_lines = Vec::new();
    for (line, tokens) in records(text) {
        match tokens[0] {
            "b" => {
                if tokens.len() < 2 {
                    return Err(Error::parse(line, "bag line must read `b <bag-id> <v...>`"));
                }
                let id = count(tokens[1], "bag id", line)?;
                if id == 0 {
                    return Err(Error::parse(line, "bag ids start at 1"));
                }
                if bags.len() < id {
                    bags.resize(id, None);
                }
                if bags[id - 1].is_some() {
                    return Err(Error::parse(line, format!("bag {id} defined twice")));
                }
                let vs = tokens[2..]
                    .iter()
                    .map(|t| vertex_id(t, n, line))
                    .collect::<Result<Vec<_>>>()?;
                bags[id - 1] = Some(vs);
            }
            "t" => {
                if tokens.len() != 3 {
                    return Err(Error::parse(line, "tree line must read `t <parent> <child>`"));
                }
                let p = count(tokens[1], "bag id", line)?;
                let c = count(tokens[2], "bag id", line)?;
                links.push((p, c));
                link_lines.push(line);
            }
            other => return Err(Error::parse(line, format!("unknown record type `{other}`"))),
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::validation(format!("bag {} is missing", i + 1))))
        .collect::<Result<_>>()?;
    let mut zero_based = Vec::with_capacity(links.len());
    for (&(p, c), &line) in links.iter().zip(&link_lines) {
        if p == 0 || c == 0 || p > bags.len() || c > bags.len() {
            return Err(Error::parse(line, format!("link {p} -> {c} names an unknown bag")));
        }
        zero_based.push((p - 1, c - 1));
    }
    TreeDecomposition::new(bags, &zero_based)
}

pub fn format_decomposition(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for c in 0..td.bags().len() {
        if let Some(p) = td.parent(c) {
            let _ = writeln!(out, "t {} {}", p + 1, c + 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treewidth::build_decomposition;

    #[test]
    fn instance_round_trip() {
        let text = "# a comment\np maxqp 3 3\ne 1 2 1\ne 2 3 -1\ne 1 3 0.25\n";
        let g = parse_instance(text).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(parse_instance(&format_instance(&g, &[])).unwrap(), g);
        assert!(format_instance(&g, &[]).contains("e 2 3 -1\n"));
    }

    #[test]
    fn symmetrization_rules() {
        let g = parse_instance("p maxqp 2 2\ne 1 2 1\ne 2 1 1\n").unwrap();
        assert_eq!(g.weight(0, 1), Some(1.0));
        let g = parse_instance("p maxqp 2 2\ne 1 2 1\ne 2 1 -1\n").unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(matches!(parse_instance("p maxqp 3 1\ne 3 3 5\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_errors_carry_lines() {
        match parse_instance("p maxqp 2 1\n# c\ne 1 x 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_instance("p maxqp 2 2\ne 1 2 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_instance("e 1 2 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_instance("p maxqp 2 1\ne 1 3 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn generator_comment_round_trip() {
        let spec: GeneratorSpec = "kind=perfect-matching n=4 seed=3".parse().unwrap();
        let g = spec.generate().unwrap();
        let text = format_generated(&g, &spec);
        assert_eq!(generator_of(&text).unwrap(), Some(spec));
        assert_eq!(parse_instance(&text).unwrap(), g);
    }

    #[test]
    fn assignment_format() {
        assert_eq!(format_assignment(&[1, -1, 1]), "+1 -1 +1\n");
        assert_eq!(parse_assignment("+1 -1 +1\n", 3).unwrap(), vec![1, -1, 1]);
        assert!(parse_assignment("+1 0\n", 2).is_err());
        assert!(parse_assignment("+1\n", 2).is_err());
    }

    #[test]
    fn partition_format() {
        let p = parse_partition("1 2\n3\n", 3).unwrap();
        assert_eq!(p.parts(), &[vec![0, 1], vec![2]]);
        assert_eq!(format_partition(&p), "1 2\n3\n");
        let with_empty = parse_partition("1 2 3\n\n", 3).unwrap();
        assert_eq!(with_empty.len(), 2);
        assert!(parse_partition("1 2\n2 3\n", 3).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let g = parse_instance("p maxqp 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 1 4 1\n").unwrap();
        let td = build_decomposition(&g, 20).unwrap();
        let text = format_decomposition(&td);
        let back = parse_decomposition(&text, 4).unwrap();
        assert_eq!(back.bags(), td.bags());
        back.validate(&g).unwrap();
        assert!(parse_decomposition("b 2 1\n", 4).is_err());
    }
}
