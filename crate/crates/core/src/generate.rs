//! Seeded instance generators.
//!
//! All randomness comes from SplitMix64 through the integer helpers below,
//! so a spec and seed reproduce the same instance on every platform.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand_core::{Rng as _, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::oracle::subdivide_for_maxcut;

/// SplitMix64 with portable bounded-integer and float helpers.
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound` by rejection; `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        let bound = bound as u64;
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return (r % bound) as usize;
            }
        }
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Uniform in `[-1, 1)`, never zero.
    pub fn real_weight(&mut self) -> f64 {
        loop {
            let w = 2.0 * self.unit_f64() - 1.0;
            if w != 0.0 {
                return w;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// Uniform `-1` / `+1`.
    Unit,
    /// All `+1`.
    Positive,
    /// Uniform in `[-1, 1)`.
    Real,
}

impl WeightKind {
    fn draw(self, rng: &mut SeededRng) -> f64 {
        match self {
            WeightKind::Unit => rng.sign(),
            WeightKind::Positive => 1.0,
            WeightKind::Real => rng.real_weight(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            WeightKind::Unit => "unit",
            WeightKind::Positive => "positive",
            WeightKind::Real => "real",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    GridSpinGlass { rows: usize, cols: usize },
    SparseRandom { n: usize, m: usize, weights: WeightKind, max_degree: Option<usize> },
    DRegular { n: usize, d: usize },
    PerfectMatching { n: usize },
    /// A clique on `floor(sqrt(n))` vertices plus a perfect matching on the rest.
    CliquePlusMatching { n: usize },
    MaxcutSubdivision { n: usize, m: usize },
    /// Stacked planar triangulation: each new vertex splits a random face.
    PlanarTriangulation { n: usize },
    /// Every vertex links to between 1 and `d` earlier vertices.
    Degenerate { n: usize, d: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn generate(&self) -> Result<WeightedGraph> {
        generate(self)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GeneratorKind::*;
        match &self.kind {
            GridSpinGlass { rows, cols } => write!(f, "kind=grid-spin-glass rows={rows} cols={cols}")?,
            SparseRandom { n, m, weights, max_degree } => {
                write!(f, "kind=sparse-random n={n} m={m} weights={}", weights.name())?;
                if let Some(d) = max_degree {
                    write!(f, " max-degree={d}")?;
                }
            }
            DRegular { n, d } => write!(f, "kind=d-regular n={n} d={d}")?,
            PerfectMatching { n } => write!(f, "kind=perfect-matching n={n}")?,
            CliquePlusMatching { n } => write!(f, "kind=clique-plus-matching n={n}")?,
            MaxcutSubdivision { n, m } => write!(f, "kind=maxcut-subdivision n={n} m={m}")?,
            PlanarTriangulation { n } => write!(f, "kind=planar-triangulation n={n}")?,
            Degenerate { n, d } => write!(f, "kind=degenerate n={n} d={d}")?,
        }
        write!(f, " seed={}", self.seed)
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// Parses whitespace-separated `key=value` tokens as printed by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let mut fields: Vec<(&str, &str)> = Vec::new();
        for token in s.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| Error::validation(format!("generator field `{token}` is not key=value")))?;
            fields.push((k, v));
        }
        let get = |key: &str| fields.iter().find(|(k, _)| *k == key).map(|&(_, v)| v);
        let num = |key: &str| -> Result<usize> {
            let raw = get(key).ok_or_else(|| Error::validation(format!("generator needs `{key}=`")))?;
            raw.parse()
                .map_err(|_| Error::validation(format!("generator field {key}={raw} is not an integer")))
        };
        let kind_name = get("kind").ok_or_else(|| Error::validation("generator needs `kind=`"))?;
        let kind = match kind_name {
            "grid-spin-glass" => GeneratorKind::GridSpinGlass { rows: num("rows")?, cols: num("cols")? },
            "sparse-random" => GeneratorKind::SparseRandom {
                n: num("n")?,
                m: num("m")?,
                weights: match get("weights").unwrap_or("unit") {
                    "unit" => WeightKind::Unit,
                    "positive" => WeightKind::Positive,
                    "real" => WeightKind::Real,
                    other => return Err(Error::validation(format!("unknown weight kind `{other}`"))),
                },
                max_degree: get("max-degree").map(|_| num("max-degree")).transpose()?,
            },
            "d-regular" => GeneratorKind::DRegular { n: num("n")?, d: num("d")? },
            "perfect-matching" => GeneratorKind::PerfectMatching { n: num("n")? },
            "clique-plus-matching" => GeneratorKind::CliquePlusMatching { n: num("n")? },
            "maxcut-subdivision" => GeneratorKind::MaxcutSubdivision { n: num("n")?, m: num("m")? },
            "planar-triangulation" => GeneratorKind::PlanarTriangulation { n: num("n")? },
            "degenerate" => GeneratorKind::Degenerate { n: num("n")?, d: num("d")? },
            other => return Err(Error::validation(format!("unknown generator kind `{other}`"))),
        };
        let seed = match get("seed") {
            Some(raw) => raw
                .parse()
                .map_err(|_| Error::validation(format!("seed `{raw}` is not a 64-bit integer")))?,
            None => 0,
        };
        Ok(Self { kind, seed })
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<WeightedGraph> {
    let mut rng = SeededRng::new(spec.seed);
    let rng = &mut rng;
    match spec.kind {
        GeneratorKind::GridSpinGlass { rows, cols } => Ok(grid(rows, cols, rng)),
        GeneratorKind::SparseRandom { n, m, weights, max_degree } => sparse_random(n, m, weights, max_degree, rng),
        GeneratorKind::DRegular { n, d } => d_regular(n, d, rng),
        GeneratorKind::PerfectMatching { n } => {
            if n % 2 != 0 {
                return Err(Error::validation(format!("perfect matching needs even n, got {n}")));
            }
            let mut order: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut order);
            let pairs: Vec<_> = order.chunks(2).map(|p| (p[0], p[1])).collect();
            weighted(n, pairs, WeightKind::Unit, rng)
        }
        GeneratorKind::CliquePlusMatching { n } => {
            let k = n.isqrt();
            if (n - k) % 2 != 0 {
                return Err(Error::validation(format!(
                    "clique-plus-matching: {n} - {k} vertices outside the clique cannot be perfectly matched"
                )));
            }
            let mut pairs = Vec::new();
            for u in 0..k {
                for v in u + 1..k {
                    pairs.push((u, v));
                }
            }
            let mut rest: Vec<usize> = (k..n).collect();
            rng.shuffle(&mut rest);
            pairs.extend(rest.chunks(2).map(|p| (p[0], p[1])));
            weighted(n, pairs, WeightKind::Unit, rng)
        }
        GeneratorKind::MaxcutSubdivision { n, m } => {
            let base = sparse_random(n, m, WeightKind::Positive, None, rng)?;
            Ok(subdivide_for_maxcut(&base))
        }
        GeneratorKind::PlanarTriangulation { n } => {
            if n < 3 {
                return Err(Error::validation("planar triangulation needs n >= 3"));
            }
            let mut pairs = vec![(0, 1), (1, 2), (0, 2)];
            let mut faces = vec![[0, 1, 2]];
            for v in 3..n {
                let f = rng.below(faces.len());
                let [a, b, c] = faces[f];
                faces[f] = [a, b, v];
                faces.push([b, c, v]);
                faces.push([a, c, v]);
                pairs.extend([(a, v), (b, v), (c, v)]);
            }
            weighted(n, pairs, WeightKind::Unit, rng)
        }
        GeneratorKind::Degenerate { n, d } => {
            let mut pairs = Vec::new();
            if d > 0 {
                for v in 1..n {
                    let k = (1 + rng.below(d)).min(v);
                    let mut earlier: Vec<usize> = (0..v).collect();
                    for i in 0..k {
                        let j = i + rng.below(v - i);
                        earlier.swap(i, j);
                        pairs.push((earlier[i], v));
                    }
                }
            }
            weighted(n, pairs, WeightKind::Unit, rng)
        }
    }
}

fn weighted(n: usize, pairs: Vec<(usize, usize)>, kind: WeightKind, rng: &mut SeededRng) -> Result<WeightedGraph> {
    let entries: Vec<(usize, usize, f64)> = pairs.into_iter().map(|(u, v)| (u, v, kind.draw(rng))).collect();
    WeightedGraph::from_entries(n, entries)
}

fn grid(rows: usize, cols: usize, rng: &mut SeededRng) -> WeightedGraph {
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                pairs.push((v, v + 1));
            }
            if r + 1 < rows {
                pairs.push((v, v + cols));
            }
        }
    }
    weighted(rows * cols, pairs, WeightKind::Unit, rng).expect("grid edges are valid")
}

fn sparse_random(
    n: usize,
    m: usize,
    weights: WeightKind,
    max_degree: Option<usize>,
    rng: &mut SeededRng,
) -> Result<WeightedGraph> {
    let possible = n * n.saturating_sub(1) / 2;
    let degree_room = max_degree.map_or(usize::MAX, |d| n * d / 2);
    if m > possible || m > degree_room {
        return Err(Error::validation(format!(
            "cannot place {m} edges on {n} vertices{}",
            max_degree.map_or(String::new(), |d| format!(" with max degree {d}"))
        )));
    }
    let cap = max_degree.unwrap_or(usize::MAX);
    let mut degree = vec![0usize; n];
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    if 2 * m > possible && max_degree.is_none() {
        let mut all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        rng.shuffle(&mut all);
        pairs.extend_from_slice(&all[..m]);
    } else {
        let mut attempts = 0usize;
        let budget = 100 * m + 1000;
        while pairs.len() < m {
            attempts += 1;
            if attempts > budget {
                return Err(Error::validation(format!(
                    "gave up sampling {m} edges on {n} vertices after {budget} attempts"
                )));
            }
            let u = rng.below(n);
            let v = rng.below(n);
            if u == v || degree[u] >= cap || degree[v] >= cap {
                continue;
            }
            if seen.insert((u.min(v), u.max(v))) {
                degree[u] += 1;
                degree[v] += 1;
                pairs.push((u, v));
            }
        }
    }
    weighted(n, pairs, weights, rng)
}

fn d_regular(n: usize, d: usize, rng: &mut SeededRng) -> Result<WeightedGraph> {
    if d >= n.max(1) || !(n * d).is_multiple_of(2) {
        return Err(Error::validation(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..10_000 {
        rng.shuffle(&mut stubs);
        let mut seen = HashSet::new();
        let ok = stubs
            .chunks(2)
            .all(|p| p[0] != p[1] && seen.insert((p[0].min(p[1]), p[0].max(p[1]))));
        if ok {
            let pairs = stubs.chunks(2).map(|p| (p[0], p[1])).collect();
            return weighted(n, pairs, WeightKind::Unit, rng);
        }
    }
    Err(Error::validation(format!("configuration model failed for n={n}, d={d}")))
}
