use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maxqp::bench::{run_suite, write_csv, BenchSuite};
use maxqp::generate::GeneratorSpec;
use maxqp::io::{
    format_assignment, format_decomposition, format_generated, parse_assignment, parse_decomposition,
    parse_instance, parse_partition, read_to_string,
};
use maxqp::oracle::DEFAULT_BRUTE_FORCE_CAP;
use maxqp::solve::{solve, Algorithm, SolveOptions};
use maxqp::treewidth::{build_decomposition, DEFAULT_WIDTH_CAP};
use maxqp::{Error, Result, WeightedGraph};

/// Solvers for MaxQP: maximize the sum of a_uv * x_u * x_v over the edges
/// of a weighted graph, with every x_v in {-1, +1}.
#[derive(Parser)]
#[command(name = "maxqp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a key=value report line.
    Solve(SolveArgs),
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Print the value of an assignment.
    Eval {
        instance: PathBuf,
        assignment: PathBuf,
    },
    /// Run a benchmark suite and write CSV.
    Bench {
        suite: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the millis column (rows then differ between runs).
        #[arg(long)]
        timing: bool,
    },
    /// Write the min-fill tree decomposition of an instance.
    Decompose {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WIDTH_CAP)]
        width_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file; omit when using --generate.
    instance: Option<PathBuf>,
    /// Solve a generated instance, e.g. "kind=grid-spin-glass rows=6 cols=6".
    #[arg(long, conflicts_with = "instance")]
    generate: Option<String>,
    /// Seed for --generate (overrides any seed= in the generator string).
    #[arg(long, requires = "generate")]
    seed: Option<u64>,
    #[arg(long, default_value = "auto")]
    algo: Algorithm,
    /// Accuracy for baker and partition, in (0, 1].
    #[arg(long)]
    epsilon: Option<f64>,
    /// Exact solver to compare against: exact-tw or brute-force.
    #[arg(long)]
    oracle: Option<Algorithm>,
    /// Partition file for --algo partition.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Decomposition file for --algo exact-tw.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WIDTH_CAP)]
    width_cap: usize,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    brute_force_cap: usize,
    /// Write the assignment to this file ("-" for stdout).
    #[arg(long)]
    emit_assignment: Option<PathBuf>,
    /// Append millis= to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenArgs {
    /// grid-spin-glass, sparse-random, d-regular, perfect-matching,
    /// clique-plus-matching, maxcut-subdivision, planar-triangulation, degenerate.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// unit, positive or real (sparse-random only).
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GenArgs {
    fn spec(&self) -> Result<GeneratorSpec> {
        let mut fields = vec![format!("kind={}", self.kind)];
        let numbers = [
            ("rows", self.rows),
            ("cols", self.cols),
            ("n", self.n),
            ("m", self.m),
            ("d", self.d),
            ("max-degree", self.max_degree),
        ];
        fields.extend(numbers.iter().filter_map(|(k, v)| v.map(|v| format!("{k}={v}"))));
        if let Some(w) = &self.weights {
            fields.push(format!("weights={w}"));
        }
        fields.push(format!("seed={}", self.seed));
        fields.join(" ").parse()
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text)?,
        _ => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(path: &Path) -> Result<WeightedGraph> {
    parse_instance(&read_to_string(path)?)
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let (graph, id) = match (&args.instance, &args.generate) {
        (Some(path), _) => (load(path)?, path.display().to_string()),
        (None, Some(raw)) => {
            let mut spec: GeneratorSpec = raw.parse()?;
            if let Some(seed) = args.seed {
                spec.seed = seed;
            }
            (spec.generate()?, format!("[{spec}]"))
        }
        (None, None) => return Err(Error::Validation("give an instance file or --generate".into())),
    };
    let n = graph.vertex_count();
    let opts = SolveOptions {
        algorithm: args.algo,
        epsilon: args.epsilon,
        width_cap: args.width_cap,
        brute_force_cap: args.brute_force_cap,
        partition: args
            .partition
            .as_deref()
            .map(|p| parse_partition(&read_to_string(p)?, n))
            .transpose()?,
        decomposition: args
            .decomposition
            .as_deref()
            .map(|p| parse_decomposition(&read_to_string(p)?, n))
            .transpose()?,
        oracle: args.oracle,
    };
    let report = solve(&graph, &id, &opts)?;
    println!("{}", report.line(args.timing));
    if let Some(path) = &args.emit_assignment {
        write_output(Some(path), &format_assignment(report.assignment.spins()))?;
    }
    Ok(())
}

fn cmd_eval(instance: &Path, assignment: &Path) -> Result<()> {
    let g = load(instance)?;
    let spins = parse_assignment(&read_to_string(assignment)?, g.vertex_count())?;
    println!("{}", g.evaluate(&spins)?);
    Ok(())
}

fn cmd_bench(suite: &Path, out: Option<&Path>, timing: bool) -> Result<()> {
    let suite = BenchSuite::parse(&read_to_string(suite)?)?;
    let rows = run_suite(&suite);
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf, timing)?;
    write_output(out, &String::from_utf8_lossy(&buf))?;
    let failures: Vec<_> = rows.iter().filter(|r| r.error.is_some()).collect();
    for r in &failures {
        eprintln!("maxqp: {} / {}: {}", r.instance, r.algo, r.error.as_deref().unwrap_or(""));
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!("{} benchmark cells failed", failures.len())))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen(args) => {
            let spec = args.spec()?;
            let g = spec.generate()?;
            write_output(args.out.as_deref(), &format_generated(&g, &spec))
        }
        Command::Eval { instance, assignment } => cmd_eval(&instance, &assignment),
        Command::Bench { suite, out, timing } => cmd_bench(&suite, out.as_deref(), timing),
        Command::Decompose {
            instance,
            width_cap,
            out,
        } => {
            let td = build_decomposition(&load(&instance)?, width_cap)?;
            write_output(out.as_deref(), &format_decomposition(&td))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("maxqp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
