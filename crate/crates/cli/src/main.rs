//! `pathdec`: batch front end for decomposition, verification, generators,
//! the exhaustive oracle, fixtures and graph statistics.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pathdec::factorize::Bifactorization;
use pathdec::flowcut::edge_connectivity;
use pathdec::graph::{MultiGraph, Side};
use pathdec::pathdec::{decompose, required_connectivity_variants, PathDecError, PathDecomposition};
use pathdec::testbed::{
    brute_force_decompose, data_dir, fixture, fixture_file_name, gen_circulant, load_fixture_file, verify_decomposition,
    Fixture, FixtureDocument, FIXTURE_NAMES,
};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FAILURE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_DIVISIBILITY: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "pathdec", version, about = "Decompose bipartite graphs into edge-disjoint paths of fixed length")]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (a directory when several inputs are given); stdout if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose graph or fixture documents into ℓ-paths.
    Decompose {
        #[arg(long)]
        ell: usize,
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Connected-split attempts.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Worker threads over multiple inputs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write one line per edge exchange made while untangling.
        #[arg(long)]
        audit_log: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a decomposition document against a graph.
    Verify {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        decomposition: PathBuf,
    },
    /// Write the circulant bipartite graph on 2n vertices with the given offsets.
    Generate {
        #[arg(long)]
        n: usize,
        /// Comma-separated offsets or ranges, e.g. `0-11,15`.
        #[arg(long)]
        offsets: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exhaustive search on graphs with at most 16 edges.
    Oracle {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print a fixture document, or write every fixture into the data directory.
    Fixture {
        name: Option<String>,
        #[arg(long)]
        write_all: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Connectivity, degrees and divisibility against the sufficient thresholds.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let fallback = data_dir().join(path);
    if fallback.exists() {
        fallback
    } else {
        path.to_path_buf()
    }
}

/// A bare graph document or a fixture document carrying a graph.
fn load_input(path: &Path) -> Result<(MultiGraph, Option<Bifactorization>), Failure> {
    let path = resolve(path);
    let text = std::fs::read_to_string(&path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if value.get("graph").is_some() {
        let doc: FixtureDocument =
            serde_json::from_value(value).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let fx = Fixture::from_document(&doc).map_err(|e| Failure::input(e.to_string()))?;
        Ok((fx.graph, fx.bif))
    } else {
        let g = MultiGraph::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok((g, None))
    }
}

fn emit(out: &OutputArgs, value: &Value) -> Result<(), Failure> {
    let Format::Json = out.format;
    let text = serde_json::to_string(value).expect("json values serialize");
    match &out.output {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pipeline_failure(e: PathDecError) -> Failure {
    let code = match e {
        PathDecError::BudgetExhausted(_) => EXIT_BUDGET,
        PathDecError::Divisibility { .. } => EXIT_DIVISIBILITY,
        _ => EXIT_FAILURE,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn cmd_decompose(
    ell: usize,
    inputs: &[PathBuf],
    seed: u64,
    budget: usize,
    jobs: usize,
    audit_log: Option<&Path>,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let run = |path: &PathBuf| -> Result<(PathDecomposition, Vec<String>), Failure> {
        let (g, hint) = load_input(path)?;
        let (d, report) = decompose(&g, ell, seed, budget, hint.as_ref()).map_err(pipeline_failure)?;
        let audit = report
            .levels
            .iter()
            .flat_map(|lvl| {
                lvl.swaps.iter().map(move |s| {
                    format!(
                        "ell={} round={} slots {}->{} e1={} f2={}",
                        lvl.ell, s.round, s.from_slot, s.to_slot, s.e1, s.f2
                    )
                })
            })
            .collect();
        log::info!("{}: {} paths", path.display(), d.len());
        Ok((d, audit))
    };
    let results: Vec<Result<(PathDecomposition, Vec<String>), Failure>> = if inputs.len() > 1 && jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Failure::input(e.to_string()))?;
        pool.install(|| inputs.par_iter().map(run).collect())
    } else {
        inputs.iter().map(run).collect()
    };

    let mut audit_lines = Vec::new();
    let mut first_failure = None;
    for (path, res) in inputs.iter().zip(results) {
        match res {
            Ok((d, audit)) => {
                audit_lines.extend(audit);
                let value = serde_json::to_value(&d).expect("plain data");
                if inputs.len() == 1 {
                    emit(out, &value)?;
                } else {
                    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
                    let target = OutputArgs {
                        output: out.output.as_ref().map(|dir| dir.join(format!("{stem}.paths.json"))),
                        format: out.format,
                    };
                    emit(&target, &value)?;
                }
            }
            Err(f) => {
                eprintln!("{}: {}", path.display(), f.message);
                first_failure.get_or_insert(f);
            }
        }
    }
    if let Some(p) = audit_log {
        let mut file = std::fs::File::create(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
        for line in &audit_lines {
            writeln!(file, "{line}").map_err(|e| Failure::input(e.to_string()))?;
        }
    }
    match first_failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn cmd_verify(ell: usize, graph: &Path, decomposition: &Path) -> Result<(), Failure> {
    let (g, _) = load_input(graph)?;
    let text = std::fs::read_to_string(decomposition)
        .map_err(|e| Failure::input(format!("{}: {e}", decomposition.display())))?;
    let d: PathDecomposition =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", decomposition.display())))?;
    let report = verify_decomposition(&g, ell, &d);
    println!("{}", serde_json::to_string(&report).expect("plain data"));
    if report.ok() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_FAILURE,
            message: format!("{} violations, first: {}", report.violation_count, report.violations[0]),
        })
    }
}

fn parse_offsets(spec: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| s.trim().parse::<usize>().map_err(|e| Failure::input(format!("offset {s:?}: {e}")));
        match part.split_once('-') {
            Some((a, b)) => out.extend(num(a)?..=num(b)?),
            None => out.push(num(part)?),
        }
    }
    Ok(out)
}

fn cmd_stats(input: &Path, ell: Option<usize>, out: &OutputArgs) -> Result<(), Failure> {
    let (g, _) = load_input(input)?;
    let lambda = edge_connectivity(&g).map_err(|e| Failure::input(e.to_string()))?;
    let degrees = |side: Side| {
        let ds: Vec<usize> = g.vertices_on(side).map(|v| g.deg(v)).collect();
        json!({
            "count": ds.len(),
            "min": ds.iter().min(),
            "max": ds.iter().max(),
        })
    };
    let mut value = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "lambda": lambda,
        "bipartite": g.is_bipartite_labelled(),
        "A": degrees(Side::A),
        "B": degrees(Side::B),
    });
    if let Some(ell) = ell.filter(|&l| l > 0) {
        let variants: Vec<Value> = required_connectivity_variants(ell)
            .into_iter()
            .map(|req| {
                json!({
                    "threshold": req.threshold,
                    "divisor": req.divisor,
                    "divisible": g.edge_count() % req.divisor == 0,
                    "meets_threshold": lambda >= req.threshold,
                })
            })
            .collect();
        value["ell"] = json!(ell);
        value["requirements"] = Value::Array(variants);
    }
    emit(out, &value)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose {
            ell,
            input,
            seed,
            budget,
            jobs,
            audit_log,
            out,
        } => cmd_decompose(ell, &input, seed, budget, jobs, audit_log.as_deref(), &out),
        Command::Verify {
            ell,
            graph,
            decomposition,
        } => cmd_verify(ell, &graph, &decomposition),
        Command::Generate { n, offsets, out } => {
            let g = gen_circulant(n, &parse_offsets(&offsets)?).map_err(|e| Failure::input(e.to_string()))?;
            emit(&out, &serde_json::to_value(g.to_document()).expect("plain data"))
        }
        Command::Oracle { ell, input, out } => {
            let (g, _) = load_input(&input)?;
            let found = brute_force_decompose(&g, ell).map_err(|e| Failure::input(e.to_string()))?;
            emit(&out, &json!({ "exists": found.is_some(), "decomposition": found }))
        }
        Command::Fixture { name, write_all, out } => {
            if write_all {
                let dir = data_dir();
                std::fs::create_dir_all(&dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
                for name in FIXTURE_NAMES {
                    let fx = fixture(name).map_err(|e| Failure::input(e.to_string()))?;
                    let target = OutputArgs {
                        output: Some(dir.join(fixture_file_name(name))),
                        format: out.format,
                    };
                    emit(&target, &serde_json::to_value(fx.to_document()).expect("plain data"))?;
                }
                return Ok(());
            }
            let name = name.ok_or_else(|| Failure::input("fixture name required"))?;
            let fx = load_fixture_file(&name)
                .or_else(|_| fixture(&name))
                .map_err(|e| Failure::input(e.to_string()))?;
            emit(&out, &serde_json::to_value(fx.to_document()).expect("plain data"))
        }
        Command::Stats { input, ell, out } => cmd_stats(&input, ell, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
