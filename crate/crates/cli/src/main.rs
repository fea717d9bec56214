use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dascmop_core::algorithms::Algorithm;
use dascmop_core::harness::{
    self, emit_outputs, read_records, render_comparison_table, summarize, ExperimentSpec, OutputFormat,
    DEFAULT_TRACE_INTERVAL, RECORDS_FILE,
};
use dascmop_core::metrics::{cache_dir, default_resolution, generate_reference_front};
use dascmop_core::{DifficultyTriplet, ProblemId};

/// Default reference-front cache, used when DASCMOP_CACHE is unset.
const DEFAULT_CACHE: &str = ".dascmop-cache";

#[derive(Parser)]
#[command(name = "dascmop", version, about = "Difficulty-adjustable constrained multi-objective benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one decision vector.
    Evaluate {
        #[command(flatten)]
        cell: CellArgs,
        /// Comma-separated decision variables in [0, 1].
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Generate a reference front and write it to a file.
    RefFront {
        #[command(flatten)]
        cell: CellArgs,
        /// Grid points per shape axis (default 1000 for two objectives, 100 for three).
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment grid; resumes from an existing records file.
    Run(RunArgs),
    /// Summary statistics and result files for a finished experiment.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value = "md")]
        format: String,
    },
    /// Side-by-side mean (std) table with significance markers.
    Table {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

#[derive(Args)]
struct CellArgs {
    /// Problem name, e.g. das-cmop1 (or just 1).
    #[arg(long)]
    problem: ProblemId,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long, default_value_t = 0.0)]
    zeta: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
}

impl CellArgs {
    fn triplet(&self) -> Result<DifficultyTriplet> {
        Ok(DifficultyTriplet::new(self.eta, self.zeta, self.gamma)?)
    }
}

#[derive(Args)]
struct RunArgs {
    /// Problem ids: ranges and lists, e.g. 1-9 or 1,3,7-9.
    #[arg(long, default_value = "1-9")]
    problems: String,
    /// `builtin16` or a file with one `eta,zeta,gamma` per line.
    #[arg(long, default_value = "builtin16")]
    triplets: String,
    #[arg(long, value_delimiter = ',', default_value = "moead-cdp,nsga2-cdp")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Evaluation budget per run, replacing the reference budget.
    #[arg(long)]
    budget_override: Option<usize>,
    /// Reference-front resolution (default depends on the objective count).
    #[arg(long)]
    resolution: Option<usize>,
    /// Reference-front cache (default: $DASCMOP_CACHE, else .dascmop-cache).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Fail instead of generating missing reference fronts.
    #[arg(long)]
    no_generate: bool,
    #[arg(long, default_value_t = DEFAULT_TRACE_INTERVAL)]
    trace_interval: usize,
}

fn parse_problem_list(s: &str) -> Result<Vec<ProblemId>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (lo, hi) = match part.split_once('-') {
            Some((a, b)) if !a.is_empty() && a.chars().all(|c| c.is_ascii_digit()) => (a.parse()?, b.parse()?),
            _ => {
                let id: ProblemId = part.parse()?;
                (id.get(), id.get())
            }
        };
        if lo > hi {
            bail!("empty problem range {part:?}");
        }
        for k in lo..=hi {
            let id = ProblemId::new(k)?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    if out.is_empty() {
        bail!("no problems selected by {s:?}");
    }
    Ok(out)
}

fn parse_triplets(spec: &str) -> Result<Vec<DifficultyTriplet>> {
    if spec == "builtin16" {
        return Ok(DifficultyTriplet::builtin16());
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading triplet file {spec}"))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|v| !v.is_empty())
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("{spec}:{}: bad number", i + 1))?;
        let [eta, zeta, gamma] = vals[..] else {
            bail!("{spec}:{}: expected eta,zeta,gamma", i + 1);
        };
        out.push(DifficultyTriplet::new(eta, zeta, gamma).with_context(|| format!("{spec}:{}", i + 1))?);
    }
    if out.is_empty() {
        bail!("{spec} lists no triplets");
    }
    Ok(out)
}

fn load_records(dir: &Path) -> Result<Vec<harness::RunRecord>> {
    let path = dir.join(RECORDS_FILE);
    let mut records = read_records(&path).with_context(|| format!("reading {}", path.display()))?;
    if records.is_empty() {
        return Err(anyhow!("{} holds no runs", path.display()));
    }
    harness::sort_records(&mut records);
    Ok(records)
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Evaluate { cell, x } => {
            let inst = cell.problem.instance(cell.triplet()?)?;
            let s = inst.evaluate_solution(x)?;
            println!("objectives: {}", fmt_vec(&s.f));
            println!("constraints: {}", fmt_vec(&s.c));
            println!("violation: {}", s.violation);
        }
        Command::RefFront { cell, resolution, out } => {
            let inst = cell.problem.instance(cell.triplet()?)?;
            let res = resolution.unwrap_or_else(|| default_resolution(inst.m()));
            let front = generate_reference_front(&inst, res)?;
            front.write(&out)?;
            log::info!("{} points written to {}", front.len(), out.display());
        }
        Command::Run(args) => {
            let spec = ExperimentSpec {
                problems: parse_problem_list(&args.problems)?,
                triplets: parse_triplets(&args.triplets)?,
                algorithms: args.algos,
                runs: args.runs,
                base_seed: args.seed,
                out_dir: args.out,
                cache_dir: args.cache.unwrap_or_else(|| cache_dir(DEFAULT_CACHE)),
                generate_fronts: !args.no_generate,
                budget_override: args.budget_override,
                workers: args.workers,
                resolution: args.resolution,
                trace_interval: args.trace_interval,
            };
            let records = harness::run_experiment(&spec)?;
            log::info!("{} runs recorded in {}", records.len(), spec.out_dir.join(RECORDS_FILE).display());
        }
        Command::Stats { input, alpha, format } => {
            let format: OutputFormat = format.parse()?;
            let records = load_records(&input)?;
            let table = summarize(&records, alpha);
            let written = emit_outputs(&records, &table, &input, format)?;
            print!("{}", harness::output::render_stats(&table, format));
            log::info!("{} files written under {}", written.len(), input.display());
        }
        Command::Table { input, alpha } => {
            let records = load_records(&input)?;
            print!("{}", render_comparison_table(&summarize(&records, alpha)));
        }
    }
    Ok(())
}
