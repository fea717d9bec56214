//! Experiment orchestration: the problem x triplet x algorithm x run grid,
//! resumable run records, summary statistics and result files.

pub mod output;
pub mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::{AlgoConfig, Algorithm, TracePoint, Tracer};
use crate::error::{Error, Result};
use crate::metrics::{default_resolution, load_or_generate_front, population_igd, ReferenceFront};
use crate::problems::ProblemId;
use crate::solution::DifficultyTriplet;
use crate::toolkit::ProblemInstance;

pub use output::{emit_outputs, render_comparison_table, OutputFormat};
pub use stats::{format_sci, rank_sum_exact_p, summarize, wilcoxon_rank_sum, CellStats, Marker, StatsRow, StatsTable};

/// Name of the append-only run log inside an output directory.
pub const RECORDS_FILE: &str = "records.jsonl";
/// Default spacing, in evaluations, of IGD trace samples.
pub const DEFAULT_TRACE_INTERVAL: usize = 1_000;

/// The full grid of runs to perform.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub problems: Vec<ProblemId>,
    pub triplets: Vec<DifficultyTriplet>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub base_seed: u64,
    pub out_dir: PathBuf,
    /// Reference-front cache directory.
    pub cache_dir: PathBuf,
    /// Generate missing reference fronts instead of failing.
    pub generate_fronts: bool,
    /// Overrides the per-problem reference budget when set.
    pub budget_override: Option<usize>,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    /// Reference-front resolution; `None` uses the per-m default.
    pub resolution: Option<usize>,
    pub trace_interval: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.problems.is_empty() || self.triplets.is_empty() || self.algorithms.is_empty() {
            return Err(Error::Config("experiment grid is empty".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be positive".into()));
        }
        for t in &self.triplets {
            t.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// Everything recorded about one completed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: ProblemId,
    pub triplet: DifficultyTriplet,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub final_igd: f64,
    pub igd_trace: Vec<TracePoint>,
    pub wall_seconds: f64,
    /// Final population objective vectors.
    pub objectives: Vec<Vec<f64>>,
    /// Final population overall violations, aligned with `objectives`.
    pub violations: Vec<f64>,
}

impl RunRecord {
    fn key(&self) -> RunKey {
        run_key(self.problem, &self.triplet, self.algorithm, self.run)
    }
}

type RunKey = (ProblemId, [u64; 3], Algorithm, usize);

fn run_key(p: ProblemId, t: &DifficultyTriplet, a: Algorithm, run: usize) -> RunKey {
    (p, [t.eta.to_bits(), t.zeta.to_bits(), t.gamma.to_bits()], a, run)
}

/// Seed of one run: the base seed mixed with a stable hash of the cell
/// coordinates and the run index.
pub fn run_seed(base: u64, p: ProblemId, t: &DifficultyTriplet, a: Algorithm, run: usize) -> u64 {
    let key = format!("{p}|{}|{}|{}|{a}|{run}", t.eta, t.zeta, t.gamma);
    let digest = Sha256::digest(key.as_bytes());
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    base ^ u64::from_le_bytes(head)
}

/// Reads every complete record of a run log. A torn final line (from an
/// interrupted write) is skipped with a warning; corruption elsewhere fails.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io(path, e))?;
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RunRecord>(line) {
            Ok(r) => out.push(r),
            Err(e) if i + 1 == lines.len() => {
                log::warn!("{}: ignoring torn last line ({e})", path.display());
            }
            Err(e) => return Err(Error::parse(path, format!("line {}: {e}", i + 1))),
        }
    }
    Ok(out)
}

/// Sorts records into grid order: problem, triplet, algorithm, run.
pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by(|a, b| {
        (a.problem, stats::triplet_order(&a.triplet), a.algorithm, a.run).cmp(&(
            b.problem,
            stats::triplet_order(&b.triplet),
            b.algorithm,
            b.run,
        ))
    });
}

/// One solver run, fully determined by its inputs (wall time aside).
pub fn execute_run(
    inst: &ProblemInstance,
    front: &ReferenceFront,
    algorithm: Algorithm,
    cfg: &AlgoConfig,
    run: usize,
    trace_interval: usize,
) -> Result<RunRecord> {
    let problem = inst
        .id()
        .ok_or_else(|| Error::Config("experiments run named problems only".into()))?;
    let tracer = Tracer {
        front,
        interval: trace_interval,
    };
    let start = Instant::now();
    let out = algorithm.run(inst, cfg, Some(&tracer))?;
    let final_igd = population_igd(front, &out.population)?;
    Ok(RunRecord {
        problem,
        triplet: inst.triplet(),
        algorithm,
        run,
        seed: cfg.seed,
        evaluations: out.evaluations,
        final_igd,
        igd_trace: out.igd_trace,
        wall_seconds: start.elapsed().as_secs_f64(),
        objectives: out.population.iter().map(|s| s.f.clone()).collect(),
        violations: out.population.iter().map(|s| s.violation).collect(),
    })
}

struct Cell {
    inst: ProblemInstance,
    front: ReferenceFront,
}

/// Runs every missing (cell, algorithm, run) of `spec`, appending each
/// finished record to `records.jsonl` in the output directory, and returns
/// all records in grid order. Cells whose reference front is empty are
/// skipped with a warning.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    fs::create_dir_all(&spec.out_dir).map_err(|e| Error::io(&spec.out_dir, e))?;
    fs::create_dir_all(&spec.cache_dir).map_err(|e| Error::io(&spec.cache_dir, e))?;
    let log_path = spec.out_dir.join(RECORDS_FILE);

    let wanted: BTreeSet<RunKey> = spec
        .problems
        .iter()
        .flat_map(|&p| {
            spec.triplets.iter().flat_map(move |t| {
                spec.algorithms
                    .iter()
                    .flat_map(move |&a| (0..spec.runs).map(move |r| run_key(p, t, a, r)))
            })
        })
        .collect();

    let mut done: BTreeMap<RunKey, RunRecord> = BTreeMap::new();
    if log_path.exists() {
        for r in read_records(&log_path)? {
            if wanted.contains(&r.key()) {
                done.insert(r.key(), r);
            }
        }
        log::info!("resuming: {} of {} runs already recorded", done.len(), wanted.len());
    }

    let mut cells: Vec<(ProblemId, DifficultyTriplet)> = Vec::new();
    for &p in &spec.problems {
        for t in &spec.triplets {
            if !cells.iter().any(|(q, u)| *q == p && u == t) {
                cells.push((p, *t));
            }
        }
    }
    let prepared: Vec<Option<Cell>> = cells
        .iter()
        .map(|&(p, t)| {
            let inst = p.instance(t)?;
            let res = spec.resolution.unwrap_or_else(|| default_resolution(inst.m()));
            match load_or_generate_front(&inst, res, &spec.cache_dir, spec.generate_fronts) {
                Ok(front) => Ok(Some(Cell { inst, front })),
                Err(Error::EmptyFront(msg)) => {
                    log::warn!("skipping {p} {t}: {msg}");
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut tasks = Vec::new();
    for cell in prepared.iter().flatten() {
        let p = cell.inst.id().expect("named instance");
        for &a in &spec.algorithms {
            for run in 0..spec.runs {
                if !done.contains_key(&run_key(p, &cell.inst.triplet(), a, run)) {
                    tasks.push((cell, a, run));
                }
            }
        }
    }
    log::info!("{} runs to perform", tasks.len());

    let writer = Mutex::new(
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&log_path)
            .map_err(|e| Error::io(&log_path, e))?,
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    let fresh: Vec<RunRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(cell, algorithm, run)| {
                let p = cell.inst.id().expect("named instance");
                let t = cell.inst.triplet();
                let mut cfg = AlgoConfig::for_problem(cell.inst.m(), cell.inst.n(), 0);
                cfg.seed = run_seed(spec.base_seed, p, &t, algorithm, run);
                if let Some(b) = spec.budget_override {
                    cfg.max_evaluations = b;
                }
                let record = execute_run(&cell.inst, &cell.front, algorithm, &cfg, run, spec.trace_interval)?;
                let mut line = serde_json::to_string(&record)
                    .map_err(|e| Error::Config(format!("cannot serialize record: {e}")))?;
                line.push('\n');
                {
                    let mut w = writer.lock().expect("record writer poisoned");
                    w.write_all(line.as_bytes())
                        .and_then(|_| w.flush())
                        .map_err(|e| Error::io(&log_path, e))?;
                }
                log::info!("{p} {t} {algorithm} run {run}: IGD {}", format_sci(record.final_igd));
                Ok(record)
            })
            .collect::<Result<_>>()
    })?;

    let mut all: Vec<RunRecord> = done.into_values().chain(fresh).collect();
    sort_records(&mut all);
    Ok(all)
}
