//! IGD, nondominated filtering, reference fronts and Monte-Carlo feasibility
//! ratios.
//!
//! The reference-front oracle walks a uniform grid over the shape parameters
//! `s`. For each `s` that passes the Type-I constraints it pushes the
//! unconstrained front point `alpha(s)` along the diagonal, `alpha(s) + g 1`,
//! scanning `g` upward from its smallest admissible value and keeping the
//! first offset that clears every Type-III region. Larger offsets from the
//! same `s` are dominated by that first one, so stopping early gives the same
//! set as a full scan followed by a nondominated filter.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solution::{dominates_unchecked, DifficultyTriplet, EvaluatedSolution};
use crate::toolkit::ProblemInstance;

/// Default grid points per shape axis for two-objective problems.
pub const DEFAULT_RESOLUTION_2D: usize = 1000;
/// Default grid points per shape axis for three-objective problems.
pub const DEFAULT_RESOLUTION_3D: usize = 100;
/// Largest front kept after filtering; bigger fronts are thinned.
pub const MAX_FRONT_POINTS: usize = 10_000;
/// Smallest accepted grid resolution.
pub const MIN_RESOLUTION: usize = 100;
/// Offset range scanned when no band bounds `g` from above.
pub const UNBOUNDED_OFFSET_SCAN: f64 = 4.0;
/// Environment variable overriding the reference-front cache directory.
pub const CACHE_ENV: &str = "DASCMOP_CACHE";

pub fn default_resolution(m: usize) -> usize {
    if m <= 2 {
        DEFAULT_RESOLUTION_2D
    } else {
        DEFAULT_RESOLUTION_3D
    }
}

/// Inverted generational distance: mean over `reference` of the Euclidean
/// distance to the nearest member of `approx`.
pub fn igd(reference: &[Vec<f64>], approx: &[Vec<f64>]) -> Result<f64> {
    if reference.is_empty() || approx.is_empty() {
        return Err(Error::Contract("IGD needs nonempty reference and approximation sets".into()));
    }
    let m = reference[0].len();
    if reference.iter().chain(approx).any(|p| p.len() != m) {
        return Err(Error::Contract("IGD sets have mixed objective dimensions".into()));
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            approx
                .iter()
                .map(|a| r.iter().zip(a).map(|(x, y)| (x - y) * (x - y)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(total / reference.len() as f64)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Points not dominated by any other input point; duplicates collapse to one.
/// The result is in lexicographic order.
pub fn nondominated_filter(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
    sorted.sort_by(|a, b| lex_cmp(a, b));
    sorted.dedup_by(|a, b| lex_cmp(a, b).is_eq());

    // Any dominator precedes its victim lexicographically, and dominance is
    // transitive, so checking against already-kept points is enough.
    let mut kept: Vec<Vec<f64>> = Vec::new();
    if sorted.first().is_some_and(|p| p.len() == 2) {
        let mut best = f64::INFINITY;
        for p in sorted {
            if p[1] < best {
                best = p[1];
                kept.push(p.clone());
            }
        }
        return kept;
    }
    for p in sorted {
        if !kept.iter().any(|k| dominates_unchecked(k, p)) {
            kept.push(p.clone());
        }
    }
    kept
}

/// Greedy farthest-point subset of size `cap`, seeded at the
/// lexicographically smallest point; returned in lexicographic order.
pub fn thin_farthest_point(points: &[Vec<f64>], cap: usize) -> Vec<Vec<f64>> {
    if points.len() <= cap {
        return points.to_vec();
    }
    let dist2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let start = (0..points.len())
        .min_by(|&i, &j| lex_cmp(&points[i], &points[j]))
        .unwrap_or(0);
    let mut nearest: Vec<f64> = points.iter().map(|p| dist2(p, &points[start])).collect();
    let mut chosen = vec![start];
    while chosen.len() < cap {
        let next = (0..points.len())
            .max_by(|&i, &j| nearest[i].total_cmp(&nearest[j]).then(j.cmp(&i)))
            .unwrap();
        chosen.push(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(dist2(&points[i], &points[next]));
        }
    }
    let mut out: Vec<Vec<f64>> = chosen.into_iter().map(|i| points[i].clone()).collect();
    out.sort_by(|a, b| lex_cmp(a, b));
    out
}

/// Where a reference front came from.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontProvenance {
    pub problem: String,
    pub triplet: DifficultyTriplet,
    pub resolution: usize,
}

impl FrontProvenance {
    pub fn header(&self) -> String {
        format!(
            "# {} eta={} zeta={} gamma={} resolution={}",
            self.problem, self.triplet.eta, self.triplet.zeta, self.triplet.gamma, self.resolution
        )
    }

    /// Cache file name, unique per (problem, triplet, resolution).
    pub fn file_name(&self) -> String {
        format!(
            "{}_eta={}_zeta={}_gamma={}_res={}.txt",
            self.problem, self.triplet.eta, self.triplet.zeta, self.triplet.gamma, self.resolution
        )
    }

    fn parse_header(line: &str) -> Option<FrontProvenance> {
        let mut parts = line.strip_prefix('#')?.split_whitespace();
        let problem = parts.next()?.to_string();
        let mut field = |key: &str| -> Option<String> {
            parts.next()?.strip_prefix(key)?.strip_prefix('=').map(str::to_string)
        };
        let eta = field("eta")?.parse().ok()?;
        let zeta = field("zeta")?.parse().ok()?;
        let gamma = field("gamma")?.parse().ok()?;
        let resolution = field("resolution")?.parse().ok()?;
        Some(FrontProvenance {
            problem,
            triplet: DifficultyTriplet { eta, zeta, gamma },
            resolution,
        })
    }
}

/// Origin of one generated front point: shape parameters and diagonal offset.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontOrigin {
    pub s: Vec<f64>,
    pub g: f64,
}

/// Ground-truth front `P*` used by IGD.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFront {
    pub points: Vec<Vec<f64>>,
    pub provenance: FrontProvenance,
    /// Parallel to `points` for freshly generated fronts; empty when loaded
    /// from a file or after thinning.
    pub origins: Vec<FrontOrigin>,
}

impl ReferenceFront {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        // Write-then-rename so concurrent readers never see a partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        let mut w = BufWriter::new(file);
        let mut body = || -> std::io::Result<()> {
            writeln!(w, "{}", self.provenance.header())?;
            for p in &self.points {
                let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                writeln!(w, "{}", line.join(" "))?;
            }
            w.flush()
        };
        body().map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<ReferenceFront> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(path, "missing header"))?
            .map_err(|e| Error::io(path, e))?;
        let provenance = FrontProvenance::parse_header(&header)
            .ok_or_else(|| Error::parse(path, format!("bad header {header:?}")))?;
        let mut points = Vec::new();
        for (no, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let p: std::result::Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
            let p = p.map_err(|e| Error::parse(path, format!("line {}: {e}", no + 2)))?;
            points.push(p);
        }
        Ok(ReferenceFront {
            points,
            provenance,
            origins: Vec::new(),
        })
    }
}

fn shape_grid(m: usize, resolution: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..resolution)
        .map(|i| i as f64 / (resolution - 1) as f64)
        .collect();
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..m - 1 {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    grid
}

/// Offsets scanned for every shape parameter, in increasing order.
fn offset_scan(inst: &ProblemInstance) -> Vec<f64> {
    let p = inst.params();
    let (lo, hi, step) = if p.type2_active {
        (p.d, p.e, ((p.e - p.d) / 1000.0).min(1e-3))
    } else if p.type3_active {
        (0.0, UNBOUNDED_OFFSET_SCAN, 1e-3)
    } else {
        (0.0, 0.0, 0.0)
    };
    if step <= 0.0 || hi <= lo {
        return vec![lo];
    }
    let count = ((hi - lo) / step).ceil() as usize;
    (0..=count).map(|j| (lo + j as f64 * step).min(hi)).collect()
}

/// Builds the reference front of `inst` on a grid of `resolution` points per
/// shape axis. Fails with [`Error::EmptyFront`] when no grid point survives.
pub fn generate_reference_front(inst: &ProblemInstance, resolution: usize) -> Result<ReferenceFront> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Contract(format!(
            "reference-front resolution {resolution} is below {MIN_RESOLUTION}"
        )));
    }
    let provenance = FrontProvenance {
        problem: inst.name().to_string(),
        triplet: inst.triplet(),
        resolution,
    };
    let offsets = offset_scan(inst);

    // Each grid point is independent; collect preserves grid order, so the
    // result does not depend on how rayon splits the work.
    let candidates: Vec<(Vec<f64>, FrontOrigin)> = shape_grid(inst.m(), resolution)
        .into_par_iter()
        .filter_map(|s| {
            if inst.type1_values(&s).iter().any(|&c| c < 0.0) {
                return None;
            }
            let base = inst.unconstrained_pf_point(&s).ok()?;
            offsets.iter().find_map(|&g| {
                let f: Vec<f64> = base.iter().map(|v| v + g).collect();
                inst.type3_values(&f)
                    .iter()
                    .all(|&c| c >= 0.0)
                    .then(|| (f, FrontOrigin { s: s.clone(), g }))
            })
        })
        .collect();

    let points: Vec<Vec<f64>> = candidates.iter().map(|(f, _)| f.clone()).collect();
    let kept = nondominated_filter(&points);
    if kept.is_empty() {
        return Err(Error::EmptyFront(format!(
            "{} {} at resolution {resolution}",
            inst.name(),
            inst.triplet()
        )));
    }

    if kept.len() > MAX_FRONT_POINTS {
        return Ok(ReferenceFront {
            points: thin_farthest_point(&kept, MAX_FRONT_POINTS),
            provenance,
            origins: Vec::new(),
        });
    }

    let mut origin_of = candidates;
    origin_of.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    origin_of.dedup_by(|a, b| lex_cmp(&a.0, &b.0).is_eq());
    let origins = kept
        .iter()
        .map(|p| {
            let idx = origin_of
                .binary_search_by(|c| lex_cmp(&c.0, p))
                .expect("kept points come from the candidate set");
            origin_of[idx].1.clone()
        })
        .collect();
    Ok(ReferenceFront {
        points: kept,
        provenance,
        origins,
    })
}

/// Reference-front cache directory: `$DASCMOP_CACHE` if set, else `fallback`.
pub fn cache_dir(fallback: impl Into<PathBuf>) -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| fallback.into())
}

/// Cache path of the front for `inst` at `resolution`.
pub fn cached_front_path(inst: &ProblemInstance, resolution: usize, dir: &Path) -> PathBuf {
    let provenance = FrontProvenance {
        problem: inst.name().to_string(),
        triplet: inst.triplet(),
        resolution,
    };
    dir.join(provenance.file_name())
}

/// Loads the cached front for `inst`, generating and storing it when missing
/// and `generate` is set.
pub fn load_or_generate_front(
    inst: &ProblemInstance,
    resolution: usize,
    dir: &Path,
    generate: bool,
) -> Result<ReferenceFront> {
    let path = cached_front_path(inst, resolution, dir);
    if path.exists() {
        let front = ReferenceFront::read(&path)?;
        if front.provenance.problem != inst.name()
            || front.provenance.triplet != inst.triplet()
            || front.provenance.resolution != resolution
        {
            return Err(Error::parse(&path, "header does not match the requested front"));
        }
        return Ok(front);
    }
    if !generate {
        return Err(Error::Config(format!(
            "reference front {} is missing and generation is disabled",
            path.display()
        )));
    }
    let front = generate_reference_front(inst, resolution)?;
    front.write(&path)?;
    Ok(front)
}

/// Objective vectors IGD is measured on: the nondominated feasible members,
/// or the nondominated members of the whole population if none is feasible.
pub fn approximation_set(population: &[EvaluatedSolution]) -> Vec<Vec<f64>> {
    let feasible: Vec<Vec<f64>> = population
        .iter()
        .filter(|s| s.is_feasible())
        .map(|s| s.f.clone())
        .collect();
    if feasible.is_empty() {
        let all: Vec<Vec<f64>> = population.iter().map(|s| s.f.clone()).collect();
        nondominated_filter(&all)
    } else {
        nondominated_filter(&feasible)
    }
}

/// IGD of a population against a reference front.
pub fn population_igd(front: &ReferenceFront, population: &[EvaluatedSolution]) -> Result<f64> {
    igd(&front.points, &approximation_set(population))
}

/// Fraction of `samples` uniform points of `[0,1]^n` with zero violation.
pub fn feasible_ratio_mc(inst: &ProblemInstance, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Contract("feasible ratio needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; inst.n()];
    let mut feasible = 0usize;
    for _ in 0..samples {
        x.iter_mut().for_each(|v| *v = rng.gen::<f64>());
        let (_, c) = inst.evaluate(&x)?;
        if c.iter().all(|&ci| ci >= 0.0) {
            feasible += 1;
        }
    }
    Ok(feasible as f64 / samples as f64)
}
