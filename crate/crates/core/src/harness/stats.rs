//! Rank-sum significance testing and per-cell summary statistics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::RunRecord;
use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::problems::ProblemId;
use crate::solution::DifficultyTriplet;

/// Outcome of a one-vs-other significance test, from the first sample's
/// point of view (smaller values are better).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    Better,
    Worse,
    None,
}

impl Marker {
    pub fn flipped(self) -> Marker {
        match self {
            Marker::Better => Marker::Worse,
            Marker::Worse => Marker::Better,
            Marker::None => Marker::None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Marker::Better => "better",
            Marker::Worse => "worse",
            Marker::None => "none",
        }
    }
}

/// Midranks (1-based) of the pooled sample `a ++ b` plus the tie term
/// `sum(t^3 - t)` over tie groups.
fn pooled_ranks(a: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut ties = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        let mid = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        let t = (end - start) as f64;
        ties += t * t * t - t;
        start = end;
    }
    (ranks, ties)
}

fn marker_for(a_rank_mean: f64, b_rank_mean: f64, p: f64, alpha: f64) -> Marker {
    if p >= alpha || a_rank_mean == b_rank_mean {
        Marker::None
    } else if a_rank_mean < b_rank_mean {
        Marker::Better
    } else {
        Marker::Worse
    }
}

/// Two-sided Wilcoxon rank-sum test, normal approximation with tie and
/// continuity corrections. Returns the p-value and the marker for `a`.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<(f64, Marker)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Contract("rank-sum test needs two nonempty samples".into()));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let total = n1 + n2;
    let (ranks, ties) = pooled_ranks(a, b);
    let w: f64 = ranks[..a.len()].iter().sum();
    let u = w - n1 * (n1 + 1.0) / 2.0;
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((total + 1.0) - ties / (total * (total - 1.0)));
    if var <= 0.0 {
        return Ok((1.0, Marker::None));
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let p = erfc(z / std::f64::consts::SQRT_2).min(1.0);
    let a_mean = w / n1;
    let b_mean = ranks[a.len()..].iter().sum::<f64>() / n2;
    Ok((p, marker_for(a_mean, b_mean, p, alpha)))
}

/// Largest pooled size accepted by [`rank_sum_exact_p`].
pub const EXACT_MAX_POOLED: usize = 20;

/// Exact two-sided rank-sum p-value by enumerating every assignment of the
/// pooled midranks to the first sample. Only for small samples.
pub fn rank_sum_exact_p(a: &[f64], b: &[f64]) -> Result<f64> {
    let total = a.len() + b.len();
    if a.is_empty() || b.is_empty() || total > EXACT_MAX_POOLED {
        return Err(Error::Contract(format!(
            "exact rank-sum needs nonempty samples with pooled size <= {EXACT_MAX_POOLED}"
        )));
    }
    let (ranks, _) = pooled_ranks(a, b);
    let observed: f64 = ranks[..a.len()].iter().sum();
    let (mut le, mut ge, mut count) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1u32 << total) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let w: f64 = (0..total).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        count += 1;
        if w <= observed + 1e-9 {
            le += 1;
        }
        if w >= observed - 1e-9 {
            ge += 1;
        }
    }
    Ok((2.0 * le.min(ge) as f64 / count as f64).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub runs: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` divisor); zero for a single run.
    pub std: f64,
}

impl CellStats {
    pub fn from_values(values: &[f64]) -> Option<CellStats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(CellStats {
            runs: v.len(),
            mean,
            std,
        })
    }
}

/// One (problem, triplet) row of the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub problem: ProblemId,
    pub triplet: DifficultyTriplet,
    pub cells: BTreeMap<Algorithm, CellStats>,
    /// NSGA-II-CDP against MOEA/D-CDP; present only when both ran the same
    /// number of times.
    pub p_value: Option<f64>,
    pub marker: Option<Marker>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsTable {
    pub alpha: f64,
    pub rows: Vec<StatsRow>,
}

/// Position of a triplet in result-table order: the built-in grid first,
/// anything else after it.
pub(crate) fn triplet_order(t: &DifficultyTriplet) -> (usize, [u64; 3]) {
    let idx = DifficultyTriplet::builtin16()
        .iter()
        .position(|b| b == t)
        .unwrap_or(usize::MAX);
    (idx, [t.eta.to_bits(), t.zeta.to_bits(), t.gamma.to_bits()])
}

type CellKey = (ProblemId, (usize, [u64; 3]));
type CellRuns = (DifficultyTriplet, BTreeMap<Algorithm, Vec<(usize, f64)>>);

/// Mean, standard deviation and the NSGA-II-vs-MOEA/D marker per cell.
pub fn summarize(records: &[RunRecord], alpha: f64) -> StatsTable {
    let mut groups: BTreeMap<CellKey, CellRuns> = BTreeMap::new();
    for r in records {
        let entry = groups
            .entry((r.problem, triplet_order(&r.triplet)))
            .or_insert_with(|| (r.triplet, BTreeMap::new()));
        entry.1.entry(r.algorithm).or_default().push((r.run, r.final_igd));
    }

    let mut rows = Vec::with_capacity(groups.len());
    for ((problem, _), (triplet, by_algo)) in groups {
        let mut cells = BTreeMap::new();
        let mut samples: BTreeMap<Algorithm, Vec<f64>> = BTreeMap::new();
        for (algo, mut runs) in by_algo {
            runs.sort_by_key(|&(run, _)| run);
            let values: Vec<f64> = runs.into_iter().map(|(_, v)| v).collect();
            match CellStats::from_values(&values) {
                Some(c) => {
                    cells.insert(algo, c);
                    samples.insert(algo, values);
                }
                None => log::warn!("{problem} {triplet} {algo}: no runs, cell omitted"),
            }
        }
        let (mut p_value, mut marker) = (None, None);
        if let (Some(nsga), Some(moead)) = (
            samples.get(&Algorithm::Nsga2Cdp),
            samples.get(&Algorithm::MoeadCdp),
        ) {
            if nsga.len() == moead.len() {
                if let Ok((p, m)) = wilcoxon_rank_sum(nsga, moead, alpha) {
                    p_value = Some(p);
                    marker = Some(m);
                }
            }
        }
        rows.push(StatsRow {
            problem,
            triplet,
            cells,
            p_value,
            marker,
        });
    }
    StatsTable { alpha, rows }
}

/// Scientific notation with a three-digit mantissa and a signed two-digit
/// exponent, e.g. `1.367E-01`.
pub fn format_sci(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.3E}");
    let (mantissa, exp) = s.split_once('E').expect("E format has an exponent");
    let exp: i32 = exp.parse().expect("E format exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}
