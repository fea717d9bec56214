//! Result files: per-run CSV, per-cell statistics, best-run populations and
//! the side-by-side comparison table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::stats::{format_sci, Marker, StatsTable};
use super::RunRecord;
use crate::algorithms::Algorithm;
use crate::error::{Error, Result};
use crate::problems::ProblemId;

/// Format of the statistics table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "md",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::parse(path, e.to_string())
}

fn write_records_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record([
        "problem", "eta", "zeta", "gamma", "algorithm", "run", "seed", "evaluations", "final_igd",
        "wall_seconds", "igd_trace",
    ])
    .map_err(|e| csv_err(path, e))?;
    for r in records {
        let trace: Vec<String> = r
            .igd_trace
            .iter()
            .map(|t| format!("{}:{}", t.evaluations, t.igd))
            .collect();
        w.write_record([
            r.problem.to_string(),
            r.triplet.eta.to_string(),
            r.triplet.zeta.to_string(),
            r.triplet.gamma.to_string(),
            r.algorithm.to_string(),
            r.run.to_string(),
            r.seed.to_string(),
            r.evaluations.to_string(),
            r.final_igd.to_string(),
            format!("{:.3}", r.wall_seconds),
            trace.join(";"),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn marker_label(m: Option<Marker>) -> &'static str {
    m.map(Marker::as_str).unwrap_or("")
}

/// Statistics table in the given format, one line per (cell, algorithm).
pub fn render_stats(table: &StatsTable, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("problem,eta,zeta,gamma,algorithm,runs,mean,std,p_value,nsga2_vs_moead\n");
        }
        OutputFormat::Markdown => {
            out.push_str("| problem | triplet | algorithm | runs | mean | std | p | NSGA-II vs MOEA/D |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
        }
    }
    for row in &table.rows {
        let p = row.p_value.map(format_sci).unwrap_or_default();
        for (algo, c) in &row.cells {
            let t = row.triplet;
            let _ = match format {
                OutputFormat::Csv => writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    row.problem, t.eta, t.zeta, t.gamma, algo, c.runs,
                    format_sci(c.mean), format_sci(c.std), p, marker_label(row.marker)
                ),
                OutputFormat::Markdown => writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} | {} |",
                    row.problem, t, algo, c.runs,
                    format_sci(c.mean), format_sci(c.std), p, marker_label(row.marker)
                ),
            };
        }
    }
    out
}

/// Markdown table with one row per triplet and a MOEA/D and NSGA-II column
/// per problem, `mean (std)`. NSGA-II entries carry a dagger when
/// significantly worse and a double dagger when significantly better.
pub fn render_comparison_table(table: &StatsTable) -> String {
    let problems: Vec<ProblemId> = {
        let mut p: Vec<ProblemId> = table.rows.iter().map(|r| r.problem).collect();
        p.dedup();
        p
    };
    let mut triplets = Vec::new();
    for r in &table.rows {
        if !triplets.contains(&r.triplet) {
            triplets.push(r.triplet);
        }
    }
    triplets.sort_by_key(super::stats::triplet_order);

    let mut out = String::new();
    out.push_str("| triplet |");
    for p in &problems {
        let _ = write!(out, " {p} MOEA/D-CDP | {p} NSGA-II-CDP |");
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &problems {
        out.push_str("---|---|");
    }
    out.push('\n');

    for t in &triplets {
        let _ = write!(out, "| {t} |");
        for p in &problems {
            let row = table.rows.iter().find(|r| r.problem == *p && r.triplet == *t);
            for algo in Algorithm::ALL {
                let cell = row.and_then(|r| r.cells.get(&algo).map(|c| (r, c)));
                match cell {
                    Some((r, c)) => {
                        let mark = match (algo, r.marker) {
                            (Algorithm::Nsga2Cdp, Some(Marker::Worse)) => "†",
                            (Algorithm::Nsga2Cdp, Some(Marker::Better)) => "‡",
                            _ => "",
                        };
                        let _ = write!(out, " {} ({}){mark} |", format_sci(c.mean), format_sci(c.std));
                    }
                    None => out.push_str(" - |"),
                }
            }
        }
        out.push('\n');
    }
    out
}

/// The best run of each (cell, algorithm): lowest final IGD, ties to the
/// lowest seed.
pub fn best_runs(records: &[RunRecord]) -> Vec<&RunRecord> {
    let mut best: BTreeMap<(ProblemId, [u64; 3], Algorithm), &RunRecord> = BTreeMap::new();
    for r in records {
        let key = (
            r.problem,
            [r.triplet.eta.to_bits(), r.triplet.zeta.to_bits(), r.triplet.gamma.to_bits()],
            r.algorithm,
        );
        best.entry(key)
            .and_modify(|b| {
                if r.final_igd.total_cmp(&b.final_igd).then(r.seed.cmp(&b.seed)).is_lt() {
                    *b = r;
                }
            })
            .or_insert(r);
    }
    best.into_values().collect()
}

fn write_population(r: &RunRecord, path: &Path) -> Result<()> {
    let t = r.triplet;
    let mut s = format!(
        "# {} eta={} zeta={} gamma={} algorithm={} run={} seed={} igd={}\n",
        r.problem, t.eta, t.zeta, t.gamma, r.algorithm, r.run, r.seed, r.final_igd
    );
    for (f, v) in r.objectives.iter().zip(&r.violations) {
        let cols: Vec<String> = f.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{} {}", cols.join(" "), v);
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

/// Writes `records.csv`, `stats.<ext>` and `fronts/best_*.txt` under `dir`
/// and returns the paths written.
pub fn emit_outputs(
    records: &[RunRecord],
    table: &StatsTable,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let records_path = dir.join("records.csv");
    write_records_csv(records, &records_path)?;
    written.push(records_path);

    let stats_path = dir.join(format!("stats.{}", format.extension()));
    fs::write(&stats_path, render_stats(table, format)).map_err(|e| Error::io(&stats_path, e))?;
    written.push(stats_path);

    let fronts = dir.join("fronts");
    fs::create_dir_all(&fronts).map_err(|e| Error::io(&fronts, e))?;
    for r in best_runs(records) {
        let t = r.triplet;
        let path = fronts.join(format!(
            "best_{}_eta={}_zeta={}_gamma={}_{}.txt",
            r.problem, t.eta, t.zeta, t.gamma, r.algorithm
        ));
        write_population(r, &path)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stats::summarize;
    use crate::solution::DifficultyTriplet;

    fn rec(algorithm: Algorithm, run: usize, seed: u64, igd: f64) -> RunRecord {
        RunRecord {
            problem: ProblemId::new(1).unwrap(),
            triplet: DifficultyTriplet::ZERO,
            algorithm,
            run,
            seed,
            evaluations: 100,
            final_igd: igd,
            igd_trace: vec![],
            wall_seconds: 0.0,
            objectives: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            violations: vec![0.0, 0.0],
        }
    }

    #[test]
    fn best_run_ties_go_to_lowest_seed() {
        let rs = vec![
            rec(Algorithm::MoeadCdp, 0, 9, 0.2),
            rec(Algorithm::MoeadCdp, 1, 4, 0.1),
            rec(Algorithm::MoeadCdp, 2, 2, 0.1),
            rec(Algorithm::Nsga2Cdp, 0, 1, 0.3),
        ];
        let best = best_runs(&rs);
        assert_eq!(best.len(), 2);
        assert_eq!(best[0].seed, 2);
        assert_eq!(best[1].seed, 1);
    }

    #[test]
    fn table_marks_significantly_worse_nsga() {
        let mut rs = Vec::new();
        for i in 0..20 {
            rs.push(rec(Algorithm::MoeadCdp, i, i as u64, 0.1 + i as f64 * 1e-3));
            rs.push(rec(Algorithm::Nsga2Cdp, i, 100 + i as u64, 0.5 + i as f64 * 1e-3));
        }
        let table = summarize(&rs, 0.05);
        let md = render_comparison_table(&table);
        assert!(md.contains("†"), "{md}");
        assert!(!md.contains("‡"));
        assert!(md.contains("(0.00,0.00,0.00)"));
        let csv = render_stats(&table, OutputFormat::Csv);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().ends_with(",worse"));
    }

    #[test]
    fn emit_writes_expected_files() {
        let dir = tempfile::tempdir().unwrap();
        let rs = vec![rec(Algorithm::MoeadCdp, 0, 1, 0.2), rec(Algorithm::Nsga2Cdp, 0, 2, 0.3)];
        let table = summarize(&rs, 0.05);
        let written = emit_outputs(&rs, &table, dir.path(), OutputFormat::Markdown).unwrap();
        assert_eq!(written.len(), 4);
        let csv = fs::read_to_string(dir.path().join("records.csv")).unwrap();
        assert!(csv.starts_with("problem,eta,zeta,gamma,algorithm,run,seed"));
        assert_eq!(csv.lines().count(), 3);
        assert!(dir.path().join("stats.md").exists());
        assert!("tsv".parse::<OutputFormat>().is_err());
    }
}
