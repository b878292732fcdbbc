//! Benchmark harness: per-problem sizes, derivation lengths, timings and
//! witness sizes, with min/max/mean aggregate rows.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

use wscan::saturation::{search, SearchLimits};
use wscan::witness::WitnessOptions;

use crate::pipeline::{load_problem, process};
use crate::{BenchArgs, BenchFormat, Outcome};

/// Problem files are recognized by this extension.
pub const PROBLEM_EXT: &str = "problem";

#[derive(Clone, Debug, Default, Serialize)]
pub struct Row {
    pub problem: String,
    pub input_size: Option<usize>,
    pub solved: bool,
    pub length: Option<usize>,
    pub scan_ms: Option<f64>,
    pub witness_ms: Option<f64>,
    pub witness_size: Option<usize>,
    pub verification: String,
}

fn bench_one(path: &Path, a: &BenchArgs) -> Row {
    let mut row = Row { problem: file_name(path), ..Row::default() };
    let p = match load_problem(path) {
        Ok(p) => p,
        Err(e) => {
            row.verification = format!("input error: {e:#}");
            return row;
        }
    };
    row.input_size = Some(p.input_size());
    let limits = SearchLimits { max_steps: a.max_steps, timeout: a.timeout, seed: a.seed, ..SearchLimits::default() };
    let t0 = Instant::now();
    let found = search(p.clauses.clone(), p.xs.clone(), limits).next();
    let scan = t0.elapsed();
    row.scan_ms = Some(ms(scan));
    let Some(d) = found else {
        row.verification = "no derivation".into();
        return row;
    };
    row.solved = true;
    row.length = Some(d.counted_len());
    let sol = process(d, &p, &WitnessOptions::default(), a.verify.then_some(a.timeout));
    row.witness_ms = Some(ms(sol.witness_time));
    match &sol.witness {
        Ok(w) => {
            row.witness_size = Some(w.size());
            row.verification = match &sol.report {
                Some(r) => r.verdict.to_string(),
                None => "skipped".into(),
            };
        }
        Err(e) => row.verification = format!("witness error: {e}"),
    }
    row
}

fn ms(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1_000_000.0).round() / 1000.0
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

pub fn problem_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == PROBLEM_EXT))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs the benchmark rows, `jobs` problems at a time; rows keep file order.
pub fn collect_rows(files: &[PathBuf], a: &BenchArgs) -> Vec<Row> {
    let rows: Mutex<Vec<Option<Row>>> = Mutex::new(vec![None; files.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..a.jobs.clamp(1, files.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(path) = files.get(i) else { break };
                let row = bench_one(path, a);
                rows.lock().expect("bench worker panicked")[i] = Some(row);
            });
        }
    });
    rows.into_inner().expect("bench worker panicked").into_iter().flatten().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Aggregate {
    pub statistic: String,
    pub input_size: Option<f64>,
    pub length: Option<f64>,
    pub scan_ms: Option<f64>,
    pub witness_ms: Option<f64>,
    pub witness_size: Option<f64>,
}

fn stat(values: &[f64], which: &str) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let v = match which {
        "min" => values.iter().copied().fold(f64::INFINITY, f64::min),
        "max" => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        _ => values.iter().sum::<f64>() / values.len() as f64,
    };
    Some((v * 1000.0).round() / 1000.0)
}

pub fn aggregates(rows: &[Row]) -> Vec<Aggregate> {
    let col = |f: &dyn Fn(&Row) -> Option<f64>| rows.iter().filter_map(f).collect::<Vec<f64>>();
    let input = col(&|r| r.input_size.map(|x| x as f64));
    let length = col(&|r| r.length.map(|x| x as f64));
    let scan = col(&|r| if r.solved { r.scan_ms } else { None });
    let wit = col(&|r| r.witness_ms);
    let size = col(&|r| r.witness_size.map(|x| x as f64));
    ["min", "max", "mean"]
        .iter()
        .map(|w| Aggregate {
            statistic: w.to_string(),
            input_size: stat(&input, w),
            length: stat(&length, w),
            scan_ms: stat(&scan, w),
            witness_ms: stat(&wit, w),
            witness_size: stat(&size, w),
        })
        .collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn run(a: &BenchArgs) -> Result<Outcome> {
    let files = problem_files(&a.dir)?;
    let rows = collect_rows(&files, a);
    match a.format {
        BenchFormat::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record([
                "problem",
                "input_size",
                "solved",
                "length",
                "scan_ms",
                "witness_ms",
                "witness_size",
                "verification",
            ])?;
            for r in &rows {
                w.write_record([
                    r.problem.clone(),
                    opt(&r.input_size),
                    r.solved.to_string(),
                    opt(&r.length),
                    opt(&r.scan_ms),
                    opt(&r.witness_ms),
                    opt(&r.witness_size),
                    r.verification.clone(),
                ])?;
            }
            if !rows.is_empty() {
                for g in aggregates(&rows) {
                    w.write_record([
                        g.statistic.clone(),
                        opt(&g.input_size),
                        String::new(),
                        opt(&g.length),
                        opt(&g.scan_ms),
                        opt(&g.witness_ms),
                        opt(&g.witness_size),
                        String::new(),
                    ])?;
                }
            }
            w.flush()?;
        }
        BenchFormat::Json => {
            let out = serde_json::json!({
                "rows": rows,
                "aggregates": if rows.is_empty() { Vec::new() } else { aggregates(&rows) },
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
    }
    Ok(Outcome::Ok)
}
