//! Experiment sweeps.
//!
//! CSV columns, one row per (algorithm, k, trial) in that order:
//! `algorithm,k,trial,frob_norm,spec_norm,swaps,init_millis,exchange_millis,bounds_ok`.
//! `frob_norm` and `spec_norm` are the norms of `X_S^+ X` (not squared);
//! `bounds_ok` is true when the Frobenius, spectral and per-column bounds of a
//! `c`-locally maximal selection all hold for the trial's `(m, k, n, c)`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use subsel_core::{bound_report, gaussian_matrix, graph_singular_matrix, GraphSpec, Matrix};

use crate::config::{ExperimentConfig, GeneratorKind};
use crate::error::RunError;

pub const CSV_HEADER: [&str; 9] = [
    "algorithm",
    "k",
    "trial",
    "frob_norm",
    "spec_norm",
    "swaps",
    "init_millis",
    "exchange_millis",
    "bounds_ok",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub algorithm: String,
    pub k: usize,
    pub trial: usize,
    pub frob_norm: f64,
    pub spec_norm: f64,
    pub swaps: usize,
    pub init_millis: f64,
    pub exchange_millis: f64,
    pub bounds_ok: bool,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `t`; every algorithm and every k sees the same matrix.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ splitmix64(trial as u64)
}

pub fn generate(generator: GeneratorKind, m: usize, n: usize, seed: u64) -> subsel_core::Result<Matrix> {
    match generator {
        GeneratorKind::Gaussian => gaussian_matrix(m, n, seed),
        GeneratorKind::Graph => graph_singular_matrix(&GraphSpec::new(m + 1, n, seed)),
    }
}

pub fn trial_matrix(cfg: &ExperimentConfig, trial: usize) -> subsel_core::Result<Matrix> {
    generate(cfg.generator, cfg.m, cfg.n, trial_seed(cfg.seed, trial))
}

fn millis(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<TrialResult>, RunError> {
    let x = trial_matrix(cfg, trial)?;
    let mut rows = Vec::with_capacity(cfg.algorithms.len() * cfg.k_values.len());
    for algo in &cfg.algorithms {
        for &k in &cfg.k_values {
            let run = algo.run(&x, k, cfg.c)?;
            let report = bound_report(&x, &run.selection, cfg.c, None)?;
            rows.push(TrialResult {
                algorithm: algo.name(),
                k,
                trial,
                frob_norm: report.frob_sq.sqrt(),
                spec_norm: report.spec_sq.sqrt(),
                swaps: run.swaps,
                init_millis: millis(run.init_time),
                exchange_millis: millis(run.exchange_time),
                bounds_ok: report.norms_ok(),
            });
        }
    }
    Ok(rows)
}

/// Runs every trial (concurrently) and returns rows sorted by
/// (algorithm order, k order, trial).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>, RunError> {
    cfg.validate()?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Result<Vec<_>, _>>()?;

    let stride = cfg.k_values.len();
    let mut rows = Vec::with_capacity(per_trial.len() * cfg.algorithms.len() * stride);
    for a in 0..cfg.algorithms.len() {
        for j in 0..stride {
            for trial_rows in &per_trial {
                rows.push(trial_rows[a * stride + j].clone());
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[TrialResult], out: W) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<TrialResult>, RunError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(crate::error::usage(format!("unexpected CSV header: {}", header.join(","))));
    }
    Ok(r.deserialize().collect::<Result<Vec<TrialResult>, _>>()?)
}

/// Mean and sample standard deviation (zero for a single value).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Stat {
        let v: Vec<f64> = values.into_iter().collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let std = if v.len() > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Stat { mean, std }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub k: usize,
    pub inv_frob: Stat,
    pub swaps: Stat,
    pub trials: usize,
}

/// Per-(algorithm, k) statistics, in first-appearance order.
pub fn summarize(rows: &[TrialResult]) -> Vec<SummaryRow> {
    let mut keys: Vec<(&str, usize)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.algorithm.as_str(), r.k)) {
            keys.push((&r.algorithm, r.k));
        }
    }
    keys.into_iter()
        .map(|(algorithm, k)| {
            let group: Vec<&TrialResult> = rows
                .iter()
                .filter(|r| r.algorithm == algorithm && r.k == k)
                .collect();
            SummaryRow {
                algorithm: algorithm.to_string(),
                k,
                inv_frob: Stat::of(group.iter().map(|r| 1.0 / r.frob_norm)),
                swaps: Stat::of(group.iter().map(|r| r.swaps as f64)),
                trials: group.len(),
            }
        })
        .collect()
}

pub fn write_summary<W: Write>(summary: &[SummaryRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{:<26} {:>5} {:>12} {:>10} {:>9} {:>8}", "algorithm", "k", "1/frob", "std", "swaps", "std")?;
    for s in summary {
        writeln!(
            out,
            "{:<26} {:>5} {:>12.6} {:>10.6} {:>9.2} {:>8.2}",
            s.algorithm, s.k, s.inv_frob.mean, s.inv_frob.std, s.swaps.mean, s.swaps.std
        )?;
    }
    Ok(())
}
