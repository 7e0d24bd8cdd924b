//! Simulation campaigns over random unicast instances.
//!
//! Every `(n, side, run)` triple gets its own seed, so results do not
//! depend on how runs are spread over threads.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mechanism::{Bids, MechanismId, MechanismOptions};
use crate::model::format_micro;
use crate::oracle::gen_random_instance;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "n,side,mechanism,mean_welfare,mean_value,mean_eta,baseline_value";

fn default_runs() -> usize {
    500
}

fn default_mechanisms() -> Vec<MechanismId> {
    vec![MechanismId::Alg1Instant, MechanismId::Alg2Maxc, MechanismId::Sqrtn]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub client_counts: Vec<usize>,
    pub side_sizes: Vec<usize>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_mechanisms")]
    pub mechanisms: Vec<MechanismId>,
    /// CSV destination; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.runs == 0 {
            errs.push("runs must be at least 1".to_string());
        }
        if self.mechanisms.is_empty() {
            errs.push("no mechanisms".to_string());
        }
        for &n in &self.client_counts {
            for &s in &self.side_sizes {
                if n == 0 || s >= n {
                    errs.push(format!("side size {s} does not fit {n} clients"));
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }
}

/// Means over all runs of one `(n, side, mechanism)` point, in micro-units
/// (`mean_eta` in millionths of a transmission).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub side: usize,
    pub mechanism: MechanismId,
    pub mean_welfare: i64,
    pub mean_value: i64,
    pub mean_eta: i64,
    pub baseline_value: i64,
}

impl ExperimentRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.side,
            self.mechanism,
            format_micro(self.mean_welfare),
            format_micro(self.mean_value),
            format_micro(self.mean_eta),
            format_micro(self.baseline_value),
        )
    }
}

/// Sum of the `eta` largest values.
pub fn no_coding_baseline(values: &[i64], eta: usize) -> Result<i64> {
    if eta > values.len() {
        return Err(Error::Precondition(format!("eta {eta} exceeds {} clients", values.len())));
    }
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    Ok(v[..eta].iter().sum())
}

/// Seed for one run, independent of scheduling.
pub fn run_seed(base: u64, n: usize, side: usize, run: usize) -> u64 {
    [n as u64, side as u64, run as u64].into_iter().fold(splitmix(base), |h, x| splitmix(h ^ x))
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Default)]
struct Tally {
    welfare: i64,
    value: i64,
    eta: i64,
    baseline: i64,
}

fn one_run(n: usize, side: usize, seed: u64, mechanisms: &[MechanismId], opts: &MechanismOptions) -> Result<Vec<Tally>> {
    let inst = gen_random_instance(n, side, seed)?;
    let bids = Bids::truthful(&inst);
    mechanisms
        .iter()
        .map(|id| {
            let mode = id.native_mode();
            let g = id.scheme(opts).code(&bids)?.matrix;
            let value = (0..n).filter(|&i| bids.recovers(&g, mode, i)).map(|i| bids.values[i]).sum();
            Ok(Tally {
                welfare: bids.welfare(&g, mode),
                value,
                eta: g.eta() as i64,
                baseline: no_coding_baseline(&bids.values, g.eta())?,
            })
        })
        .collect()
}

fn mean(sum: i128, runs: usize) -> i64 {
    let r = runs as i128;
    let q = if sum >= 0 { (2 * sum + r) / (2 * r) } else { -((-2 * sum + r) / (2 * r)) };
    q as i64
}

/// Runs every configured point and returns one row per mechanism, ordered
/// by `n`, then side size, then the configured mechanism order.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &MechanismOptions) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.client_counts {
        for &side in &cfg.side_sizes {
            let per_run = (0..cfg.runs)
                .into_par_iter()
                .map(|r| one_run(n, side, run_seed(cfg.base_seed, n, side, r), &cfg.mechanisms, opts))
                .collect::<Result<Vec<_>>>()?;
            for (k, &mechanism) in cfg.mechanisms.iter().enumerate() {
                let sum = |f: fn(&Tally) -> i64| per_run.iter().map(|t| f(&t[k]) as i128).sum::<i128>();
                rows.push(ExperimentRow {
                    n,
                    side,
                    mechanism,
                    mean_welfare: mean(sum(|t| t.welfare), cfg.runs),
                    mean_value: mean(sum(|t| t.value), cfg.runs),
                    mean_eta: mean(sum(|t| t.eta) * 1_000_000, cfg.runs),
                    baseline_value: mean(sum(|t| t.baseline), cfg.runs),
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{}", r.to_csv()).expect("writing to a string");
    }
    out
}
