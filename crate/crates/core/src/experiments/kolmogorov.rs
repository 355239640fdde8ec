//! `sqrt(n) E X_n` along a ladder of `n`, approaching the mean of the
//! Kolmogorov distribution.

use serde::{Deserialize, Serialize};

use super::{default_seed, sample_ks, Aggregate, CellReport, ExperimentKind, ExperimentReport};
use crate::bounds::kolmogorov_limit_constant;
use crate::error::{Error, Result};
use crate::stats::Moments;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KolmogorovConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_kolmogorov_replications")]
    pub replications: usize,
    /// Allowed distance from the limit at the largest `n`.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_ns() -> Vec<usize> {
    (0..=6).map(|k| 4usize.pow(k)).collect()
}

fn default_kolmogorov_replications() -> usize {
    20_000
}

fn default_tolerance() -> f64 {
    0.02
}

impl Default for KolmogorovConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            ns: default_ns(),
            replications: default_kolmogorov_replications(),
            tolerance: default_tolerance(),
        }
    }
}

pub fn run_kolmogorov(cfg: &KolmogorovConfig) -> Result<ExperimentReport> {
    let kind = ExperimentKind::Kolmogorov;
    if cfg.ns.is_empty() || cfg.ns.contains(&0) || cfg.replications < 2 {
        return Err(Error::InvalidParameter(
            "need a non-empty ladder of n >= 1 and at least 2 replications".into(),
        ));
    }
    let limit = kolmogorov_limit_constant();
    let mut report = ExperimentReport::new(kind, cfg);
    let mut previous = f64::NEG_INFINITY;
    for &n in &cfg.ns {
        let root = (n as f64).sqrt();
        let xs = sample_ks(kind, &format!("n{n}"), cfg.seed, n, cfg.replications)?;
        let m: Moments = xs.iter().map(|x| root * x).collect();
        let agg = Aggregate::from_moments(&m);
        let mut out = CellReport::new(format!("n{n}")).param("n", n as f64);
        out.aggregate = Some(agg);
        out.set("limit", limit);
        out.set("difference", agg.mean - limit);
        if n == 1 {
            out.set("exact", 0.75);
            if (agg.mean - 0.75).abs() > 4.0 * agg.std_error {
                report.statistical_flags.push(format!(
                    "n1: estimate {} more than 4 SE from 0.75",
                    agg.mean
                ));
            }
        }
        if agg.mean < previous {
            report
                .notes
                .push(format!("estimate decreases at n={n} (informational)"));
        }
        previous = agg.mean;
        report.cells.push(out);
    }
    let last = report
        .cells
        .last()
        .and_then(|c| c.aggregate)
        .expect("ladder is non-empty");
    report.summary.insert("final_estimate".into(), last.mean);
    report.summary.insert("limit".into(), limit);
    if (last.mean - limit).abs() > cfg.tolerance {
        report.hard_failures.push(format!(
            "final estimate {} not within {} of {limit}",
            last.mean, cfg.tolerance
        ));
    }
    Ok(report)
}
