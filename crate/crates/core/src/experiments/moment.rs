//! Monte Carlo `E exp(t X_n)` against the exponential moment bound.

use serde::{Deserialize, Serialize};

use super::{default_seed, sample_ks, Aggregate, CellReport, ExperimentKind, ExperimentReport};
use crate::bounds::lemma31_moment_bound;
use crate::error::{Error, Result};
use crate::stats::Moments;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_ts")]
    pub ts: Vec<f64>,
    #[serde(default = "default_moment_replications")]
    pub replications: usize,
    /// Cells whose relative standard error exceeds this are skipped.
    #[serde(default = "default_max_relative_se")]
    pub max_relative_se: f64,
}

fn default_ns() -> Vec<usize> {
    vec![16, 64]
}

fn default_ts() -> Vec<f64> {
    vec![1.0, 4.0, 8.0]
}

fn default_moment_replications() -> usize {
    50_000
}

fn default_max_relative_se() -> f64 {
    0.25
}

impl Default for MomentConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            ns: default_ns(),
            ts: default_ts(),
            replications: default_moment_replications(),
            max_relative_se: default_max_relative_se(),
        }
    }
}

pub fn run_moment_bound(cfg: &MomentConfig) -> Result<ExperimentReport> {
    let kind = ExperimentKind::MomentBound;
    if cfg.replications < 2 || cfg.ns.contains(&0) {
        return Err(Error::InvalidParameter(
            "need n >= 1 and at least 2 replications".into(),
        ));
    }
    if let Some(t) = cfg.ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    let mut report = ExperimentReport::new(kind, cfg);
    for &n in &cfg.ns {
        let xs = sample_ks(kind, &format!("n{n}"), cfg.seed, n, cfg.replications)?;
        for &t in &cfg.ts {
            let m: Moments = xs.iter().map(|x| (t * x).exp()).collect();
            let agg = Aggregate::from_moments(&m);
            let bound = lemma31_moment_bound(t, n as f64);
            let id = format!("n{n}_t{t}");
            let mut out = CellReport::new(&id).param("n", n as f64).param("t", t);
            out.set("bound", bound);
            let relative = agg.std_error / agg.mean;
            if !(relative.is_finite() && relative <= cfg.max_relative_se) {
                out.notes.push(format!(
                    "skipped: relative standard error {relative} too large"
                ));
                report
                    .notes
                    .push(format!("{id} skipped, estimator variance too large"));
                report.cells.push(out);
                continue;
            }
            out.aggregate = Some(agg);
            if agg.mean > bound + 3.0 * agg.std_error {
                report.statistical_flags.push(format!(
                    "{id}: estimate {} exceeds bound {bound} + 3 SE ({})",
                    agg.mean, agg.std_error
                ));
            }
            report.cells.push(out);
        }
    }
    Ok(report)
}
