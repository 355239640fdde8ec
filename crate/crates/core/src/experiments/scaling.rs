//! Log-log slope of mean jittered star discrepancy against `N = m^d`.

use serde::{Deserialize, Serialize};

use super::{
    default_record_limit, default_seed, fill_star_cell, replicate_star, star_options, CellReport,
    ExperimentKind, ExperimentReport,
};
use crate::bounds::{thm1_lower, thm1_upper};
use crate::discrepancy::MethodPreference;
use crate::error::{Error, Result};
use crate::generators::gen_jittered;
use crate::partition::checked_cell_count;
use crate::stats::ols;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub d: usize,
    /// Ladder of grid resolutions; at least three.
    pub ms: Vec<usize>,
    #[serde(default = "default_scaling_replications")]
    pub replications: usize,
    #[serde(default)]
    pub method: MethodPreference,
    #[serde(default = "default_record_limit")]
    pub record_limit: usize,
}

fn default_scaling_replications() -> usize {
    200
}

impl ScalingConfig {
    pub fn new(d: usize, ms: Vec<usize>) -> Self {
        Self {
            seed: default_seed(),
            d,
            ms,
            replications: default_scaling_replications(),
            method: MethodPreference::Auto,
            record_limit: default_record_limit(),
        }
    }
}

/// Exponent of `N` in the upper bound's leading term: `-1` for `d = 1`,
/// `-(1/2 + 1/(2d))` otherwise.
pub fn target_exponent(d: usize) -> f64 {
    if d == 1 {
        -1.0
    } else {
        -(0.5 + 0.5 / d as f64)
    }
}

pub fn run_scaling(cfg: &ScalingConfig) -> Result<ExperimentReport> {
    let kind = ExperimentKind::Scaling;
    if cfg.ms.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "scaling needs at least 3 ladder points, got {}",
            cfg.ms.len()
        )));
    }
    if cfg.replications == 0 {
        return Err(Error::InvalidParameter(
            "replications must be at least 1".into(),
        ));
    }
    let mut report = ExperimentReport::new(kind, cfg);
    let opts = star_options(cfg.method);
    let d = cfg.d;
    let (mut xs, mut ys, mut corrected) = (Vec::new(), Vec::new(), Vec::new());
    for &m in &cfg.ms {
        let n = checked_cell_count(m, d)?;
        let id = format!("d{d}_m{m}");
        let (records, fell_back) =
            replicate_star(kind, &id, cfg.seed, cfg.replications, &opts, |s| {
                gen_jittered(m, d, s)
            })?;
        let mut out = CellReport::new(&id)
            .param("d", d as f64)
            .param("m", m as f64)
            .param("N", n as f64);
        out.stretch = fell_back || records.iter().any(|r| !r.is_exact);
        fill_star_cell(&mut out, records, cfg.record_limit)?;
        let mean = out.aggregate.expect("filled").mean;
        if n >= 2 {
            let (lo, hi) = (thm1_lower(n as f64, d)?, thm1_upper(n as f64, d)?);
            out.set("thm1_lower", lo);
            out.set("thm1_upper", hi);
            let inside = lo <= mean && mean <= hi;
            out.set("inside_envelope", if inside { 1.0 } else { 0.0 });
            if !inside {
                out.notes
                    .push(format!("mean {mean} outside [{lo}, {hi}] (informational)"));
            }
        }
        xs.push((n as f64).ln());
        ys.push(mean.ln());
        corrected.push(mean.ln() - 0.5 * (n as f64).ln().ln());
        report.cells.push(out);
    }
    let fit = ols(&xs, &ys)
        .ok_or_else(|| Error::InvalidParameter("ladder values of N must differ".into()))?;
    report.summary.insert("slope".into(), fit.slope);
    report.summary.insert("intercept".into(), fit.intercept);
    report
        .summary
        .insert("slope_std_error".into(), fit.slope_std_error);
    report.summary.insert(
        "slope_band_low".into(),
        fit.slope - 2.0 * fit.slope_std_error,
    );
    report.summary.insert(
        "slope_band_high".into(),
        fit.slope + 2.0 * fit.slope_std_error,
    );
    report.summary.insert("target".into(), target_exponent(d));
    // Informational: slope of mean / sqrt(log N), removing the logarithmic
    // factor of the upper bound for d >= 2. Needs N > e on every rung.
    if d >= 2 && xs.iter().all(|&x| x > 1.0) {
        if let Some(fit) = ols(&xs, &corrected) {
            report
                .summary
                .insert("slope_log_corrected".into(), fit.slope);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_ladder_is_rejected() {
        assert!(run_scaling(&ScalingConfig::new(2, vec![2, 4])).is_err());
    }

    #[test]
    fn targets() {
        assert_eq!(target_exponent(1), -1.0);
        assert_eq!(target_exponent(2), -0.75);
        assert!((target_exponent(3) + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn one_dimensional_slope_is_near_minus_one() {
        let mut cfg = ScalingConfig::new(1, vec![8, 16, 32, 64]);
        cfg.replications = 100;
        let rep = run_scaling(&cfg).unwrap();
        let slope = rep.summary["slope"];
        assert!((-1.15..=-0.85).contains(&slope), "{slope}");
        assert_eq!(rep.cells.len(), 4);
    }
}
