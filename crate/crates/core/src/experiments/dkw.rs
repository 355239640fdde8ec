//! Tail frequency of the one-dimensional discrepancy against the DKW bound.

use serde::{Deserialize, Serialize};

use super::{default_seed, sample_ks, CellReport, ExperimentKind, ExperimentReport};
use crate::bounds::dkw_tail;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DkwConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_eps")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_dkw_replications")]
    pub replications: usize,
}

fn default_ns() -> Vec<usize> {
    vec![16, 64, 256]
}

fn default_eps() -> Vec<f64> {
    vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3]
}

fn default_dkw_replications() -> usize {
    100_000
}

impl Default for DkwConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            ns: default_ns(),
            epsilons: default_eps(),
            replications: default_dkw_replications(),
        }
    }
}

pub fn run_dkw_tails(cfg: &DkwConfig) -> Result<ExperimentReport> {
    let kind = ExperimentKind::DkwTails;
    if cfg.replications == 0 || cfg.ns.contains(&0) {
        return Err(Error::InvalidParameter(
            "need n >= 1 and at least one replication".into(),
        ));
    }
    if let Some(e) = cfg.epsilons.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be finite and >= 0, got {e}"
        )));
    }
    let mut report = ExperimentReport::new(kind, cfg);
    let r = cfg.replications as f64;
    for &n in &cfg.ns {
        // one sample of X_n serves every epsilon at this n
        let xs = sample_ks(kind, &format!("n{n}"), cfg.seed, n, cfg.replications)?;
        for &eps in &cfg.epsilons {
            let hits = xs.iter().filter(|&&x| x > eps).count();
            let freq = hits as f64 / r;
            let se = (freq * (1.0 - freq) / r).sqrt();
            let bound = dkw_tail(n as f64, eps);
            let id = format!("n{n}_eps{eps}");
            let mut out = CellReport::new(&id).param("n", n as f64).param("eps", eps);
            out.set("frequency", freq);
            out.set("binomial_std_error", se);
            out.set("bound", bound);
            out.set("exceedances", hits as f64);
            if freq > bound + 3.0 * se {
                report.statistical_flags.push(format!(
                    "{id}: tail frequency {freq} exceeds bound {bound} + 3 SE ({se})"
                ));
            }
            report.cells.push(out);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_respects_the_bound() {
        let cfg = DkwConfig {
            ns: vec![16, 64],
            epsilons: vec![0.0, 0.125, 0.3],
            replications: 5000,
            ..DkwConfig::default()
        };
        let rep = run_dkw_tails(&cfg).unwrap();
        assert!(
            rep.statistical_flags.is_empty(),
            "{:?}",
            rep.statistical_flags
        );
        let zero = rep.cell("n16_eps0").unwrap();
        assert_eq!(zero.value("frequency"), Some(1.0));
        assert_eq!(zero.value("bound"), Some(2.0));
        let c = rep.cell("n64_eps0.125").unwrap();
        assert!((c.value("bound").unwrap() - 0.270_670_566_5).abs() < 1e-9);
    }
}
