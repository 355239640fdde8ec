//! Hammersley set against jittered sampling and the regular grid, with the
//! corresponding upper bounds at the same `(N, d)`.

use serde::{Deserialize, Serialize};

use super::{
    default_record_limit, default_seed, fill_star_cell, replicate_star, star_options, CellReport,
    ExperimentKind, ExperimentReport,
};
use crate::bounds::{hammersley_leading_bound, thm1_upper};
use crate::discrepancy::{star_discrepancy, MethodPreference};
use crate::error::{Error, Result};
use crate::generators::{gen_grid, gen_hammersley, gen_jittered, GridMode};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HammersleyCell {
    pub n: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HammersleyConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "HammersleyConfig::default_cells")]
    pub cells: Vec<HammersleyCell>,
    /// Jittered sets per cell.
    #[serde(default = "default_hammersley_replications")]
    pub replications: usize,
    #[serde(default)]
    pub method: MethodPreference,
    #[serde(default = "default_record_limit")]
    pub record_limit: usize,
}

fn default_hammersley_replications() -> usize {
    100
}

impl Default for HammersleyConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            cells: Self::default_cells(),
            replications: default_hammersley_replications(),
            method: MethodPreference::Auto,
            record_limit: default_record_limit(),
        }
    }
}

impl HammersleyConfig {
    pub fn default_cells() -> Vec<HammersleyCell> {
        [64, 256, 1024]
            .into_iter()
            .map(|n| HammersleyCell { n, d: 2 })
            .collect()
    }
}

/// `m` with `m^d == n`, if any.
fn exact_root(n: usize, d: usize) -> Option<usize> {
    let guess = (n as f64).powf(1.0 / d as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|&m| m > 0 && m.checked_pow(d as u32) == Some(n))
}

pub fn run_hammersley_compare(cfg: &HammersleyConfig) -> Result<ExperimentReport> {
    let kind = ExperimentKind::HammersleyCompare;
    if cfg.replications == 0 {
        return Err(Error::InvalidParameter(
            "replications must be at least 1".into(),
        ));
    }
    let mut report = ExperimentReport::new(kind, cfg);
    let opts = star_options(cfg.method);
    for &HammersleyCell { n, d } in &cfg.cells {
        if d < 2 || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "hammersley comparison needs d >= 2 and N >= 2, got N={n}, d={d}"
            )));
        }
        let id = format!("d{d}_n{n}");
        let mut out = CellReport::new(&id)
            .param("d", d as f64)
            .param("N", n as f64);
        let ham = star_discrepancy(&gen_hammersley(n, d)?, &opts)?;
        out.set("hammersley", ham.value);
        out.set("hammersley_is_exact", if ham.is_exact { 1.0 } else { 0.0 });
        out.set(
            "hammersley_leading_bound",
            hammersley_leading_bound(n as f64, d)?,
        );
        out.set("thm1_upper", thm1_upper(n as f64, d)?);
        if let Some(m) = exact_root(n, d) {
            let grid = star_discrepancy(&gen_grid(m, d, GridMode::Centered)?, &opts)?;
            out.set("grid", grid.value);
            let (records, fell_back) =
                replicate_star(kind, &id, cfg.seed, cfg.replications, &opts, |s| {
                    gen_jittered(m, d, s)
                })?;
            out.stretch = fell_back || records.iter().any(|r| !r.is_exact);
            fill_star_cell(&mut out, records, cfg.record_limit)?;
            out.set("jittered_mean", out.aggregate.expect("filled").mean);
        } else {
            out.notes.push(format!(
                "N={n} is not a perfect power of order {d}; no grid or jittered column"
            ));
        }
        report.cells.push(out);
    }
    Ok(report)
}
