//! Seeded, replicated Monte Carlo studies.
//!
//! Every replication draws its randomness from
//! [`replication_seed`](crate::rng::replication_seed)`(master, kind, cell, r)`,
//! replications run in parallel, and aggregation walks the records in
//! replication order. A report therefore depends only on its config; the
//! wall-clock timings stored per record are the one exception, and
//! [`ExperimentReport::without_timing`] strips them for comparisons.

mod dkw;
mod hammersley;
mod kolmogorov;
mod moment;
mod partition_principle;
mod scaling;
mod table1;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{star_1d_exact, star_discrepancy, MethodPreference, StarOptions};
use crate::error::{Error, Result};
use crate::geometry::{PointSet, Provenance};
use crate::rng::{replication_seed, substream};
use crate::stats::Moments;

pub use dkw::{run_dkw_tails, DkwConfig};
pub use hammersley::{run_hammersley_compare, HammersleyCell, HammersleyConfig};
pub use kolmogorov::{run_kolmogorov, KolmogorovConfig};
pub use moment::{run_moment_bound, MomentConfig};
pub use partition_principle::{
    fine_grid_average, run_partition_principle, FineGridLadder, PartitionConfig, PartitionSource,
    PRINCIPLE_TOLERANCE,
};
pub use scaling::{run_scaling, target_exponent, ScalingConfig};
pub use table1::{run_table1, table1_reference, Table1Cell, Table1Config, TABLE1_REFERENCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Table1,
    PartitionPrinciple,
    Scaling,
    DkwTails,
    MomentBound,
    Kolmogorov,
    HammersleyCompare,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::Table1,
        Self::PartitionPrinciple,
        Self::Scaling,
        Self::DkwTails,
        Self::MomentBound,
        Self::Kolmogorov,
        Self::HammersleyCompare,
    ];

    /// Label used in seeds and file names.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::PartitionPrinciple => "partition_principle",
            Self::Scaling => "scaling",
            Self::DkwTails => "dkw_tails",
            Self::MomentBound => "moment_bound",
            Self::Kolmogorov => "kolmogorov",
            Self::HammersleyCompare => "hammersley_compare",
        }
    }

    /// Short name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::PartitionPrinciple => "partition",
            Self::Scaling => "scaling",
            Self::DkwTails => "dkw",
            Self::MomentBound => "moment",
            Self::Kolmogorov => "kolmogorov",
            Self::HammersleyCompare => "hammersley",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s || k.cli_name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment '{s}'")))
    }
}

/// Any experiment configuration; the JSON form carries a `kind` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentConfig {
    Table1(Table1Config),
    PartitionPrinciple(PartitionConfig),
    Scaling(ScalingConfig),
    DkwTails(DkwConfig),
    MomentBound(MomentConfig),
    Kolmogorov(KolmogorovConfig),
    HammersleyCompare(HammersleyConfig),
}

impl ExperimentConfig {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Self::Table1(_) => ExperimentKind::Table1,
            Self::PartitionPrinciple(_) => ExperimentKind::PartitionPrinciple,
            Self::Scaling(_) => ExperimentKind::Scaling,
            Self::DkwTails(_) => ExperimentKind::DkwTails,
            Self::MomentBound(_) => ExperimentKind::MomentBound,
            Self::Kolmogorov(_) => ExperimentKind::Kolmogorov,
            Self::HammersleyCompare(_) => ExperimentKind::HammersleyCompare,
        }
    }

    /// Parses a config for a known kind. A `kind` field in the JSON, if
    /// present, must agree.
    pub fn from_json(kind: ExperimentKind, text: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::InvalidParameter("config must be a JSON object".into()))?;
        if let Some(tag) = obj.get("kind").and_then(|v| v.as_str()) {
            let found: ExperimentKind = tag.parse()?;
            if found != kind {
                return Err(Error::InvalidParameter(format!(
                    "config is for '{found}', not '{kind}'"
                )));
            }
        }
        obj.insert(
            "kind".into(),
            serde_json::Value::String(kind.as_str().into()),
        );
        Ok(serde_json::from_value(value)?)
    }

    pub fn run(&self) -> Result<ExperimentReport> {
        match self {
            Self::Table1(c) => run_table1(c),
            Self::PartitionPrinciple(c) => run_partition_principle(c),
            Self::Scaling(c) => run_scaling(c),
            Self::DkwTails(c) => run_dkw_tails(c),
            Self::MomentBound(c) => run_moment_bound(c),
            Self::Kolmogorov(c) => run_kolmogorov(c),
            Self::HammersleyCompare(c) => run_hammersley_compare(c),
        }
    }
}

/// One replication of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: u64,
    pub seed: u64,
    pub value: f64,
    pub method: String,
    pub is_exact: bool,
    #[serde(default)]
    pub wall_time_ms: f64,
}

/// Summary statistics over a cell's replications.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
}

impl Aggregate {
    pub fn from_moments(m: &Moments) -> Self {
        Self {
            count: m.count(),
            mean: m.mean(),
            std_dev: m.std_dev(),
            std_error: m.std_error(),
            min: m.min(),
            max: m.max(),
        }
    }

    /// Aggregates records in order. Mixing exact and non-exact records is
    /// an error.
    pub fn from_records(cell: &str, records: &[ReplicationRecord]) -> Result<Self> {
        if let Some(first) = records.first() {
            if records.iter().any(|r| r.is_exact != first.is_exact) {
                return Err(Error::MixedMethods {
                    cell: cell.to_string(),
                });
            }
        }
        Ok(Self::from_moments(
            &records.iter().map(|r| r.value).collect(),
        ))
    }
}

/// Results for one cell of an experiment.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub id: String,
    /// Inputs such as `d`, `m`, `N`, `eps`.
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_exact: Option<bool>,
    /// Cell computed beyond the gating budget.
    #[serde(default)]
    pub stretch: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<Aggregate>,
    /// Derived numbers: exact values, Monte Carlo estimates, bound
    /// annotations, references.
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<ReplicationRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CellReport {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            ..Self::default()
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.values.insert(key.to_string(), value);
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    StatisticalFlag,
    HardFailure,
}

impl Status {
    /// Process exit code: 0 ok, 2 hard failure, 3 statistical flag only.
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::HardFailure => 2,
            Self::StatisticalFlag => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub config: serde_json::Value,
    pub cells: Vec<CellReport>,
    #[serde(default)]
    pub summary: BTreeMap<String, f64>,
    /// Deterministic checks that failed.
    #[serde(default)]
    pub hard_failures: Vec<String>,
    /// Monte Carlo bands that were exceeded.
    #[serde(default)]
    pub statistical_flags: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub(crate) fn new<C: Serialize>(kind: ExperimentKind, config: &C) -> Self {
        Self {
            kind,
            config: serde_json::to_value(config).expect("configs serialize"),
            cells: Vec::new(),
            summary: BTreeMap::new(),
            hard_failures: Vec::new(),
            statistical_flags: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn status(&self) -> Status {
        if !self.hard_failures.is_empty() {
            Status::HardFailure
        } else if !self.statistical_flags.is_empty() {
            Status::StatisticalFlag
        } else {
            Status::Ok
        }
    }

    pub fn cell(&self, id: &str) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.id == id)
    }

    /// Copy with all wall-clock timings zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.cells {
            for rec in &mut c.records {
                rec.wall_time_ms = 0.0;
            }
        }
        r
    }

    /// Writes `<kind>.json` (everything) and `<kind>.csv` (one row per cell)
    /// into `dir`, returning both paths.
    pub fn write_to_dir(&self, dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.kind.as_str()));
        let csv_path = dir.join(format!("{}.csv", self.kind.as_str()));
        std::fs::write(&json, serde_json::to_string_pretty(self)?)?;
        self.write_csv(std::fs::File::create(&csv_path)?)?;
        Ok((json, csv_path))
    }

    /// Aggregates as CSV. Numbers are rounded to 6 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let params: BTreeSet<&str> = self
            .cells
            .iter()
            .flat_map(|c| c.params.keys().map(String::as_str))
            .collect();
        let values: BTreeSet<&str> = self
            .cells
            .iter()
            .flat_map(|c| c.values.keys().map(String::as_str))
            .collect();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["cell"];
        header.extend(params.iter().copied());
        header.extend([
            "method",
            "is_exact",
            "stretch",
            "count",
            "mean",
            "std_dev",
            "std_error",
            "min",
            "max",
        ]);
        header.extend(values.iter().copied());
        w.write_record(&header)?;
        for c in &self.cells {
            let mut row = vec![c.id.clone()];
            row.extend(
                params
                    .iter()
                    .map(|k| c.params.get(*k).map_or(String::new(), |v| sig6(*v))),
            );
            row.push(c.method.clone().unwrap_or_default());
            row.push(c.is_exact.map_or(String::new(), |b| b.to_string()));
            row.push(c.stretch.to_string());
            match &c.aggregate {
                Some(a) => {
                    row.push(a.count.to_string());
                    row.extend([a.mean, a.std_dev, a.std_error, a.min, a.max].map(sig6));
                }
                None => row.extend(std::iter::repeat_n(String::new(), 6)),
            }
            row.extend(
                values
                    .iter()
                    .map(|k| c.values.get(*k).map_or(String::new(), |v| sig6(*v))),
            );
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest decimal form of `x` rounded to 6 significant digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().expect("formatted float parses");
    rounded.to_string()
}

/// Default replication count: 1000 for `m <= 10`, 200 above.
pub fn default_replications(m: usize) -> usize {
    if m <= 10 {
        1000
    } else {
        200
    }
}

/// Runs `replications` star-discrepancy evaluations of `generate(seed)`.
///
/// With [`MethodPreference::Auto`] or [`MethodPreference::ExactBb`], a cell whose replications come back
/// partly exact and partly not is recomputed entirely with the heuristic so
/// that the cell stays homogeneous; the second return value reports that.
pub(crate) fn replicate_star<G>(
    kind: ExperimentKind,
    cell: &str,
    master: u64,
    replications: usize,
    opts: &StarOptions,
    generate: G,
) -> Result<(Vec<ReplicationRecord>, bool)>
where
    G: Fn(u64) -> Result<PointSet> + Sync,
{
    let run = |opts: &StarOptions| -> Result<Vec<ReplicationRecord>> {
        (0..replications as u64)
            .into_par_iter()
            .map(|r| {
                let seed = replication_seed(master, kind.as_str(), cell, r);
                let points = generate(seed)?;
                let started = Instant::now();
                let res = star_discrepancy(&points, &StarOptions { seed, ..*opts })?;
                Ok(ReplicationRecord {
                    replication: r,
                    seed,
                    value: res.value,
                    method: res.method.as_str().to_string(),
                    is_exact: res.is_exact,
                    wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
                })
            })
            .collect()
    };
    let records = run(opts)?;
    let mixed = records.iter().any(|r| r.is_exact != records[0].is_exact);
    if mixed
        && matches!(
            opts.method,
            MethodPreference::Auto | MethodPreference::ExactBb
        )
    {
        let heuristic = StarOptions {
            method: MethodPreference::Heuristic,
            ..*opts
        };
        return Ok((run(&heuristic)?, true));
    }
    Ok((records, false))
}

/// Draws `replications` copies of the one-dimensional discrepancy `X_n` of
/// `n` uniform points, each via [`star_1d_exact`].
pub(crate) fn sample_ks(
    kind: ExperimentKind,
    cell: &str,
    master: u64,
    n: usize,
    replications: usize,
) -> Result<Vec<f64>> {
    (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let seed = replication_seed(master, kind.as_str(), cell, r);
            let mut rng = substream(seed, 0);
            let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let points = PointSet::new(1, xs, Provenance::new("uniform", seed))?;
            Ok(star_1d_exact(&points)?.value)
        })
        .collect()
}

pub(crate) fn method_label(records: &[ReplicationRecord]) -> Option<String> {
    let first = records.first()?;
    if records.iter().all(|r| r.method == first.method) {
        Some(first.method.clone())
    } else {
        Some("mixed".into())
    }
}

pub(crate) fn fill_star_cell(
    cell: &mut CellReport,
    records: Vec<ReplicationRecord>,
    record_limit: usize,
) -> Result<()> {
    cell.aggregate = Some(Aggregate::from_records(&cell.id, &records)?);
    cell.method = method_label(&records);
    cell.is_exact = records.first().map(|r| r.is_exact);
    if records.len() <= record_limit {
        cell.records = records;
    }
    Ok(())
}

pub(crate) fn default_seed() -> u64 {
    20_150_701
}

pub(crate) fn default_record_limit() -> usize {
    10_000
}

pub(crate) fn star_options(method: MethodPreference) -> StarOptions {
    StarOptions {
        method,
        ..StarOptions::default()
    }
}
