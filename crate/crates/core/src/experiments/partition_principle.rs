//! Expected L² discrepancy of partition-jittered sets against i.i.d.
//! uniform sets of the same size, exactly and by simulation.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    default_record_limit, default_seed, Aggregate, CellReport, ExperimentKind, ExperimentReport,
    ReplicationRecord,
};
use crate::discrepancy::{expected_l2sq_partition, expected_l2sq_random, l2_star};
use crate::error::{Error, Result};
use crate::generators::{gen_partition_jittered, gen_uniform};
use crate::partition::{
    grid_partition, random_box_partition, randomized_fine_grid_partition, Partition, PartitionSpec,
};
use crate::rng::replication_seed;

/// Slack allowed in `E L₂²(partition) <= E L₂²(random)`.
pub const PRINCIPLE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PartitionSource {
    Grid {
        m: usize,
        d: usize,
    },
    FineGrid {
        m_fine: usize,
        n: usize,
        d: usize,
        seed: u64,
    },
    RandomBoxes {
        n: usize,
        d: usize,
        pieces_per_cell: usize,
        seed: u64,
    },
    File {
        path: PathBuf,
    },
    Inline {
        spec: PartitionSpec,
    },
}

impl PartitionSource {
    pub fn build(&self) -> Result<Partition> {
        match self {
            Self::Grid { m, d } => grid_partition(*m, *d),
            Self::FineGrid { m_fine, n, d, seed } => {
                randomized_fine_grid_partition(*m_fine, *n, *d, *seed)
            }
            Self::RandomBoxes {
                n,
                d,
                pieces_per_cell,
                seed,
            } => random_box_partition(*n, *d, *pieces_per_cell, *seed),
            Self::File { path } => Partition::load(path),
            Self::Inline { spec } => Partition::from_spec(spec),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Grid { m, d } => format!("grid_m{m}_d{d}"),
            Self::FineGrid { m_fine, n, d, seed } => format!("fine_m{m_fine}_n{n}_d{d}_s{seed}"),
            Self::RandomBoxes {
                n,
                d,
                pieces_per_cell,
                seed,
            } => format!("boxes_n{n}_d{d}_p{pieces_per_cell}_s{seed}"),
            Self::File { path } => format!("file_{}", path.display()),
            Self::Inline { spec } => format!("inline_n{}_d{}", spec.n_cells, spec.dim),
        }
    }
}

/// Refinement ladder: for each `m_fine`, the exact expectation averaged
/// over `seeds` randomized fine-grid partitions into `n` cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FineGridLadder {
    pub n: usize,
    pub d: usize,
    pub m_fine: Vec<usize>,
    pub seeds: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_partition_replications")]
    pub replications: usize,
    #[serde(default = "PartitionConfig::default_partitions")]
    pub partitions: Vec<PartitionSource>,
    #[serde(default = "PartitionConfig::default_ladder")]
    pub ladder: Option<FineGridLadder>,
    #[serde(default = "default_record_limit")]
    pub record_limit: usize,
}

fn default_partition_replications() -> usize {
    10_000
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            seed: default_seed(),
            replications: default_partition_replications(),
            partitions: Self::default_partitions(),
            ladder: Self::default_ladder(),
            record_limit: default_record_limit(),
        }
    }
}

impl PartitionConfig {
    pub fn default_partitions() -> Vec<PartitionSource> {
        vec![
            PartitionSource::Grid { m: 1, d: 2 },
            PartitionSource::Grid { m: 2, d: 1 },
            PartitionSource::Grid { m: 3, d: 2 },
            PartitionSource::FineGrid {
                m_fine: 4,
                n: 4,
                d: 2,
                seed: 0,
            },
            PartitionSource::RandomBoxes {
                n: 5,
                d: 2,
                pieces_per_cell: 3,
                seed: 0,
            },
        ]
    }

    pub fn default_ladder() -> Option<FineGridLadder> {
        Some(FineGridLadder {
            n: 4,
            d: 2,
            m_fine: vec![2, 4, 8, 16],
            seeds: 20,
        })
    }
}

/// Mean exact `E L₂²` over `seeds` randomized fine-grid partitions.
pub fn fine_grid_average(m_fine: usize, n: usize, d: usize, seeds: u64) -> Result<f64> {
    if seeds == 0 {
        return Err(Error::InvalidParameter("need at least one seed".into()));
    }
    let values = (0..seeds)
        .into_par_iter()
        .map(|s| {
            Ok(expected_l2sq_partition(&randomized_fine_grid_partition(
                m_fine, n, d, s,
            )?))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / seeds as f64)
}

fn simulate<G>(cell: &str, master: u64, reps: usize, generate: G) -> Result<Vec<ReplicationRecord>>
where
    G: Fn(u64) -> Result<crate::geometry::PointSet> + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let seed =
                replication_seed(master, ExperimentKind::PartitionPrinciple.as_str(), cell, r);
            let points = generate(seed)?;
            let started = Instant::now();
            let value = l2_star(&points);
            Ok(ReplicationRecord {
                replication: r,
                seed,
                value,
                method: "l2_star".into(),
                is_exact: true,
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

pub fn run_partition_principle(cfg: &PartitionConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(ExperimentKind::PartitionPrinciple, cfg);
    if cfg.replications < 2 {
        return Err(Error::InvalidParameter(
            "partition principle needs at least 2 replications".into(),
        ));
    }
    for source in &cfg.partitions {
        let part = source.build()?;
        let (n, d) = (part.n_cells(), part.dim());
        let id = source.label();
        let exact_part = expected_l2sq_partition(&part);
        let exact_random = expected_l2sq_random(n, d);

        let records = simulate(&id, cfg.seed, cfg.replications, |s| {
            gen_partition_jittered(&part, s)
        })?;
        let random_id = format!("{id}_random");
        let random = simulate(&random_id, cfg.seed, cfg.replications, |s| {
            gen_uniform(n, d, s)
        })?;
        let mc = Aggregate::from_records(&id, &records)?;
        let mc_random = Aggregate::from_records(&random_id, &random)?;

        let mut out = CellReport::new(&id)
            .param("N", n as f64)
            .param("d", d as f64);
        out.method = Some("l2_star".into());
        out.is_exact = Some(true);
        out.aggregate = Some(mc);
        out.set("expected_partition", exact_part);
        out.set("expected_random", exact_random);
        out.set("mc_random_mean", mc_random.mean);
        out.set("mc_random_std_error", mc_random.std_error);
        if records.len() <= cfg.record_limit {
            out.records = records;
        }

        if exact_part > exact_random + PRINCIPLE_TOLERANCE {
            report.hard_failures.push(format!(
                "{id}: expected partition value {exact_part} exceeds random {exact_random}"
            ));
        }
        for (what, est, target) in [
            ("partition", mc, exact_part),
            ("random", mc_random, exact_random),
        ] {
            if (est.mean - target).abs() > 4.0 * est.std_error {
                report.statistical_flags.push(format!(
                    "{id}: {what} Monte Carlo mean {} is more than 4 SE ({}) from {target}",
                    est.mean, est.std_error
                ));
            }
        }
        report.cells.push(out);
    }

    if let Some(ladder) = &cfg.ladder {
        let mut previous = f64::NEG_INFINITY;
        let random = expected_l2sq_random(ladder.n, ladder.d);
        for &m_fine in &ladder.m_fine {
            let avg = fine_grid_average(m_fine, ladder.n, ladder.d, ladder.seeds)?;
            let mut out = CellReport::new(format!("ladder_n{}_d{}_m{m_fine}", ladder.n, ladder.d))
                .param("N", ladder.n as f64)
                .param("d", ladder.d as f64)
                .param("m_fine", m_fine as f64)
                .param("seeds", ladder.seeds as f64);
            out.set("expected_partition_mean", avg);
            out.set("expected_random", random);
            out.set("ratio", avg / random);
            if avg < previous {
                report.notes.push(format!(
                    "ladder decreases at m_fine={m_fine}: {avg} < {previous}"
                ));
            }
            previous = avg;
            report.cells.push(out);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_and_single_cell() {
        let cfg = PartitionConfig {
            replications: 4000,
            partitions: vec![
                PartitionSource::Grid { m: 2, d: 1 },
                PartitionSource::Grid { m: 1, d: 2 },
            ],
            ladder: None,
            ..PartitionConfig::default()
        };
        let rep = run_partition_principle(&cfg).unwrap();
        assert!(rep.hard_failures.is_empty());
        let halves = rep.cell("grid_m2_d1").unwrap();
        assert!((halves.value("expected_partition").unwrap() - 1.0 / 24.0).abs() < 1e-15);
        assert!((halves.value("expected_random").unwrap() - 1.0 / 12.0).abs() < 1e-15);
        let single = rep.cell("grid_m1_d2").unwrap();
        assert_eq!(
            single.value("expected_partition"),
            single.value("expected_random")
        );
    }

    #[test]
    fn ladder_rises_toward_random() {
        let values: Vec<f64> = [2, 4, 8]
            .iter()
            .map(|&m| fine_grid_average(m, 4, 2, 5).unwrap())
            .collect();
        assert!(
            values.windows(2).all(|w| w[0] <= w[1] + 1e-15),
            "{values:?}"
        );
        assert!(values[2] < expected_l2sq_random(4, 2));
    }

    #[test]
    fn sources_round_trip_through_json() {
        for s in PartitionConfig::default_partitions() {
            let text = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<PartitionSource>(&text).unwrap(), s);
        }
    }
}
