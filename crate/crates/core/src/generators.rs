//! Point-set families: i.i.d. uniform, regular grid, jittered (grid and
//! arbitrary partition) and Hammersley.
//!
//! Seeded generators draw the point for cell `k` from stream `k` of the
//! master seed, so output never depends on iteration order or thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PointSet, Provenance};
use crate::partition::{
    checked_cell_count, grid_box, grid_indices, sample_box, sample_cell, Partition,
};
use crate::rng::substream;

/// Where grid points sit inside their cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// `(k - 1/2) / m`
    #[default]
    Centered,
    /// `(k - 1) / m`, the lower-left corners.
    Corner,
}

/// Declarative description of a point set, as used by configs and the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Uniform {
        n: usize,
        dim: usize,
        seed: u64,
    },
    Grid {
        m: usize,
        dim: usize,
        #[serde(default)]
        mode: GridMode,
    },
    Jittered {
        m: usize,
        dim: usize,
        seed: u64,
    },
    Hammersley {
        n: usize,
        dim: usize,
    },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<PointSet> {
        match *self {
            Self::Uniform { n, dim, seed } => gen_uniform(n, dim, seed),
            Self::Grid { m, dim, mode } => gen_grid(m, dim, mode),
            Self::Jittered { m, dim, seed } => gen_jittered(m, dim, seed),
            Self::Hammersley { n, dim } => gen_hammersley(n, dim),
        }
    }
}

fn check_sizes(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 and d >= 1, got N={n}, d={d}"
        )));
    }
    n.checked_mul(d)
        .map(|_| ())
        .ok_or_else(|| Error::Overflow(format!("{n} points of dimension {d}")))
}

/// `n` i.i.d. uniform points; point `i` uses stream `i`.
pub fn gen_uniform(n: usize, d: usize, seed: u64) -> Result<PointSet> {
    check_sizes(n, d)?;
    let coords: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = substream(seed, i as u64);
            (0..d).map(move |_| rng.random::<f64>())
        })
        .collect();
    PointSet::new(
        d,
        coords,
        Provenance::new("uniform", seed).with_param("n", n),
    )
}

/// Regular grid of `m^d` points, one per cell, in lexicographic order.
pub fn gen_grid(m: usize, d: usize, mode: GridMode) -> Result<PointSet> {
    checked_cell_count(m, d)?;
    let mf = m as f64;
    let shift = match mode {
        GridMode::Centered => 0.5,
        GridMode::Corner => 1.0,
    };
    let coords = grid_indices(m, d)
        .flat_map(|idx| idx.into_iter().map(move |k| (k as f64 - shift) / mf))
        .collect();
    let name = match mode {
        GridMode::Centered => "grid",
        GridMode::Corner => "grid_corner",
    };
    PointSet::new(d, coords, Provenance::new(name, 0).with_param("m", m))
}

/// One uniform point in each half-open cube `[(k-1)/m, k/m)^d`.
///
/// Produces bit-identical output to
/// `gen_partition_jittered(&grid_partition(m, d)?, seed)`.
pub fn gen_jittered(m: usize, d: usize, seed: u64) -> Result<PointSet> {
    let n = checked_cell_count(m, d)?;
    let coords: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|flat| {
            let mut idx = vec![0; d];
            let mut rest = flat;
            for k in (0..d).rev() {
                idx[k] = rest % m + 1;
                rest /= m;
            }
            sample_box(&grid_box(&idx, m), &mut substream(seed, flat as u64))
        })
        .collect();
    PointSet::new(
        d,
        coords,
        Provenance::new("jittered", seed).with_param("m", m),
    )
}

/// One uniform point per partition cell, in cell order.
pub fn gen_partition_jittered(part: &Partition, seed: u64) -> Result<PointSet> {
    let rows: Vec<Vec<f64>> = part
        .cells()
        .par_iter()
        .enumerate()
        .map(|(k, cell)| {
            sample_cell(cell, &mut substream(seed, k as u64)).map_err(|e| match e {
                Error::ZeroMeasureCell { .. } => Error::ZeroMeasureCell { cell: k },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    PointSet::new(
        part.dim(),
        rows.concat(),
        Provenance::new("partition_jittered", seed).with_param("n", part.n_cells()),
    )
}

/// Base-`b` digit reversal of `k` behind the radix point.
pub fn radical_inverse(mut k: u64, base: u64) -> Result<f64> {
    if base < 2 {
        return Err(Error::InvalidParameter(format!(
            "radical inverse base must be >= 2, got {base}"
        )));
    }
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut value = 0.0;
    while k > 0 {
        value += (k % base) as f64 * scale;
        k /= base;
        scale *= inv;
    }
    Ok(value)
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Hammersley set: point `k` is `(k/N, φ_2(k), φ_3(k), φ_5(k), ...)`.
pub fn gen_hammersley(n: usize, d: usize) -> Result<PointSet> {
    check_sizes(n, d)?;
    let primes = first_primes(d - 1);
    let mut coords = Vec::with_capacity(n * d);
    for k in 0..n {
        coords.push(k as f64 / n as f64);
        for &p in &primes {
            coords.push(radical_inverse(k as u64, p)?);
        }
    }
    PointSet::new(
        d,
        coords,
        Provenance::new("hammersley", 0).with_param("n", n),
    )
}
