//! L² star discrepancy: the pairwise closed form, a Monte Carlo estimate of
//! the defining integral, and exact expectations for random and
//! partition-jittered sets.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{volume_anchored, PointSet};
use crate::partition::{cell_anchored_overlap, Partition};
use crate::rng::substream;
use crate::stats::{CompensatedSum, Moments};

/// Squared L² star discrepancy,
///
/// ```text
/// 1/N² Σ_ij Π_k (1 - max(x_ik, x_jk)) - 2/(N 2^d) Σ_i Π_k (1 - x_ik²) + 3^-d
/// ```
///
/// in `O(N² d)`. Take the square root for the discrepancy itself.
pub fn l2_star(points: &PointSet) -> f64 {
    let n = points.len() as f64;
    let d = points.dim() as i32;
    // Row sums in parallel, reduced sequentially so the result is reproducible.
    let rows: Vec<f64> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = points.point(i);
            points
                .iter()
                .map(|q| {
                    p.iter()
                        .zip(q)
                        .map(|(a, b)| 1.0 - a.max(*b))
                        .product::<f64>()
                })
                .sum()
        })
        .collect();
    let pair: f64 = rows.iter().sum();
    let single: f64 = points
        .iter()
        .map(|p| p.iter().map(|x| 1.0 - x * x).product::<f64>())
        .sum();
    let value = pair / (n * n) - 2.0 * single / (n * 2f64.powi(d)) + 3f64.powi(-d);
    value.max(0.0)
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MonteCarloEstimate {
    pub fn from_moments(m: &Moments) -> Self {
        Self {
            mean: m.mean(),
            std_error: m.std_error(),
            samples: m.count(),
        }
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

const CHUNK: u64 = 1 << 14;

/// Monte Carlo estimate of `∫ (#{p <= x}/N - vol(x))² dx` with uniform `x`.
pub fn l2_bruteforce(points: &PointSet, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "l2_bruteforce needs at least one sample".into(),
        ));
    }
    let d = points.dim();
    let n = points.len() as f64;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c);
            let take = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0; d];
            let mut m = Moments::new();
            for _ in 0..take {
                x.iter_mut().for_each(|xi| *xi = rng.random::<f64>());
                let inside = points
                    .iter()
                    .filter(|p| p.iter().zip(&x).all(|(a, b)| a <= b))
                    .count() as f64;
                let diff = inside / n - volume_anchored(&x);
                m.push(diff * diff);
            }
            m
        })
        .collect();
    let mut total = Moments::new();
    for m in &parts {
        total.merge(m);
    }
    Ok(MonteCarloEstimate::from_moments(&total))
}

/// `E L₂²` for `n` i.i.d. uniform points: `(2^-d - 3^-d) / n`.
pub fn expected_l2sq_random(n: usize, d: usize) -> f64 {
    let d = d as i32;
    (2f64.powi(-d) - 3f64.powi(-d)) / n as f64
}

/// `∫₀¹ r₁(t) r₂(t) dt` for the ramps `r(t) = clamp(t - lo, 0, hi - lo)`.
///
/// Both ramps are linear between consecutive breakpoints, so Simpson's rule
/// on each piece is exact.
pub fn ramp_product_integral(lo1: f64, hi1: f64, lo2: f64, hi2: f64) -> f64 {
    let r1 = |t: f64| (t - lo1).clamp(0.0, hi1 - lo1);
    let r2 = |t: f64| (t - lo2).clamp(0.0, hi2 - lo2);
    let f = |t: f64| r1(t) * r2(t);
    let mut knots = [0.0, lo1, hi1, lo2, hi2, 1.0];
    knots.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in knots.windows(2) {
        let (s, e) = (w[0], w[1]);
        if e > s {
            total += (e - s) / 6.0 * (f(s) + 4.0 * f(0.5 * (s + e)) + f(e));
        }
    }
    total
}

/// `E L₂²` of the jittered set of a partition:
///
/// ```text
/// 1/N² [ N 2^-d - N² Σ_i ∫ |Ω_i ∩ [0,x]|² dx ]
/// ```
///
/// Each `∫ w_i²` expands over box pairs of cell `i` into products of
/// one-dimensional [`ramp_product_integral`]s.
pub fn expected_l2sq_partition(part: &Partition) -> f64 {
    let n = part.n_cells() as f64;
    let d = part.dim();
    let per_cell: Vec<f64> = part
        .cells()
        .par_iter()
        .map(|cell| {
            let boxes = cell.boxes();
            let mut s = CompensatedSum::default();
            for (a, ba) in boxes.iter().enumerate() {
                for (b, bb) in boxes.iter().enumerate().skip(a) {
                    let term: f64 = (0..d)
                        .map(|k| {
                            ramp_product_integral(
                                ba.lower[k],
                                ba.upper[k],
                                bb.lower[k],
                                bb.upper[k],
                            )
                        })
                        .product();
                    s.add(if a == b { term } else { 2.0 * term });
                }
            }
            s.value()
        })
        .collect();
    let mut sum_sq = CompensatedSum::default();
    for v in per_cell {
        sum_sq.add(v);
    }
    2f64.powi(-(d as i32)) / n - sum_sq.value()
}

/// `var #(P_Ω ∩ [0,x]) = N vol(x) - N² Σ_i |Ω_i ∩ [0,x]|²`.
pub fn pointwise_count_variance(part: &Partition, x: &[f64]) -> Result<f64> {
    let n = part.n_cells() as f64;
    let mut sq = CompensatedSum::default();
    for c in part.cells() {
        let w = cell_anchored_overlap(c, x)?;
        sq.add(w * w);
    }
    Ok((n * volume_anchored(x) - n * n * sq.value()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_partition_jittered, gen_uniform};
    use crate::partition::grid_partition;

    #[test]
    fn closed_form_examples() {
        let p = PointSet::from_rows(&[[0.0]]).unwrap();
        assert!((l2_star(&p) - 1.0 / 3.0).abs() < 1e-15);
        let p = PointSet::from_rows(&[[0.5]]).unwrap();
        assert!((l2_star(&p) - 1.0 / 12.0).abs() < 1e-15);
        let p = PointSet::from_rows(&[[0.5, 0.5]]).unwrap();
        let expected = 0.25 - 0.5 * 0.75 * 0.75 + 1.0 / 9.0;
        assert!((l2_star(&p) - expected).abs() < 1e-15);
    }

    #[test]
    fn center_point_against_monte_carlo() {
        let p = PointSet::from_rows(&[[0.5, 0.5]]).unwrap();
        let mc = l2_bruteforce(&p, 10_000_000, 3).unwrap();
        assert!(mc.within(0.25 - 0.5 * 0.5625 + 1.0 / 9.0, 4.0), "{mc:?}");
    }

    #[test]
    fn bruteforce_examples() {
        let p = PointSet::from_rows(&[[0.0]]).unwrap();
        let mc = l2_bruteforce(&p, 1_000_000, 1).unwrap();
        assert!(mc.within(1.0 / 3.0, 4.0), "{mc:?}");
        assert!(l2_bruteforce(&p, 0, 1).is_err());
        assert_eq!(
            l2_bruteforce(&p, 5000, 9).unwrap(),
            l2_bruteforce(&p, 5000, 9).unwrap()
        );
    }

    #[test]
    fn random_expectation_examples() {
        assert!((expected_l2sq_random(1, 1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((expected_l2sq_random(4, 2) - 5.0 / 144.0).abs() < 1e-15);
        assert!(expected_l2sq_random(100, 3) < expected_l2sq_random(10, 3));
    }

    #[test]
    fn random_expectation_against_monte_carlo() {
        for (n, d, target) in [(1usize, 1usize, 1.0 / 6.0), (4, 2, 5.0 / 144.0)] {
            let m: Moments = (0..100_000u64)
                .into_par_iter()
                .map(|r| l2_star(&gen_uniform(n, d, r).unwrap()))
                .collect::<Vec<_>>()
                .into_iter()
                .collect();
            let est = MonteCarloEstimate::from_moments(&m);
            assert!(est.within(target, 4.0), "n={n} d={d}: {est:?}");
        }
    }

    #[test]
    fn ramp_integral_against_quadrature() {
        let cases = [
            (0.0, 0.5, 0.0, 0.5),
            (0.2, 0.7, 0.4, 0.9),
            (0.0, 1.0, 0.3, 0.35),
            (0.6, 0.8, 0.1, 0.2),
        ];
        for (a, b, c, e) in cases {
            let steps = 200_000;
            let h = 1.0 / steps as f64;
            let quad: f64 = (0..steps)
                .map(|k| {
                    let t = (k as f64 + 0.5) * h;
                    (t - a).clamp(0.0, b - a) * (t - c).clamp(0.0, e - c) * h
                })
                .sum();
            assert!((ramp_product_integral(a, b, c, e) - quad).abs() < 1e-9);
        }
        // ∫₀¹ t² dt
        assert!((ramp_product_integral(0.0, 1.0, 0.0, 1.0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn partition_expectation_examples() {
        for d in 1..=3 {
            let single = grid_partition(1, d).unwrap();
            assert!((expected_l2sq_partition(&single) - expected_l2sq_random(1, d)).abs() < 1e-15);
        }
        let halves = grid_partition(2, 1).unwrap();
        assert!((expected_l2sq_partition(&halves) - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn halves_against_monte_carlo() {
        let part = grid_partition(2, 1).unwrap();
        let m: Moments = (0..100_000u64)
            .into_par_iter()
            .map(|r| l2_star(&gen_partition_jittered(&part, r).unwrap()))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        assert!(MonteCarloEstimate::from_moments(&m).within(1.0 / 24.0, 4.0));
    }

    #[test]
    fn pointwise_variance_examples() {
        let part = grid_partition(2, 1).unwrap();
        assert_eq!(pointwise_count_variance(&part, &[1.0]).unwrap(), 0.0);
        assert_eq!(pointwise_count_variance(&part, &[0.0]).unwrap(), 0.0);
        assert!((pointwise_count_variance(&part, &[0.75]).unwrap() - 0.25).abs() < 1e-15);
        let random: f64 = 2.0 * 0.75 * 0.25;
        assert!((random - 0.375).abs() < 1e-15);
    }

    #[test]
    fn pointwise_variance_against_counting() {
        let part = grid_partition(2, 1).unwrap();
        let m: Moments = (0..100_000u64)
            .map(|r| {
                let p = gen_partition_jittered(&part, r).unwrap();
                p.iter().filter(|x| x[0] <= 0.75).count() as f64
            })
            .collect();
        // sample variance of the count; its standard error for a two-point
        // distribution is below 0.002 at this sample size
        assert!((m.variance() - 0.25).abs() < 0.01, "{}", m.variance());
        assert!((m.mean() - 1.5).abs() < 4.0 * m.std_error());
    }
}
