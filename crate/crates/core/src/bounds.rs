//! Closed-form bounds and constants for jittered and random point sets.
//!
//! Everything here is a pure scalar function. Products of many factors are
//! evaluated in log space so large `N` or `d` do not overflow.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn exponent(d: usize) -> f64 {
    0.5 + 0.5 / d as f64
}

/// Upper bound on the expected star discrepancy of a jittered set,
/// `√d (log N)^½ / N^(½ + 1/(2d))`. Needs `N >= 2`.
pub fn thm1_upper(n: f64, d: usize) -> Result<f64> {
    require(n >= 2.0, || format!("thm1_upper needs N >= 2, got {n}"))?;
    require(d >= 1, || "d must be >= 1".into())?;
    Ok((d as f64).sqrt() * n.ln().sqrt() * (-exponent(d) * n.ln()).exp())
}

/// Lower bound on the expected star discrepancy of a jittered set,
/// `(1/10) d / N^(½ + 1/(2d))`.
pub fn thm1_lower(n: f64, d: usize) -> Result<f64> {
    require(n >= 1.0, || format!("thm1_lower needs N >= 1, got {n}"))?;
    require(d >= 1, || "d must be >= 1".into())?;
    Ok(0.1 * d as f64 * (-exponent(d) * n.ln()).exp())
}

/// Dvoretzky–Kiefer–Wolfowitz tail with Massart's constant,
/// `P(X_n > ε) <= 2 exp(-2 n ε²)`.
pub fn dkw_tail(n: f64, eps: f64) -> f64 {
    2.0 * (-2.0 * n * eps * eps).exp()
}

/// Bound on `E exp(t X_n)` for the one-dimensional discrepancy `X_n` of `n`
/// uniform points: `1 + √(2π) (t/√n) exp(t²/(8n))`.
pub fn lemma31_moment_bound(t: f64, n: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    1.0 + ((2.0 * PI).sqrt().ln() + t.ln() - 0.5 * n.ln() + t * t / (8.0 * n)).exp()
}

/// Bernstein-type tail for a sum of `d` copies satisfying the moment bound:
/// `P(S_d >= y) <= (1 + √(32πn) y/d)^d exp(-2 n y²/d)`.
pub fn lemma32_bernstein_tail(y: f64, n: f64, d: usize) -> Result<f64> {
    require(y >= 0.0, || format!("y must be >= 0, got {y}"))?;
    require(d >= 1, || "d must be >= 1".into())?;
    let df = d as f64;
    let log = df * (1.0 + (32.0 * PI * n).sqrt() * y / df).ln() - 2.0 * n * y * y / df;
    Ok(log.exp())
}

/// Tail bound for `N` i.i.d. uniform points:
/// `P(D*_N >= 2δ) <= 2 (d/δ + 2)^d exp(-δ² N / 2)`.
pub fn hnww_tail(delta: f64, n: f64, d: usize) -> Result<f64> {
    require(delta > 0.0, || format!("delta must be > 0, got {delta}"))?;
    require(d >= 1, || "d must be >= 1".into())?;
    let df = d as f64;
    Ok((LN_2 + df * (df / delta + 2.0).ln() - delta * delta * n / 2.0).exp())
}

/// Leading term of the Hammersley star-discrepancy bound,
/// `7 / (2^(d-1) (d-1)) · (log N)^(d-1) / N`. The lower-order remainder is
/// not included.
pub fn hammersley_leading_bound(n: f64, d: usize) -> Result<f64> {
    require(d >= 2, || format!("Hammersley bound needs d >= 2, got {d}"))?;
    require(n >= 2.0, || {
        format!("Hammersley bound needs N >= 2, got {n}")
    })?;
    let k = (d - 1) as f64;
    Ok((7f64.ln() - k * LN_2 - k.ln() + k * n.ln().ln() - n.ln()).exp())
}

/// Inverse-discrepancy bounds with `c = 10`: the classical
/// `c √(d/N)` and the jittered form `c √((d/N) min(1, log N / N^(1/d)))`.
pub fn inverse_disc_bounds(n: f64, d: usize) -> Result<(f64, f64)> {
    require(n >= 2.0, || {
        format!("inverse_disc_bounds needs N >= 2, got {n}")
    })?;
    require(d >= 1, || "d must be >= 1".into())?;
    let base = d as f64 / n;
    let shrink = (n.ln() / (n.ln() / d as f64).exp()).min(1.0);
    Ok((10.0 * base.sqrt(), 10.0 * (base * shrink).sqrt()))
}

/// Fraction of jittered points in the "big box" `[0, 1 - N^(-1/d)]^d`,
/// `(1 - N^(-1/d))^d`.
pub fn bigbox_fraction(n: f64, d: usize) -> Result<f64> {
    require(n >= 1.0, || {
        format!("bigbox_fraction needs N >= 1, got {n}")
    })?;
    require(d >= 1, || "d must be >= 1".into())?;
    let side = 1.0 - (-n.ln() / d as f64).exp();
    Ok(side.powi(d as i32))
}

/// Mean of the Kolmogorov distribution, `√(π/2) log 2 ≈ 0.868731`.
pub fn kolmogorov_limit_constant() -> f64 {
    (PI / 2.0).sqrt() * LN_2
}

/// Refined constant `√(3/4 + 1/(4d))` that replaces `√d`'s unit factor for
/// large `N`. Documented only; the "large N" threshold is not checked.
pub fn refined_upper_constant(d: usize) -> f64 {
    (0.75 + 0.25 / d as f64).sqrt()
}

/// Conjectured order `(d + (log N)^½) / N^(½ + 1/(2d))`.
///
/// Diagnostic only; not a proven bound.
pub fn heuristic_conjecture_rate(n: f64, d: usize) -> Result<f64> {
    require(n >= 2.0, || {
        format!("conjecture rate needs N >= 2, got {n}")
    })?;
    require(d >= 1, || "d must be >= 1".into())?;
    Ok((d as f64 + n.ln().sqrt()) * (-exponent(d) * n.ln()).exp())
}

/// One evaluated bound, for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub name: String,
    pub inputs: Vec<(String, f64)>,
    pub value: f64,
    /// True for diagnostics that are not proven bounds.
    #[serde(default)]
    pub conjectural: bool,
}

impl BoundEvaluation {
    fn new(name: &str, inputs: &[(&str, f64)], value: f64) -> Self {
        Self {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            conjectural: false,
        }
    }
}

/// Tail-parameter choices for [`evaluate_all`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailParams {
    pub eps: f64,
    pub t: f64,
    pub y: f64,
    pub delta: f64,
}

impl Default for TailParams {
    fn default() -> Self {
        Self {
            eps: 0.1,
            t: 1.0,
            y: 0.1,
            delta: 0.1,
        }
    }
}

/// Every evaluator that applies at `(N, d)`. Evaluators whose preconditions
/// fail (e.g. the Hammersley term for `d = 1`) are left out.
pub fn evaluate_all(n: f64, d: usize, tails: TailParams) -> Vec<BoundEvaluation> {
    let nd = [("N", n), ("d", d as f64)];
    let mut out = Vec::new();
    if let Ok(v) = thm1_lower(n, d) {
        out.push(BoundEvaluation::new("thm1_lower", &nd, v));
    }
    if let Ok(v) = thm1_upper(n, d) {
        out.push(BoundEvaluation::new("thm1_upper", &nd, v));
    }
    if let Ok((classic, jittered)) = inverse_disc_bounds(n, d) {
        out.push(BoundEvaluation::new("inverse_disc_classic", &nd, classic));
        out.push(BoundEvaluation::new("inverse_disc_jittered", &nd, jittered));
    }
    if let Ok(v) = bigbox_fraction(n, d) {
        out.push(BoundEvaluation::new("bigbox_fraction", &nd, v));
    }
    if let Ok(v) = hammersley_leading_bound(n, d) {
        out.push(BoundEvaluation::new("hammersley_leading_term", &nd, v));
    }
    out.push(BoundEvaluation::new(
        "dkw_tail",
        &[("n", n), ("eps", tails.eps)],
        dkw_tail(n, tails.eps),
    ));
    out.push(BoundEvaluation::new(
        "lemma31_moment_bound",
        &[("t", tails.t), ("n", n)],
        lemma31_moment_bound(tails.t, n),
    ));
    if let Ok(v) = lemma32_bernstein_tail(tails.y, n, d) {
        out.push(BoundEvaluation::new(
            "lemma32_bernstein_tail",
            &[("y", tails.y), ("n", n), ("d", d as f64)],
            v,
        ));
    }
    if let Ok(v) = hnww_tail(tails.delta, n, d) {
        out.push(BoundEvaluation::new(
            "hnww_tail",
            &[("delta", tails.delta), ("N", n), ("d", d as f64)],
            v,
        ));
    }
    out.push(BoundEvaluation::new(
        "kolmogorov_limit_constant",
        &[],
        kolmogorov_limit_constant(),
    ));
    out.push(BoundEvaluation::new(
        "refined_upper_constant",
        &[("d", d as f64)],
        refined_upper_constant(d),
    ));
    if let Ok(v) = heuristic_conjecture_rate(n, d) {
        let mut b = BoundEvaluation::new("heuristic_conjecture_rate", &nd, v);
        b.conjectural = true;
        out.push(b);
    }
    out
}

/// First `N` in the scan `start, start·step, start·step², ...` at which the
/// jittered inverse bound is strictly below the classical one, i.e.
/// `log N < N^(1/d)`. The inequality also holds for very small `N`, so
/// start the scan near `d^d` to find the large-`N` crossover.
pub fn inverse_improvement_onset(d: usize, start: f64, step: f64) -> Option<f64> {
    let mut n = start.max(2.0);
    while n.is_finite() {
        if n.ln() < (n.ln() / d as f64).exp() {
            return Some(n);
        }
        n *= step;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn thm1_examples() {
        assert_relative_eq!(
            thm1_upper(1024.0, 2).unwrap(),
            0.020_568_506_622_923_12,
            max_relative = 1e-12
        );
        assert_relative_eq!(thm1_upper(E, 1).unwrap(), 1.0 / E, max_relative = 1e-14);
        assert_relative_eq!(
            thm1_lower(1024.0, 2).unwrap(),
            0.001_104_854_345_603_980_5,
            max_relative = 1e-12
        );
        assert_relative_eq!(thm1_lower(1.0, 1).unwrap(), 0.1, max_relative = 1e-15);
        assert!(thm1_upper(1.0, 2).is_err());
    }

    #[test]
    fn thm1_upper_decreases_in_n() {
        for d in 1..=6 {
            let mut prev = f64::INFINITY;
            for n in 3..5000 {
                let v = thm1_upper(n as f64, d).unwrap();
                assert!(v < prev, "d={d} n={n}");
                prev = v;
            }
        }
    }

    #[test]
    fn thm1_sandwich() {
        for d in 1..=10 {
            for n in (3..100_000).step_by(97) {
                assert!(thm1_lower(n as f64, d).unwrap() < thm1_upper(n as f64, d).unwrap());
            }
        }
    }

    #[test]
    fn dkw_examples() {
        assert_eq!(dkw_tail(64.0, 0.0), 2.0);
        assert_relative_eq!(
            dkw_tail(64.0, 0.125),
            2.0 * (-2f64).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            dkw_tail(64.0, 0.125),
            0.270_670_566_473_225_4,
            max_relative = 1e-14
        );
        assert!(dkw_tail(1e9, 0.1) == 0.0);
    }

    #[test]
    fn lemma31_examples() {
        assert_relative_eq!(lemma31_moment_bound(1e-12, 64.0), 1.0, max_relative = 1e-10);
        assert_relative_eq!(
            lemma31_moment_bound(8.0, 64.0),
            3.840_381_951_811_686,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            lemma31_moment_bound(1.0, 64.0),
            1.313_941_102_138_507_7,
            max_relative = 1e-13
        );
        let mut prev = 1.0;
        for k in 1..100 {
            let v = lemma31_moment_bound(k as f64 * 0.1, 64.0);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn lemma32_examples() {
        assert_eq!(lemma32_bernstein_tail(0.0, 64.0, 2).unwrap(), 1.0);
        let direct = (1.0 + (2048.0 * PI).sqrt() / 4.0).powi(2) * (-16f64).exp();
        assert_relative_eq!(
            lemma32_bernstein_tail(0.5, 64.0, 2).unwrap(),
            direct,
            max_relative = 1e-13
        );
        assert_relative_eq!(direct, 4.987_895_559_375_255e-5, max_relative = 1e-12);
        assert!(lemma32_bernstein_tail(50.0, 64.0, 2).unwrap() < 1e-100);
    }

    #[test]
    fn hnww_examples() {
        assert_relative_eq!(hnww_tail(1.0, 0.0, 1).unwrap(), 6.0, max_relative = 1e-15);
        assert_relative_eq!(
            hnww_tail(0.1, 1000.0, 2).unwrap(),
            6.522_332_695_114_732,
            max_relative = 1e-13
        );
        assert!(hnww_tail(0.1, 2000.0, 2).unwrap() < hnww_tail(0.1, 1000.0, 2).unwrap());
        assert!(hnww_tail(0.0, 10.0, 2).is_err());
        // (d/δ + 2)^d alone overflows here; the bound itself is tiny
        let v = hnww_tail(0.5, 1e4, 200).unwrap();
        assert!(v > 0.0 && v < 1e-20, "{v}");
    }

    #[test]
    fn hammersley_examples() {
        assert_relative_eq!(
            hammersley_leading_bound(E, 2).unwrap(),
            3.5 / E,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            hammersley_leading_bound(1024.0, 2).unwrap(),
            0.023_691_554_023_045_006,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            hammersley_leading_bound(1e4, 3).unwrap(),
            0.007_422_657_354_669_757,
            max_relative = 1e-12
        );
        assert!(hammersley_leading_bound(100.0, 1).is_err());
    }

    #[test]
    fn inverse_examples() {
        for d in 1..=4 {
            // log N >= N^(1/d) in this range for d = 3, 4: the min clamps at 1
            for n in [7.0f64, 20.0, 50.0] {
                if n.ln() >= n.powf(1.0 / d as f64) {
                    let (a, b) = inverse_disc_bounds(n, d).unwrap();
                    assert_relative_eq!(a, b, max_relative = 1e-15);
                }
            }
        }
        let (a, b) = inverse_disc_bounds(1e4, 2).unwrap();
        assert_relative_eq!(a, 0.141_421_356_237_309_5, max_relative = 1e-14);
        assert_relative_eq!(b, 0.042_919_320_525_786_94, max_relative = 1e-12);
        assert_relative_eq!(b / a, 0.303_485_425_877_029_3, max_relative = 1e-12);
        assert!(inverse_disc_bounds(1.0, 2).is_err());
    }

    #[test]
    fn inverse_improvement_starts_a_little_above_d_to_the_d() {
        for d in 3..=12 {
            let dd = (d as f64).powi(d as i32);
            let onset = inverse_improvement_onset(d, dd, 1.01).unwrap();
            assert!(onset > dd);
            let ratio = onset.ln() / dd.ln();
            assert!(ratio > 1.0 && ratio < 2.0, "d={d}: log-ratio {ratio}");
            let (a, b) = inverse_disc_bounds(onset, d).unwrap();
            assert!(b < a);
        }
    }

    #[test]
    fn bigbox_examples() {
        assert_eq!(bigbox_fraction(256.0, 4).unwrap(), 0.316_406_25);
        for d in [10usize, 50, 100] {
            let n = (d as f64).powi(d as i32);
            assert!((bigbox_fraction(n, d).unwrap() - (-1f64).exp()).abs() < 0.2 / d as f64 + 1e-3);
        }
        assert!(bigbox_fraction(1e12, 2).unwrap() > 0.99);
    }

    #[test]
    fn kolmogorov_constant() {
        let c = kolmogorov_limit_constant();
        assert!((c - 0.868_73).abs() < 1e-5);
        assert_relative_eq!(c, 0.868_731_160_636_159_1, max_relative = 1e-14);
        assert!(c > 0.0 && c < 1.0);
    }

    #[test]
    fn kolmogorov_constant_matches_alternating_series() {
        // Euler–van Wijngaarden: repeatedly average consecutive partial sums
        // of Σ (-1)^(k-1)/k.
        let mut partial = Vec::with_capacity(40);
        let mut s = 0.0;
        for k in 1..=40 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            partial.push(s);
        }
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        let series = (PI / 2.0).sqrt() * partial[0];
        assert!((series - kolmogorov_limit_constant()).abs() < 1e-10);
    }

    #[test]
    fn conjecture_examples() {
        assert_relative_eq!(
            heuristic_conjecture_rate(E, 1).unwrap(),
            2.0 / E,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            heuristic_conjecture_rate(1024.0, 2).unwrap(),
            0.025_592_673_967_989_16,
            max_relative = 1e-12
        );
        for d in 1..=8 {
            for n in (2..50_000).step_by(37) {
                assert!(
                    heuristic_conjecture_rate(n as f64, d).unwrap()
                        > thm1_lower(n as f64, d).unwrap()
                );
            }
        }
    }

    #[test]
    fn evaluators_are_finite_and_nonnegative() {
        for d in 1..=6 {
            for n in [2.0, 10.0, 1024.0, 1e6] {
                for b in evaluate_all(n, d, TailParams::default()) {
                    assert!(b.value.is_finite() && b.value >= 0.0, "{b:?}");
                }
            }
        }
        let names: Vec<_> = evaluate_all(1024.0, 2, TailParams::default())
            .into_iter()
            .map(|b| b.name)
            .collect();
        assert!(names.contains(&"hammersley_leading_term".to_string()));
        assert!(!evaluate_all(1024.0, 1, TailParams::default())
            .iter()
            .any(|b| b.name == "hammersley_leading_term"));
    }
}
