//! Clayton and Gumbel–Hougaard copulas via the Marshall–Olkin frailty
//! construction `U_i = ψ(E_i / W)`, with `ψ` the Laplace transform of the
//! frailty `W` and `E_i` iid standard exponential.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};
use crate::rng::open01;
use crate::sample::Sample;

fn check_shape(n: usize, d: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::domain(format!("need n ≥ 1 and d ≥ 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// Clayton copula with generator `(t^{−θ} − 1)/θ`, for `θ > 0`.
///
/// The frailty is Gamma(1/θ, 1), whose Laplace transform is `(1 + t)^{−1/θ}`.
pub fn sample_clayton<R: Rng + ?Sized>(n: usize, d: usize, theta: f64, rng: &mut R) -> Result<Sample> {
    check_shape(n, d)?;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::domain(format!(
            "Clayton sampling supports theta in (0, ∞); got {theta} (theta in [-1, 0) has no frailty representation)"
        )));
    }
    let frailty = Gamma::new(1.0 / theta, 1.0).map_err(|e| Error::domain(e.to_string()))?;
    let mut out = Sample::zeros(n, d);
    for i in 0..n {
        let w: f64 = frailty.sample(rng);
        for v in out.row_mut(i) {
            let e: f64 = Exp1.sample(rng);
            *v = (-(e / w).ln_1p() / theta).exp();
        }
    }
    Ok(out)
}

/// A positive α-stable variate with Laplace transform `exp(−s^α)`,
/// `0 < α ≤ 1`, by the Chambers–Mallows–Stuck (Kanter) representation.
pub fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    let theta = PI * open01(rng);
    let w: f64 = Exp1.sample(rng);
    let a = (alpha * theta).sin() / theta.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * theta).sin() / w).powf((1.0 - alpha) / alpha);
    a * b
}

/// Gumbel–Hougaard copula with generator `(−log t)^θ`, for `θ ≥ 1`.
///
/// The frailty is positive stable with index `1/θ`, so `ψ(t) = exp(−t^{1/θ})`.
pub fn sample_gumbel<R: Rng + ?Sized>(n: usize, d: usize, theta: f64, rng: &mut R) -> Result<Sample> {
    check_shape(n, d)?;
    if !(theta >= 1.0) || !theta.is_finite() {
        return Err(Error::domain(format!("Gumbel sampling requires theta ≥ 1, got {theta}")));
    }
    let alpha = 1.0 / theta;
    let mut out = Sample::zeros(n, d);
    for i in 0..n {
        let s = positive_stable(alpha, rng);
        for v in out.row_mut(i) {
            let e: f64 = Exp1.sample(rng);
            *v = (-(e / s).powf(alpha)).exp();
        }
    }
    Ok(out)
}

/// Bivariate Clayton copula `(u^{−θ} + v^{−θ} − 1)^{−1/θ}`.
pub fn clayton_cdf(u: f64, v: f64, theta: f64) -> f64 {
    (u.powf(-theta) + v.powf(-theta) - 1.0).max(0.0).powf(-1.0 / theta)
}

/// Bivariate Gumbel–Hougaard copula `exp(−((−log u)^θ + (−log v)^θ)^{1/θ})`.
pub fn gumbel_cdf(u: f64, v: f64, theta: f64) -> f64 {
    (-((-u.ln()).powf(theta) + (-v.ln()).powf(theta)).powf(1.0 / theta)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn empirical_cdf2(s: &Sample, u: f64, v: f64) -> f64 {
        s.rows().filter(|r| r[0] <= u && r[1] <= v).count() as f64 / s.nrows() as f64
    }

    #[test]
    fn clayton_rejects_unsupported_theta() {
        let mut rng = substream(0, 0);
        for theta in [0.0, -0.5, -1.0, f64::NAN] {
            let err = sample_clayton(10, 2, theta, &mut rng).unwrap_err();
            assert!(err.to_string().contains("(0, ∞)"));
        }
    }

    #[test]
    fn gumbel_rejects_theta_below_one() {
        assert!(sample_gumbel(10, 2, 0.9, &mut substream(0, 0)).is_err());
    }

    #[test]
    fn clayton_cdf_at_center() {
        let s = sample_clayton(1_000_000, 2, 0.5, &mut substream(21, 0)).unwrap();
        let exact = clayton_cdf(0.5, 0.5, 0.5);
        assert!((exact - (2.0 * 2f64.sqrt() - 1.0).powi(-2)).abs() < 1e-14);
        assert!((empirical_cdf2(&s, 0.5, 0.5) - exact).abs() < 3e-3);
    }

    #[test]
    fn gumbel_cdf_at_center() {
        let s = sample_gumbel(1_000_000, 2, 1.5, &mut substream(22, 0)).unwrap();
        let exact = (-(2.0 * 2f64.ln().powf(1.5)).powf(1.0 / 1.5)).exp();
        assert!((gumbel_cdf(0.5, 0.5, 1.5) - exact).abs() < 1e-14);
        assert!((empirical_cdf2(&s, 0.5, 0.5) - exact).abs() < 3e-3);
    }

    #[test]
    fn gumbel_theta_one_is_independence() {
        let s = sample_gumbel(1_000_000, 2, 1.0, &mut substream(23, 0)).unwrap();
        for (u, v) in [(0.3, 0.7), (0.5, 0.5), (0.9, 0.2)] {
            assert!((empirical_cdf2(&s, u, v) - u * v).abs() < 3e-3);
        }
    }

    #[test]
    fn positive_stable_laplace_transform() {
        let mut rng = substream(24, 0);
        let alpha = 0.6;
        let n = 400_000;
        let draws: Vec<f64> = (0..n).map(|_| positive_stable(alpha, &mut rng)).collect();
        for s in [0.5, 1.0, 2.0] {
            let emp = draws.iter().map(|x| (-s * x).exp()).sum::<f64>() / n as f64;
            assert!((emp - (-f64::powf(s, alpha)).exp()).abs() < 3e-3, "s = {s}");
        }
    }
}
