//! The one-parameter family built from `V ~ H_λ` and a uniform split of
//! the unit interval.
//!
//! `H_λ(u) = u(1 + λ sin(log u))` on `[0, 1]` is a distribution function for
//! `|λ| ≤ √2/2`. The bivariate vector `−V (1/U, 1/(1−U))` has a copula that is
//! a generalized Pareto copula for `λ = 0` and lies outside every max-domain
//! of attraction for `λ ≠ 0`: the tail ratio below oscillates in `log|t|`.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::open01;
use crate::sample::Sample;

/// Largest admissible `|λ|`.
pub const LAMBDA_MAX: f64 = FRAC_1_SQRT_2;

/// Validated parameter of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaFamilyParams {
    lambda: f64,
}

impl LambdaFamilyParams {
    pub fn new(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(LambdaFamilyParams { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    // A few ulps of slack so that √2/2 computed elsewhere is accepted.
    if !(lambda.abs() <= LAMBDA_MAX + 4.0 * f64::EPSILON) {
        return Err(Error::domain(format!(
            "lambda = {lambda} outside [-√2/2, √2/2]; H_lambda is not a distribution function there"
        )));
    }
    Ok(())
}

#[inline]
fn h_unchecked(u: f64, lambda: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        u * (1.0 + lambda * u.ln().sin())
    }
}

/// `H_λ(u) = u(1 + λ sin(log u))`, with `H_λ(0) = 0`.
pub fn h_lambda_cdf(u: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("u = {u} outside [0, 1]")));
    }
    Ok(h_unchecked(u, lambda))
}

/// Inverts `H_λ` by bisection on `[0, 1]`.
pub fn h_lambda_quantile(p: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} outside [0, 1]")));
    }
    Ok(h_quantile_unchecked(p, lambda))
}

fn h_quantile_unchecked(p: f64, lambda: f64) -> f64 {
    if lambda == 0.0 || p == 0.0 || p == 1.0 {
        return p;
    }
    // Newton on H(u) = p, falling back to bisection whenever the step leaves
    // the bracket. H' = 1 + √2·λ·sin(log u + π/4) vanishes only at |λ| = √2/2.
    // H(u)/u lies in [1 − |λ|, 1 + |λ|].
    let (mut lo, mut hi) = (p / (1.0 + lambda.abs()), (p / (1.0 - lambda.abs())).min(1.0));
    let mut u = p;
    for _ in 0..100 {
        let l = u.ln();
        let (sin, cos) = l.sin_cos();
        let r = u * (1.0 + lambda * sin) - p;
        if r == 0.0 {
            return u;
        } else if r < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let slope = 1.0 + lambda * (sin + cos);
        let newton = u - r / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - u).abs() <= 1e-15 * u || hi - lo <= 1e-16 * hi {
            return next;
        }
        u = next;
    }
    u
}

#[inline]
fn f_unchecked(x: f64, lambda: f64) -> f64 {
    let a = -x;
    if a >= 1.0 {
        (0.5 + lambda / 5.0) / a
    } else if a <= 0.0 {
        1.0
    } else {
        let l = a.ln();
        1.0 - a * (0.5 + lambda / 5.0 * (2.0 * l.sin() - l.cos()))
    }
}

/// Distribution function of `−V/S` with `V ~ H_λ` and `S` uniform on (0, 1).
pub fn f_lambda_cdf(x: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(x <= 0.0) {
        return Err(Error::domain(format!("x = {x} must be nonpositive")));
    }
    Ok(f_unchecked(x, lambda))
}

pub(crate) fn draw_v<R: Rng + ?Sized>(rng: &mut R, lambda: f64) -> f64 {
    h_quantile_unchecked(open01(rng), lambda)
}

pub(crate) fn f_lambda_fast(x: f64, lambda: f64) -> f64 {
    f_unchecked(x, lambda)
}

/// Draws `n` observations of the copula of `−V (1/U, 1/(1−U))`.
///
/// The components of `−V/U` and `−V/(1−U)` both have distribution function
/// `F_λ`, so applying it componentwise yields the copula observations.
pub fn sample_lemma1<R: Rng + ?Sized>(n: usize, lambda: f64, rng: &mut R) -> Result<Sample> {
    check_lambda(lambda)?;
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let mut out = Sample::zeros(n, 2);
    for i in 0..n {
        let v = draw_v(rng, lambda);
        let u = open01(rng);
        let row = out.row_mut(i);
        row[0] = f_unchecked(-v / u, lambda);
        row[1] = f_unchecked(-v / (1.0 - u), lambda);
    }
    Ok(out)
}

/// The D-norm of the `λ = 0` member: `‖x‖₁ − |x₁||x₂| / ‖x‖₁`.
pub fn dnorm_lemma1(x: [f64; 2]) -> f64 {
    let l1 = x[0].abs() + x[1].abs();
    if l1 == 0.0 {
        return 0.0;
    }
    l1 - x[0].abs() * x[1].abs() / l1
}

/// The D-norm obtained when the uniform split is replaced by two independent
/// uniforms: `‖x‖_∞ + (‖x‖₁ − ‖x‖_∞)² / (3‖x‖_∞)`.
pub fn dnorm_remark(x: [f64; 2]) -> f64 {
    let sup = x[0].abs().max(x[1].abs());
    if sup == 0.0 {
        return 0.0;
    }
    let l1 = x[0].abs() + x[1].abs();
    sup + (l1 - sup).powi(2) / (3.0 * sup)
}

/// Closed form of `∫₀^{|t|/2} H_λ / ∫₀^{|t|} H_λ` for `−1 < t < 0`.
///
/// This equals `1 − ½(1 − C_λ(F_λ(t), F_λ(t)))/(1 − F_λ(t))`; it is
/// identically `1/4` for `λ = 0` and has no limit as `t ↑ 0` otherwise.
pub fn spectral_ratio_oracle(t: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(t > -1.0 && t < 0.0) {
        return Err(Error::domain(format!("t = {t} outside (-1, 0)")));
    }
    let l = t.abs().ln();
    let term = |s: f64| 0.5 + lambda / 5.0 * (2.0 * s.sin() - s.cos());
    Ok(0.25 * term(l - std::f64::consts::LN_2) / term(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn h_boundary_and_examples() {
        assert_eq!(h_lambda_cdf(1.0, 0.3).unwrap(), 1.0);
        assert_eq!(h_lambda_cdf(0.0, -0.7).unwrap(), 0.0);
        assert_eq!(h_lambda_cdf(0.5, 0.0).unwrap(), 0.5);
        let v = h_lambda_cdf(0.5, 0.5).unwrap();
        assert!((v - 0.340_259_680_921_591_3).abs() < 1e-15, "{v}");
    }

    #[test]
    fn lambda_range_is_enforced() {
        assert!(h_lambda_cdf(0.5, 0.71).is_err());
        assert!(LambdaFamilyParams::new(-0.8).is_err());
        assert!(LambdaFamilyParams::new(LAMBDA_MAX).is_ok());
        assert!(h_lambda_cdf(1.2, 0.1).is_err());
        assert!(f_lambda_cdf(0.1, 0.0).is_err());
        assert!(spectral_ratio_oracle(-1.0, 0.1).is_err());
        assert!(spectral_ratio_oracle(0.0, 0.1).is_err());
    }

    #[test]
    fn h_is_nondecreasing_on_grid() {
        for li in 0..20 {
            let lambda = -LAMBDA_MAX + 2.0 * LAMBDA_MAX * li as f64 / 19.0;
            let mut prev = 0.0;
            for i in 0..=10_000 {
                let h = h_lambda_cdf(i as f64 / 10_000.0, lambda).unwrap();
                assert!(h >= prev - 1e-15, "lambda {lambda}, i {i}");
                prev = h;
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        assert_eq!(h_lambda_quantile(0.0, 0.4).unwrap(), 0.0);
        assert_eq!(h_lambda_quantile(1.0, 0.4).unwrap(), 1.0);
        assert_eq!(h_lambda_quantile(0.5, 0.0).unwrap(), 0.5);
        let p = h_lambda_cdf(0.5, 0.5).unwrap();
        assert!((h_lambda_quantile(p, 0.5).unwrap() - 0.5).abs() < 1e-12);
        for i in 1..500 {
            let p = i as f64 / 500.0;
            for lambda in [-LAMBDA_MAX, -0.3, 0.2, 0.7] {
                let u = h_lambda_quantile(p, lambda).unwrap();
                assert!((h_lambda_cdf(u, lambda).unwrap() - p).abs() <= 1e-12);
            }
        }
        for p in [1e-12, 1e-8, 1e-4] {
            for lambda in [-LAMBDA_MAX, 0.7] {
                let u = h_lambda_quantile(p, lambda).unwrap();
                assert!((h_lambda_cdf(u, lambda).unwrap() / p - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn f_lambda_branch_point_and_limits() {
        assert_eq!(f_lambda_cdf(-1.0, 0.0).unwrap(), 0.5);
        for lambda in [-0.5, 0.3, 0.7] {
            let left = f_lambda_cdf(-1.0, lambda).unwrap();
            let right = f_lambda_cdf(-1.0 + 1e-12, lambda).unwrap();
            assert!((left - (0.5 + lambda / 5.0)).abs() < 1e-15);
            assert!((left - right).abs() < 1e-11);
        }
        assert_eq!(f_lambda_cdf(0.0, 0.3).unwrap(), 1.0);
        assert!(f_lambda_cdf(-1e-12, 0.3).unwrap() > 1.0 - 1e-11);
        let l = 0.2_f64.ln();
        let want = 1.0 - 0.2 * (0.5 + 0.06 * (2.0 * l.sin() - l.cos()));
        assert_eq!(f_lambda_cdf(-0.2, 0.3).unwrap(), want);
    }

    #[test]
    fn f_lambda_matches_monte_carlo() {
        let lambda = 0.3;
        let mut rng = substream(11, 0);
        let draws: Vec<f64> = (0..1_000_000).map(|_| -draw_v(&mut rng, lambda) / open01(&mut rng)).collect();
        for x in [-5.0, -1.5, -1.0, -0.6, -0.2, -0.05] {
            let emp = draws.iter().filter(|&&d| d <= x).count() as f64 / draws.len() as f64;
            let exact = f_lambda_cdf(x, lambda).unwrap();
            assert!((emp - exact).abs() < 2e-3, "x {x}: {emp} vs {exact}");
        }
    }

    #[test]
    fn dnorm_examples() {
        assert_eq!(dnorm_lemma1([1.0, 1.0]), 1.5);
        assert_eq!(dnorm_lemma1([1.0, 0.0]), 1.0);
        assert_eq!(dnorm_lemma1([2.0, 2.0]), 3.0);
        assert_eq!(dnorm_lemma1([0.0, 0.0]), 0.0);
        assert!((dnorm_remark([1.0, 1.0]) - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(dnorm_remark([1.0, 0.0]), 1.0);
        assert!((dnorm_remark([3.0, 1.0]) - 28.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn dnorm_remark_matches_expected_maximum() {
        // ‖x‖_D = 2 E max(|x₁|U₁, |x₂|U₂) for independent uniforms.
        let mut rng = substream(12, 0);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| (3.0 * open01(&mut rng)).max(open01(&mut rng))).sum::<f64>() / n as f64;
        assert!((2.0 * mean - dnorm_remark([3.0, 1.0])).abs() < 3e-3);
    }

    #[test]
    fn dnorm_lemma1_matches_expected_maximum() {
        // ‖x‖_D = 2 E max(|x₁|U, |x₂|(1−U)).
        let mut rng = substream(13, 0);
        let n = 1_000_000;
        let mean: f64 = (0..n)
            .map(|_| {
                let u = open01(&mut rng);
                (2.0 * u).max(0.5 * (1.0 - u))
            })
            .sum::<f64>()
            / n as f64;
        assert!((2.0 * mean - dnorm_lemma1([2.0, 0.5])).abs() < 3e-3);
    }

    #[test]
    fn ratio_is_quarter_without_oscillation() {
        for t in [-0.9, -0.5, -1e-3, -1e-9] {
            assert_eq!(spectral_ratio_oracle(t, 0.0).unwrap(), 0.25);
        }
    }

    #[test]
    fn ratio_closed_form_along_first_sequence() {
        let lambda = 0.6;
        let want = 0.25 * (0.5 + lambda / 5.0 * (2.0 * std::f64::consts::LN_2.sin() + std::f64::consts::LN_2.cos()))
            / (0.5 + lambda / 5.0);
        for n in 1..=5 {
            let t = -((1.0 - 2.0 * n as f64) * std::f64::consts::PI).exp();
            assert!((spectral_ratio_oracle(t, lambda).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_is_reproducible_and_in_unit_square() {
        let a = sample_lemma1(1000, 0.7, &mut substream(1, 2)).unwrap();
        let b = sample_lemma1(1000, 0.7, &mut substream(1, 2)).unwrap();
        assert_eq!(a, b);
        assert!(a.as_slice().iter().all(|&v| v > 0.0 && v < 1.0));
        assert!(sample_lemma1(0, 0.0, &mut substream(1, 2)).is_err());
    }
}
