//! The limit law `Σᵢ λᵢ (ξᵢ + μᵢ)²` of the statistic, `ξᵢ` iid standard
//! normal, with `λᵢ = 1 / (4 sin²(iπ/(2k)))`, `i = 1..k−1`.
//!
//! The distribution function is computed by Imhof's inversion
//!
//! ```text
//! P(Q ≤ x) = 1/2 − (1/π) ∫₀^∞ sin θ(u) / (u ρ(u)) du
//! θ(u) = Σ [½ arctan(λᵢu) + μᵢ²λᵢu / (2(1+λᵢ²u²))] − xu/2
//! ρ(u) = Π (1+λᵢ²u²)^{1/4} · exp(Σ μᵢ²λᵢ²u² / (2(1+λᵢ²u²)))
//! ```
//!
//! The integrand decays only like `u^{−(k+1)/2}` for the null law, which for
//! `k = 2` is too slow for plain truncation. The range is therefore split
//! into a head integrated adaptively and a tail of half-periods of the
//! asymptotic oscillation `sin(xu/2)`, whose partial sums are extrapolated
//! with Wynn's epsilon algorithm.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, wynn_epsilon};

/// Absolute accuracy targeted by [`WeightedChiSquareLaw::cdf`].
pub const CDF_ABS_TOL: f64 = 1e-8;

/// `λᵢ = 1 / (4 sin²(iπ/(2k)))` for `i = 1..k−1`, strictly decreasing.
pub fn eigenvalues(k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::domain(format!("k = {k} must be at least 2")));
    }
    Ok((1..k)
        .map(|i| {
            let s = (i as f64 * PI / (2.0 * k as f64)).sin();
            1.0 / (4.0 * s * s)
        })
        .collect())
}

/// Noncentralities of the local alternative,
/// `μᵢ = K √(2s/k) m_D^{1/2+δ} Σ_{j=1}^{k−1} (j+1)^{−δ} sin(jiπ/k)`.
pub fn noncentrality(big_k: f64, s: f64, delta: f64, m_d: f64, k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::domain(format!("k = {k} must be at least 2")));
    }
    if !(s >= 0.0) || !(delta > 0.0) || !(m_d >= 1.0) {
        return Err(Error::domain(format!("need s ≥ 0, δ > 0, m_D ≥ 1; got s = {s}, δ = {delta}, m_D = {m_d}")));
    }
    let scale = big_k * (2.0 * s / k as f64).sqrt() * m_d.powf(0.5 + delta);
    Ok((1..k)
        .map(|i| {
            let sum: f64 =
                (1..k).map(|j| ((j + 1) as f64).powf(-delta) * (j as f64 * i as f64 * PI / k as f64).sin()).sum();
            scale * sum
        })
        .collect())
}

/// Quadrature bookkeeping for one evaluation of the distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfDiagnostics {
    /// Value before clipping to `[0, 1]`.
    pub raw: f64,
    /// Estimated absolute error of the inversion integral divided by π.
    pub error_estimate: f64,
    pub tail_chunks: usize,
    pub evaluations: usize,
}

/// `Σᵢ λᵢ (ξᵢ + μᵢ)²` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedChiSquareLaw {
    weights: Vec<f64>,
    noncentralities: Vec<f64>,
    k: Option<usize>,
}

impl WeightedChiSquareLaw {
    pub fn new(weights: Vec<f64>, noncentralities: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("law needs at least one weight"));
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::domain("weights must be positive and finite"));
        }
        if noncentralities.len() != weights.len() {
            return Err(Error::domain(format!(
                "{} noncentralities for {} weights",
                noncentralities.len(),
                weights.len()
            )));
        }
        if noncentralities.iter().any(|m| !m.is_finite()) {
            return Err(Error::domain("noncentralities must be finite"));
        }
        Ok(WeightedChiSquareLaw { weights, noncentralities, k: None })
    }

    /// The null limit for a given `k`.
    pub fn null(k: usize) -> Result<Self> {
        let weights = eigenvalues(k)?;
        let zeros = vec![0.0; weights.len()];
        Ok(WeightedChiSquareLaw { weights, noncentralities: zeros, k: Some(k) })
    }

    /// The limit under a local alternative with the given noncentralities.
    pub fn with_noncentrality(k: usize, noncentralities: Vec<f64>) -> Result<Self> {
        let mut law = WeightedChiSquareLaw::new(eigenvalues(k)?, noncentralities)?;
        law.k = Some(k);
        Ok(law)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn noncentralities(&self) -> &[f64] {
        &self.noncentralities
    }

    /// The `k` the weights were built from, if any.
    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().zip(&self.noncentralities).map(|(l, m)| l * (1.0 + m * m)).sum()
    }

    fn integrand(&self, u: f64, x: f64) -> f64 {
        if u < 1e-12 {
            // sin θ(u)/u → θ'(0) = (Σ λᵢ(1+μᵢ²) − x)/2.
            return 0.5 * (self.mean() - x);
        }
        let mut theta = -0.5 * x * u;
        let mut log_rho = 0.0;
        for (&l, &m) in self.weights.iter().zip(&self.noncentralities) {
            let lu = l * u;
            let q = 1.0 + lu * lu;
            let m2 = m * m;
            theta += 0.5 * lu.atan() + m2 * lu / (2.0 * q);
            log_rho += 0.25 * q.ln() + m2 * lu * lu / (2.0 * q);
        }
        theta.sin() / (u * log_rho.exp())
    }

    fn envelope(&self, u: f64) -> f64 {
        let log_rho: f64 = self
            .weights
            .iter()
            .zip(&self.noncentralities)
            .map(|(&l, &m)| {
                let lu = l * u;
                let q = 1.0 + lu * lu;
                0.25 * q.ln() + m * m * lu * lu / (2.0 * q)
            })
            .sum();
        1.0 / (u * log_rho.exp())
    }

    /// Chernoff bound `P(Q > x) ≤ min_t E[e^{tQ}] e^{−tx}` over `0 < t < 1/(2λ_max)`.
    /// The exponent is convex in `t`, so golden-section search suffices.
    fn upper_tail_bound(&self, x: f64) -> f64 {
        let largest = self.weights.iter().copied().fold(0.0, f64::max);
        let log_bound = |s: f64| {
            let t = s / (2.0 * largest);
            let cgf: f64 = self
                .weights
                .iter()
                .zip(&self.noncentralities)
                .map(|(&l, &m)| {
                    let r = 1.0 - 2.0 * t * l;
                    -0.5 * r.ln() + m * m * l * t / r
                })
                .sum();
            cgf - t * x
        };
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (0.0, 1.0 - 1e-12);
        for _ in 0..60 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if log_bound(a) < log_bound(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        log_bound(0.5 * (lo + hi)).exp().min(1.0)
    }

    /// `P(Q ≤ x)` with quadrature diagnostics.
    pub fn cdf_with_diagnostics(&self, x: f64) -> Result<CdfDiagnostics> {
        if x.is_nan() {
            return Err(Error::domain("x is NaN"));
        }
        if x <= 0.0 {
            return Ok(CdfDiagnostics { raw: 0.0, error_estimate: 0.0, tail_chunks: 0, evaluations: 0 });
        }
        if x == f64::INFINITY {
            return Ok(CdfDiagnostics { raw: 1.0, error_estimate: 0.0, tail_chunks: 0, evaluations: 0 });
        }
        if x > self.mean() {
            let bound = self.upper_tail_bound(x);
            if bound < 1e-3 * CDF_ABS_TOL {
                return Ok(CdfDiagnostics { raw: 1.0, error_estimate: bound, tail_chunks: 0, evaluations: 0 });
            }
        }
        let f = |u: f64| self.integrand(u, x);
        let half_period = 2.0 * PI / x;
        let smallest = self.weights.iter().copied().fold(f64::INFINITY, f64::min);
        // Beyond 20/λ_min the phase is close to linear in u.
        let head_end = half_period * (20.0 / smallest / half_period).ceil().max(1.0);

        // The integrand varies on the scale 1/λ_max near the origin while the
        // head may span many such scales; geometric breakpoints keep the
        // adaptive rule from stepping over the peak.
        let largest = self.weights.iter().copied().fold(0.0, f64::max);
        let mut breaks = vec![0.0];
        let mut b = 0.1 / largest.max(x);
        while b < head_end {
            breaks.push(b);
            b *= 2.0;
        }
        breaks.push(head_end);
        let share = 0.1 * CDF_ABS_TOL / breaks.len() as f64;
        let mut head_value = 0.0;
        let mut evaluations = 0;
        let mut error = 0.0;
        for w in breaks.windows(2) {
            let piece = integrate(f, w[0], w[1], share, 20_000)?;
            head_value += piece.value;
            evaluations += piece.evaluations;
            error += piece.abs_error;
        }
        let head_error = error;

        let mut partial = vec![head_value];
        let mut a = head_end;
        let mut previous_extrapolation: Option<f64> = None;
        let mut value = None;
        const MAX_CHUNKS: usize = 4000;
        const WINDOW: usize = 40;
        for chunk in 1..=MAX_CHUNKS {
            let b = a + half_period;
            let piece = integrate(f, a, b, 1e-3 * CDF_ABS_TOL, 2_000)?;
            evaluations += piece.evaluations;
            error += piece.abs_error;
            partial.push(partial.last().unwrap() + piece.value);
            a = b;

            // Remaining tail is bounded by the next half-period of the envelope.
            let tail_bound = self.envelope(a) * half_period;
            if tail_bound < 1e-3 * CDF_ABS_TOL {
                value = Some((*partial.last().unwrap(), tail_bound, chunk));
                break;
            }
            if chunk >= 10 && chunk % 2 == 0 {
                let window = &partial[partial.len().saturating_sub(WINDOW)..];
                if let Some((est, est_err)) = wynn_epsilon(window) {
                    if let Some(prev) = previous_extrapolation {
                        let diff = (est - prev).abs();
                        if diff < 1e-2 * CDF_ABS_TOL && est_err < 0.1 * CDF_ABS_TOL {
                            value = Some((est, diff.max(est_err), chunk));
                            break;
                        }
                    }
                    previous_extrapolation = Some(est);
                }
            }
        }
        let (integral, tail_err, tail_chunks) = match value {
            Some(v) => v,
            None => {
                return Err(Error::Numeric(format!(
                    "inversion integral for x = {x} did not converge after {MAX_CHUNKS} tail segments \
                     (last extrapolation {previous_extrapolation:?}, head error {head_error:e})"
                )))
            }
        };
        error += tail_err;
        if error > PI * CDF_ABS_TOL {
            return Err(Error::Numeric(format!(
                "inversion integral for x = {x}: error estimate {:e} exceeds tolerance",
                error / PI
            )));
        }
        Ok(CdfDiagnostics { raw: 0.5 - integral / PI, error_estimate: error / PI, tail_chunks, evaluations })
    }

    /// `P(Q ≤ x)`, clipped to `[0, 1]`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.cdf_with_diagnostics(x)?.raw.clamp(0.0, 1.0))
    }

    /// `P(Q > t) = 1 − cdf(t)`.
    pub fn p_value(&self, t: f64) -> Result<f64> {
        Ok(1.0 - self.cdf(t)?)
    }

    /// One draw of `Σᵢ λᵢ (Zᵢ + μᵢ)²`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.weights
            .iter()
            .zip(&self.noncentralities)
            .map(|(l, m)| {
                let z: f64 = rng.sample(StandardNormal);
                l * (z + m) * (z + m)
            })
            .sum()
    }

    /// Monte Carlo estimate of `P(Q ≤ x)` from `sample_count` draws.
    pub fn mc_cdf<R: Rng + ?Sized>(&self, x: f64, sample_count: usize, rng: &mut R) -> Result<f64> {
        if sample_count == 0 {
            return Err(Error::domain("sample_count must be at least 1"));
        }
        let hits = (0..sample_count).filter(|_| self.draw(rng) <= x).count();
        Ok(hits as f64 / sample_count as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    /// P(χ²₁ ≤ y) = erf(√(y/2)).
    fn chi2_1_cdf(y: f64) -> f64 {
        libm::erf((y / 2.0).sqrt())
    }

    #[test]
    fn eigenvalue_examples() {
        assert!((eigenvalues(2).unwrap()[0] - 0.5).abs() < 1e-15);
        let e3 = eigenvalues(3).unwrap();
        assert!((e3[0] - 1.0).abs() < 1e-15 && (e3[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!(eigenvalues(1).is_err());
    }

    #[test]
    fn eigenvalue_sum_identity_and_order() {
        for k in 2..=1000 {
            let e = eigenvalues(k).unwrap();
            let sum: f64 = e.iter().sum();
            let want = ((k - 1) * (k + 1)) as f64 / 6.0;
            assert!((sum - want).abs() <= 1e-12 * want.max(1.0), "k = {k}: {sum} vs {want}");
            assert!(e.windows(2).all(|w| w[0] > w[1]));
            assert!(e.iter().all(|&l| l > 0.25));
        }
    }

    #[test]
    fn noncentrality_examples() {
        assert!(noncentrality(1.0, 0.0, 0.5, 1.5, 5).unwrap().iter().all(|&m| m == 0.0));
        assert!(noncentrality(0.0, 2.0, 0.5, 1.5, 5).unwrap().iter().all(|&m| m == 0.0));
        let (kk, s, delta, m_d) = (0.7, 3.0, 0.8, 1.4);
        let mu = noncentrality(kk, s, delta, m_d, 2).unwrap();
        let want = kk * s.sqrt() * m_d.powf(0.5 + delta) / 2f64.powf(delta);
        assert!((mu[0] - want).abs() < 1e-14);
        for delta in [0.5, 1.0] {
            for k in 2..=10 {
                assert!(noncentrality(1.0, 1.0, delta, 1.5, k).unwrap().iter().all(|&m| m > 0.0));
            }
        }
    }

    #[test]
    fn k2_matches_chi_square() {
        let law = WeightedChiSquareLaw::null(2).unwrap();
        for x in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0] {
            let got = law.cdf(x).unwrap();
            assert!((got - chi2_1_cdf(2.0 * x)).abs() < 1e-8, "x = {x}: {got} vs {}", chi2_1_cdf(2.0 * x));
        }
    }

    #[test]
    fn noncentral_single_term_matches_closed_form() {
        // (Z + μ)² ≤ y  ⇔  −√y − μ ≤ Z ≤ √y − μ.
        let mu = 1.3;
        let law = WeightedChiSquareLaw::new(vec![1.0], vec![mu]).unwrap();
        for y in [0.2_f64, 1.0, 3.0, 8.0] {
            let r = y.sqrt();
            let want = crate::normal::std_normal_cdf(r - mu) - crate::normal::std_normal_cdf(-r - mu);
            assert!((law.cdf(y).unwrap() - want).abs() < 1e-8, "y = {y}");
        }
    }

    #[test]
    fn chernoff_bound_dominates_exact_tail() {
        let law = WeightedChiSquareLaw::null(2).unwrap();
        for x in [2.0, 10.0, 30.0] {
            let exact = 1.0 - chi2_1_cdf(2.0 * x);
            let bound = law.upper_tail_bound(x);
            assert!(bound >= exact && bound < 1.0, "x = {x}: {bound} vs {exact}");
        }
        assert!(law.upper_tail_bound(30.0) < 1e-11);
        let nc = WeightedChiSquareLaw::new(vec![1.0], vec![1.3]).unwrap();
        for y in [5.0_f64, 20.0, 60.0] {
            let r = y.sqrt();
            let exact = 1.0 - (crate::normal::std_normal_cdf(r - 1.3) - crate::normal::std_normal_cdf(-r - 1.3));
            assert!(nc.upper_tail_bound(y) >= exact * (1.0 - 1e-9));
        }
    }

    #[test]
    fn support_and_limits() {
        let law = WeightedChiSquareLaw::null(4).unwrap();
        assert_eq!(law.cdf(0.0).unwrap(), 0.0);
        assert_eq!(law.cdf(-3.0).unwrap(), 0.0);
        assert!(law.cdf(1e-6).unwrap() <= 1e-3);
        assert!(law.cdf(200.0).unwrap() >= 1.0 - 1e-6);
        assert_eq!(law.p_value(0.0).unwrap(), 1.0);
    }

    #[test]
    fn p_value_at_chi_square_quantile() {
        let law = WeightedChiSquareLaw::null(2).unwrap();
        assert!((law.p_value(3.841_458_820_694_124 / 2.0).unwrap() - 0.05).abs() < 1e-8);
        let mut prev = 1.0;
        for i in 0..200 {
            let p = law.p_value(i as f64 * 0.05).unwrap();
            assert!(p <= prev + 1e-9);
            prev = p;
        }
    }

    #[test]
    fn cdf_is_monotone_for_several_k() {
        for k in [3, 5, 10] {
            let law = WeightedChiSquareLaw::null(k).unwrap();
            let mut prev = 0.0;
            for i in 1..80 {
                let v = law.cdf(i as f64 * 0.25).unwrap();
                assert!(v >= prev - 1e-8, "k = {k}, x = {}", i as f64 * 0.25);
                prev = v;
            }
        }
    }

    #[test]
    fn mc_oracle_single_weight() {
        let law = WeightedChiSquareLaw::new(vec![1.0], vec![0.0]).unwrap();
        let p = law.mc_cdf(3.841, 200_000, &mut substream(5, 0)).unwrap();
        assert!((p - 0.95).abs() < 3.0 / (200_000f64).sqrt());
        assert_eq!(law.mc_cdf(f64::INFINITY, 10, &mut substream(5, 1)).unwrap(), 1.0);
        assert!(law.mc_cdf(1.0, 0, &mut substream(5, 1)).is_err());
    }

    #[test]
    fn scaled_law_has_unit_mean() {
        let k = 20;
        let law = WeightedChiSquareLaw::null(k).unwrap();
        let scale = 6.0 / ((k - 1) * (k + 1)) as f64;
        let mut rng = substream(6, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| scale * law.draw(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn invalid_laws() {
        assert!(WeightedChiSquareLaw::new(vec![], vec![]).is_err());
        assert!(WeightedChiSquareLaw::new(vec![1.0, -1.0], vec![0.0, 0.0]).is_err());
        assert!(WeightedChiSquareLaw::new(vec![1.0], vec![0.0, 0.0]).is_err());
    }
}
