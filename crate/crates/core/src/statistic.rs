//! The χ²-type statistic
//!
//! ```text
//! T = Σ_j (j·n_j − A)² / A,   A = (1/k) Σ_ℓ ℓ·n_ℓ,
//! ```
//!
//! and the extremal-coefficient estimate `Σ_j j·n_j / (m·c·k)`.

use crate::error::{Error, Result};
use crate::exceedance::ExceedanceCounts;
use crate::limit_dist::WeightedChiSquareLaw;

/// `T` from a set of exceedance counts. Fails when there are no exceedances
/// at all: an empty test must not read as a non-rejection.
pub fn t_statistic(counts: &ExceedanceCounts) -> Result<f64> {
    let k = counts.counts.len();
    let mean = counts.weighted_sum() / k as f64;
    if mean <= 0.0 {
        return Err(Error::DegenerateSample { c: counts.c, m: counts.m });
    }
    let ss: f64 = counts
        .counts
        .iter()
        .enumerate()
        .map(|(i, &nj)| {
            let dev = (i + 1) as f64 * nj as f64 - mean;
            dev * dev
        })
        .sum();
    Ok(ss / mean)
}

/// Extremal-coefficient estimate: the raw value and the value clipped to
/// `[1, d]` for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalCoefficient {
    pub raw: f64,
    pub clipped: f64,
}

pub fn estimate_extremal_coefficient(counts: &ExceedanceCounts, dimension: usize) -> ExtremalCoefficient {
    let raw = counts.weighted_sum() / (counts.m as f64 * counts.c * counts.k as f64);
    ExtremalCoefficient { raw, clipped: raw.clamp(1.0, dimension.max(1) as f64) }
}

/// Run parameters carried alongside each result.
#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub n: usize,
    pub m: usize,
    pub c: f64,
    pub k: usize,
    pub family: String,
    pub seed: Option<u64>,
    /// Replication index; 0 for one-shot tests.
    pub rep: usize,
}

/// Outcome of one test. `statistic`, `p_value` and `m_d_hat` are `None`
/// when the sample was degenerate for this threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub m_d_hat: Option<f64>,
    pub counts: ExceedanceCounts,
    pub params: RunParams,
}

impl TestReport {
    pub fn is_degenerate(&self) -> bool {
        self.statistic.is_none()
    }
}

/// Computes `T`, its p-value under `law`, and the extremal coefficient.
///
/// A degenerate sample yields a report without statistic; numerical failure
/// of the p-value computation is an error. `family`, `seed` and `rep` in the
/// returned parameters are left for the caller to fill in.
pub fn run_test(counts: ExceedanceCounts, dimension: usize, law: &WeightedChiSquareLaw) -> Result<TestReport> {
    let params =
        RunParams { n: counts.n, m: counts.m, c: counts.c, k: counts.k, family: String::new(), seed: None, rep: 0 };
    match t_statistic(&counts) {
        Ok(t) => {
            let p = law.p_value(t)?;
            let m_d = estimate_extremal_coefficient(&counts, dimension).clipped;
            Ok(TestReport { statistic: Some(t), p_value: Some(p), m_d_hat: Some(m_d), counts, params })
        }
        Err(Error::DegenerateSample { .. }) => {
            Ok(TestReport { statistic: None, p_value: None, m_d_hat: None, counts, params })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(v: &[u64]) -> ExceedanceCounts {
        ExceedanceCounts { counts: v.to_vec(), n: 100, m: 100, c: 0.1, k: v.len() }
    }

    #[test]
    fn hand_examples() {
        assert_eq!(t_statistic(&counts(&[4, 2])).unwrap(), 0.0);
        assert!((t_statistic(&counts(&[3, 1])).unwrap() - 0.2).abs() < 1e-15);
        assert!(matches!(t_statistic(&counts(&[0, 0])), Err(Error::DegenerateSample { .. })));
    }

    #[test]
    fn extremal_coefficient_formula_and_clipping() {
        let e = estimate_extremal_coefficient(&counts(&[15, 7]), 2);
        assert!((e.raw - 29.0 / 20.0).abs() < 1e-15);
        assert_eq!(e.clipped, e.raw);
        let e = estimate_extremal_coefficient(&counts(&[30, 20]), 2);
        assert_eq!((e.raw, e.clipped), (3.5, 2.0));
    }

    #[test]
    fn degenerate_report_has_no_statistic() {
        let law = WeightedChiSquareLaw::null(2).unwrap();
        let r = run_test(counts(&[0, 0]), 2, &law).unwrap();
        assert!(r.is_degenerate());
        let r = run_test(counts(&[4, 2]), 2, &law).unwrap();
        assert_eq!(r.statistic, Some(0.0));
        assert!((r.p_value.unwrap() - 1.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn scales_linearly_with_counts(v in prop::collection::vec(0u64..500, 2..8), alpha in 1u64..20) {
            prop_assume!(v.iter().any(|&x| x > 0));
            let base = t_statistic(&counts(&v)).unwrap();
            let scaled: Vec<u64> = v.iter().map(|x| x * alpha).collect();
            let t = t_statistic(&counts(&scaled)).unwrap();
            prop_assert!((t - alpha as f64 * base).abs() <= 1e-9 * (1.0 + t));
            prop_assert!(base >= 0.0);
        }

        #[test]
        fn zero_iff_weighted_counts_constant(a in 1u64..200, k in 2usize..7) {
            // n_j = L/j for L divisible by every j ≤ k makes j·n_j constant.
            let l = a * 420;
            let v: Vec<u64> = (1..=k as u64).map(|j| l / j).collect();
            prop_assert_eq!(t_statistic(&counts(&v)).unwrap(), 0.0);
            let mut w = v.clone();
            w[0] += 1;
            prop_assert!(t_statistic(&counts(&w)).unwrap() > 0.0);
        }
    }
}
