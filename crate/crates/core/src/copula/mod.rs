//! Copula families with exact samplers and ground-truth metadata.

mod archimedean;
mod dnorm;
mod gaussian;
mod lemma_one;

pub use archimedean::{clayton_cdf, gumbel_cdf, positive_stable, sample_clayton, sample_gumbel};
pub use dnorm::{DNormKind, DNormTag};
pub use gaussian::{sample_normal_copula, CorrMatrix, MIN_PIVOT};
pub(crate) use lemma_one::{check_lambda, draw_v, f_lambda_fast};
pub use lemma_one::{
    dnorm_lemma1, dnorm_remark, f_lambda_cdf, h_lambda_cdf, h_lambda_quantile, sample_lemma1, spectral_ratio_oracle,
    LambdaFamilyParams, LAMBDA_MAX,
};

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    LemmaOne(LambdaFamilyParams),
    Clayton { theta: f64 },
    Gumbel { theta: f64 },
    NormalCopula { corr: CorrMatrix },
}

/// What is known about the upper tail of a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truth {
    /// Exactly a generalized Pareto copula near (1, …, 1).
    Gpc,
    /// In the δ-neighborhood of a generalized Pareto copula.
    DeltaNeighborhood(f64),
    /// Not in the max-domain of attraction of any extreme value distribution.
    NotInDomainOfAttraction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopulaModel {
    family: Family,
    dimension: usize,
    truth: Truth,
}

impl CopulaModel {
    pub fn lemma_one(lambda: f64) -> Result<Self> {
        let params = LambdaFamilyParams::new(lambda)?;
        let truth = if lambda == 0.0 { Truth::Gpc } else { Truth::NotInDomainOfAttraction };
        Ok(CopulaModel { family: Family::LemmaOne(params), dimension: 2, truth })
    }

    /// Clayton copula, `θ ∈ [−1, ∞) \ {0}`. Negative parameters are bivariate
    /// only and cannot be sampled.
    pub fn clayton(dimension: usize, theta: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::domain("Clayton copula needs dimension ≥ 2"));
        }
        if !(theta >= -1.0) || theta == 0.0 || !theta.is_finite() {
            return Err(Error::domain(format!("Clayton theta must lie in [-1, ∞) \\ {{0}}, got {theta}")));
        }
        if theta < 0.0 && dimension != 2 {
            return Err(Error::domain("Clayton theta < 0 is only a copula for dimension 2"));
        }
        let truth = if theta == -1.0 { Truth::Gpc } else { Truth::DeltaNeighborhood(1.0) };
        Ok(CopulaModel { family: Family::Clayton { theta }, dimension, truth })
    }

    /// Gumbel–Hougaard copula, `θ ∈ [1, 2)`; `δ = 2 − θ`, and `θ = 1` is the
    /// independence copula, tagged as a GPC.
    pub fn gumbel(dimension: usize, theta: f64) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::domain("Gumbel copula needs dimension ≥ 2"));
        }
        if !(1.0..2.0).contains(&theta) {
            return Err(Error::domain(format!("Gumbel theta must lie in [1, 2) for a δ-neighborhood, got {theta}")));
        }
        let truth = if theta == 1.0 { Truth::Gpc } else { Truth::DeltaNeighborhood(2.0 - theta) };
        Ok(CopulaModel { family: Family::Gumbel { theta }, dimension, truth })
    }

    /// Normal copula with all correlations in (−1, 0);
    /// `δ = min ρᵢⱼ² / (1 − ρᵢⱼ²)`.
    pub fn normal(corr: CorrMatrix) -> Result<Self> {
        let dimension = corr.dim();
        if dimension < 2 {
            return Err(Error::domain("normal copula needs dimension ≥ 2"));
        }
        let mut delta = f64::INFINITY;
        for rho in corr.off_diagonal() {
            if !(rho > -1.0 && rho < 0.0) {
                return Err(Error::domain(format!("normal copula correlations must lie in (-1, 0), got {rho}")));
            }
            delta = delta.min(rho * rho / (1.0 - rho * rho));
        }
        corr.cholesky()?;
        Ok(CopulaModel { family: Family::NormalCopula { corr }, dimension, truth: Truth::DeltaNeighborhood(delta) })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn truth(&self) -> Truth {
        self.truth
    }

    /// The D-norm of the limiting GPC, when the model has one.
    pub fn dnorm(&self) -> Option<DNormTag> {
        let kind = match (&self.family, self.truth) {
            (_, Truth::NotInDomainOfAttraction) => return None,
            (Family::LemmaOne(_), _) => DNormKind::LemmaOneNorm,
            (Family::Gumbel { theta }, _) => DNormKind::Logistic(*theta),
            // Both are upper-tail independent.
            (Family::Clayton { .. }, _) | (Family::NormalCopula { .. }, _) => DNormKind::L1,
        };
        Some(DNormTag::new(kind))
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        match &self.family {
            Family::LemmaOne(p) => sample_lemma1(n, p.lambda(), rng),
            Family::Clayton { theta } => sample_clayton(n, self.dimension, *theta, rng),
            Family::Gumbel { theta } => sample_gumbel(n, self.dimension, *theta, rng),
            Family::NormalCopula { corr } => sample_normal_copula(n, corr, rng),
        }
    }
}

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::LemmaOne(p) => write!(f, "lemma1(lambda={})", p.lambda()),
            Family::Clayton { theta } => write!(f, "clayton(d={},theta={theta})", self.dimension),
            Family::Gumbel { theta } => write!(f, "gumbel(d={},theta={theta})", self.dimension),
            Family::NormalCopula { corr } => {
                let rho = corr.off_diagonal().next().unwrap_or(0.0);
                write!(f, "normal(d={},rho={rho})", self.dimension)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn truth_tags() {
        assert_eq!(CopulaModel::lemma_one(0.0).unwrap().truth(), Truth::Gpc);
        assert_eq!(CopulaModel::lemma_one(0.3).unwrap().truth(), Truth::NotInDomainOfAttraction);
        assert!(CopulaModel::lemma_one(0.3).unwrap().dnorm().is_none());
        assert_eq!(CopulaModel::clayton(2, -1.0).unwrap().truth(), Truth::Gpc);
        assert_eq!(CopulaModel::clayton(3, 0.5).unwrap().truth(), Truth::DeltaNeighborhood(1.0));
        assert!(CopulaModel::clayton(2, 0.0).is_err());
        assert!(CopulaModel::clayton(3, -0.5).is_err());
        assert_eq!(CopulaModel::gumbel(2, 1.0).unwrap().truth(), Truth::Gpc);
        assert_eq!(CopulaModel::gumbel(2, 1.5).unwrap().truth(), Truth::DeltaNeighborhood(0.5));
        assert!(CopulaModel::gumbel(2, 2.0).is_err());
        let normal = CopulaModel::normal(CorrMatrix::equicorrelated(2, -0.5).unwrap()).unwrap();
        match normal.truth() {
            Truth::DeltaNeighborhood(d) => assert!((d - 1.0 / 3.0).abs() < 1e-15),
            t => panic!("{t:?}"),
        }
        assert!(CopulaModel::normal(CorrMatrix::identity(2)).is_err());
    }

    #[test]
    fn negative_clayton_is_tagged_but_not_sampled() {
        let m = CopulaModel::clayton(2, -1.0).unwrap();
        assert!(m.sample(10, &mut substream(0, 0)).is_err());
    }

    /// 1 − C(1−c, …, 1−c) ≈ c·m_D for every model with a limiting D-norm.
    #[test]
    fn diagonal_tail_matches_extremal_coefficient() {
        let models = [
            CopulaModel::lemma_one(0.0).unwrap(),
            CopulaModel::clayton(2, 0.5).unwrap(),
            CopulaModel::clayton(2, 1.0).unwrap(),
            CopulaModel::gumbel(2, 1.0).unwrap(),
            CopulaModel::gumbel(3, 1.5).unwrap(),
            CopulaModel::normal(CorrMatrix::equicorrelated(2, -0.5).unwrap()).unwrap(),
        ];
        let n = 200_000;
        for (idx, model) in models.iter().enumerate() {
            let m_d = model.dnorm().unwrap().extremal_coefficient(model.dimension());
            let s = model.sample(n, &mut substream(41, idx as u64)).unwrap();
            for c in [0.1, 0.05] {
                let p = s.rows().filter(|r| r.iter().any(|&v| v > 1.0 - c)).count() as f64 / n as f64;
                let se = (p * (1.0 - p) / n as f64).sqrt();
                let tol = c.powf(1.5) + 3.0 * se;
                assert!((p - c * m_d).abs() < tol, "{model} c={c}: {p} vs {}", c * m_d);
            }
        }
    }

    #[test]
    fn margins_are_uniform() {
        use crate::stats::ks_uniform;
        let n = 100_000;
        let bound = 2.0 * 1.36 / (n as f64).sqrt();
        let models = [
            CopulaModel::lemma_one(0.0).unwrap(),
            CopulaModel::lemma_one(0.7).unwrap(),
            CopulaModel::lemma_one(-LAMBDA_MAX).unwrap(),
            CopulaModel::clayton(2, 2.0).unwrap(),
            CopulaModel::gumbel(3, 1.7).unwrap(),
            CopulaModel::normal(CorrMatrix::equicorrelated(3, -0.3).unwrap()).unwrap(),
        ];
        for (idx, model) in models.iter().enumerate() {
            let s = model.sample(n, &mut substream(42, idx as u64)).unwrap();
            for j in 0..model.dimension() {
                let d = ks_uniform(&s.column(j));
                assert!(d < bound, "{model} column {j}: KS {d}");
            }
        }
    }
}
