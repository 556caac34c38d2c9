//! D-norms attached to the copula families as ground truth.

use super::lemma_one::{dnorm_lemma1, dnorm_remark};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DNormKind {
    /// Independence: `‖x‖₁`.
    L1,
    /// Complete dependence: `‖x‖_∞`.
    LInfinity,
    /// Logistic (Gumbel) norm `(Σ|xᵢ|^θ)^{1/θ}`, `θ ≥ 1`.
    Logistic(f64),
    /// The D-norm of the `λ = 0` member of the oscillating family (d = 2).
    LemmaOneNorm,
    /// Same construction with two independent uniforms (d = 2).
    RemarkNorm,
}

/// A D-norm tag. `m_D = ‖(1, …, 1)‖_D` is the extremal coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DNormTag {
    pub kind: DNormKind,
}

impl DNormTag {
    pub fn new(kind: DNormKind) -> Self {
        DNormTag { kind }
    }

    /// Evaluates the norm. The two bivariate norms panic on other lengths.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match self.kind {
            DNormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            DNormKind::LInfinity => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            DNormKind::Logistic(theta) => {
                let sup = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                if sup == 0.0 {
                    return 0.0;
                }
                // Scaled to keep |x|^θ from overflowing for large θ.
                sup * x.iter().map(|v| (v.abs() / sup).powf(theta)).sum::<f64>().powf(1.0 / theta)
            }
            DNormKind::LemmaOneNorm => dnorm_lemma1(pair(x)),
            DNormKind::RemarkNorm => dnorm_remark(pair(x)),
        }
    }

    pub fn extremal_coefficient(&self, dim: usize) -> f64 {
        self.evaluate(&vec![1.0; dim])
    }
}

fn pair(x: &[f64]) -> [f64; 2] {
    assert_eq!(x.len(), 2, "bivariate D-norm evaluated on a {}-vector", x.len());
    [x[0], x[1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const KINDS: [DNormKind; 6] = [
        DNormKind::L1,
        DNormKind::LInfinity,
        DNormKind::Logistic(1.5),
        DNormKind::Logistic(4.0),
        DNormKind::LemmaOneNorm,
        DNormKind::RemarkNorm,
    ];

    #[test]
    fn extremal_coefficients() {
        assert_eq!(DNormTag::new(DNormKind::L1).extremal_coefficient(5), 5.0);
        assert_eq!(DNormTag::new(DNormKind::LInfinity).extremal_coefficient(5), 1.0);
        assert_eq!(DNormTag::new(DNormKind::LemmaOneNorm).extremal_coefficient(2), 1.5);
        let m = DNormTag::new(DNormKind::Logistic(2.0)).extremal_coefficient(2);
        assert!((m - 2f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sandwich_homogeneity_triangle(
            x in prop::array::uniform2(-10.0f64..10.0),
            y in prop::array::uniform2(-10.0f64..10.0),
            a in -5.0f64..5.0,
        ) {
            for kind in KINDS {
                let tag = DNormTag::new(kind);
                let nx = tag.evaluate(&x);
                let sup = x[0].abs().max(x[1].abs());
                let l1 = x[0].abs() + x[1].abs();
                prop_assert!(nx >= sup - 1e-12 && nx <= l1 + 1e-12, "{kind:?} {x:?}");
                let scaled = tag.evaluate(&[a * x[0], a * x[1]]);
                prop_assert!((scaled - a.abs() * nx).abs() <= 1e-12 * (1.0 + scaled.abs()));
                let sum = tag.evaluate(&[x[0] + y[0], x[1] + y[1]]);
                prop_assert!(sum <= nx + tag.evaluate(&y) + 1e-12, "{kind:?}");
            }
        }
    }
}
