//! Normal copula: `(Φ(X₁), …, Φ(X_d))` with `X ~ N(0, R)`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::normal::std_normal_cdf;
use crate::sample::Sample;

/// Smallest acceptable Cholesky pivot.
pub const MIN_PIVOT: f64 = 1e-12;

/// A symmetric correlation matrix with unit diagonal, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl CorrMatrix {
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::domain(format!("correlation matrix needs {dim}×{dim} entries")));
        }
        for i in 0..dim {
            if entries[i * dim + i] != 1.0 {
                return Err(Error::domain(format!("diagonal entry {i} is {}, expected 1", entries[i * dim + i])));
            }
            for j in 0..i {
                let (a, b) = (entries[i * dim + j], entries[j * dim + i]);
                if a != b {
                    return Err(Error::domain(format!("matrix not symmetric at ({i}, {j})")));
                }
                if !(a.abs() <= 1.0) {
                    return Err(Error::domain(format!("correlation {a} at ({i}, {j}) outside [-1, 1]")));
                }
            }
        }
        Ok(CorrMatrix { dim, entries })
    }

    /// All off-diagonal entries equal to `rho`.
    pub fn equicorrelated(dim: usize, rho: f64) -> Result<Self> {
        let entries = (0..dim * dim).map(|k| if k / dim == k % dim { 1.0 } else { rho }).collect();
        CorrMatrix::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Self {
        CorrMatrix::equicorrelated(dim, 0.0).expect("identity is a valid correlation matrix")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim).flat_map(move |i| (0..i).map(move |j| self.get(i, j)))
    }

    /// Lower-triangular `L` with `L Lᵀ = R`, row-major.
    pub fn cholesky(&self) -> Result<Vec<f64>> {
        let d = self.dim;
        let mut l = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let dot: f64 = (0..j).map(|k| l[i * d + k] * l[j * d + k]).sum();
                if i == j {
                    let pivot = self.get(i, i) - dot;
                    if pivot < MIN_PIVOT {
                        return Err(Error::NotPositiveDefinite { row: i, pivot });
                    }
                    l[i * d + i] = pivot.sqrt();
                } else {
                    l[i * d + j] = (self.get(i, j) - dot) / l[j * d + j];
                }
            }
        }
        Ok(l)
    }
}

pub fn sample_normal_copula<R: Rng + ?Sized>(n: usize, corr: &CorrMatrix, rng: &mut R) -> Result<Sample> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let d = corr.dim();
    let l = corr.cholesky()?;
    let mut z = vec![0.0; d];
    let mut out = Sample::zeros(n, d);
    for i in 0..n {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(rng);
        }
        let row = out.row_mut(i);
        for r in 0..d {
            let x: f64 = (0..=r).map(|k| l[r * d + k] * z[k]).sum();
            row[r] = std_normal_cdf(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::std_normal_quantile;
    use crate::rng::substream;

    #[test]
    fn cholesky_reconstructs_matrix() {
        let r = CorrMatrix::new(3, vec![1.0, 0.3, -0.2, 0.3, 1.0, 0.5, -0.2, 0.5, 1.0]).unwrap();
        let l = r.cholesky().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| l[i * 3 + k] * l[j * 3 + k]).sum();
                assert!((v - r.get(i, j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let r = CorrMatrix::equicorrelated(3, -0.5).unwrap();
        assert!(matches!(r.cholesky(), Err(Error::NotPositiveDefinite { row: 2, .. })));
        assert!(sample_normal_copula(5, &r, &mut substream(0, 0)).is_err());
        assert!(CorrMatrix::new(2, vec![1.0, 0.2, 0.3, 1.0]).is_err());
        assert!(CorrMatrix::new(2, vec![2.0, 0.2, 0.2, 1.0]).is_err());
    }

    #[test]
    fn identity_gives_independence() {
        let s = sample_normal_copula(1_000_000, &CorrMatrix::identity(2), &mut substream(31, 0)).unwrap();
        for (u, v) in [(0.3, 0.6), (0.5, 0.5), (0.95, 0.95)] {
            let emp = s.rows().filter(|r| r[0] <= u && r[1] <= v).count() as f64 / s.nrows() as f64;
            assert!((emp - u * v).abs() < 3e-3);
        }
    }

    #[test]
    fn latent_correlation_is_recovered() {
        let rho = -0.5;
        let s =
            sample_normal_copula(100_000, &CorrMatrix::equicorrelated(2, rho).unwrap(), &mut substream(32, 0)).unwrap();
        let z: Vec<(f64, f64)> = s.rows().map(|r| (std_normal_quantile(r[0]), std_normal_quantile(r[1]))).collect();
        let n = z.len() as f64;
        let (mx, my) = z.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
        let (sxy, sxx, syy) = z.iter().fold((0.0, 0.0, 0.0), |a, p| {
            (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2), a.2 + (p.1 - my).powi(2))
        });
        let r = sxy / (sxx * syy).sqrt();
        assert!((r - rho).abs() < 0.01, "{r}");
    }
}
