//! Grid observations of the process
//! `X_t = −V / (2 exp(max(η₁/(1−t), η₂/t)))`, `t ∈ [0, 1]`,
//! with `η₁, η₂` standard negative exponential and `V ~ H_λ`.
//!
//! Every `X_t` has the same distribution as `−V/(2S)` with `S` uniform, so the
//! common margin is `x ↦ F_λ(2x)`. For `λ = 0` this is a generalized Pareto
//! process.

use std::io::Write;
use std::path::Path;

use rand::Rng;

use crate::copula::{check_lambda, draw_v, f_lambda_fast};
use crate::error::{Error, Result};
use crate::rng::open01;
use crate::sample::Sample;

/// Strictly increasing grid `0 = t₁ < … < t_d = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    points: Vec<f64>,
}

impl GridSpec {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain(format!("grid needs at least 2 points, got {}", points.len())));
        }
        if points[0] != 0.0 || *points.last().unwrap() != 1.0 {
            return Err(Error::domain("grid must start at 0 and end at 1"));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("grid points must be strictly increasing"));
        }
        Ok(GridSpec { points })
    }

    pub fn equidistant(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("grid needs at least 2 points, got {d}")));
        }
        let last = (d - 1) as f64;
        GridSpec::new((0..d).map(|i| i as f64 / last).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `n` paths observed on a grid; row `i` is path `i`.
#[derive(Debug, Clone)]
pub struct ProcessSample {
    pub grid: GridSpec,
    pub values: Sample,
    pub lambda: f64,
}

impl ProcessSample {
    /// The common marginal distribution function of every grid column.
    pub fn margin_df(&self, x: f64) -> f64 {
        if x >= 0.0 {
            1.0
        } else {
            f_lambda_fast(2.0 * x, self.lambda)
        }
    }

    /// Maps every value through the margin, giving copula observations.
    pub fn to_copula(&self) -> Sample {
        self.values.map(|x| self.margin_df(x))
    }

    /// First CSV row holds the grid points; each further row is one path.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let header: Vec<String> = self.grid.points().iter().map(|t| t.to_string()).collect();
        self.values.write_csv_with_header(out, &header)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io { path: path.into(), source })?;
        self.write_csv(file).map_err(|source| Error::Csv { path: path.into(), source })
    }
}

/// Draws `n` paths of the example process on `grid`.
///
/// At `t = 0` only the `η₁` branch survives (`η₂/t = −∞`), and symmetrically
/// at `t = 1`.
pub fn sample_example_process<R: Rng + ?Sized>(
    n: usize,
    lambda: f64,
    grid: &GridSpec,
    rng: &mut R,
) -> Result<ProcessSample> {
    check_lambda(lambda)?;
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let points = grid.points();
    let mut values = Sample::zeros(n, points.len());
    for i in 0..n {
        let eta1 = open01(rng).ln();
        let eta2 = open01(rng).ln();
        let v = draw_v(rng, lambda);
        for (x, &t) in values.row_mut(i).iter_mut().zip(points) {
            let exponent = if t <= 0.0 {
                eta1
            } else if t >= 1.0 {
                eta2
            } else {
                (eta1 / (1.0 - t)).max(eta2 / t)
            };
            *x = -v / (2.0 * exponent.exp());
        }
    }
    Ok(ProcessSample { grid: grid.clone(), values, lambda })
}

/// `P(X_t ≤ x) = F_λ(2x)` for `x ≤ 0`.
pub fn process_margin_cdf(x: f64, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(x <= 0.0) {
        return Err(Error::domain(format!("x = {x} must be nonpositive")));
    }
    Ok(f_lambda_fast(2.0 * x, lambda))
}
