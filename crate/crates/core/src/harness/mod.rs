//! Replicated experiments: generate datasets, count exceedances over a set
//! of thresholds, test, and collect the reports.

mod output;
mod svg;

pub use output::{
    read_curve_csv, read_reports_csv, save_curve_csv, save_reports_csv, write_curve_csv, write_reports_csv,
};
pub use svg::{render_pvalue_curve, render_quantile_plot, save_svg, PlotStyle};

use std::path::PathBuf;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::copula::CopulaModel;
use crate::error::{Error, Result};
use crate::exceedance::{
    count_exceedances, count_exceedances_empirical, count_exceedances_process, ExceedanceCounts, Subset,
};
use crate::limit_dist::WeightedChiSquareLaw;
use crate::process::{sample_example_process, GridSpec, ProcessSample};
use crate::rng::substream;
use crate::sample::Sample;
use crate::statistic::{run_test, TestReport};
use crate::stats::{ks_uniform, rejection_rate};

/// What generates the data.
#[derive(Debug, Clone)]
pub enum ModelSpec {
    Copula(CopulaModel),
    /// The example process observed on a grid.
    Process {
        lambda: f64,
        grid: GridSpec,
    },
}

impl ModelSpec {
    pub fn dimension(&self) -> usize {
        match self {
            ModelSpec::Copula(m) => m.dimension(),
            ModelSpec::Process { grid, .. } => grid.len(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModelSpec::Copula(m) => m.to_string(),
            ModelSpec::Process { lambda, grid } => format!("process(lambda={lambda},d={})", grid.len()),
        }
    }

    /// Draws `n` observations and wraps them for counting under `subset`.
    ///
    /// `Subset::Full` uses the known margins; any other subset estimates the
    /// thresholds from the data.
    pub fn generate<R: rand::Rng + ?Sized>(&self, n: usize, subset: &Subset, rng: &mut R) -> Result<Dataset> {
        match self {
            ModelSpec::Copula(model) => {
                let data = model.sample(n, rng)?;
                Ok(match subset {
                    Subset::Full => Dataset::Copula(data),
                    _ => Dataset::Raw { data, subset: subset.clone() },
                })
            }
            ModelSpec::Process { lambda, grid } => {
                let sample = sample_example_process(n, *lambda, grid, rng)?;
                Ok(match subset {
                    Subset::Full => Dataset::Copula(sample.to_copula()),
                    _ => Dataset::Process { sample, subset: subset.clone() },
                })
            }
        }
    }
}

/// One dataset together with the counting rule that applies to it.
#[derive(Debug, Clone)]
pub enum Dataset {
    /// Observations with uniform margins; thresholds `1 − c/j`.
    Copula(Sample),
    /// Observations with unknown margins; empirical thresholds.
    Raw {
        data: Sample,
        subset: Subset,
    },
    Process {
        sample: ProcessSample,
        subset: Subset,
    },
}

impl Dataset {
    pub fn counts(&self, c: f64, k: usize) -> Result<ExceedanceCounts> {
        match self {
            Dataset::Copula(data) => count_exceedances(data, c, k),
            Dataset::Raw { data, subset } => count_exceedances_empirical(data, c, k, subset),
            Dataset::Process { sample, subset } => count_exceedances_process(sample, c, k, subset),
        }
    }

    pub fn sample(&self) -> &Sample {
        match self {
            Dataset::Copula(data) | Dataset::Raw { data, .. } => data,
            Dataset::Process { sample, .. } => &sample.values,
        }
    }

    pub fn dimension(&self) -> usize {
        self.sample().ncols()
    }

    pub fn nrows(&self) -> usize {
        self.sample().nrows()
    }

    /// FNV-1a hash of the shape and the bit patterns of all values.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let s = self.sample();
        let words = [s.nrows() as u64, s.ncols() as u64].into_iter().chain(s.as_slice().iter().map(|v| v.to_bits()));
        let mut h = OFFSET;
        for w in words {
            for b in w.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        }
        h
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n: usize,
    pub thresholds: Vec<f64>,
    pub k: usize,
    pub replications: usize,
    pub subset: Subset,
    pub seed: u64,
    /// Output prefix; `None` writes nothing.
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if self.replications == 0 {
            return Err(Error::domain("number of replications must be at least 1"));
        }
        if self.k < 2 {
            return Err(Error::domain(format!("k = {} must be at least 2", self.k)));
        }
        if self.thresholds.is_empty() {
            return Err(Error::domain("no thresholds given"));
        }
        if let Some(c) = self.thresholds.iter().find(|c| !(**c > 0.0 && **c < 1.0)) {
            return Err(Error::domain(format!("threshold c = {c} outside (0, 1)")));
        }
        self.subset.size(self.n)?;
        Ok(())
    }
}

fn test_dataset(
    dataset: &Dataset,
    c: f64,
    k: usize,
    law: &WeightedChiSquareLaw,
    family: &str,
    seed: Option<u64>,
    rep: usize,
) -> Result<TestReport> {
    let counts = dataset.counts(c, k)?;
    let mut report = run_test(counts, dataset.dimension(), law)?;
    report.params.family = family.to_string();
    report.params.seed = seed;
    report.params.rep = rep;
    Ok(report)
}

/// Runs every replication and returns one report per replication and
/// threshold, ordered by replication and then by threshold.
///
/// Replication `r` draws from stream `r` of the seed, so the output does not
/// depend on scheduling. Degenerate samples give reports without statistic.
pub fn run_replicated_test(config: &ExperimentConfig) -> Result<Vec<TestReport>> {
    config.validate()?;
    let law = WeightedChiSquareLaw::null(config.k)?;
    let family = config.model.label();
    let one = |rep: usize| -> Result<Vec<TestReport>> {
        let mut rng = substream(config.seed, rep as u64);
        let dataset = config.model.generate(config.n, &config.subset, &mut rng)?;
        config
            .thresholds
            .iter()
            .map(|&c| test_dataset(&dataset, c, config.k, &law, &family, Some(config.seed), rep))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let per_rep: Result<Vec<Vec<TestReport>>> = (0..config.replications).into_par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let per_rep: Result<Vec<Vec<TestReport>>> = (0..config.replications).map(one).collect();
    Ok(per_rep?.into_iter().flatten().collect())
}

/// Points `(j/(R+1), p_(j))` of the uniform quantile plot of `R` p-values.
pub fn quantile_plot_points(p_values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = p_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let r = sorted.len() as f64;
    sorted.into_iter().enumerate().map(|(j, p)| ((j + 1) as f64 / (r + 1.0), p)).collect()
}

/// P-values of one dataset as a function of the threshold `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueCurve {
    pub thresholds: Vec<f64>,
    /// `None` where the sample had no exceedance at that threshold.
    pub p_values: Vec<Option<f64>>,
    pub dataset_fingerprint: u64,
}

pub fn pvalue_curve(dataset: &Dataset, thresholds: &[f64], k: usize) -> Result<PValueCurve> {
    let law = WeightedChiSquareLaw::null(k)?;
    let p_values = thresholds
        .iter()
        .map(|&c| Ok(test_dataset(dataset, c, k, &law, "", None, 0)?.p_value))
        .collect::<Result<Vec<_>>>()?;
    Ok(PValueCurve { thresholds: thresholds.to_vec(), p_values, dataset_fingerprint: dataset.fingerprint() })
}

/// `steps` equidistant thresholds from `from` to `to` inclusive.
pub fn threshold_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::domain("threshold grid needs at least one step"));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let h = (to - from) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { to } else { from + h * i as f64 }).collect())
}

/// The curve grid used when none is given: 60 points from 0.01 to 0.60.
pub fn default_curve_grid() -> Vec<f64> {
    threshold_grid(0.01, 0.60, 60).expect("nonempty grid")
}

/// Parses `0.2` or `a:b:steps`.
pub fn parse_threshold_spec(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("threshold `{spec}` is neither a number nor `from:to:steps`"));
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let cs = match parts.as_slice() {
        [c] => vec![c.parse::<f64>().map_err(|_| bad())?],
        [a, b, s] => {
            let a: f64 = a.parse().map_err(|_| bad())?;
            let b: f64 = b.parse().map_err(|_| bad())?;
            let s: usize = s.parse().map_err(|_| bad())?;
            threshold_grid(a, b, s)?
        }
        _ => return Err(bad()),
    };
    if let Some(c) = cs.iter().find(|c| !(**c > 0.0 && **c < 1.0)) {
        return Err(Error::domain(format!("threshold c = {c} outside (0, 1)")));
    }
    Ok(cs)
}

/// Per-threshold summary of a replicated run.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSummary {
    pub c: f64,
    pub replications: usize,
    pub degenerate: usize,
    /// Fraction of non-degenerate p-values below 0.05.
    pub rejection_rate: f64,
    /// Kolmogorov-Smirnov distance of the p-values from uniform.
    pub ks_uniform: f64,
    pub mean_m_d_hat: f64,
}

pub fn p_values_at(reports: &[TestReport], c: f64) -> Vec<f64> {
    reports.iter().filter(|r| r.params.c == c).filter_map(|r| r.p_value).collect()
}

pub fn summarize(reports: &[TestReport], thresholds: &[f64]) -> Vec<ThresholdSummary> {
    thresholds
        .iter()
        .map(|&c| {
            let at: Vec<&TestReport> = reports.iter().filter(|r| r.params.c == c).collect();
            let p = p_values_at(reports, c);
            let md: Vec<f64> = at.iter().filter_map(|r| r.m_d_hat).collect();
            ThresholdSummary {
                c,
                replications: at.len(),
                degenerate: at.len() - p.len(),
                rejection_rate: if p.is_empty() { f64::NAN } else { rejection_rate(&p, 0.05) },
                ks_uniform: if p.is_empty() { f64::NAN } else { ks_uniform(&p) },
                mean_m_d_hat: if md.is_empty() { f64::NAN } else { md.iter().sum::<f64>() / md.len() as f64 },
            }
        })
        .collect()
}
