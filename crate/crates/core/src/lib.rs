//! Testing whether the copula of multivariate or grid-observed functional
//! data lies in a δ-neighborhood of a generalized Pareto copula.
//!
//! The pipeline: draw or load data ([`copula`], [`process`]), count
//! observations above the thresholds `1 − c/j` ([`exceedance`]), form the
//! χ²-type statistic ([`statistic`]) and compare it with its weighted
//! chi-square limit ([`limit_dist`]). [`harness`] runs replicated
//! experiments and writes CSV and SVG output.

// `!(x > a)` is used deliberately so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod copula;
pub mod error;
pub mod exceedance;
pub mod harness;
pub mod limit_dist;
pub mod normal;
pub mod process;
pub mod quadrature;
pub mod rng;
pub mod sample;
pub mod statistic;
pub mod stats;

pub use copula::{CopulaModel, CorrMatrix, DNormKind, DNormTag, Family, Truth};
pub use error::{Error, Result};
pub use exceedance::{
    count_exceedances, count_exceedances_empirical, count_exceedances_process, ExceedanceCounts, Subset,
};
pub use limit_dist::{eigenvalues, noncentrality, WeightedChiSquareLaw};
pub use process::{process_margin_cdf, sample_example_process, GridSpec, ProcessSample};
pub use sample::Sample;
pub use statistic::{estimate_extremal_coefficient, t_statistic, TestReport};
