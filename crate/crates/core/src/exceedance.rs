//! Exceedance counts `n_j(c)`: the number of observations with at least one
//! component above the `j`-th threshold, `j = 1..k`.
//!
//! For copula data the thresholds are `1 − c/j`. With unknown margins they
//! are the per-column order statistics `X_{⟨n(1−c/j)⟩:n}` over all rows, and
//! counting is restricted to a subset `M` of the rows.

use crate::error::{Error, Result};
use crate::process::ProcessSample;
use crate::sample::Sample;

/// Counts `(n₁, …, n_k)` with the parameters that produced them.
///
/// Thresholds rise with `j`, so the counts are nonincreasing in `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceCounts {
    pub counts: Vec<u64>,
    /// Rows in the dataset.
    pub n: usize,
    /// Rows counted (`m = n` without subsetting).
    pub m: usize,
    pub c: f64,
    pub k: usize,
}

impl ExceedanceCounts {
    /// `Σ_j j·n_j`.
    pub fn weighted_sum(&self) -> f64 {
        self.counts.iter().enumerate().map(|(i, &nj)| (i + 1) as f64 * nj as f64).sum()
    }
}

/// Which rows enter the count when thresholds come from the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subset {
    /// Every row.
    Full,
    /// The first `⌊n / log²(max(n, 3))⌋` rows, so that `m log m / n → 0`.
    Auto,
    /// The first `m` rows.
    Prefix(usize),
    /// Explicit zero-based row indices.
    Indices(Vec<usize>),
}

impl Subset {
    pub fn auto_size(n: usize) -> usize {
        let l = (n.max(3) as f64).ln();
        ((n as f64 / (l * l)).floor() as usize).max(1)
    }

    /// Resolved subset size for a dataset of `n` rows.
    pub fn size(&self, n: usize) -> Result<usize> {
        let m = match self {
            Subset::Full => n,
            Subset::Auto => Subset::auto_size(n),
            Subset::Prefix(m) => *m,
            Subset::Indices(ix) => {
                if let Some(&bad) = ix.iter().find(|&&i| i >= n) {
                    return Err(Error::domain(format!("subset index {bad} out of range for {n} rows")));
                }
                ix.len()
            }
        };
        if m > n {
            return Err(Error::domain(format!("subset size m = {m} exceeds n = {n}")));
        }
        if m == 0 {
            return Err(Error::domain("subset is empty"));
        }
        Ok(m)
    }

    fn for_each_row(&self, n: usize, mut f: impl FnMut(usize)) -> Result<usize> {
        let m = self.size(n)?;
        match self {
            Subset::Indices(ix) => ix.iter().for_each(|&i| f(i)),
            _ => (0..m).for_each(f),
        }
        Ok(m)
    }
}

impl std::str::FromStr for Subset {
    type Err = Error;

    /// `full`, `auto` or `m=<int>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" => Ok(Subset::Full),
            "auto" => Ok(Subset::Auto),
            other => other
                .strip_prefix("m=")
                .and_then(|m| m.parse().ok())
                .map(Subset::Prefix)
                .ok_or_else(|| Error::Parse(format!("subset `{other}` is not full, auto or m=<int>"))),
        }
    }
}

fn check_params(c: f64, k: usize) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain(format!("threshold c = {c} outside (0, 1)")));
    }
    if k < 2 {
        return Err(Error::domain(format!("k = {k} must be at least 2")));
    }
    Ok(())
}

/// Number of `j ∈ 1..=k` with `value > threshold_j`, assuming thresholds
/// nondecreasing in `j`.
#[inline]
fn level(value: f64, thresholds: impl Iterator<Item = f64>) -> usize {
    thresholds.take_while(|&t| value > t).count()
}

fn accumulate(counts: &mut [u64], level: usize) {
    for c in &mut counts[..level] {
        *c += 1;
    }
}

/// `n_j = #{i : max_r U_{i,r} > 1 − c/j}` for copula observations.
pub fn count_exceedances(data: &Sample, c: f64, k: usize) -> Result<ExceedanceCounts> {
    check_params(c, k)?;
    if data.is_empty() {
        return Err(Error::domain("empty data"));
    }
    let thresholds: Vec<f64> = (1..=k).map(|j| 1.0 - c / j as f64).collect();
    let mut counts = vec![0u64; k];
    for row in data.rows() {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        accumulate(&mut counts, level(max, thresholds.iter().copied()));
    }
    Ok(ExceedanceCounts { counts, n: data.nrows(), m: data.nrows(), c, k })
}

/// One-based rank `⟨n(1 − c/j)⟩` of the empirical threshold.
pub fn threshold_rank(n: usize, c: f64, j: usize) -> Result<usize> {
    let x = n as f64 * (1.0 - c / j as f64);
    // Absorb rounding in n(1 − c/j) before taking the ceiling.
    let rank = (x - 1e-9 * x.max(1.0)).ceil().max(1.0) as usize;
    if rank > n {
        return Err(Error::domain(format!("threshold rank {rank} exceeds n = {n}")));
    }
    Ok(rank)
}

/// Per-column empirical thresholds, `result[j-1][r] = X_{⟨n(1−c/j)⟩:n, r}`.
pub fn empirical_thresholds(data: &Sample, c: f64, k: usize) -> Result<Vec<Vec<f64>>> {
    check_params(c, k)?;
    let n = data.nrows();
    if data.is_empty() {
        return Err(Error::domain("empty data"));
    }
    let ranks: Vec<usize> = (1..=k).map(|j| threshold_rank(n, c, j)).collect::<Result<_>>()?;
    let mut out = vec![vec![0.0; data.ncols()]; k];
    let mut column = Vec::with_capacity(n);
    for r in 0..data.ncols() {
        column.clear();
        column.extend(data.rows().map(|row| row[r]));
        // Ranks increase with j; each selection narrows the slice for the next.
        let mut lo = 0;
        for (j, &rank) in ranks.iter().enumerate() {
            let idx = rank - 1;
            let (_, v, _) = column[lo..].select_nth_unstable_by(idx - lo, f64::total_cmp);
            out[j][r] = *v;
            lo = idx;
        }
    }
    Ok(out)
}

/// Counts over the rows in `subset` using empirical per-column thresholds
/// computed from all rows.
pub fn count_exceedances_empirical(data: &Sample, c: f64, k: usize, subset: &Subset) -> Result<ExceedanceCounts> {
    let thresholds = empirical_thresholds(data, c, k)?;
    let mut counts = vec![0u64; k];
    let m = subset.for_each_row(data.nrows(), |i| {
        let row = data.row(i);
        let lvl = row.iter().enumerate().map(|(r, &x)| level(x, thresholds.iter().map(|t| t[r]))).max().unwrap_or(0);
        accumulate(&mut counts, lvl);
    })?;
    Ok(ExceedanceCounts { counts, n: data.nrows(), m, c, k })
}

/// Grid-projection counts for process paths: a path exceeds level `j` if it
/// lies above the column's empirical threshold at some grid point.
pub fn count_exceedances_process(
    sample: &ProcessSample,
    c: f64,
    k: usize,
    subset: &Subset,
) -> Result<ExceedanceCounts> {
    count_exceedances_empirical(&sample.values, c, k, subset)
}
