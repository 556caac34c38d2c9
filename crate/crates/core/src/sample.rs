//! Row-major observation matrices and their CSV form.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// An n×d matrix of observations, one row per observation.
///
/// Copula samplers fill it with values in (0, 1); raw datasets and process
/// paths hold arbitrary reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Sample {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "sample of shape {rows}×{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Sample { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Sample { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::domain(format!("row {i} has {} columns, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Sample { rows: rows.len(), cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Applies `f` to every entry of column `j`.
    pub fn map_column(&mut self, j: usize, f: impl Fn(f64) -> f64) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = f(*v);
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Sample {
        Sample { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Writes the header row `0,1,…,d−1` followed by one line per observation.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let header: Vec<String> = (0..self.cols).map(|j| j.to_string()).collect();
        self.write_csv_with_header(out, &header)
    }

    pub(crate) fn write_csv_with_header<W: Write>(
        &self,
        out: W,
        header: &[String],
    ) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(header)?;
        for r in self.rows() {
            w.write_record(r.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a headered CSV with one observation per row. The header is
    /// skipped; every other field must parse as a real number.
    pub fn read_csv<R: Read>(input: R) -> Result<Sample> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
        let mut cols = None;
        let mut data = Vec::new();
        let mut rows = 0;
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if cols.is_none() {
                cols = Some(record.len());
            }
            for field in record.iter() {
                let v: f64 =
                    field.parse().map_err(|_| Error::Parse(format!("row {}: `{field}` is not a number", line + 1)))?;
                data.push(v);
            }
            rows += 1;
        }
        let cols = cols.unwrap_or(0);
        Sample::new(rows, cols, data)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Io { path: path.into(), source })?;
        self.write_csv(file).map_err(|source| Error::Csv { path: path.into(), source })
    }

    pub fn load_csv(path: &Path) -> Result<Sample> {
        let file = File::open(path).map_err(|source| Error::Io { path: path.into(), source })?;
        Sample::read_csv(file)
    }
}
