//! CSV reports. Missing values are written as empty fields.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::PValueCurve;
use crate::error::{Error, Result};
use crate::exceedance::ExceedanceCounts;
use crate::statistic::{RunParams, TestReport};

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt(field: &str, what: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse().map(Some).map_err(|_| Error::Parse(format!("{what}: `{field}` is not a number")))
}

fn parse<T: std::str::FromStr>(field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse(format!("{what}: `{field}` is not valid")))
}

/// Header `rep,n,m,c,k,statistic,p_value,m_d_hat,n_1,…,n_k`, one row per report.
/// All reports must share the same `k`.
pub fn write_reports_csv<W: Write>(reports: &[TestReport], out: W) -> std::result::Result<(), csv::Error> {
    let k = reports.first().map_or(0, |r| r.counts.k);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> =
        ["rep", "n", "m", "c", "k", "statistic", "p_value", "m_d_hat"].iter().map(|s| s.to_string()).collect();
    header.extend((1..=k).map(|j| format!("n_{j}")));
    w.write_record(&header)?;
    for r in reports {
        let mut rec = vec![
            r.params.rep.to_string(),
            r.params.n.to_string(),
            r.params.m.to_string(),
            r.params.c.to_string(),
            r.params.k.to_string(),
            opt(r.statistic),
            opt(r.p_value),
            opt(r.m_d_hat),
        ];
        rec.extend(r.counts.counts.iter().map(|c| c.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads what [`write_reports_csv`] wrote. Family and seed are not stored
/// and come back empty.
pub fn read_reports_csv<R: Read>(input: R) -> Result<Vec<TestReport>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for record in rdr.records() {
        let rec = record.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() < 8 {
            return Err(Error::Parse(format!("report row has {} fields, expected at least 8", rec.len())));
        }
        let k: usize = parse(&rec[4], "k")?;
        if rec.len() != 8 + k {
            return Err(Error::Parse(format!("report row has {} fields, expected {}", rec.len(), 8 + k)));
        }
        let params = RunParams {
            rep: parse(&rec[0], "rep")?,
            n: parse(&rec[1], "n")?,
            m: parse(&rec[2], "m")?,
            c: parse(&rec[3], "c")?,
            k,
            family: String::new(),
            seed: None,
        };
        let counts = (8..8 + k).map(|i| parse(&rec[i], "count")).collect::<Result<Vec<u64>>>()?;
        out.push(TestReport {
            statistic: parse_opt(&rec[5], "statistic")?,
            p_value: parse_opt(&rec[6], "p_value")?,
            m_d_hat: parse_opt(&rec[7], "m_d_hat")?,
            counts: ExceedanceCounts { counts, n: params.n, m: params.m, c: params.c, k },
            params,
        });
    }
    Ok(out)
}

/// Header `c,p_value`.
pub fn write_curve_csv<W: Write>(curve: &PValueCurve, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["c", "p_value"])?;
    for (c, p) in curve.thresholds.iter().zip(&curve.p_values) {
        w.write_record([c.to_string(), opt(*p)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads thresholds and p-values; the fingerprint is not stored and comes
/// back as 0.
pub fn read_curve_csv<R: Read>(input: R) -> Result<PValueCurve> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut thresholds = Vec::new();
    let mut p_values = Vec::new();
    for record in rdr.records() {
        let rec = record.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::Parse(format!("curve row has {} fields, expected 2", rec.len())));
        }
        thresholds.push(parse(&rec[0], "c")?);
        p_values.push(parse_opt(&rec[1], "p_value")?);
    }
    Ok(PValueCurve { thresholds, p_values, dataset_fingerprint: 0 })
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Io { path: path.into(), source })
}

pub fn save_reports_csv(reports: &[TestReport], path: &Path) -> Result<()> {
    write_reports_csv(reports, create(path)?).map_err(|source| Error::Csv { path: path.into(), source })
}

pub fn save_curve_csv(curve: &PValueCurve, path: &Path) -> Result<()> {
    write_curve_csv(curve, create(path)?).map_err(|source| Error::Csv { path: path.into(), source })
}
