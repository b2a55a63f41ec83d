//! Price-series ingestion: `date,close` CSV files, log returns, and
//! date-aligned pairing of two series into an estimation sample.

use anyhow::{bail, Context, Result};
use ndarray::Array2;
use std::collections::BTreeMap;
use std::path::Path;

use copwave::estimator::Sample;

/// A quoted price series: ISO-8601 dates with strictly positive closes,
/// ordered by date.
#[derive(Debug, Clone)]
pub struct SeriesFile {
    pub dates: Vec<String>,
    pub closes: Vec<f64>,
}

pub const MIN_ROWS: usize = 10;

fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return false;
    }
    let digits = |r: std::ops::Range<usize>| b[r].iter().all(|c| c.is_ascii_digit());
    if !(digits(0..4) && digits(5..7) && digits(8..10)) {
        return false;
    }
    let month: u32 = s[5..7].parse().unwrap();
    let day: u32 = s[8..10].parse().unwrap();
    (1..=12).contains(&month) && (1..=31).contains(&day)
}

impl SeriesFile {
    pub fn parse(text: &str, name: &str) -> Result<SeriesFile> {
        let mut lines = text.lines();
        let header = lines.next().context("empty series file")?;
        if header.trim() != "date,close" {
            bail!("{name}: expected header 'date,close', got '{header}'");
        }
        let mut dates: Vec<String> = Vec::new();
        let mut closes = Vec::new();
        for (idx, line) in lines.enumerate() {
            let row = idx + 2; // 1-based, counting the header
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (date, close) = line
                .split_once(',')
                .with_context(|| format!("{name}: row {row} is not 'date,close'"))?;
            let date = date.trim();
            if !is_iso_date(date) {
                bail!("{name}: row {row}: '{date}' is not an ISO-8601 date");
            }
            let close: f64 = close
                .trim()
                .parse()
                .with_context(|| format!("{name}: row {row}: bad close value"))?;
            if close.is_nan() || close <= 0.0 || !close.is_finite() {
                bail!("{name}: row {row}: non-positive price {close}");
            }
            if let Some(prev) = dates.last() {
                if date <= prev.as_str() {
                    bail!("{name}: row {row}: dates must be strictly increasing");
                }
            }
            dates.push(date.to_string());
            closes.push(close);
        }
        if dates.len() < MIN_ROWS {
            bail!(
                "{name}: need at least {MIN_ROWS} rows, got {}",
                dates.len()
            );
        }
        Ok(SeriesFile { dates, closes })
    }

    pub fn load(path: &Path) -> Result<SeriesFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        SeriesFile::parse(&text, &path.display().to_string())
    }
}

/// Log returns `r_t = ln(p_{t+1} / p_t)`, length n - 1.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>> {
    if prices.len() < 2 {
        bail!("need at least 2 prices for log returns");
    }
    for (i, &p) in prices.iter().enumerate() {
        if p.is_nan() || p <= 0.0 {
            bail!("non-positive price {p} at row {}", i + 1);
        }
    }
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// Inner-join two series on date, then take log returns of each aligned
/// column; the result is the estimator's raw sample.
pub fn align_pair(a: &SeriesFile, b: &SeriesFile) -> Result<Sample> {
    let index_b: BTreeMap<&str, f64> = b
        .dates
        .iter()
        .map(|d| d.as_str())
        .zip(b.closes.iter().copied())
        .collect();
    let mut pa = Vec::new();
    let mut pb = Vec::new();
    for (d, &ca) in a.dates.iter().zip(&a.closes) {
        if let Some(&cb) = index_b.get(d.as_str()) {
            pa.push(ca);
            pb.push(cb);
        }
    }
    if pa.len() < MIN_ROWS {
        bail!(
            "only {} common dates between the two series; need at least {MIN_ROWS}",
            pa.len()
        );
    }
    let ra = log_returns(&pa)?;
    let rb = log_returns(&pb)?;
    let n = ra.len();
    let mut values = Array2::zeros((n, 2));
    for i in 0..n {
        values[[i, 0]] = ra[i];
        values[[i, 1]] = rb[i];
    }
    Ok(Sample::new(values)?)
}
