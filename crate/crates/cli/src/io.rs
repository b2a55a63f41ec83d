//! Sample and grid file formats: `x,y` sample CSV, the density-grid JSON
//! envelope, and grid CSV (N rows of N comma-separated values, row index =
//! second coordinate).

use anyhow::{bail, Context, Result};
use ndarray::Array2;
use std::path::Path;

use copwave::estimator::{DensityGrid, GridEnvelope, Sample};

pub fn write_sample_csv(path: &Path, points: &Array2<f64>) -> Result<()> {
    let mut out = String::from("x,y\n");
    for row in points.outer_iter() {
        out.push_str(&format!("{},{}\n", row[0], row[1]));
    }
    std::fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn read_sample_csv(path: &Path) -> Result<Sample> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("empty sample file")?;
    if header.trim() != "x,y" {
        bail!("expected header 'x,y', got '{header}'");
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (x, y) = line
            .split_once(',')
            .with_context(|| format!("row {}: not 'x,y'", idx + 2))?;
        let x: f64 = x.trim().parse().with_context(|| format!("row {}", idx + 2))?;
        let y: f64 = y.trim().parse().with_context(|| format!("row {}", idx + 2))?;
        rows.push([x, y]);
    }
    let mut values = Array2::zeros((rows.len(), 2));
    for (i, r) in rows.iter().enumerate() {
        values[[i, 0]] = r[0];
        values[[i, 1]] = r[1];
    }
    Ok(Sample::new(values)?)
}

pub fn write_grid(path: &Path, envelope: &GridEnvelope) -> Result<()> {
    let is_csv = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("csv"))
        .unwrap_or(false);
    let text = if is_csv {
        grid_to_csv(&envelope.to_grid()?)
    } else {
        serde_json::to_string_pretty(envelope)?
    };
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Row i of the CSV holds the values with second-coordinate index i.
pub fn grid_to_csv(grid: &DensityGrid) -> String {
    let n = grid.n_side();
    let mut out = String::new();
    for j in 0..n {
        let row: Vec<String> = (0..n).map(|i| grid.values()[[i, j]].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn read_grid(path: &Path) -> Result<GridEnvelope> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let is_csv = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("csv"))
        .unwrap_or(false);
    if !is_csv {
        return Ok(serde_json::from_str(&text)?);
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        rows.push(row.with_context(|| format!("grid row {}", idx + 1))?);
    }
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        bail!("grid CSV must be square");
    }
    // transpose back: csv row j holds v-index j
    let mut values = vec![vec![0.0; n]; n];
    for (j, row) in rows.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            values[i][j] = v;
        }
    }
    Ok(GridEnvelope {
        n_side: n,
        j_n: 0,
        j_max: 0,
        rule: copwave::estimator::ThresholdRule::HardLocal,
        boundary: copwave::estimator::BoundaryMode::Symmetrize,
        kappa: f64::NAN,
        values,
    })
}
