//! Rank-based wavelet estimation of a bivariate copula density.
//!
//! The pipeline: rank the raw sample into pseudo-observations, pick the
//! level indices from the sample size, extend the points for the chosen
//! boundary handling, compute empirical scaling coefficients at the maximal
//! level, run the periodic 2D wavelet analysis down to the coarse level,
//! shrink detail coefficients by the configured rule, invert the transform
//! and evaluate the reconstruction on a cell-centered grid over the unit
//! square. Optional cycle spinning averages the pipeline over a lattice of
//! sub-cell translations.
//!
//! Throughout, `log` is the natural logarithm except for the explicit base-2
//! logarithm in the maximal scale index.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{CopwaveError, Result};
use crate::wavelet::{
    cascade_eval, daubechies_filter, dwt2_periodic, idwt2_periodic, CoefficientPyramid,
    DyadicFunctionTable,
};

/// Dyadic resolution of the cascade tables used for point evaluation; the
/// interpolation error at this refinement is far below the statistical
/// error at any realistic sample size.
pub const CASCADE_REFINEMENT: u32 = 10;

/// Raw paired observations, n x 2.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Array2<f64>,
}

impl Sample {
    pub const MIN_N: usize = 8;

    pub fn new(values: Array2<f64>) -> Result<Self> {
        if values.ncols() != 2 {
            return Err(CopwaveError::BadDimension {
                cols: values.ncols(),
            });
        }
        if values.nrows() < Self::MIN_N {
            return Err(CopwaveError::SampleTooSmall {
                n: values.nrows(),
                min: Self::MIN_N,
            });
        }
        for (row, r) in values.outer_iter().enumerate() {
            if r.iter().any(|v| !v.is_finite()) {
                return Err(CopwaveError::NonFiniteValue { row });
            }
        }
        Ok(Sample { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
}

/// Pseudo-observations `R_i / n` in `[0, 1)^2`.
#[derive(Debug, Clone)]
pub struct PseudoSample {
    points: Array2<f64>,
}

impl PseudoSample {
    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }
}

/// Shrinkage rule applied to the detail coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdRule {
    /// Zero every detail: keep only the trend at the coarse level.
    Linear,
    /// Hard local thresholding: keep a detail iff its magnitude exceeds the
    /// threshold level.
    #[serde(rename = "local")]
    HardLocal,
    /// Hard global (block) thresholding: keep a level-orientation block iff
    /// its energy exceeds `L^d 2^{dj} lambda^2`.
    #[serde(rename = "global")]
    HardGlobal,
}

/// Boundary handling for the compactly supported basis on `[0,1]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMode {
    /// Treat the density as zero outside the unit square.
    #[serde(rename = "zero")]
    ZeroPad,
    /// Work in the 1-periodic wavelet setting.
    #[serde(rename = "per")]
    Periodize,
    /// Estimate the even 2-periodic reflection; avoids boundary jumps.
    #[serde(rename = "sym")]
    Symmetrize,
}

#[derive(Debug, Clone)]
pub struct EstimatorConfig {
    /// Threshold constant kappa > 0 in `lambda_n = sqrt(kappa log(n) / n)`.
    pub kappa: f64,
    pub rule: ThresholdRule,
    pub boundary: BoundaryMode,
    /// Number of cycle-spinning translations; 0 or 1 disables spinning,
    /// otherwise must be a perfect square s^2 (an s x s shift lattice).
    pub spins: usize,
    /// Daubechies order (vanishing moments), 1..=10.
    pub wavelet_order: usize,
    /// Output grid has `grid_multiplier * 2^{J_n}` cells per axis.
    pub grid_multiplier: usize,
    /// Seed consumed by randomized callers (benchmarks); the pipeline itself
    /// is deterministic.
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            kappa: 1.0,
            rule: ThresholdRule::HardLocal,
            boundary: BoundaryMode::Symmetrize,
            spins: 25,
            wavelet_order: 4,
            grid_multiplier: 4,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    fn spin_side(&self) -> Result<usize> {
        if self.spins <= 1 {
            return Ok(1);
        }
        let s = (self.spins as f64).sqrt().round() as usize;
        if s * s != self.spins {
            return Err(CopwaveError::SpinsNotSquare { spins: self.spins });
        }
        Ok(s)
    }
}

/// Copula density values on the cell-centered grid
/// `((i + 1/2) / N, (j + 1/2) / N)`; `values[[i, j]]` pairs the first
/// coordinate with index `i`.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    values: Array2<f64>,
}

impl DensityGrid {
    pub fn new(values: Array2<f64>) -> Self {
        assert_eq!(values.nrows(), values.ncols(), "density grid must be square");
        DensityGrid { values }
    }

    pub fn n_side(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Cell-center coordinate of index `i`.
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.n_side() as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / (self.values.len() as f64)
    }
}

/// Interchange envelope for a density grid with the estimation settings that
/// produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridEnvelope {
    pub n_side: usize,
    pub j_n: usize,
    #[serde(rename = "J_n")]
    pub j_max: usize,
    pub rule: ThresholdRule,
    pub boundary: BoundaryMode,
    pub kappa: f64,
    pub values: Vec<Vec<f64>>,
}

impl GridEnvelope {
    pub fn from_grid(
        grid: &DensityGrid,
        j_n: usize,
        j_max: usize,
        rule: ThresholdRule,
        boundary: BoundaryMode,
        kappa: f64,
    ) -> Self {
        let values = grid
            .values()
            .outer_iter()
            .map(|row| row.to_vec())
            .collect();
        GridEnvelope {
            n_side: grid.n_side(),
            j_n,
            j_max,
            rule,
            boundary,
            kappa,
            values,
        }
    }

    pub fn to_grid(&self) -> Result<DensityGrid> {
        let n = self.n_side;
        if self.values.len() != n || self.values.iter().any(|r| r.len() != n) {
            return Err(CopwaveError::GridSizeMismatch {
                a: n,
                b: self.values.len(),
            });
        }
        let mut m = Array2::zeros((n, n));
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[[i, j]] = v;
            }
        }
        Ok(DensityGrid::new(m))
    }
}

/// Ranks by strict inequality, `R_i = #{l : x_l < x_i}`, ties broken by the
/// original index so the result is deterministic; output entries are
/// `R_i / n`.
pub fn ranks(sample: &Sample) -> PseudoSample {
    let n = sample.n();
    let mut points = Array2::zeros((n, 2));
    for col in 0..2 {
        let mut order: Vec<usize> = (0..n).collect();
        // stable sort keeps original index order among ties
        order.sort_by(|&a, &b| {
            sample.values[[a, col]]
                .partial_cmp(&sample.values[[b, col]])
                .unwrap()
        });
        for (rank, &idx) in order.iter().enumerate() {
            points[[idx, col]] = rank as f64 / n as f64;
        }
    }
    PseudoSample { points }
}

/// Level indices: `j_n` is the smallest level with `2^{j_n} >= (log n)^{1/d}`
/// and `J_n = floor((1/d) log2(n / log n))`. When the floor convention would
/// put `J_n` below `j_n` (only at the smallest admissible n), the rounding
/// `2^{J_n - 1} < (n / log n)^{1/d} <= 2^{J_n}` is used instead.
pub fn level_indices(n: usize, d: usize) -> Result<(usize, usize)> {
    if n < Sample::MIN_N {
        return Err(CopwaveError::SampleTooSmall {
            n,
            min: Sample::MIN_N,
        });
    }
    let nf = n as f64;
    let log_n = nf.ln();
    let target = log_n.powf(1.0 / d as f64);
    let mut j_n = 0usize;
    while ((1usize << j_n) as f64) < target {
        j_n += 1;
    }
    let ratio = (nf / log_n).powf(1.0 / d as f64);
    let mut j_max = ((nf / log_n).log2() / d as f64).floor() as isize;
    if j_max < j_n as isize {
        // fall back to the ceiling convention at the boundary of validity
        let mut jj = 0usize;
        while ((1usize << jj) as f64) < ratio {
            jj += 1;
        }
        j_max = jj as isize;
    }
    if j_max < j_n as isize {
        return Err(CopwaveError::SampleTooSmall {
            n,
            min: Sample::MIN_N,
        });
    }
    Ok((j_n, j_max as usize))
}

/// Threshold level `lambda_n = sqrt(kappa log(n) / n)`.
pub fn threshold_level(n: usize, kappa: f64) -> f64 {
    assert!(n >= 2 && kappa > 0.0);
    (kappa * (n as f64).ln() / n as f64).sqrt()
}

/// Boundary extension of the pseudo-observations.
///
/// Returns the (possibly replicated and rescaled) points, a coefficient
/// scale factor, and the level shift that keeps the effective resolution on
/// `[0,1]^2` unchanged on a doubled domain.
///
/// The doubled domain is handled by rescaling it onto the unit torus, which
/// divides every basis function by `2^{d/2}` relative to the period-2
/// normalization the threshold level is calibrated for. The scale factor
/// restores that calibration: empirical coefficients of the extended sample
/// are multiplied by it before thresholding, so a coefficient carries the
/// same signal-to-threshold ratio as in the direct periodic pipeline
/// (symmetrization replicates each point 4 times, zero padding does not,
/// hence the different factors). The reconstruction step divides the grid
/// values by `2^{d/2}` per level shift, which restores the density scale on
/// the original square.
pub fn extend_boundary(
    pseudo: &PseudoSample,
    mode: BoundaryMode,
) -> (PseudoSample, f64, usize) {
    match mode {
        BoundaryMode::Periodize => (pseudo.clone(), 1.0, 0),
        BoundaryMode::Symmetrize => {
            let n = pseudo.n();
            let mut points = Array2::zeros((4 * n, 2));
            for i in 0..n {
                let u = pseudo.points[[i, 0]];
                let v = pseudo.points[[i, 1]];
                // mirrors {u, (2 - u) mod 2} per axis, rescaled by 1/2
                let mu = [0.5 * u, (1.0 - 0.5 * u) % 1.0];
                let mv = [0.5 * v, (1.0 - 0.5 * v) % 1.0];
                for (q, (&x, &y)) in [(0, 0), (0, 1), (1, 0), (1, 1)]
                    .iter()
                    .map(|&(a, b)| (&mu[a], &mv[b]))
                    .enumerate()
                {
                    points[[4 * i + q, 0]] = x;
                    points[[4 * i + q, 1]] = y;
                }
            }
            (PseudoSample { points }, 2.0, 1)
        }
        BoundaryMode::ZeroPad => {
            let points = pseudo.points.mapv(|x| 0.5 * x);
            (PseudoSample { points }, 0.5, 1)
        }
    }
}

/// Accumulate the nonzero periodized translates covering `x`:
/// pairs `(k, 2^{j/2} phi(2^j x - m))` with `k = m mod 2^j`.
fn scaling_contributions(
    table: &DyadicFunctionTable,
    level: usize,
    x: f64,
    out: &mut Vec<(usize, f64)>,
) {
    out.clear();
    let n_trans = 1i64 << level;
    let scale = n_trans as f64;
    let sqrt_scale = scale.sqrt();
    let t = scale * x;
    let support = table.support_length() as i64;
    let m_hi = t.floor() as i64;
    for m in (m_hi - support + 1)..=m_hi {
        let v = if t - m as f64 == 0.0 {
            // phi(0) is nonzero only for Haar
            table.phi_values()[0]
        } else {
            table.phi(t - m as f64)
        };
        if v != 0.0 {
            let k = m.rem_euclid(n_trans) as usize;
            out.push((k, sqrt_scale * v));
        }
    }
}

/// Empirical scaling coefficients at level `J`:
/// entry `(k1, k2) = (1/n) sum_i phi_{J,k1}(u_i) phi_{J,k2}(v_i)` with the
/// translates taken periodically so every point contributes to all
/// overlapping supports.
pub fn empirical_scaling_coeffs(
    pseudo: &PseudoSample,
    level: usize,
    table: &DyadicFunctionTable,
) -> Array2<f64> {
    let size = 1usize << level;
    let mut coeffs = Array2::zeros((size, size));
    let mut row = Vec::new();
    let mut col = Vec::new();
    for p in pseudo.points.outer_iter() {
        scaling_contributions(table, level, p[0], &mut row);
        scaling_contributions(table, level, p[1], &mut col);
        for &(k1, a) in &row {
            for &(k2, b) in &col {
                coeffs[[k1, k2]] += a * b;
            }
        }
    }
    coeffs /= pseudo.n() as f64;
    coeffs
}

/// Hard local thresholding: zero every detail with `|c| <= lambda`; the
/// approximation block is untouched.
pub fn apply_local_threshold(mut pyramid: CoefficientPyramid, lambda: f64) -> CoefficientPyramid {
    assert!(lambda >= 0.0);
    for lvl in pyramid.details_mut() {
        for block in &mut lvl.blocks {
            block.mapv_inplace(|c| if c.abs() > lambda { c } else { 0.0 });
        }
    }
    pyramid
}

/// Hard global (block) thresholding: zero a level-orientation block unless
/// its energy exceeds `L^d 2^{dj} lambda^2`.
pub fn apply_global_threshold(
    mut pyramid: CoefficientPyramid,
    lambda: f64,
    support_length: usize,
    d: usize,
) -> CoefficientPyramid {
    assert!(lambda >= 0.0);
    let ld = (support_length as f64).powi(d as i32);
    for lvl in pyramid.details_mut() {
        let cut = ld * 2.0f64.powi((d * lvl.level) as i32) * lambda * lambda;
        for block in &mut lvl.blocks {
            let energy: f64 = block.iter().map(|c| c * c).sum();
            if energy <= cut {
                block.fill(0.0);
            }
        }
    }
    pyramid
}

fn zero_all_details(pyramid: &mut CoefficientPyramid) {
    for lvl in pyramid.details_mut() {
        for block in &mut lvl.blocks {
            block.fill(0.0);
        }
    }
}

/// Evaluation matrix of the periodized scaling basis at level `level` on the
/// `n_grid` cell centers mapped by `x -> x * scale + delta (mod 1)`.
fn eval_matrix(
    table: &DyadicFunctionTable,
    level: usize,
    n_grid: usize,
    scale: f64,
    delta: f64,
) -> Array2<f64> {
    let size = 1usize << level;
    let mut m = Array2::zeros((n_grid, size));
    let mut contrib = Vec::new();
    for i in 0..n_grid {
        let u = (i as f64 + 0.5) / n_grid as f64;
        let x = (u * scale + delta).rem_euclid(1.0);
        scaling_contributions(table, level, x, &mut contrib);
        for &(k, v) in &contrib {
            m[[i, k]] += v;
        }
    }
    m
}

/// Full estimation pipeline with the maximal level chosen from the sample
/// size and the analysis carried down to level zero, so the shrinkage rule
/// decides adaptively at every scale while the level-zero scaling
/// coefficient carries the total mass exactly (partition of unity).
/// Deterministic given `(sample, config)`.
pub fn estimate(sample: &Sample, config: &EstimatorConfig) -> Result<DensityGrid> {
    let (_, max) = level_indices(sample.n(), 2)?;
    estimate_with_levels(sample, config, 0, max)
}

/// Estimation pipeline with explicit levels. `max` is the maximal scale on
/// the unit square (the grid has `grid_multiplier * 2^max` cells per axis);
/// `coarse` is the depth the analysis stops at on the transform domain, so
/// under a domain-doubling boundary mode the empirical coefficients live at
/// `max + 1` while `coarse` is used literally.
pub fn estimate_with_levels(
    sample: &Sample,
    config: &EstimatorConfig,
    coarse: usize,
    max: usize,
) -> Result<DensityGrid> {
    assert!(coarse <= max);
    assert!(config.kappa > 0.0, "kappa must be positive");
    let s = config.spin_side()?;
    let spec = daubechies_filter(config.wavelet_order)?;
    let table = cascade_eval(&spec, CASCADE_REFINEMENT)?;
    let pseudo = ranks(sample);
    let n_grid = config.grid_multiplier << max;
    let (ext, coeff_scale, shift) = extend_boundary(&pseudo, config.boundary);
    let coarse_ext = coarse;
    let max_ext = max + shift;
    let lambda = threshold_level(sample.n(), config.kappa);
    let domain_scale = if shift > 0 { 0.5 } else { 1.0 };
    // each level shift rescales the reconstruction by 2^{d/2}
    let grid_scale = 0.5f64.powi(shift as i32);
    let cell = 1.0 / ((s as f64) * (1u64 << max_ext) as f64);

    let mut acc: Array2<f64> = Array2::zeros((n_grid, n_grid));
    for a in 0..s {
        for b in 0..s {
            let dx = a as f64 * cell;
            let dy = b as f64 * cell;
            let shifted = PseudoSample {
                points: {
                    let mut p = ext.points.clone();
                    for mut row in p.outer_iter_mut() {
                        row[0] = (row[0] + dx).rem_euclid(1.0);
                        row[1] = (row[1] + dy).rem_euclid(1.0);
                    }
                    p
                },
            };
            let mut coeffs = empirical_scaling_coeffs(&shifted, max_ext, &table);
            if coeff_scale != 1.0 {
                coeffs *= coeff_scale;
            }
            let pyramid = dwt2_periodic(&coeffs, &spec, coarse_ext)?;
            let pyramid = match config.rule {
                ThresholdRule::Linear => {
                    let mut p = pyramid;
                    zero_all_details(&mut p);
                    p
                }
                ThresholdRule::HardLocal => apply_local_threshold(pyramid, lambda),
                ThresholdRule::HardGlobal => {
                    apply_global_threshold(pyramid, lambda, spec.support_length(), 2)
                }
            };
            let rec = idwt2_periodic(&pyramid, &spec)?;
            let phi_u = eval_matrix(&table, max_ext, n_grid, domain_scale, dx);
            let phi_v = eval_matrix(&table, max_ext, n_grid, domain_scale, dy);
            let g = phi_u.dot(&rec).dot(&phi_v.t());
            acc += &g;
        }
    }
    acc *= grid_scale / (s * s) as f64;
    Ok(DensityGrid::new(acc))
}
