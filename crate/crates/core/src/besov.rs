//! Finite-truncation numerical functionals for strong Besov and local /
//! global weak Besov sequence norms, plus the sparse construction that
//! separates the local class from the global one.
//!
//! All functionals are computed on truncated sequences (levels up to a
//! finite `J_max`) and suprema over a finite threshold grid, so membership
//! statements become growth trends across `J_max` rather than exact norms.

use crate::error::{CopwaveError, Result};
use crate::wavelet::CoefficientPyramid;

/// Detail coefficients indexed by level and orientation with sparse storage
/// of nonzero entries as `(linear k-index, value)` pairs; d is fixed to 2.
#[derive(Debug, Clone)]
pub struct CoefficientSequence {
    max_level: usize,
    /// `entries[j][eps]` lists the nonzero coefficients of level j,
    /// orientation eps.
    entries: Vec<[Vec<(u64, f64)>; 3]>,
}

pub const DIMENSION: usize = 2;

impl CoefficientSequence {
    pub fn empty(max_level: usize) -> Self {
        CoefficientSequence {
            max_level,
            entries: (0..=max_level)
                .map(|_| [Vec::new(), Vec::new(), Vec::new()])
                .collect(),
        }
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn push(&mut self, level: usize, orientation: usize, k: u64, value: f64) {
        assert!(level <= self.max_level && orientation < 3);
        assert!(value.is_finite());
        debug_assert!(k < 1u64 << (DIMENSION * level));
        self.entries[level][orientation].push((k, value));
    }

    pub fn level_entries(&self, level: usize, orientation: usize) -> &[(u64, f64)] {
        &self.entries[level][orientation]
    }

    /// Energy of one level-orientation block.
    pub fn block_energy(&self, level: usize, orientation: usize) -> f64 {
        self.entries[level][orientation]
            .iter()
            .map(|(_, v)| v * v)
            .sum()
    }

    /// Multiset of all stored values (diagnostics).
    pub fn all_values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|lvl| lvl.iter().flat_map(|e| e.iter().map(|(_, v)| *v)))
            .collect()
    }

    /// Truncate to a smaller maximal level.
    pub fn truncated(&self, max_level: usize) -> CoefficientSequence {
        let max_level = max_level.min(self.max_level);
        CoefficientSequence {
            max_level,
            entries: self.entries[..=max_level].to_vec(),
        }
    }

    /// Multiply every coefficient by `t`.
    pub fn scaled(&self, t: f64) -> CoefficientSequence {
        CoefficientSequence {
            max_level: self.max_level,
            entries: self
                .entries
                .iter()
                .map(|lvl| {
                    [
                        lvl[0].iter().map(|&(k, v)| (k, t * v)).collect(),
                        lvl[1].iter().map(|&(k, v)| (k, t * v)).collect(),
                        lvl[2].iter().map(|&(k, v)| (k, t * v)).collect(),
                    ]
                })
                .collect(),
        }
    }
}

/// Default threshold grid: dyadic `{2^-m : m = 0..=20}`. The supremum over a
/// grid is a lower bound of the true supremum; growth-trend checks that need
/// to resolve deeper levels pass an explicitly deeper grid.
pub fn default_lambda_grid() -> Vec<f64> {
    dyadic_lambda_grid(20)
}

/// Dyadic grid `{2^-m : m = 0..=depth}`.
pub fn dyadic_lambda_grid(depth: u32) -> Vec<f64> {
    (0..=depth).map(|m| 2.0f64.powi(-(m as i32))).collect()
}

/// Strong Besov functional:
/// `max_{J in 0..=J_max} 2^{2Js} sum_{j>J} sum_{k,eps} c^2`,
/// tails truncated at `J_max`.
pub fn strong_besov_functional(seq: &CoefficientSequence, s: f64, j_max: usize) -> f64 {
    assert!(s > 0.0);
    let j_max = j_max.min(seq.max_level());
    let level_energy: Vec<f64> = (0..=j_max)
        .map(|j| (0..3).map(|e| seq.block_energy(j, e)).sum())
        .collect();
    let mut best = 0.0f64;
    for cap in 0..=j_max {
        // the tail runs over j > cap only
        let tail: f64 = level_energy[cap..].iter().skip(1).sum();
        best = best.max(2.0f64.powf(2.0 * s * cap as f64) * tail);
    }
    best
}

/// Local weak Besov functional:
/// `max_{lambda in grid} lambda^r * #{ |c| > lambda }`.
pub fn weak_besov_local(seq: &CoefficientSequence, r: f64, lambda_grid: &[f64]) -> f64 {
    assert!(r > 0.0 && r < 2.0);
    let mut values = seq.all_values();
    values.iter_mut().for_each(|v| *v = v.abs());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = 0.0f64;
    for &lambda in lambda_grid {
        // count strictly exceeding lambda via binary search on sorted magnitudes
        let idx = values.partition_point(|&v| v <= lambda);
        let count = (values.len() - idx) as f64;
        best = best.max(lambda.powf(r) * count);
    }
    best
}

/// Global weak Besov functional:
/// `max_{lambda} lambda^r sum_j 2^{dj} sum_eps 1{ sum_k c^2 > 2^{dj} lambda^2 }`.
pub fn weak_besov_global(seq: &CoefficientSequence, r: f64, lambda_grid: &[f64]) -> f64 {
    assert!(r > 0.0 && r < 2.0);
    let energies: Vec<[f64; 3]> = (0..=seq.max_level())
        .map(|j| {
            [
                seq.block_energy(j, 0),
                seq.block_energy(j, 1),
                seq.block_energy(j, 2),
            ]
        })
        .collect();
    let mut best = 0.0f64;
    for &lambda in lambda_grid {
        let l2 = lambda * lambda;
        let mut sum = 0.0;
        for (j, blocks) in energies.iter().enumerate() {
            let weight = 2.0f64.powi((DIMENSION * j) as i32);
            let cut = weight * l2;
            for &e in blocks {
                if e > cut {
                    sum += weight;
                }
            }
        }
        best = best.max(lambda.powf(r) * sum);
    }
    best
}

/// Sparse separating sequence: at each level j and orientation, exactly
/// `floor(2^{(2 d alpha / (2s + d)) j})` coefficients take the value
/// `(2^d - 1)^{-1} 2^{-alpha j}`, placed at the lexicographically first
/// k-indices (placement does not affect any functional here).
///
/// Requires `d/2 <= alpha < s + d/2`.
pub fn sparse_counterexample(alpha: f64, s: f64, j_max: usize) -> Result<CoefficientSequence> {
    let d = DIMENSION as f64;
    if !(alpha >= d / 2.0 && alpha < s + d / 2.0) {
        return Err(CopwaveError::AlphaOutOfRange { alpha, s });
    }
    let exponent = 2.0 * d * alpha / (2.0 * s + d);
    let amplitude_base = 1.0 / (2.0f64.powi(DIMENSION as i32) - 1.0);
    let mut seq = CoefficientSequence::empty(j_max);
    for j in 0..=j_max {
        let count = 2.0f64.powf(exponent * j as f64).floor() as u64;
        let capacity = 1u64 << (DIMENSION * j);
        let count = count.min(capacity);
        let value = amplitude_base * 2.0f64.powf(-alpha * j as f64);
        for eps in 0..3 {
            for k in 0..count {
                seq.push(j, eps, k, value);
            }
        }
    }
    Ok(seq)
}

/// Re-index the detail coefficients of a transform pyramid (the
/// approximation block is excluded). Level indices are preserved.
pub fn pyramid_to_sequence(pyramid: &CoefficientPyramid) -> CoefficientSequence {
    let max_level = pyramid.max_level().saturating_sub(1);
    let mut seq = CoefficientSequence::empty(max_level.max(pyramid.coarse_level()));
    for lvl in pyramid.details() {
        let side = 1u64 << lvl.level;
        for (eps, block) in lvl.blocks.iter().enumerate() {
            for ((k1, k2), &v) in block.indexed_iter() {
                if v != 0.0 {
                    seq.push(lvl.level, eps, k1 as u64 * side + k2 as u64, v);
                }
            }
        }
    }
    seq
}
