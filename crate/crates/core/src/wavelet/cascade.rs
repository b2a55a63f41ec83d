//! Dyadic tabulation of the scaling function and wavelet by the cascade
//! refinement scheme, plus point evaluation of dilated translates.

use super::WaveletSpec;
use crate::error::{CopwaveError, Result};

/// Values of the scaling function phi and the wavelet psi on the dyadic grid
/// `x = m * 2^-r` over the common support `[0, L]`.
#[derive(Debug, Clone)]
pub struct DyadicFunctionTable {
    refinement: u32,
    support_length: usize,
    phi: Vec<f64>,
    psi: Vec<f64>,
}

impl DyadicFunctionTable {
    pub fn refinement(&self) -> u32 {
        self.refinement
    }

    pub fn support_length(&self) -> usize {
        self.support_length
    }

    /// phi at the dyadic nodes `m * 2^-r`, `m = 0..=L * 2^r`.
    pub fn phi_values(&self) -> &[f64] {
        &self.phi
    }

    /// psi at the same nodes.
    pub fn psi_values(&self) -> &[f64] {
        &self.psi
    }

    /// phi(x), linearly interpolated between adjacent dyadic nodes.
    #[inline]
    pub fn phi(&self, x: f64) -> f64 {
        self.interp(&self.phi, x)
    }

    /// psi(x), linearly interpolated between adjacent dyadic nodes.
    #[inline]
    pub fn psi(&self, x: f64) -> f64 {
        self.interp(&self.psi, x)
    }

    #[inline]
    fn interp(&self, table: &[f64], x: f64) -> f64 {
        if x <= 0.0 || x >= self.support_length as f64 {
            return 0.0;
        }
        let t = x * (1u64 << self.refinement) as f64;
        let idx = t as usize;
        let frac = t - idx as f64;
        if idx + 1 >= table.len() {
            return table[table.len() - 1];
        }
        table[idx] + frac * (table[idx + 1] - table[idx])
    }
}

/// Tabulate phi and psi at resolution `2^-refinement` by iterating the
/// two-scale relation from the integer-grid eigenvector of the transfer
/// matrix.
pub fn cascade_eval(spec: &WaveletSpec, refinement: u32) -> Result<DyadicFunctionTable> {
    assert!(refinement >= 1, "refinement must be >= 1");
    let support = spec.support_length();
    let h = spec.lowpass();
    let sqrt2 = 2.0f64.sqrt();

    // phi at the integers: phi(0) = phi(L) = 0 for order >= 2, interior from
    // the eigenvalue-1 eigenvector of M[a][b] = sqrt(2) h_{2a-b}, normalized
    // by partition of unity (sum over integers = 1). Haar has no interior
    // integers; its right-continuous convention is phi(0) = 1.
    let mut phi_int = vec![0.0; support + 1];
    if support == 1 {
        phi_int[0] = 1.0;
    } else {
        let dim = support - 1;
        // (M - I) v = 0 with the last row replaced by the normalization.
        let mut mat = vec![vec![0.0f64; dim]; dim];
        let mut rhs = vec![0.0f64; dim];
        for a in 1..support {
            for b in 1..support {
                let idx = 2 * a as isize - b as isize;
                let m_ab = if idx >= 0 && (idx as usize) < h.len() {
                    sqrt2 * h[idx as usize]
                } else {
                    0.0
                };
                mat[a - 1][b - 1] = m_ab - if a == b { 1.0 } else { 0.0 };
            }
        }
        for x in mat[dim - 1].iter_mut() {
            *x = 1.0;
        }
        rhs[dim - 1] = 1.0;
        let sol = solve_dense(&mut mat, &mut rhs)?;
        phi_int[1..support].copy_from_slice(&sol);
    }

    // Refine: values at odd multiples of 2^-rho come from the previous grid
    // through phi(x) = sqrt(2) sum_k h_k phi(2x - k).
    let mut prev = phi_int;
    for rho in 1..=refinement {
        let step = 1usize << rho;
        let len = support * step + 1;
        let mut cur = vec![0.0; len];
        for (m, value) in cur.iter_mut().enumerate() {
            if m % 2 == 0 {
                *value = prev[m / 2];
            } else {
                // argument of the previous-level table: 2x - k = m * 2^{1-rho} - k
                let mut acc = 0.0;
                for (k, &hk) in h.iter().enumerate() {
                    let idx = m as isize - (k as isize) * (step as isize / 2);
                    if idx >= 0 && (idx as usize) < prev.len() {
                        acc += hk * prev[idx as usize];
                    }
                }
                *value = sqrt2 * acc;
            }
        }
        prev = cur;
    }
    let phi = prev;

    // psi(x) = sqrt(2) sum_k g_k phi(2x - k) on the same grid.
    let g = spec.highpass();
    let step = 1usize << refinement;
    let mut psi = vec![0.0; phi.len()];
    for (m, value) in psi.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, &gk) in g.iter().enumerate() {
            let idx = 2 * m as isize - (k as isize) * step as isize;
            if idx >= 0 && (idx as usize) < phi.len() {
                acc += gk * phi[idx as usize];
            }
        }
        *value = sqrt2 * acc;
    }

    Ok(DyadicFunctionTable {
        refinement,
        support_length: support,
        phi,
        psi,
    })
}

/// Evaluate `2^{j/2} phi(2^j x - k)`.
#[inline]
pub fn eval_scaling(table: &DyadicFunctionTable, j: u32, k: i64, x: f64) -> f64 {
    let scale = (1u64 << j) as f64;
    scale.sqrt() * table.phi(scale * x - k as f64)
}

/// Gaussian elimination with partial pivoting; errors on a vanishing pivot.
fn solve_dense(mat: &mut [Vec<f64>], rhs: &mut [f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| mat[a][col].abs().total_cmp(&mat[b][col].abs()))
            .unwrap();
        if mat[pivot][col].abs() < 1e-12 {
            return Err(CopwaveError::DegenerateFilter);
        }
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let (pivot_rows, rest) = mat.split_at_mut(col + 1);
        let pivot_row = &pivot_rows[col];
        for (offset, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            if f == 0.0 {
                continue;
            }
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            rhs[col + 1 + offset] -= f * rhs[col];
        }
    }
    let mut sol = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc -= mat[row][c] * sol[c];
        }
        sol[row] = acc / mat[row][row];
    }
    Ok(sol)
}
