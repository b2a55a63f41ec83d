//! Separable periodic 2D fast wavelet transform by direct circular
//! convolution and its exact adjoint inverse.

use ndarray::Array2;

use super::WaveletSpec;
use crate::error::{CopwaveError, Result};

/// Detail orientation of the tensor basis. The name states which filter acts
/// along axis 0 (first coordinate) and axis 1 (second coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Lowpass along axis 0, highpass along axis 1.
    LowHigh,
    /// Highpass along axis 0, lowpass along axis 1.
    HighLow,
    /// Highpass along both axes.
    HighHigh,
}

impl Orientation {
    pub const ALL: [Orientation; 3] =
        [Orientation::LowHigh, Orientation::HighLow, Orientation::HighHigh];

    pub fn index(self) -> usize {
        match self {
            Orientation::LowHigh => 0,
            Orientation::HighLow => 1,
            Orientation::HighHigh => 2,
        }
    }
}

/// One level of detail coefficients: three `2^level x 2^level` blocks.
#[derive(Debug, Clone)]
pub struct DetailLevel {
    pub level: usize,
    pub blocks: [Array2<f64>; 3],
}

impl DetailLevel {
    pub fn block(&self, orientation: Orientation) -> &Array2<f64> {
        &self.blocks[orientation.index()]
    }

    pub fn block_mut(&mut self, orientation: Orientation) -> &mut Array2<f64> {
        &mut self.blocks[orientation.index()]
    }
}

/// Scaling coefficients at the coarse level plus detail coefficients for
/// every level in `[coarse_level, max_level)`.
#[derive(Debug, Clone)]
pub struct CoefficientPyramid {
    coarse_level: usize,
    max_level: usize,
    approx: Array2<f64>,
    details: Vec<DetailLevel>,
}

impl CoefficientPyramid {
    pub fn coarse_level(&self) -> usize {
        self.coarse_level
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn approx(&self) -> &Array2<f64> {
        &self.approx
    }

    pub fn approx_mut(&mut self) -> &mut Array2<f64> {
        &mut self.approx
    }

    /// Detail levels ordered from `coarse_level` to `max_level - 1`.
    pub fn details(&self) -> &[DetailLevel] {
        &self.details
    }

    pub fn details_mut(&mut self) -> &mut [DetailLevel] {
        &mut self.details
    }

    /// Sum of squares over every stored coefficient.
    pub fn energy(&self) -> f64 {
        let mut e: f64 = self.approx.iter().map(|v| v * v).sum();
        for lvl in &self.details {
            for b in &lvl.blocks {
                e += b.iter().map(|v| v * v).sum::<f64>();
            }
        }
        e
    }

    fn validate(&self) -> Result<()> {
        let want = 1usize << self.coarse_level;
        if self.approx.nrows() != want || self.approx.ncols() != want {
            return Err(CopwaveError::PyramidShape {
                level: self.coarse_level,
                expected: want,
                got: self.approx.nrows(),
            });
        }
        if self.details.len() != self.max_level - self.coarse_level {
            return Err(CopwaveError::PyramidShape {
                level: self.max_level,
                expected: self.max_level - self.coarse_level,
                got: self.details.len(),
            });
        }
        for (i, lvl) in self.details.iter().enumerate() {
            let level = self.coarse_level + i;
            let want = 1usize << level;
            if lvl.level != level {
                return Err(CopwaveError::PyramidShape {
                    level,
                    expected: want,
                    got: 1usize << lvl.level,
                });
            }
            for b in &lvl.blocks {
                if b.nrows() != want || b.ncols() != want {
                    return Err(CopwaveError::PyramidShape {
                        level,
                        expected: want,
                        got: b.nrows(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Periodic analysis step on a vector of even length:
/// `a_i = sum_t h_t v_{(2i+t) mod M}` and likewise for the highpass.
fn analyze_1d(v: &[f64], h: &[f64], g: &[f64], approx: &mut [f64], detail: &mut [f64]) {
    let m = v.len();
    let half = m / 2;
    for i in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (t, (&ht, &gt)) in h.iter().zip(g).enumerate() {
            let src = v[(2 * i + t) % m];
            a += ht * src;
            d += gt * src;
        }
        approx[i] = a;
        detail[i] = d;
    }
}

/// Adjoint of `analyze_1d`; exact inverse because the filter is orthonormal.
fn synthesize_1d(approx: &[f64], detail: &[f64], h: &[f64], g: &[f64], out: &mut [f64]) {
    let m = out.len();
    out.fill(0.0);
    for i in 0..approx.len() {
        let a = approx[i];
        let d = detail[i];
        for (t, (&ht, &gt)) in h.iter().zip(g).enumerate() {
            out[(2 * i + t) % m] += ht * a + gt * d;
        }
    }
}

/// Separable periodic analysis of a `2^J x 2^J` matrix of scaling
/// coefficients down to `coarse`. Detail level `j` holds the three
/// orientation blocks of size `2^j x 2^j`.
pub fn dwt2_periodic(
    matrix: &Array2<f64>,
    spec: &WaveletSpec,
    coarse: usize,
) -> Result<CoefficientPyramid> {
    let side = matrix.nrows();
    if side != matrix.ncols() || !side.is_power_of_two() {
        return Err(CopwaveError::NonPowerOfTwo { side });
    }
    let max_level = side.trailing_zeros() as usize;
    if (1usize << coarse) > side {
        return Err(CopwaveError::CoarseTooDeep { side, coarse });
    }
    let h = spec.lowpass();
    let g_vec = spec.highpass();
    let g = g_vec.as_slice();

    let mut approx = matrix.clone();
    let mut details: Vec<DetailLevel> = Vec::with_capacity(max_level - coarse);
    let mut level = max_level;
    while level > coarse {
        let size = 1usize << level;
        let half = size / 2;
        // axis 1: transform each row into [low | high]
        let mut low = Array2::zeros((size, half));
        let mut high = Array2::zeros((size, half));
        let mut abuf = vec![0.0; half];
        let mut dbuf = vec![0.0; half];
        for r in 0..size {
            let row: Vec<f64> = approx.row(r).to_vec();
            analyze_1d(&row, h, g, &mut abuf, &mut dbuf);
            for c in 0..half {
                low[[r, c]] = abuf[c];
                high[[r, c]] = dbuf[c];
            }
        }
        // axis 0: transform each column of both halves
        let mut ll = Array2::zeros((half, half));
        let mut hl = Array2::zeros((half, half));
        let mut lh = Array2::zeros((half, half));
        let mut hh = Array2::zeros((half, half));
        for c in 0..half {
            let col: Vec<f64> = low.column(c).to_vec();
            analyze_1d(&col, h, g, &mut abuf, &mut dbuf);
            for r in 0..half {
                ll[[r, c]] = abuf[r];
                hl[[r, c]] = dbuf[r];
            }
            let col: Vec<f64> = high.column(c).to_vec();
            analyze_1d(&col, h, g, &mut abuf, &mut dbuf);
            for r in 0..half {
                lh[[r, c]] = abuf[r];
                hh[[r, c]] = dbuf[r];
            }
        }
        details.push(DetailLevel {
            level: level - 1,
            blocks: [lh, hl, hh],
        });
        approx = ll;
        level -= 1;
    }
    details.reverse();
    Ok(CoefficientPyramid {
        coarse_level: coarse,
        max_level,
        approx,
        details,
    })
}

/// Exact inverse of [`dwt2_periodic`].
pub fn idwt2_periodic(pyramid: &CoefficientPyramid, spec: &WaveletSpec) -> Result<Array2<f64>> {
    pyramid.validate()?;
    let h = spec.lowpass();
    let g_vec = spec.highpass();
    let g = g_vec.as_slice();

    let mut approx = pyramid.approx.clone();
    for lvl in &pyramid.details {
        let half = 1usize << lvl.level;
        let size = half * 2;
        let lh = &lvl.blocks[0];
        let hl = &lvl.blocks[1];
        let hh = &lvl.blocks[2];
        // axis 0 first (adjoint order of the analysis)
        let mut low = Array2::zeros((size, half));
        let mut high = Array2::zeros((size, half));
        let mut out = vec![0.0; size];
        for c in 0..half {
            let a: Vec<f64> = approx.column(c).to_vec();
            let d: Vec<f64> = hl.column(c).to_vec();
            synthesize_1d(&a, &d, h, g, &mut out);
            for r in 0..size {
                low[[r, c]] = out[r];
            }
            let a: Vec<f64> = lh.column(c).to_vec();
            let d: Vec<f64> = hh.column(c).to_vec();
            synthesize_1d(&a, &d, h, g, &mut out);
            for r in 0..size {
                high[[r, c]] = out[r];
            }
        }
        // axis 1
        let mut next = Array2::zeros((size, size));
        for r in 0..size {
            let a: Vec<f64> = low.row(r).to_vec();
            let d: Vec<f64> = high.row(r).to_vec();
            synthesize_1d(&a, &d, h, g, &mut out);
            for c in 0..size {
                next[[r, c]] = out[c];
            }
        }
        approx = next;
    }
    Ok(approx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::daubechies_filter;
    use ndarray::array;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn max_abs_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn haar_all_ones() {
        let w = daubechies_filter(1).unwrap();
        let m = array![[1.0, 1.0], [1.0, 1.0]];
        let p = dwt2_periodic(&m, &w, 0).unwrap();
        assert!((p.approx()[[0, 0]] - 2.0).abs() < 1e-14);
        for lvl in p.details() {
            for b in &lvl.blocks {
                assert!(b.iter().all(|v| v.abs() < 1e-14));
            }
        }
    }

    #[test]
    fn haar_delta_fixes_sign_convention() {
        // Module convention test vector: a unit impulse at (0,0) produces
        // approx 1/2 and all three detail blocks +1/2.
        let w = daubechies_filter(1).unwrap();
        let m = array![[1.0, 0.0], [0.0, 0.0]];
        let p = dwt2_periodic(&m, &w, 0).unwrap();
        assert!((p.approx()[[0, 0]] - 0.5).abs() < 1e-14);
        let signs: Vec<f64> = Orientation::ALL
            .iter()
            .map(|&o| p.details()[0].block(o)[[0, 0]])
            .collect();
        for s in &signs {
            assert!((s - 0.5).abs() < 1e-14, "{signs:?}");
        }
        let product: f64 = signs.iter().product();
        assert!(product > 0.0);
    }

    #[test]
    fn haar_inverse_examples() {
        let w = daubechies_filter(1).unwrap();
        let p = dwt2_periodic(&array![[2.0, 0.0], [0.0, 0.0]], &w, 0).unwrap();
        // zero out details, keep approx [[2]] -> all ones
        let mut p2 = p.clone();
        for lvl in p2.details_mut() {
            for b in &mut lvl.blocks {
                b.fill(0.0);
            }
        }
        p2.approx_mut()[[0, 0]] = 2.0;
        let rec = idwt2_periodic(&p2, &w).unwrap();
        assert!(max_abs_diff(&rec, &Array2::ones((2, 2))) < 1e-14);

        let mut zero = p;
        zero.approx_mut().fill(0.0);
        for lvl in zero.details_mut() {
            for b in &mut lvl.blocks {
                b.fill(0.0);
            }
        }
        let rec = idwt2_periodic(&zero, &w).unwrap();
        assert!(rec.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn round_trip_and_parseval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for order in [1usize, 2, 4] {
            let w = daubechies_filter(order).unwrap();
            for logsize in 1..=6 {
                let side = 1usize << logsize;
                let m = Array2::from_shape_fn((side, side), |_| rng.gen_range(-1.0..1.0));
                for coarse in 0..=logsize {
                    let p = dwt2_periodic(&m, &w, coarse).unwrap();
                    // total coefficient count equals the input count
                    let count: usize = p.approx().len()
                        + p.details()
                            .iter()
                            .map(|l| l.blocks.iter().map(|b| b.len()).sum::<usize>())
                            .sum::<usize>();
                    assert_eq!(count, side * side);
                    let norm_in: f64 = m.iter().map(|v| v * v).sum();
                    assert!(
                        (p.energy() - norm_in).abs() <= 1e-10 * norm_in.max(1.0),
                        "parseval order {order} side {side}"
                    );
                    let rec = idwt2_periodic(&p, &w).unwrap();
                    assert!(
                        max_abs_diff(&rec, &m) < 1e-10,
                        "round trip order {order} side {side} coarse {coarse}"
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let w = daubechies_filter(2).unwrap();
        let m = Array2::zeros((3, 3));
        assert!(matches!(
            dwt2_periodic(&m, &w, 0),
            Err(CopwaveError::NonPowerOfTwo { side: 3 })
        ));
        let m = Array2::zeros((4, 4));
        assert!(matches!(
            dwt2_periodic(&m, &w, 3),
            Err(CopwaveError::CoarseTooDeep { .. })
        ));
        // level-shape mismatch caught by the inverse
        let mut p = dwt2_periodic(&m, &w, 1).unwrap();
        p.details_mut()[0].blocks[1] = Array2::zeros((4, 4));
        assert!(matches!(
            idwt2_periodic(&p, &w),
            Err(CopwaveError::PyramidShape { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn prop_round_trip_random_matrices(seed in 0u64..1000, order in 1usize..=4) {
            let w = daubechies_filter(order).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Array2::from_shape_fn((16, 16), |_| rng.gen_range(-10.0..10.0));
            let p = dwt2_periodic(&m, &w, 1).unwrap();
            let rec = idwt2_periodic(&p, &w).unwrap();
            prop_assert!(max_abs_diff(&rec, &m) < 1e-10);
        }
    }
}
