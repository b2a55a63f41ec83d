//! Nonparametric estimation of bivariate copula densities.
//!
//! The pipeline estimates a copula density from raw paired observations:
//! margins are removed by a rank transform, empirical scaling coefficients
//! are computed on a compactly supported wavelet basis, detail coefficients
//! are shrunk by hard local or hard global (block) thresholding, and the
//! density is reconstructed on a regular grid over the unit square.
//!
//! The companion modules provide the parametric copula families used for
//! simulation benchmarks ([`copulas`]), grid norms and a Monte Carlo
//! benchmark harness ([`metrics`]), benchmark-driven parametric fitting by
//! exhaustive lattice search ([`fitting`]), and numerical functionals for
//! the Besov / weak-Besov sequence classes that govern which densities the
//! thresholding rules estimate well ([`besov`]).

pub mod besov;
pub mod copulas;
pub mod error;
pub mod estimator;
pub mod fitting;
pub mod metrics;
pub mod special;
pub mod wavelet;

pub use error::{CopwaveError, Result};
