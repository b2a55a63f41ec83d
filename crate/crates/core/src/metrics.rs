//! Grid norms, estimation errors, and the Monte Carlo benchmark harness.
//!
//! Norms are mean-normalized so the constant-1 grid has unit norm for every
//! q; the same convention is applied to the estimate and the truth, so
//! relative errors are stable under grid refinement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copulas::{apply_margins, density, sample, CopulaModel, MarginSpec};
use crate::error::{CopwaveError, Result};
use crate::estimator::{estimate, level_indices, DensityGrid, EstimatorConfig};

/// Which empirical loss to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    #[serde(rename = "inf")]
    LInf,
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Norm::L1 => write!(f, "1"),
            Norm::L2 => write!(f, "2"),
            Norm::LInf => write!(f, "inf"),
        }
    }
}

/// Mean-normalized grid norm: mean |v| for q=1, sqrt(mean v^2) for q=2,
/// max |v| for q=inf.
pub fn grid_norm(grid: &DensityGrid, q: Norm) -> f64 {
    let vals = grid.values();
    let count = vals.len() as f64;
    match q {
        Norm::L1 => vals.iter().map(|v| v.abs()).sum::<f64>() / count,
        Norm::L2 => (vals.iter().map(|v| v * v).sum::<f64>() / count).sqrt(),
        Norm::LInf => vals.iter().map(|v| v.abs()).fold(0.0, f64::max),
    }
}

/// `RE^q = ||est - truth||_q / ||truth||_q` on a shared grid.
pub fn relative_error(est: &DensityGrid, truth: &DensityGrid, q: Norm) -> Result<f64> {
    if est.n_side() != truth.n_side() {
        return Err(CopwaveError::GridSizeMismatch {
            a: est.n_side(),
            b: truth.n_side(),
        });
    }
    let denom = grid_norm(truth, q);
    if denom == 0.0 {
        return Err(CopwaveError::ZeroNormTruth);
    }
    let diff = DensityGrid::new(est.values() - truth.values());
    Ok(grid_norm(&diff, q) / denom)
}

/// True copula density evaluated at the cell centers of an `n_side` grid.
/// Cell centers never touch 0 or 1, so corner-singular families stay finite.
pub fn truth_grid(model: &CopulaModel, n_side: usize) -> DensityGrid {
    let mut values = ndarray::Array2::zeros((n_side, n_side));
    for i in 0..n_side {
        let u = (i as f64 + 0.5) / n_side as f64;
        for j in 0..n_side {
            let v = (j as f64 + 0.5) / n_side as f64;
            values[[i, j]] = density(model, u, v);
        }
    }
    DensityGrid::new(values)
}

/// One row of a simulation benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub family: String,
    pub parameters: String,
    pub method: crate::estimator::ThresholdRule,
    pub boundary: crate::estimator::BoundaryMode,
    pub q: Norm,
    pub repetitions: usize,
    pub kappa: f64,
    pub mean_re: f64,
    pub std_re: f64,
}

/// Label strings used in benchmark tables.
pub fn describe_model(model: &CopulaModel) -> (String, String) {
    match *model {
        CopulaModel::Independence => ("independence".into(), "-".into()),
        CopulaModel::Fgm { theta } => ("fgm".into(), format!("{theta}")),
        CopulaModel::Gaussian { rho } => ("gaussian".into(), format!("{rho}")),
        CopulaModel::Student { rho, nu } => ("student".into(), format!("({rho},{nu})")),
        CopulaModel::Clayton { theta } => ("clayton".into(), format!("{theta}")),
        CopulaModel::Frank { theta } => ("frank".into(), format!("{theta}")),
        CopulaModel::Gumbel { theta } => ("gumbel".into(), format!("{theta}")),
    }
}

/// Simulate -> apply margins -> estimate -> relative error against the truth
/// rendered on the same cell-centered grid, repeated with per-repetition
/// seed streams. Repetitions run in parallel; the reduction order is fixed
/// by repetition index, so the report is seed-reproducible.
pub fn monte_carlo_bench(
    model: &CopulaModel,
    margins: (MarginSpec, MarginSpec),
    n: usize,
    config: &EstimatorConfig,
    repetitions: usize,
    q: Norm,
    seed: u64,
) -> Result<BenchReport> {
    if repetitions < 2 {
        return Err(CopwaveError::TooFewRepetitions {
            got: repetitions,
            min: 2,
        });
    }
    model.validate()?;
    let (_, j_max) = level_indices(n, 2)?;
    let n_side = config.grid_multiplier << j_max;
    let truth = truth_grid(model, n_side);

    let errors: Result<Vec<f64>> = (0..repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64 + 1);
            let uniforms = sample(model, n, &mut rng)?;
            let raw = apply_margins(&uniforms, margins)?;
            let grid = estimate(&raw, config)?;
            relative_error(&grid, &truth, q)
        })
        .collect();
    let errors = errors?;

    let mean = errors.iter().sum::<f64>() / repetitions as f64;
    let var = errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>()
        / (repetitions - 1) as f64;
    let (family, parameters) = describe_model(model);
    Ok(BenchReport {
        family,
        parameters,
        method: config.rule,
        boundary: config.boundary,
        q,
        repetitions,
        kappa: config.kappa,
        mean_re: mean,
        std_re: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{BoundaryMode, ThresholdRule};
    use ndarray::Array2;

    #[test]
    fn grid_norm_examples() {
        let ones = DensityGrid::new(Array2::ones((8, 8)));
        for q in [Norm::L1, Norm::L2, Norm::LInf] {
            assert!((grid_norm(&ones, q) - 1.0).abs() < 1e-15);
        }
        let twos = DensityGrid::new(Array2::ones((8, 8)) * 2.0);
        assert!((grid_norm(&twos, Norm::LInf) - 2.0).abs() < 1e-15);

        // single spike of value N^2 has unit L1 norm under the mean convention
        let n = 8usize;
        let mut spike = Array2::zeros((n, n));
        spike[[3, 4]] = (n * n) as f64;
        let spike = DensityGrid::new(spike);
        assert!((grid_norm(&spike, Norm::L1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norm_ordering_holds() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(5);
        use rand::Rng;
        for _ in 0..20 {
            let g = DensityGrid::new(Array2::from_shape_fn((16, 16), |_| {
                rng.gen_range(-3.0..3.0)
            }));
            let l1 = grid_norm(&g, Norm::L1);
            let l2 = grid_norm(&g, Norm::L2);
            let li = grid_norm(&g, Norm::LInf);
            assert!(l1 <= l2 + 1e-12 && l2 <= li + 1e-12);
        }
    }

    #[test]
    fn relative_error_examples() {
        let truth = truth_grid(&CopulaModel::Fgm { theta: 1.0 }, 16);
        assert_eq!(relative_error(&truth, &truth, Norm::L2).unwrap(), 0.0);
        let double = DensityGrid::new(truth.values() * 2.0);
        for q in [Norm::L1, Norm::L2, Norm::LInf] {
            assert!((relative_error(&double, &truth, q).unwrap() - 1.0).abs() < 1e-12);
        }
        let zero = DensityGrid::new(Array2::zeros((16, 16)));
        assert!(matches!(
            relative_error(&truth, &zero, Norm::L2),
            Err(CopwaveError::ZeroNormTruth)
        ));
    }

    #[test]
    fn bench_is_deterministic() {
        let model = CopulaModel::Gaussian { rho: 0.0 };
        let cfg = EstimatorConfig {
            rule: ThresholdRule::Linear,
            boundary: BoundaryMode::Periodize,
            spins: 1,
            ..Default::default()
        };
        let margins = (MarginSpec::Uniform, MarginSpec::Uniform);
        let a = monte_carlo_bench(&model, margins, 200, &cfg, 2, Norm::L2, 99).unwrap();
        let b = monte_carlo_bench(&model, margins, 200, &cfg, 2, Norm::L2, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.std_re >= 0.0);
    }

    #[test]
    fn independence_linear_periodize_is_accurate() {
        let model = CopulaModel::Independence;
        let cfg = EstimatorConfig {
            rule: ThresholdRule::Linear,
            boundary: BoundaryMode::Periodize,
            spins: 1,
            ..Default::default()
        };
        let margins = (MarginSpec::Uniform, MarginSpec::Uniform);
        let rep = monte_carlo_bench(&model, margins, 2000, &cfg, 5, Norm::L2, 7).unwrap();
        assert!(rep.mean_re <= 0.02, "mean RE {}", rep.mean_re);
    }

    #[test]
    fn too_few_repetitions_error() {
        let model = CopulaModel::Independence;
        let cfg = EstimatorConfig::default();
        let margins = (MarginSpec::Uniform, MarginSpec::Uniform);
        assert!(matches!(
            monte_carlo_bench(&model, margins, 100, &cfg, 1, Norm::L2, 0),
            Err(CopwaveError::TooFewRepetitions { .. })
        ));
    }
}
