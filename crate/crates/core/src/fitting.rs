//! Benchmark-driven parametric fitting: exhaustive lattice search of the
//! grid distance between a nonparametric benchmark density and each of five
//! parametric copula classes, then selection of the best family.

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copulas::{density, CopulaModel};
use crate::error::Result;
use crate::estimator::DensityGrid;
use crate::metrics::{grid_norm, Norm};
use crate::special::{normal_quantile, student_t_quantile};

/// The five parametric classes with their fixed search lattices
/// (inclusive endpoints):
/// Gaussian rho in [-0.99:0.01:0.99]; Student (rho, nu) in
/// [-0.99:0.01:0.99] x [1:1:100]; Gumbel theta in [1:0.01:2];
/// Clayton theta in [0:0.01:2]; Frank theta in [-2:0.01:2].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParametricClass {
    Gaussian,
    Student,
    Gumbel,
    Clayton,
    Frank,
}

impl ParametricClass {
    pub const ALL: [ParametricClass; 5] = [
        ParametricClass::Gaussian,
        ParametricClass::Student,
        ParametricClass::Gumbel,
        ParametricClass::Clayton,
        ParametricClass::Frank,
    ];

    /// Class index p = 1..5.
    pub fn id(&self) -> usize {
        match self {
            ParametricClass::Gaussian => 1,
            ParametricClass::Student => 2,
            ParametricClass::Gumbel => 3,
            ParametricClass::Clayton => 4,
            ParametricClass::Frank => 5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ParametricClass::Gaussian => "gaussian",
            ParametricClass::Student => "student",
            ParametricClass::Gumbel => "gumbel",
            ParametricClass::Clayton => "clayton",
            ParametricClass::Frank => "frank",
        }
    }

    /// The theta lattice; Student pairs every theta with nu = 1..=100.
    pub fn theta_lattice(&self) -> Vec<f64> {
        let range = |lo: i64, hi: i64| (lo..=hi).map(|i| i as f64 / 100.0).collect::<Vec<_>>();
        match self {
            ParametricClass::Gaussian | ParametricClass::Student => range(-99, 99),
            ParametricClass::Gumbel => range(100, 200),
            ParametricClass::Clayton => range(0, 200),
            ParametricClass::Frank => range(-200, 200),
        }
    }

    pub fn nu_lattice(&self) -> Option<Vec<u32>> {
        match self {
            ParametricClass::Student => Some((1..=100).collect()),
            _ => None,
        }
    }
}

/// Arg-min of one class: the selected parameter and its grid distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassFit {
    pub class: ParametricClass,
    pub theta: f64,
    pub nu: Option<u32>,
    pub distance: f64,
}

/// Fit of all five classes at one contrast plus the winning family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub q: Norm,
    pub class_fits: Vec<ClassFit>,
    pub winner: ClassFit,
    /// `100 * ||benchmark - c_winner||_q / ||c_winner||_q`.
    pub relative_error_pct: f64,
}

/// Density of a lattice member on the cell-centered grid. Degenerate points
/// (Clayton theta = 0, Frank theta = 0) are the independence density by the
/// continuous limit. The evaluation path is shared with
/// [`crate::metrics::truth_grid`], so an exactly rendered lattice density is
/// recovered with distance exactly zero.
pub fn class_density_grid(
    class: ParametricClass,
    theta: f64,
    nu: Option<u32>,
    n_side: usize,
) -> DensityGrid {
    let model = lattice_model(class, theta, nu);
    let mut values = Array2::zeros((n_side, n_side));
    for i in 0..n_side {
        let u = (i as f64 + 0.5) / n_side as f64;
        for j in 0..n_side {
            let v = (j as f64 + 0.5) / n_side as f64;
            values[[i, j]] = density(&model, u, v);
        }
    }
    DensityGrid::new(values)
}

fn lattice_model(class: ParametricClass, theta: f64, nu: Option<u32>) -> CopulaModel {
    match class {
        ParametricClass::Gaussian => CopulaModel::Gaussian { rho: theta },
        ParametricClass::Student => CopulaModel::Student {
            rho: theta,
            nu: nu.unwrap_or(1) as f64,
        },
        ParametricClass::Gumbel => CopulaModel::Gumbel { theta },
        ParametricClass::Clayton => {
            if theta == 0.0 {
                CopulaModel::Independence
            } else {
                CopulaModel::Clayton { theta }
            }
        }
        ParametricClass::Frank => {
            if theta == 0.0 {
                CopulaModel::Independence
            } else {
                CopulaModel::Frank { theta }
            }
        }
    }
}

/// Grid coordinates of the benchmark's cell centers.
fn grid_coords(n_side: usize) -> Vec<f64> {
    (0..n_side)
        .map(|i| (i as f64 + 0.5) / n_side as f64)
        .collect()
}

fn distance_against(bench: &Array2<f64>, candidate: &Array2<f64>, q: Norm) -> f64 {
    let count = bench.len() as f64;
    match q {
        Norm::L1 => {
            bench
                .iter()
                .zip(candidate.iter())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / count
        }
        Norm::L2 => (bench
            .iter()
            .zip(candidate.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / count)
            .sqrt(),
        Norm::LInf => bench
            .iter()
            .zip(candidate.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    }
}

// Candidate ordering for ties: smaller distance, then smaller |theta|,
// then smaller nu. The final signed-theta key makes this a total order, so
// parallel reductions resolve exact ties deterministically.
fn better(a: &ClassFit, b: &ClassFit) -> bool {
    if a.distance != b.distance {
        return a.distance < b.distance;
    }
    let (ta, tb) = (a.theta.abs(), b.theta.abs());
    if ta != tb {
        return ta < tb;
    }
    if a.nu.unwrap_or(0) != b.nu.unwrap_or(0) {
        return a.nu.unwrap_or(0) < b.nu.unwrap_or(0);
    }
    a.theta < b.theta
}

/// Exhaustive scan of one class: every lattice member is rendered on the
/// benchmark's cell-centered grid and the arg-min of the grid distance is
/// returned.
pub fn fit_class(benchmark: &DensityGrid, class: ParametricClass, q: Norm) -> ClassFit {
    let thetas = class.theta_lattice();
    match class {
        ParametricClass::Student => {
            let nus = class.nu_lattice().unwrap();
            fit_student(benchmark, &thetas, &nus, q)
        }
        ParametricClass::Gaussian => {
            let coords = grid_coords(benchmark.n_side());
            let z: Vec<f64> = coords.iter().map(|&u| normal_quantile(u)).collect();
            let best = thetas
                .par_iter()
                .map(|&rho| {
                    let n = coords.len();
                    let mut cand = Array2::zeros((n, n));
                    for i in 0..n {
                        for j in 0..n {
                            cand[[i, j]] = crate::copulas::gaussian_density_from_z(rho, z[i], z[j]);
                        }
                    }
                    ClassFit {
                        class,
                        theta: rho,
                        nu: None,
                        distance: distance_against(benchmark.values(), &cand, q),
                    }
                })
                .reduce_with(|a, b| if better(&a, &b) { a } else { b });
            best.expect("non-empty lattice")
        }
        _ => {
            let best = thetas
                .par_iter()
                .map(|&theta| {
                    let cand = class_density_grid(class, theta, None, benchmark.n_side());
                    ClassFit {
                        class,
                        theta,
                        nu: None,
                        distance: distance_against(benchmark.values(), cand.values(), q),
                    }
                })
                .reduce_with(|a, b| if better(&a, &b) { a } else { b });
            best.expect("non-empty lattice")
        }
    }
}

fn fit_student(benchmark: &DensityGrid, thetas: &[f64], nus: &[u32], q: Norm) -> ClassFit {
    let coords = grid_coords(benchmark.n_side());
    let best = nus
        .par_iter()
        .map(|&nu| {
            // the per-nu quantile table is the expensive part; cache it
            let nu_f = nu as f64;
            let x: Vec<f64> = coords
                .iter()
                .map(|&u| student_t_quantile(nu_f, u))
                .collect();
            let n = coords.len();
            let mut local_best: Option<ClassFit> = None;
            let mut cand = Array2::zeros((n, n));
            for &rho in thetas {
                for i in 0..n {
                    for j in 0..n {
                        cand[[i, j]] =
                            crate::copulas::student_density_from_t(rho, nu_f, x[i], x[j]);
                    }
                }
                let fit = ClassFit {
                    class: ParametricClass::Student,
                    theta: rho,
                    nu: Some(nu),
                    distance: distance_against(benchmark.values(), &cand, q),
                };
                local_best = match local_best {
                    Some(cur) if better(&cur, &fit) => Some(cur),
                    _ => Some(fit),
                };
            }
            local_best.expect("non-empty lattice")
        })
        .reduce_with(|a, b| if better(&a, &b) { a } else { b });
    best.expect("non-empty lattice")
}

/// Fit all five classes and pick the family with the smallest distance
/// (ties toward the smaller class index); reports the winner's relative
/// error in percent.
pub fn best_family(benchmark: &DensityGrid, q: Norm) -> Result<FitResult> {
    let class_fits: Vec<ClassFit> = ParametricClass::ALL
        .iter()
        .map(|&class| fit_class(benchmark, class, q))
        .collect();
    let winner = class_fits
        .iter()
        .min_by(|a, b| {
            a.distance
                .partial_cmp(&b.distance)
                .unwrap()
                .then(a.class.id().cmp(&b.class.id()))
        })
        .unwrap()
        .clone();
    let cand = class_density_grid(winner.class, winner.theta, winner.nu, benchmark.n_side());
    let denom = grid_norm(&cand, q);
    let diff = DensityGrid::new(benchmark.values() - cand.values());
    let relative_error_pct = 100.0 * grid_norm(&diff, q) / denom;
    Ok(FitResult {
        q,
        class_fits,
        winner,
        relative_error_pct,
    })
}

/// Scan an explicit candidate list (diagnostic helper used to check scan
/// minimality and lattice-refinement monotonicity).
pub fn fit_custom_lattice(
    benchmark: &DensityGrid,
    class: ParametricClass,
    candidates: &[(f64, Option<u32>)],
    q: Norm,
) -> ClassFit {
    candidates
        .iter()
        .map(|&(theta, nu)| {
            let cand = class_density_grid(class, theta, nu, benchmark.n_side());
            ClassFit {
                class,
                theta,
                nu,
                distance: distance_against(benchmark.values(), cand.values(), q),
            }
        })
        .reduce(|a, b| if better(&a, &b) { a } else { b })
        .expect("non-empty candidate list")
}
