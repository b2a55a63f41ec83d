//! Parametric copula families: samplers with uniform margins, closed-form
//! densities, and margin transforms for simulation realism.

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{CopwaveError, Result};
use crate::estimator::Sample;
use crate::special::{ln_gamma, normal_cdf, normal_quantile, student_t_cdf, student_t_quantile};

/// The six parametric families used by the simulation benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CopulaModel {
    Independence,
    /// Farlie-Gumbel-Morgenstern, theta in [-1, 1].
    Fgm { theta: f64 },
    /// Gaussian, rho in (-1, 1).
    Gaussian { rho: f64 },
    /// Student t, rho in (-1, 1), nu >= 1.
    Student { rho: f64, nu: f64 },
    /// Clayton, theta > 0.
    Clayton { theta: f64 },
    /// Frank, theta != 0.
    Frank { theta: f64 },
    /// Gumbel, theta >= 1.
    Gumbel { theta: f64 },
}

impl CopulaModel {
    pub fn validate(&self) -> Result<()> {
        let bad = |family: &'static str, detail: String| Err(CopwaveError::InvalidParameter {
            family,
            detail,
        });
        match *self {
            CopulaModel::Independence => Ok(()),
            CopulaModel::Fgm { theta } => {
                if !(-1.0..=1.0).contains(&theta) || !theta.is_finite() {
                    return bad("fgm", format!("theta = {theta}, need [-1, 1]"));
                }
                Ok(())
            }
            CopulaModel::Gaussian { rho } => {
                if !(rho > -1.0 && rho < 1.0) {
                    return bad("gaussian", format!("rho = {rho}, need (-1, 1)"));
                }
                Ok(())
            }
            CopulaModel::Student { rho, nu } => {
                if !(rho > -1.0 && rho < 1.0) {
                    return bad("student", format!("rho = {rho}, need (-1, 1)"));
                }
                if nu.is_nan() || nu < 1.0 || !nu.is_finite() {
                    return bad("student", format!("nu = {nu}, need >= 1"));
                }
                Ok(())
            }
            CopulaModel::Clayton { theta } => {
                if theta.is_nan() || theta <= 0.0 || !theta.is_finite() {
                    return bad("clayton", format!("theta = {theta}, need > 0"));
                }
                Ok(())
            }
            CopulaModel::Frank { theta } => {
                if theta == 0.0 || !theta.is_finite() {
                    return bad("frank", format!("theta = {theta}, need != 0"));
                }
                Ok(())
            }
            CopulaModel::Gumbel { theta } => {
                if theta.is_nan() || theta < 1.0 || !theta.is_finite() {
                    return bad("gumbel", format!("theta = {theta}, need >= 1"));
                }
                Ok(())
            }
        }
    }

    /// Kendall's tau where a closed form exists; `None` for Frank.
    pub fn kendall_tau(&self) -> Option<f64> {
        match *self {
            CopulaModel::Independence => Some(0.0),
            CopulaModel::Fgm { theta } => Some(2.0 * theta / 9.0),
            CopulaModel::Gaussian { rho } | CopulaModel::Student { rho, .. } => {
                Some(2.0 / PI * rho.asin())
            }
            CopulaModel::Clayton { theta } => Some(theta / (theta + 2.0)),
            CopulaModel::Gumbel { theta } => Some(1.0 - 1.0 / theta),
            CopulaModel::Frank { .. } => None,
        }
    }
}

/// Margin transforms applied to copula samples to mimic raw data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "margin", rename_all = "lowercase")]
pub enum MarginSpec {
    Uniform,
    Exponential { rate: f64 },
    StandardGaussian,
}

impl MarginSpec {
    pub fn validate(&self) -> Result<()> {
        if let MarginSpec::Exponential { rate } = self {
            if rate.is_nan() || *rate <= 0.0 {
                return Err(CopwaveError::InvalidParameter {
                    family: "exponential margin",
                    detail: format!("rate = {rate}, need > 0"),
                });
            }
        }
        Ok(())
    }

    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            MarginSpec::Uniform => u,
            MarginSpec::Exponential { rate } => -(1.0 - u).ln() / rate,
            MarginSpec::StandardGaussian => normal_quantile(u.max(f64::MIN_POSITIVE)),
        }
    }
}

// Largest double strictly below 1; CDF outputs are clamped into
// [MIN_POSITIVE, ONE_MINUS] so margin quantiles stay finite.
fn clamp_unit(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Draw `n` i.i.d. points on `[0,1]^2` with uniform margins and the model's
/// dependence. Deterministic given the RNG state.
pub fn sample<R: Rng + ?Sized>(model: &CopulaModel, n: usize, rng: &mut R) -> Result<Array2<f64>> {
    model.validate()?;
    let mut out = Array2::zeros((n, 2));
    match *model {
        CopulaModel::Independence => {
            for mut row in out.outer_iter_mut() {
                row[0] = rng.gen::<f64>();
                row[1] = rng.gen::<f64>();
            }
        }
        CopulaModel::Fgm { theta } => {
            // conditional inverse: quadratic with closed-form root
            for mut row in out.outer_iter_mut() {
                let u = rng.gen::<f64>();
                let w = rng.gen::<f64>();
                let a = theta * (1.0 - 2.0 * u);
                let v = if a.abs() < 1e-12 {
                    w
                } else {
                    let b = 1.0 + a;
                    (b - (b * b - 4.0 * a * w).sqrt()) / (2.0 * a)
                };
                row[0] = u;
                row[1] = clamp_unit(v);
            }
        }
        CopulaModel::Gaussian { rho } => {
            let c = (1.0 - rho * rho).sqrt();
            for mut row in out.outer_iter_mut() {
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                row[0] = clamp_unit(normal_cdf(z1));
                row[1] = clamp_unit(normal_cdf(rho * z1 + c * z2));
            }
        }
        CopulaModel::Student { rho, nu } => {
            let c = (1.0 - rho * rho).sqrt();
            let chi = Gamma::new(0.5 * nu, 2.0).map_err(|e| CopwaveError::InvalidParameter {
                family: "student",
                detail: e.to_string(),
            })?;
            for mut row in out.outer_iter_mut() {
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                let s: f64 = chi.sample(rng);
                let scale = (nu / s.max(1e-300)).sqrt();
                let t1 = z1 * scale;
                let t2 = (rho * z1 + c * z2) * scale;
                row[0] = clamp_unit(student_t_cdf(nu, t1));
                row[1] = clamp_unit(student_t_cdf(nu, t2));
            }
        }
        CopulaModel::Clayton { theta } => {
            // Marshall-Olkin frailty: W ~ Gamma(1/theta, 1)
            let frailty = Gamma::new(1.0 / theta, 1.0).map_err(|e| {
                CopwaveError::InvalidParameter {
                    family: "clayton",
                    detail: e.to_string(),
                }
            })?;
            for mut row in out.outer_iter_mut() {
                let w: f64 = frailty.sample(rng);
                let w = w.max(1e-300);
                let e1: f64 = Exp1.sample(rng);
                let e2: f64 = Exp1.sample(rng);
                row[0] = clamp_unit((1.0 + e1 / w).powf(-1.0 / theta));
                row[1] = clamp_unit((1.0 + e2 / w).powf(-1.0 / theta));
            }
        }
        CopulaModel::Frank { theta } => {
            // conditional inverse in closed form
            let d = (-theta).exp() - 1.0;
            for mut row in out.outer_iter_mut() {
                let u = rng.gen::<f64>();
                let w = rng.gen::<f64>();
                let p = (-theta * u).exp() - 1.0;
                let v = -(1.0 + w * d / (1.0 + p * (1.0 - w))).ln() / theta;
                row[0] = u;
                row[1] = clamp_unit(v);
            }
        }
        CopulaModel::Gumbel { theta } => {
            if theta == 1.0 {
                for mut row in out.outer_iter_mut() {
                    row[0] = rng.gen::<f64>();
                    row[1] = rng.gen::<f64>();
                }
            } else {
                // positive stable frailty via Chambers-Mallows-Stuck
                let alpha = 1.0 / theta;
                for mut row in out.outer_iter_mut() {
                    let v = rng.gen_range(0.0..PI);
                    let w: f64 = Exp1.sample(rng);
                    let s = ((alpha * v).sin() / v.sin().powf(1.0 / alpha))
                        * (((1.0 - alpha) * v).sin() / w).powf((1.0 - alpha) / alpha);
                    let s = s.max(1e-300);
                    let e1: f64 = Exp1.sample(rng);
                    let e2: f64 = Exp1.sample(rng);
                    row[0] = clamp_unit((-(e1 / s).powf(alpha)).exp());
                    row[1] = clamp_unit((-(e2 / s).powf(alpha)).exp());
                }
            }
        }
    }
    Ok(out)
}

/// Closed-form copula density at a point strictly inside the unit square.
/// No clamp is applied; families with corner singularities return large
/// values near the boundary (grid evaluation at cell centers keeps them
/// finite).
pub fn density(model: &CopulaModel, u: f64, v: f64) -> f64 {
    match *model {
        CopulaModel::Independence => 1.0,
        CopulaModel::Fgm { theta } => 1.0 + theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * v),
        CopulaModel::Gaussian { rho } => {
            gaussian_density_from_z(rho, normal_quantile(u), normal_quantile(v))
        }
        CopulaModel::Student { rho, nu } => {
            student_density_from_t(rho, nu, student_t_quantile(nu, u), student_t_quantile(nu, v))
        }
        CopulaModel::Clayton { theta } => {
            let t = u.powf(-theta) + v.powf(-theta) - 1.0;
            (1.0 + theta) * (u * v).powf(-1.0 - theta) * t.powf(-2.0 - 1.0 / theta)
        }
        CopulaModel::Frank { theta } => {
            let d = (-theta).exp() - 1.0;
            let num = theta * (1.0 - (-theta).exp()) * (-theta * (u + v)).exp();
            let den = d + ((-theta * u).exp() - 1.0) * ((-theta * v).exp() - 1.0);
            num / (den * den)
        }
        CopulaModel::Gumbel { theta } => {
            let a = -u.ln();
            let b = -v.ln();
            let s = a.powf(theta) + b.powf(theta);
            let w = s.powf(1.0 / theta);
            let c = (-w).exp();
            c * (a * b).powf(theta - 1.0) / (u * v)
                * s.powf(2.0 / theta - 2.0)
                * (1.0 + (theta - 1.0) / w)
        }
    }
}

/// Gaussian copula density in terms of the normal scores `x = Phi^-1(u)`,
/// `y = Phi^-1(v)`. Shared by [`density`] and the fitting scan so cached
/// quantile tables render bit-identical grids.
pub fn gaussian_density_from_z(rho: f64, x: f64, y: f64) -> f64 {
    let r2 = 1.0 - rho * rho;
    (-(rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2)).exp() / r2.sqrt()
}

/// Student t copula density in terms of the t scores `x = T_nu^-1(u)`,
/// `y = T_nu^-1(v)`.
pub fn student_density_from_t(rho: f64, nu: f64, x: f64, y: f64) -> f64 {
    let r2 = 1.0 - rho * rho;
    let ln_c = ln_gamma(0.5 * (nu + 2.0)) + ln_gamma(0.5 * nu)
        - 2.0 * ln_gamma(0.5 * (nu + 1.0))
        - 0.5 * r2.ln();
    let q = (x * x + y * y - 2.0 * rho * x * y) / (nu * r2);
    let ln_num = -(0.5 * (nu + 2.0)) * (1.0 + q).ln();
    let ln_den = 0.5 * (nu + 1.0) * ((1.0 + x * x / nu).ln() + (1.0 + y * y / nu).ln());
    (ln_c + ln_num + ln_den).exp()
}

/// Column-wise quantile transform of a uniform sample.
pub fn apply_margins(uniform: &Array2<f64>, margins: (MarginSpec, MarginSpec)) -> Result<Sample> {
    margins.0.validate()?;
    margins.1.validate()?;
    let mut out = uniform.clone();
    for mut row in out.outer_iter_mut() {
        row[0] = margins.0.quantile(row[0]);
        row[1] = margins.1.quantile(row[1]);
    }
    Sample::new(out)
}

/// Empirical Kendall tau by direct pair counting over all n(n-1)/2 pairs.
pub fn kendall_tau(points: &Array2<f64>) -> f64 {
    let n = points.nrows();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let dx = points[[i, 0]] - points[[j, 0]];
            let dy = points[[i, 1]] - points[[j, 1]];
            let s = dx * dy;
            if s > 0.0 {
                concordant += 1;
            } else if s < 0.0 {
                discordant += 1;
            }
        }
    }
    let total = (n * (n - 1) / 2) as f64;
    (concordant - discordant) as f64 / total
}
