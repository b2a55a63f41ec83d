//! Subcommand definitions and dispatch.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

use copwave::besov::{
    dyadic_lambda_grid, sparse_counterexample, strong_besov_functional, weak_besov_global,
    weak_besov_local,
};
use copwave::copulas::{apply_margins, sample, CopulaModel, MarginSpec};
use copwave::estimator::{
    estimate, level_indices, BoundaryMode, EstimatorConfig, GridEnvelope, ThresholdRule,
};
use copwave::fitting::{best_family, FitResult};
use copwave::metrics::{monte_carlo_bench, BenchReport, Norm};

use crate::io;
use crate::series::{align_pair, SeriesFile};

#[derive(Parser)]
#[command(
    name = "copwave",
    version,
    about = "Copula density estimation by rank-based wavelet thresholding"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from a parametric copula and apply margin transforms.
    Simulate(SimulateArgs),
    /// Estimate a copula density from a raw sample.
    Estimate(EstimateArgs),
    /// Monte Carlo benchmark of the estimator against a known copula.
    Bench(BenchArgs),
    /// Fit the five parametric classes to a benchmark density grid.
    Fit(FitArgs),
    /// Sequence-space functionals of the sparse separating construction.
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Copula family: independence|fgm|gaussian|student|clayton|frank|gumbel
    #[arg(long)]
    family: String,
    /// Family parameters, comma separated (e.g. "0.5" or "0.5,1" for student)
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Margin transforms "m1,m2" with m in {uniform, gauss, exp:<rate>}
    #[arg(long, default_value = "exp:4,gauss")]
    margins: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// Raw sample CSV with header x,y
    #[arg(long = "in", conflicts_with_all = ["series_a", "series_b"])]
    input: Option<PathBuf>,
    /// First price series (date,close CSV); pairs with --series-b
    #[arg(long, requires = "series_b")]
    series_a: Option<PathBuf>,
    /// Second price series; the aligned log returns form the sample
    #[arg(long, requires = "series_a")]
    series_b: Option<PathBuf>,
    /// Shrinkage rule
    #[arg(long, default_value = "local", value_parser = parse_rule)]
    rule: ThresholdRule,
    /// Boundary handling
    #[arg(long, default_value = "sym", value_parser = parse_boundary)]
    boundary: BoundaryMode,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Cycle-spinning translations (a perfect square, 0/1 disables)
    #[arg(long, default_value_t = 25)]
    spins: usize,
    /// Daubechies order (vanishing moments), 1..=10
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Output grid (.json envelope, or .csv for raw values)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    family: String,
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Contrast: 1|2|inf
    #[arg(long, default_value = "2", value_parser = parse_norm)]
    q: Norm,
    #[arg(long, default_value = "local", value_parser = parse_rule)]
    rule: ThresholdRule,
    #[arg(long, default_value = "sym", value_parser = parse_boundary)]
    boundary: BoundaryMode,
    /// Threshold constants to sweep, comma separated
    #[arg(long, default_value = "0.5,1,2,4")]
    kappas: String,
    #[arg(long, default_value = "exp:4,gauss")]
    margins: String,
    #[arg(long, default_value_t = 25)]
    spins: usize,
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; a JSON twin is written next to it
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Benchmark density grid (.json envelope or .csv values)
    #[arg(long)]
    benchmark: PathBuf,
    /// Contrast: 1|2|inf|all
    #[arg(long, default_value = "all")]
    q: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Sparsity exponent alpha, d/2 <= alpha < s + d/2
    #[arg(long)]
    alpha: f64,
    /// Regularity s > 0
    #[arg(long)]
    s: f64,
    /// Truncation levels to tabulate
    #[arg(long = "jmax-list", default_value = "8,10,12,14")]
    jmax_list: String,
    #[arg(long)]
    out: PathBuf,
}

fn parse_rule(s: &str) -> Result<ThresholdRule, String> {
    match s {
        "linear" => Ok(ThresholdRule::Linear),
        "local" => Ok(ThresholdRule::HardLocal),
        "global" => Ok(ThresholdRule::HardGlobal),
        _ => Err(format!("unknown rule '{s}' (linear|local|global)")),
    }
}

fn parse_boundary(s: &str) -> Result<BoundaryMode, String> {
    match s {
        "zero" => Ok(BoundaryMode::ZeroPad),
        "per" => Ok(BoundaryMode::Periodize),
        "sym" => Ok(BoundaryMode::Symmetrize),
        _ => Err(format!("unknown boundary '{s}' (zero|per|sym)")),
    }
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    match s {
        "1" => Ok(Norm::L1),
        "2" => Ok(Norm::L2),
        "inf" => Ok(Norm::LInf),
        _ => Err(format!("unknown contrast '{s}' (1|2|inf)")),
    }
}

fn parse_family(family: &str, params: &str) -> Result<CopulaModel> {
    let values: Vec<f64> = params
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().context("bad --params value"))
        .collect::<Result<_>>()?;
    let need = |n: usize| -> Result<()> {
        if values.len() != n {
            bail!("family '{family}' needs {n} parameter(s), got {}", values.len());
        }
        Ok(())
    };
    let model = match family {
        "independence" => {
            need(0)?;
            CopulaModel::Independence
        }
        "fgm" => {
            need(1)?;
            CopulaModel::Fgm { theta: values[0] }
        }
        "gaussian" | "normal" => {
            need(1)?;
            CopulaModel::Gaussian { rho: values[0] }
        }
        "student" => {
            need(2)?;
            CopulaModel::Student {
                rho: values[0],
                nu: values[1],
            }
        }
        "clayton" => {
            need(1)?;
            CopulaModel::Clayton { theta: values[0] }
        }
        "frank" => {
            need(1)?;
            CopulaModel::Frank { theta: values[0] }
        }
        "gumbel" => {
            need(1)?;
            CopulaModel::Gumbel { theta: values[0] }
        }
        _ => bail!("unknown family '{family}'"),
    };
    model.validate()?;
    Ok(model)
}

fn parse_margin(s: &str) -> Result<MarginSpec> {
    let s = s.trim();
    if s == "uniform" {
        return Ok(MarginSpec::Uniform);
    }
    if s == "gauss" || s == "normal" {
        return Ok(MarginSpec::StandardGaussian);
    }
    if let Some(rate) = s.strip_prefix("exp:") {
        let rate: f64 = rate.parse().context("bad exponential rate")?;
        let m = MarginSpec::Exponential { rate };
        m.validate()?;
        return Ok(m);
    }
    bail!("unknown margin '{s}' (uniform|gauss|exp:<rate>)")
}

fn parse_margins(s: &str) -> Result<(MarginSpec, MarginSpec)> {
    let Some((a, b)) = s.split_once(',') else {
        bail!("margins must be 'm1,m2', got '{s}'");
    };
    Ok((parse_margin(a)?, parse_margin(b)?))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => simulate_cmd(args),
        Command::Estimate(args) => estimate_cmd(args),
        Command::Bench(args) => bench_cmd(args),
        Command::Fit(args) => fit_cmd(args),
        Command::Diagnose(args) => diagnose_cmd(args),
    }
}

fn simulate_cmd(args: SimulateArgs) -> Result<()> {
    let model = parse_family(&args.family, &args.params)?;
    let margins = parse_margins(&args.margins)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let uniforms = sample(&model, args.n, &mut rng)?;
    let raw = apply_margins(&uniforms, margins)?;
    io::write_sample_csv(&args.out, raw.values())?;
    eprintln!("wrote {} rows to {}", args.n, args.out.display());
    Ok(())
}

fn estimate_cmd(args: EstimateArgs) -> Result<()> {
    let sample = match (&args.input, &args.series_a, &args.series_b) {
        (Some(path), _, _) => io::read_sample_csv(path)?,
        (None, Some(a), Some(b)) => align_pair(&SeriesFile::load(a)?, &SeriesFile::load(b)?)?,
        _ => bail!("provide --in sample.csv or --series-a/--series-b"),
    };
    let config = EstimatorConfig {
        kappa: args.kappa,
        rule: args.rule,
        boundary: args.boundary,
        spins: args.spins,
        wavelet_order: args.order,
        ..Default::default()
    };
    if config.kappa <= 0.0 {
        bail!("kappa must be positive");
    }
    let grid = estimate(&sample, &config)?;
    let (j_n, j_max) = level_indices(sample.n(), 2)?;
    let envelope =
        GridEnvelope::from_grid(&grid, j_n, j_max, config.rule, config.boundary, config.kappa);
    io::write_grid(&args.out, &envelope)?;
    eprintln!(
        "estimated {}x{} grid (j_n={j_n}, J_n={j_max}) -> {}",
        grid.n_side(),
        grid.n_side(),
        args.out.display()
    );
    Ok(())
}

fn bench_reports_to_csv(reports: &[BenchReport]) -> String {
    let mut out =
        String::from("family,parameters,method,boundary,q,repetitions,kappa,mean_re,std_re\n");
    for r in reports {
        let method = match r.method {
            ThresholdRule::Linear => "linear",
            ThresholdRule::HardLocal => "local",
            ThresholdRule::HardGlobal => "global",
        };
        let boundary = match r.boundary {
            BoundaryMode::ZeroPad => "zero",
            BoundaryMode::Periodize => "per",
            BoundaryMode::Symmetrize => "sym",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.6},{:.6}\n",
            r.family, r.parameters, method, boundary, r.q, r.repetitions, r.kappa, r.mean_re,
            r.std_re
        ));
    }
    out
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let model = parse_family(&args.family, &args.params)?;
    let margins = parse_margins(&args.margins)?;
    let kappas: Vec<f64> = args
        .kappas
        .split(',')
        .map(|k| k.trim().parse::<f64>().context("bad --kappas value"))
        .collect::<Result<_>>()?;
    if kappas.is_empty() {
        bail!("need at least one kappa");
    }
    let mut reports = Vec::new();
    for &kappa in &kappas {
        let config = EstimatorConfig {
            kappa,
            rule: args.rule,
            boundary: args.boundary,
            spins: args.spins,
            wavelet_order: args.order,
            ..Default::default()
        };
        let report = monte_carlo_bench(
            &model,
            margins,
            args.n,
            &config,
            args.reps,
            args.q,
            args.seed,
        )?;
        eprintln!(
            "kappa {kappa}: mean RE^{} = {:.4} ({:.4})",
            report.q, report.mean_re, report.std_re
        );
        reports.push(report);
    }
    std::fs::write(&args.out, bench_reports_to_csv(&reports))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    let json_path = args.out.with_extension("json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&reports)?)
        .with_context(|| format!("cannot write {}", json_path.display()))?;
    Ok(())
}

fn fit_results_to_csv(results: &[FitResult]) -> String {
    let mut out = String::from("section,q,class,theta,nu,value\n");
    for r in results {
        for fit in &r.class_fits {
            out.push_str(&format!(
                "class,{},{},{},{},{:.6}\n",
                r.q,
                fit.class.name(),
                fit.theta,
                fit.nu.map(|v| v.to_string()).unwrap_or_default(),
                fit.distance
            ));
        }
        out.push_str(&format!(
            "winner,{},{},{},{},{:.4}\n",
            r.q,
            r.winner.class.name(),
            r.winner.theta,
            r.winner.nu.map(|v| v.to_string()).unwrap_or_default(),
            r.relative_error_pct
        ));
    }
    out
}

fn fit_cmd(args: FitArgs) -> Result<()> {
    let envelope = io::read_grid(&args.benchmark)?;
    let grid = envelope.to_grid()?;
    let contrasts: Vec<Norm> = match args.q.as_str() {
        "all" => vec![Norm::L1, Norm::L2, Norm::LInf],
        other => vec![parse_norm(other).map_err(anyhow::Error::msg)?],
    };
    let mut results = Vec::new();
    for q in contrasts {
        let fit = best_family(&grid, q)?;
        eprintln!(
            "q={}: winner {} theta={}{} (E={:.5}, RE={:.2}%)",
            fit.q,
            fit.winner.class.name(),
            fit.winner.theta,
            fit.winner
                .nu
                .map(|v| format!(", nu={v}"))
                .unwrap_or_default(),
            fit.winner.distance,
            fit.relative_error_pct
        );
        results.push(fit);
    }
    std::fs::write(&args.out, fit_results_to_csv(&results))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    Ok(())
}

fn diagnose_cmd(args: DiagnoseArgs) -> Result<()> {
    let jmaxes: Vec<usize> = args
        .jmax_list
        .split(',')
        .map(|j| j.trim().parse::<usize>().context("bad --jmax-list value"))
        .collect::<Result<_>>()?;
    if jmaxes.is_empty() {
        bail!("need at least one truncation level");
    }
    let d = 2.0;
    let r = 2.0 * d / (2.0 * args.s + d);
    let s_strong = d * args.s / (2.0 * args.s + d);
    // grid deep enough to resolve the block cut of the finest level
    let depth = (1.5 * (*jmaxes.iter().max().unwrap() as f64)).ceil() as u32 + 6;
    let grid = dyadic_lambda_grid(depth.max(20));
    let mut out = String::from("j_max,strong,weak_local,weak_global\n");
    for &jm in &jmaxes {
        let seq = sparse_counterexample(args.alpha, args.s, jm)?;
        let strong = strong_besov_functional(&seq, s_strong, jm);
        let local = weak_besov_local(&seq, r, &grid);
        let global = weak_besov_global(&seq, r, &grid);
        out.push_str(&format!("{jm},{strong:.6},{local:.6},{global:.6}\n"));
        eprintln!("J_max {jm}: strong {strong:.4}, local {local:.4}, global {global:.4}");
    }
    std::fs::write(&args.out, out)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    Ok(())
}
