//! One experiment per subcommand. Each returns a table of per-`N` rows and a
//! list of oracle checks.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, ensure, Result};
use serde::Serialize;
use serde_json::{json, Value};
use szego_core::concentration::{
    chebyshev_median_bound, chebyshev_tail_bound, deviation_tails, expected_lp_pth_moment, fit_thm13_constant,
    levy_rhs, median_from_values, overlap_tail_exact, tail_from_values, theorem_tail_reference, wilson_interval,
    Functional, FunctionalEvaluator, Theorem, TheoremParams, TrialRunner,
};
use szego_core::ensembles::{basis_norms, dimension, evaluate, sample};
use szego_core::fit::power_law_exponent;
use szego_core::geometry::{build_grid, GridKind};
use szego_core::kernels::{
    gaussian_regime_bound, kernel_lr_integral_exact, log_kernel_at_distance, near_diagonal_error, offdiagonal_fit,
    szego_diagonal,
};
use szego_core::norms::{gradient_norm, mapping_norm_estimate};
use szego_core::rng::trial_rng;
use szego_core::{EnsembleSpec, Measure, ProjectivePoint, SupStrategy, C64};

use crate::io::{NormRow, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Radius of the ball `|u|, |v| ≤ ρ` in the near-diagonal comparison.
pub const NEAR_DIAGONAL_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    TailLaw,
    SupnormGrowth,
    LpMedian,
    KernelAsymptotics,
    MappingNorm,
    GradientGrowth,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::TailLaw => "tail-law",
            Subcommand::SupnormGrowth => "supnorm-growth",
            Subcommand::LpMedian => "lp-median",
            Subcommand::KernelAsymptotics => "kernel-asymptotics",
            Subcommand::MappingNorm => "mapping-norm",
            Subcommand::GradientGrowth => "gradient-growth",
        }
    }

    /// `N` values used when none are given.
    pub fn default_degrees(&self) -> Vec<usize> {
        match self {
            Subcommand::TailLaw => vec![],
            Subcommand::SupnormGrowth => vec![16, 64, 256, 1024],
            Subcommand::LpMedian => vec![10, 40, 160, 640],
            Subcommand::KernelAsymptotics => vec![25, 100, 400, 1600],
            Subcommand::MappingNorm => vec![25, 100, 400],
            Subcommand::GradientGrowth => vec![16, 64, 256],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    pub m: usize,
    pub n_list: Vec<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    /// Sphere dimensions for `tail-law`.
    pub d_list: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub grid_nodes: usize,
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// Per-trial norm reports (CSV) for the norm experiments.
    pub trial_output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        Self {
            subcommand,
            m: 1,
            n_list: subcommand.default_degrees(),
            p: None,
            q: None,
            d_list: vec![2, 5, 20, 100],
            trials: 500,
            seed: 1,
            grid_nodes: 10_000,
            workers: 1,
            output_path: None,
            format: Format::Csv,
            trial_output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.m >= 1, "--m must be at least 1");
        ensure!(self.trials >= 1, "--trials must be at least 1");
        ensure!(self.grid_nodes >= 1, "--grid-nodes must be at least 1");
        if self.subcommand == Subcommand::TailLaw {
            ensure!(!self.d_list.is_empty(), "--d list is empty");
            ensure!(self.d_list.iter().all(|d| *d >= 2), "--d values must be at least 2");
        } else {
            ensure!(!self.n_list.is_empty(), "--N list is empty");
            ensure!(self.n_list.iter().all(|n| *n >= 1), "--N values must be at least 1");
        }
        Ok(())
    }

    /// Everything that determines the rows; worker count and paths are left out
    /// so outputs compare byte for byte.
    pub fn echo(&self) -> Value {
        json!({
            "subcommand": self.subcommand.name(),
            "m": self.m,
            "N": self.n_list,
            "p": self.p.map(finite_or_string),
            "q": self.q.map(finite_or_string),
            "d": self.d_list,
            "trials": self.trials,
            "seed": self.seed,
            "grid_nodes": self.grid_nodes,
            "format": self.format,
        })
    }
}

fn finite_or_string(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::from(v.to_string()), Value::Number)
}

/// One oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub table: Table,
    pub validation: Vec<Check>,
    pub norm_rows: Vec<NormRow>,
    /// Seconds; reported on stderr, never written to the output file.
    pub wall_time: f64,
}

impl ExperimentResult {
    pub fn passed(&self) -> bool {
        self.validation.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.validation.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.validation.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config.echo(),
            "rows": self.table.to_json(),
            "validation": self.validation,
            "version": VERSION,
        })
    }

    pub fn write<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        match self.config.format {
            Format::Csv => self.table.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)?;
                Ok(())
            }
        }
    }
}

/// Runs the configured experiment.
pub fn run<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<ExperimentResult> {
    config.validate()?;
    let start = Instant::now();
    let out = match config.subcommand {
        Subcommand::TailLaw => run_tail_law(config, runner),
        Subcommand::SupnormGrowth => run_supnorm_growth(config, runner),
        Subcommand::LpMedian => run_lp_median(config, runner),
        Subcommand::KernelAsymptotics => run_kernel_asymptotics(config),
        Subcommand::MappingNorm => run_mapping_norm(config),
        Subcommand::GradientGrowth => run_gradient_growth(config, runner),
    }?;
    Ok(ExperimentResult {
        config: config.clone(),
        table: out.table,
        validation: out.validation,
        norm_rows: out.norm_rows,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

pub struct Output {
    pub table: Table,
    pub validation: Vec<Check>,
    pub norm_rows: Vec<NormRow>,
}

fn band(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi / lo
}

fn strictly_increasing(ns: &[usize]) -> Result<()> {
    ensure!(ns.windows(2).all(|w| w[0] < w[1]), "--N values must be strictly increasing");
    Ok(())
}

fn min_trials(trials: u64) -> Result<()> {
    ensure!(trials >= 100, "--trials must be at least 100 for Monte Carlo estimates");
    Ok(())
}

/// Gram matrix of the monomial basis on a quadrature grid, at a degree small
/// enough for the grid to resolve.
fn gram_check(m: usize, degree: usize) -> Result<Check> {
    let (n, grid) = match m {
        1 => (degree.min(16), build_grid(1, 20_000, GridKind::Lattice)?),
        2 => (degree.min(4), build_grid(2, 60_000, GridKind::LowDiscrepancy)?),
        _ => (degree.min(2), build_grid(m, 100_000, GridKind::LowDiscrepancy)?),
    };
    let report = basis_norms(m, n)?.gram_report(&grid)?;
    let worst = report.max_off_diagonal.max(report.max_diagonal_deviation);
    Ok(Check::new(
        format!("basis_gram[m={m},N={n}]"),
        worst <= 1e-2,
        format!("max Gram deviation {worst:.3e} (tol 1e-2)"),
    ))
}

const LAMBDA_GRID: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Exact, Monte Carlo and Levy tails of the overlap `|<w, A>|` on `S^{2d-1}`.
pub fn run_tail_law<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<Output> {
    min_trials(config.trials)?;
    let mut table = Table::new(&["seed", "d", "lambda", "exact", "empirical", "ci_low", "ci_high", "levy"]);
    let mut validation = Vec::new();
    for &d in &config.d_list {
        // c for O(d-1) over CP^1 is Haar on S^{2d-1}; the overlap at [1:0]
        // is |<c, e>| for a fixed unit e
        let spec = EnsembleSpec::new(1, (d - 1) as usize, Measure::HaarSphere)?;
        let ev = FunctionalEvaluator::new(spec, Functional::parse("overlap", 1)?, 1, SupStrategy::default())?;
        let values = runner.run(config.trials, |t| ev.eval_trial(config.seed, t))?;
        let mut worst_z: f64 = 0.0;
        let mut covered = true;
        for &l in &LAMBDA_GRID {
            let exact = overlap_tail_exact(d, l)?;
            let est = tail_from_values(&values, l, Some(exact));
            let k = (est.empirical_prob * est.trials as f64).round() as u64;
            let (lo4, hi4) = wilson_interval(k, est.trials, 4.0);
            covered &= lo4 <= exact && exact <= hi4;
            let sd = (exact * (1.0 - exact) / est.trials as f64).sqrt();
            if sd > 0.0 {
                worst_z = worst_z.max((est.empirical_prob - exact).abs() / sd);
            }
            let levy = levy_rhs(2 * d - 1, l, 1.0)?;
            table.push(vec![
                config.seed.into(),
                d.into(),
                l.into(),
                exact.into(),
                est.empirical_prob.into(),
                est.ci_low.into(),
                est.ci_high.into(),
                levy.into(),
            ]);
        }
        validation.push(Check::new(
            format!("tail_within_4sigma[d={d}]"),
            covered,
            format!("largest |z| {worst_z:.3} over {} thresholds", LAMBDA_GRID.len()),
        ));
        let mut below = true;
        let mut levy_ok = true;
        for k in 0..=1000 {
            let l = k as f64 / 1000.0;
            let e = overlap_tail_exact(d, l)?;
            below &= e <= (-((d - 1) as f64) * l * l).exp() * (1.0 + 1e-12);
            levy_ok &= levy_rhs(2 * d - 1, l, 1.0)? >= e;
        }
        validation.push(Check::new(format!("exact_below_exponential[d={d}]"), below, "(1-λ²)^(d-1) ≤ exp(-(d-1)λ²) on 1001 points"));
        validation.push(Check::new(format!("levy_above_exact[d={d}]"), levy_ok, "Levy bound ≥ exact tail on 1001 points"));
        validation.push(Check::new(format!("zero_threshold[d={d}]"), overlap_tail_exact(d, 0.0)? == 1.0, "exact tail at λ = 0 is 1"));
    }
    Ok(Output { table, validation, norm_rows: Vec::new() })
}

fn collect_reports<R: TrialRunner>(
    config: &ExperimentConfig,
    ev: &FunctionalEvaluator,
    runner: &R,
) -> Result<(Vec<f64>, Vec<NormRow>, f64)> {
    let spec = *ev.spec();
    let reports = runner.run(config.trials, |t| ev.report(&ev.sample_trial(config.seed, t)))?;
    let values: Vec<f64> = reports.iter().map(|r| r.value).collect();
    let max_bound = reports.iter().filter_map(|r| r.error_bound).fold(0.0, f64::max);
    let rows = if config.trial_output.is_some() {
        reports
            .into_iter()
            .enumerate()
            .map(|(t, report)| NormRow { seed: config.seed, trial: t as u64, m: spec.m, degree: spec.degree, report })
            .collect()
    } else {
        Vec::new()
    };
    Ok((values, rows, max_bound))
}

/// Median sup norm against `√log N` and the tail beyond `3√log N`.
pub fn run_supnorm_growth<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<Output> {
    min_trials(config.trials)?;
    strictly_increasing(&config.n_list)?;
    ensure!(config.n_list[0] >= 2, "--N values must be at least 2 (log N > 0)");
    let m = config.m;
    let mf = (1..=m).map(|k| k as f64).product::<f64>();
    let c11 = (m as f64 + 1.0) * (mf + 1.0).sqrt();
    let mut table = Table::new(&[
        "seed", "m", "N", "median", "ci_low", "ci_high", "median_over_sqrt_log", "tail_threshold", "tail_prob",
        "tail_ci_low", "tail_ci_high", "thm11_reference", "max_error_bound",
    ]);
    let mut validation = vec![gram_check(m, config.n_list[0])?];
    let mut scaled = Vec::new();
    let mut norm_rows = Vec::new();
    for &n in &config.n_list {
        let spec = EnsembleSpec::new(m, n, Measure::HaarSphere)?;
        let ev = FunctionalEvaluator::new(spec, Functional::Sup, config.grid_nodes, SupStrategy::default())?;
        let (values, rows, max_bound) = collect_reports(config, &ev, runner)?;
        norm_rows.extend(rows);
        let med = median_from_values(&values)?;
        let sqrt_log = (n as f64).ln().sqrt();
        let threshold = 3.0 * sqrt_log;
        let tail = tail_from_values(&values, threshold, None);
        let params = TheoremParams { c: Some(c11), m: Some(m), degree: Some(n), ..Default::default() };
        let reference = theorem_tail_reference(Theorem::Thm11, &params)?;
        scaled.push(med.value / sqrt_log);
        validation.push(Check::new(
            format!("sup_tail_at_3sqrtlog[N={n}]"),
            tail.empirical_prob <= 0.02,
            format!("P = {} (limit 0.02)", tail.empirical_prob),
        ));
        table.push(vec![
            config.seed.into(),
            m.into(),
            n.into(),
            med.value.into(),
            med.ci_low.into(),
            med.ci_high.into(),
            (med.value / sqrt_log).into(),
            threshold.into(),
            tail.empirical_prob.into(),
            tail.ci_low.into(),
            tail.ci_high.into(),
            reference.into(),
            max_bound.into(),
        ]);
    }
    if scaled.len() >= 2 {
        let b = band(&scaled);
        validation.push(Check::new("sup_median_band", b <= 1.5, format!("max/min of median/√log N = {b:.4} (limit 1.5)")));
    }
    Ok(Output { table, validation, norm_rows })
}

/// Deviation radii for the fitted `L^p` concentration constant.
pub const DEVIATION_RADII: [f64; 5] = [0.02, 0.05, 0.1, 0.2, 0.3];

/// Medians of `‖s‖_p`, moments against the closed form, and Chebyshev bounds.
pub fn run_lp_median<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<Output> {
    min_trials(config.trials)?;
    let m = config.m;
    let p = config.p.unwrap_or(4.0);
    ensure!(p >= 2.0 && p.is_finite(), "--p must be finite and at least 2");
    let mut table = Table::new(&[
        "seed", "m", "N", "p", "median", "ci_low", "ci_high", "mean_pth_power", "mean_sigma", "moment_exact",
        "chebyshev_median_bound", "tail_at_2", "chebyshev_bound_at_2", "thm13_fitted_c",
    ]);
    let mut validation = vec![gram_check(m, config.n_list[0])?];
    let alpha = chebyshev_median_bound(m, p)?;
    let cheb2 = chebyshev_tail_bound(m, p, 2.0)?;
    let mut medians = Vec::new();
    let mut norm_rows = Vec::new();
    for &n in &config.n_list {
        let spec = EnsembleSpec::new(m, n, Measure::HaarSphere)?;
        let ev = FunctionalEvaluator::new(spec, Functional::Lp(p), config.grid_nodes, SupStrategy::default())?;
        let (values, rows, _) = collect_reports(config, &ev, runner)?;
        norm_rows.extend(rows);
        let med = median_from_values(&values)?;
        let powers: Vec<f64> = values.iter().map(|v| v.powf(p)).collect();
        let k = powers.len() as f64;
        let mean = powers.iter().sum::<f64>() / k;
        let var = powers.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let sigma = (var / k).sqrt();
        let exact = expected_lp_pth_moment(m, n, p)?;
        let tail2 = tail_from_values(&values, 2.0, None);
        let fitted = fit_thm13_constant(m, p, &deviation_tails(&values, n, &DEVIATION_RADII)?);
        medians.push(med.value);
        validation.push(Check::new(
            format!("moment_within_3sigma[N={n}]"),
            (mean - exact).abs() <= 3.0 * sigma,
            format!("mean {mean:.6} vs exact {exact:.6}, σ {sigma:.3e}"),
        ));
        validation.push(Check::new(
            format!("median_below_chebyshev[N={n}]"),
            med.value <= alpha,
            format!("median {:.6} vs α {alpha:.6}", med.value),
        ));
        validation.push(Check::new(
            format!("chebyshev_tail[N={n}]"),
            tail2.ci_low <= cheb2,
            format!("P(‖s‖ > 2) = {} vs bound {cheb2:.6}", tail2.empirical_prob),
        ));
        table.push(vec![
            config.seed.into(),
            m.into(),
            n.into(),
            p.into(),
            med.value.into(),
            med.ci_low.into(),
            med.ci_high.into(),
            mean.into(),
            sigma.into(),
            exact.into(),
            alpha.into(),
            tail2.empirical_prob.into(),
            cheb2.into(),
            fitted.into(),
        ]);
    }
    if medians.len() >= 2 {
        let b = band(&medians);
        validation.push(Check::new("lp_median_band", b <= 1.15, format!("max/min of medians = {b:.4} (limit 1.15)")));
    }
    Ok(Output { table, validation, norm_rows })
}

/// Samples per axis of the near-diagonal comparison.
fn near_diagonal_samples(m: usize) -> usize {
    if m == 1 { 40 } else { 16 }
}

/// Diagonal, near-diagonal and off-diagonal behaviour of `Π_N` and its `L^r` norms.
pub fn run_kernel_asymptotics(config: &ExperimentConfig) -> Result<Output> {
    strictly_increasing(&config.n_list)?;
    let m = config.m;
    let rs = [1.0, 2.0, 4.0];
    let mut table = Table::new(&[
        "seed", "m", "N", "diag_diagnostic", "diag_numerator", "diag_denominator", "near_diag_error",
        "near_diag_ratio", "decay_lambda", "decay_residual", "envelope_c", "lr_integral_1", "lr_integral_2",
        "lr_integral_4", "lr_exponent_1", "lr_exponent_2", "lr_exponent_4",
    ]);
    let mut validation = vec![gram_check(m, config.n_list[0])?];
    let mut errors: Vec<(usize, f64)> = Vec::new();
    let mut lambdas = Vec::new();
    let mut prev_lr: Option<(usize, [f64; 3])> = None;
    for &n in &config.n_list {
        let diag = szego_diagonal(m, n)?;
        let dg = diag.diagnostic;
        match m {
            1 => validation.push(Check::new(
                format!("diagonal_exact[N={n}]"),
                dg.numerator * n as u128 == dg.denominator,
                format!("{}/{} vs 1/{n}", dg.numerator, dg.denominator),
            )),
            2 if n >= 10 => {
                let nf = n as f64;
                let bound = 6.0 / nf + 12.0 / (nf * nf);
                validation.push(Check::new(
                    format!("diagonal_bound[N={n}]"),
                    dg.value() <= bound,
                    format!("{:.6e} vs 3m/N + 3m²/N² = {bound:.6e}", dg.value()),
                ))
            }
            _ => {}
        }
        let err = near_diagonal_error(m, n, NEAR_DIAGONAL_RADIUS, near_diagonal_samples(m))?;
        let ratio = errors.last().filter(|(pn, _)| *pn * 4 == n).map(|(_, pe)| err / pe);
        if let Some(r) = ratio {
            validation.push(Check::new(
                format!("near_diagonal_ratio[N={n}]"),
                (0.35..=0.65).contains(&r),
                format!("error(N)/error(N/4) = {r:.4} (band [0.35, 0.65])"),
            ));
        }
        errors.push((n, err));

        let sqrt_n = (n as f64).sqrt();
        let distances: Vec<f64> = (0..30)
            .map(|k| (0.5 + 3.5 * k as f64 / 29.0) / sqrt_n)
            .filter(|d| *d < PI / 2.0)
            .collect();
        let fit = offdiagonal_fit(m, n, &distances)?;
        lambdas.push(fit.lambda_hat);
        let cstar = fit.envelope_constant(m, n)?;
        let (mut env_ok, mut gauss_ok) = (true, true);
        let dmax = (n as f64).powf(-1.0 / 3.0);
        for k in 1..=2000 {
            let d = PI / 2.0 * k as f64 / 2000.0;
            let lhs = log_kernel_at_distance(m, n, d)?;
            env_ok &= lhs <= cstar.ln() + m as f64 * (n as f64).ln() - fit.lambda_hat * sqrt_n * d + 1e-9;
            let dg = dmax * k as f64 / 2000.0;
            gauss_ok &= log_kernel_at_distance(m, n, dg)?.exp() <= gaussian_regime_bound(m, n, dg);
        }
        validation.push(Check::new(
            format!("decay_rate_positive[N={n}]"),
            fit.lambda_hat > 0.3,
            format!("λ̂ = {:.4} (limit 0.3)", fit.lambda_hat),
        ));
        validation.push(Check::new(format!("decay_envelope[N={n}]"), env_ok, format!("C* = {cstar:.4} on 2000 distances")));
        validation.push(Check::new(format!("gaussian_regime[N={n}]"), gauss_ok, "pointwise for d ≤ N^(-1/3)"));

        let lr = [
            kernel_lr_integral_exact(m, n, rs[0])?,
            kernel_lr_integral_exact(m, n, rs[1])?,
            kernel_lr_integral_exact(m, n, rs[2])?,
        ];
        let exps: [Option<f64>; 3] = match prev_lr {
            Some((pn, pv)) => {
                let x = [pn as f64, n as f64];
                let mut e = [None; 3];
                for i in 0..3 {
                    let k = power_law_exponent(&x, &[pv[i], lr[i]])?;
                    let expected = m as f64 * (rs[i] - 1.0);
                    let ok = if expected == 0.0 { k.abs() <= 0.1 } else { (k / expected - 1.0).abs() <= 0.1 };
                    validation.push(Check::new(
                        format!("lr_exponent[r={},N={n}]", rs[i]),
                        ok,
                        format!("{k:.4} vs m(r-1) = {expected}"),
                    ));
                    e[i] = Some(k);
                }
                e
            }
            None => [None; 3],
        };
        prev_lr = Some((n, lr));
        table.push(vec![
            config.seed.into(),
            m.into(),
            n.into(),
            dg.value().into(),
            dg.numerator.into(),
            dg.denominator.into(),
            err.into(),
            ratio.into(),
            fit.lambda_hat.into(),
            fit.residual.into(),
            cstar.into(),
            lr[0].into(),
            lr[1].into(),
            lr[2].into(),
            exps[0].into(),
            exps[1].into(),
            exps[2].into(),
        ]);
    }
    if lambdas.len() >= 2 {
        let mean = lambdas.iter().sum::<f64>() / lambdas.len() as f64;
        let worst = lambdas.iter().map(|l| (l / mean - 1.0).abs()).fold(0.0, f64::max);
        validation.push(Check::new("decay_rate_stable", worst <= 0.2, format!("largest deviation from mean λ̂ {worst:.4} (limit 0.2)")));
    }
    Ok(Output { table, validation, norm_rows: Vec::new() })
}

/// `(p, q)` pairs used when `--p/--q` are not both given.
pub const DEFAULT_EXPONENT_PAIRS: [(f64, f64); 4] = [(2.0, f64::INFINITY), (1.0, f64::INFINITY), (2.0, 4.0), (2.0, 2.0)];

/// Lower and Schur–Young upper bounds for `‖Π_N‖_{p→q}` and their growth.
pub fn run_mapping_norm(config: &ExperimentConfig) -> Result<Output> {
    strictly_increasing(&config.n_list)?;
    let m = config.m;
    let pairs: Vec<(f64, f64)> = match (config.p, config.q) {
        (Some(p), Some(q)) => vec![(p, q)],
        (None, None) => DEFAULT_EXPONENT_PAIRS.to_vec(),
        _ => bail!("give both --p and --q, or neither"),
    };
    let mut table = Table::new(&[
        "seed", "m", "N", "p", "q", "r", "lower", "upper", "schur_young", "fitted_exponent", "expected_exponent",
    ]);
    let mut validation = Vec::new();
    let ns: Vec<f64> = config.n_list.iter().map(|&n| n as f64).collect();
    for (p, q) in pairs {
        let bounds = config
            .n_list
            .iter()
            .map(|&n| mapping_norm_estimate(m, n, p, q, None))
            .collect::<szego_core::Result<Vec<_>>>()?;
        let expected = m as f64 * (1.0 / p - 1.0 / q);
        let uppers: Vec<f64> = bounds.iter().map(|b| b.upper).collect();
        let fitted = if ns.len() >= 2 { Some(power_law_exponent(&ns, &uppers)?) } else { None };
        let tag = format!("p={p},q={q}");
        if let (Some(k), true) = (fitted, expected > 0.0) {
            validation.push(Check::new(
                format!("mapping_exponent[{tag}]"),
                (k / expected - 1.0).abs() <= 0.1,
                format!("{k:.4} vs m(1/p-1/q) = {expected:.4}"),
            ));
        }
        let ordered = bounds.iter().all(|b| b.lower <= b.upper * (1.0 + 1e-12));
        validation.push(Check::new(format!("lower_below_upper[{tag}]"), ordered, "on every N"));
        if p == 2.0 && q == 2.0 {
            let worst = bounds.iter().map(|b| (b.lower - 1.0).abs().max((b.upper - 1.0).abs())).fold(0.0, f64::max);
            validation.push(Check::new("projection_norm", worst <= 0.05, format!("max |bound - 1| = {worst:.3e}")));
        }
        if p == 2.0 && q == f64::INFINITY && ns.len() >= 2 {
            let scaled: Vec<f64> = bounds.iter().zip(&ns).map(|(b, n)| b.upper / n.powf(m as f64 / 2.0)).collect();
            let b = band(&scaled);
            validation.push(Check::new("upper_over_sqrt_n_band", b <= 1.5, format!("max/min = {b:.4}")));
        }
        for (b, &n) in bounds.iter().zip(&config.n_list) {
            table.push(vec![
                config.seed.into(),
                m.into(),
                n.into(),
                p.into(),
                q.into(),
                b.r.into(),
                b.lower.into(),
                b.upper.into(),
                b.schur_young.into(),
                fitted.into(),
                expected.into(),
            ]);
        }
    }
    Ok(Output { table, validation, norm_rows: Vec::new() })
}

/// Pairs `(s, x)` in the finite-difference check of the gradient formula.
pub const GRADIENT_CHECK_PAIRS: u64 = 200;

/// Largest relative gap between `|∇s|` and central differences of `|s|` along
/// the two real horizontal directions, over `pairs` random `(s, x)`.
pub fn gradient_fd_check(seed: u64, degrees: &[usize], pairs: u64) -> Result<f64> {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for t in 0..pairs {
        let n = degrees[t as usize % degrees.len()];
        let spec = EnsembleSpec::new(1, n, Measure::HaarSphere)?;
        let mut rng = trial_rng(seed, u64::MAX - 1, t);
        let s = sample(&spec, &mut rng);
        let x = ProjectivePoint::random(1, &mut rng);
        let mag = |y: &ProjectivePoint| evaluate(&s, y).map(|e| e.magnitude);
        let v = x.tangent_basis().swap_remove(0);
        let iv: Vec<C64> = v.iter().map(|z| z * C64::i()).collect();
        let d1 = (mag(&x.geodesic(&v, h))? - mag(&x.geodesic(&v, -h))?) / (2.0 * h);
        let d2 = (mag(&x.geodesic(&iv, h))? - mag(&x.geodesic(&iv, -h))?) / (2.0 * h);
        let g = gradient_norm(&s, &x)?;
        worst = worst.max((g - d1.hypot(d2)).abs() / g);
    }
    Ok(worst)
}

/// Median `sup |∇s|` against `√(N log N)` (`m = 1`).
pub fn run_gradient_growth<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<Output> {
    min_trials(config.trials)?;
    strictly_increasing(&config.n_list)?;
    ensure!(config.m == 1, "gradient-growth supports m = 1 only");
    ensure!(config.n_list[0] >= 2, "--N values must be at least 2 (log N > 0)");
    let mut table = Table::new(&[
        "seed", "m", "N", "median_grad_sup", "ci_low", "ci_high", "median_over_sqrt_n_log_n", "max_error_bound",
    ]);
    let mut validation = vec![gram_check(1, config.n_list[0])?];
    let fd = gradient_fd_check(config.seed, &config.n_list, GRADIENT_CHECK_PAIRS)?;
    validation.push(Check::new(
        "gradient_finite_differences",
        fd <= 1e-4,
        format!("largest relative gap {fd:.3e} over {GRADIENT_CHECK_PAIRS} pairs (tol 1e-4)"),
    ));
    let mut scaled = Vec::new();
    let mut norm_rows = Vec::new();
    for &n in &config.n_list {
        dimension(1, n)?;
        let spec = EnsembleSpec::new(1, n, Measure::HaarSphere)?;
        let ev = FunctionalEvaluator::new(spec, Functional::GradSup, config.grid_nodes, SupStrategy::default())?;
        let (values, rows, max_bound) = collect_reports(config, &ev, runner)?;
        norm_rows.extend(rows);
        let med = median_from_values(&values)?;
        let norm = ((n as f64) * (n as f64).ln()).sqrt();
        scaled.push(med.value / norm);
        table.push(vec![
            config.seed.into(),
            1usize.into(),
            n.into(),
            med.value.into(),
            med.ci_low.into(),
            med.ci_high.into(),
            (med.value / norm).into(),
            max_bound.into(),
        ]);
    }
    if scaled.len() >= 2 {
        let b = band(&scaled);
        validation.push(Check::new("grad_median_band", b <= 2.0, format!("max/min of median/√(N log N) = {b:.4} (limit 2)")));
    }
    Ok(Output { table, validation, norm_rows })
}

