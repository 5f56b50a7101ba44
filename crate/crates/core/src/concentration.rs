//! Exact tail and moment oracles for Haar-random sections, and Monte Carlo
//! estimators with confidence intervals.

use alloc::{format, string::String, vec::Vec};
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::ensembles::{basis_norms, dimension, sample, BasisNormalizer, EnsembleSpec, SectionCoefficients, SectionEvaluator};
use crate::geometry::{build_grid, total_volume, GridKind, ProjectivePoint, QuadratureGrid};
use crate::kernels::overlap_angle_with;
use crate::norms::{NormMethod, NormReport, SupSearch, SupStrategy};
use crate::rng::trial_rng;
use crate::special::{binomial_half_cdf, kolmogorov_sf, ln_gamma};
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Fewest trials accepted by the Monte Carlo estimators.
pub const MIN_TRIALS: u64 = 100;

/// `P{|<w, A>| > λ} = (1 - λ²)^{d-1}` for Haar `w` on `S^{2d-1}` and a unit `A`.
pub fn overlap_tail_exact(d: u64, lambda: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("d must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda = {lambda} outside [0, 1]")));
    }
    if lambda == 1.0 {
        return Ok(0.0);
    }
    Ok((1.0 - lambda * lambda).powf((d - 1) as f64))
}

/// Levy's bound `exp(-(n-1) r² / (2 Lip²))` on `S^n`.
pub fn levy_rhs(real_dim_n: u64, r: f64, lip: f64) -> Result<f64> {
    if real_dim_n < 2 {
        return Err(Error::Domain("sphere dimension must be at least 2".into()));
    }
    if !(lip > 0.0) {
        return Err(Error::Domain(format!("Lipschitz constant {lip} must be positive")));
    }
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("r = {r} must be non-negative")));
    }
    Ok((-((real_dim_n - 1) as f64) * r * r / (2.0 * lip * lip)).exp())
}

/// `ln A_{p,d}`.
pub fn ln_moment_a(p: f64, d: usize) -> f64 {
    ln_gamma(p / 2.0 + 1.0) + ln_gamma(d as f64) - ln_gamma(d as f64 + p / 2.0)
}

/// `A_{p,d} = ∫_{S^{2d-1}} |w_1|^p = Γ(p/2+1) Γ(d) / Γ(d+p/2)`; an exact
/// product for even integer `p`.
pub fn moment_a(p: f64, d: usize) -> f64 {
    if (0.0..=512.0).contains(&p) && p % 2.0 == 0.0 {
        let k = (p / 2.0) as usize;
        return (1..=k).map(|i| i as f64 / (d + i - 1) as f64).product();
    }
    ln_moment_a(p, d).exp()
}

/// `E ‖s‖_p^p = A_{p,d_N} (d_N / V_m)^{p/2} V_m` for Haar `c`.
pub fn expected_lp_pth_moment(m: usize, degree: usize, p: f64) -> Result<f64> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("p = {p}; need finite p >= 2")));
    }
    let d = dimension(m, degree)?;
    let v = total_volume(m);
    Ok((ln_moment_a(p, d) + 0.5 * p * (d as f64 / v).ln() + v.ln()).exp())
}

/// Largest degree scanned by [`moment_sup`].
pub const MOMENT_SCAN_MAX_DEGREE: usize = 4096;

/// `C_{m,p} = sup_N E ‖s‖_p^p`: the scan `N ≤ 4096` together with the
/// `N → ∞` limit `Γ(p/2+1) V_m^{1-p/2}`.
pub fn moment_sup(m: usize, p: f64) -> Result<f64> {
    let v = total_volume(m);
    let mut best = (ln_gamma(p / 2.0 + 1.0) + (1.0 - p / 2.0) * v.ln()).exp();
    for n in 1..=MOMENT_SCAN_MAX_DEGREE {
        match expected_lp_pth_moment(m, n, p) {
            Ok(e) => best = best.max(e),
            Err(Error::DimensionOverflow { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Chebyshev bound `P{‖s‖_p > t} ≤ C_{m,p} / t^p`.
pub fn chebyshev_tail_bound(m: usize, p: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    Ok(moment_sup(m, p)? / t.powf(p))
}

/// Median bound `α(p, m) = (2 C_{m,p})^{1/p}`, where the Chebyshev bound is ½.
pub fn chebyshev_median_bound(m: usize, p: f64) -> Result<f64> {
    Ok((2.0 * moment_sup(m, p)?).powf(1.0 / p))
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    // clamp so the interval always contains p despite rounding
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub threshold: f64,
    pub empirical_prob: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub reference: Option<f64>,
}

impl TailEstimate {
    /// Whether `value` lies within a `z`-score Wilson interval.
    pub fn covers(&self, value: f64, z: f64) -> bool {
        let k = (self.empirical_prob * self.trials as f64).round() as u64;
        let (lo, hi) = wilson_interval(k, self.trials, z);
        lo <= value && value <= hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedianEstimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
}

/// `P{value > threshold}` with a Wilson 95% interval.
pub fn tail_from_values(values: &[f64], threshold: f64, reference: Option<f64>) -> TailEstimate {
    let n = values.len() as u64;
    let k = values.iter().filter(|v| **v > threshold).count() as u64;
    let (ci_low, ci_high) = wilson_interval(k, n, Z95);
    TailEstimate {
        threshold,
        empirical_prob: if n == 0 { 0.0 } else { k as f64 / n as f64 },
        ci_low,
        ci_high,
        trials: n,
        reference,
    }
}

/// Sample median with a distribution-free 95% interval from order statistics.
pub fn median_from_values(values: &[f64]) -> Result<MedianEstimate> {
    if values.is_empty() {
        return Err(Error::TooFewTrials { min: 1, got: 0 });
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let value = if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) };
    // largest j with P{B < j} ≤ 2.5%, B ~ Binomial(n, 1/2); then
    // [x_(j), x_(n+1-j)] covers the median with probability ≥ 95%
    let mut j = 0usize;
    while j < n / 2 && binomial_half_cdf(n as u64, j as u64) <= 0.025 {
        j += 1;
    }
    let (ci_low, ci_high) = if j == 0 { (v[0], v[n - 1]) } else { (v[j - 1], v[n - j]) };
    Ok(MedianEstimate { value, ci_low, ci_high, trials: n as u64 })
}

/// Scalar functionals of a random section.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    Sup,
    Lp(f64),
    GradSup,
    /// `cos θ_x = |<c, Φ̃_N(x)>| / |Φ̃_N(x)|` at a fixed point.
    Overlap(ProjectivePoint),
}

impl Functional {
    /// Parses `sup`, `lp:<p>`, `grad_sup` or `overlap`; the overlap point is
    /// `[1 : 0 : … : 0]`.
    pub fn parse(name: &str, m: usize) -> Result<Self> {
        let unknown = || Error::UnknownFunctional(String::from(name));
        match name {
            "sup" => Ok(Functional::Sup),
            "grad_sup" => Ok(Functional::GradSup),
            "overlap" => Ok(Functional::Overlap(ProjectivePoint::basis(m, 0))),
            _ => {
                let p: f64 = name
                    .strip_prefix("lp:")
                    .ok_or_else(unknown)?
                    .parse()
                    .map_err(|_| unknown())?;
                if !(p >= 2.0) || !p.is_finite() {
                    return Err(Error::InvalidExponent(format!("p = {p}; need finite p >= 2")));
                }
                Ok(Functional::Lp(p))
            }
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Sup => f.write_str("sup"),
            Functional::Lp(p) => write!(f, "lp:{p}"),
            Functional::GradSup => f.write_str("grad_sup"),
            Functional::Overlap(_) => f.write_str("overlap"),
        }
    }
}

/// A functional bound to one ensemble, with its grids built once.
#[derive(Debug, Clone)]
pub struct FunctionalEvaluator {
    spec: EnsembleSpec,
    functional: Functional,
    basis: BasisNormalizer,
    grid: Option<QuadratureGrid>,
    search: Option<SupSearch>,
}

impl FunctionalEvaluator {
    /// `grid_nodes` sizes the quadrature grid of `Lp`; sup-type functionals
    /// use `strategy`.
    pub fn new(spec: EnsembleSpec, functional: Functional, grid_nodes: usize, strategy: SupStrategy) -> Result<Self> {
        spec.validate()?;
        let basis = basis_norms(spec.m, spec.degree)?;
        let (mut grid, mut search) = (None, None);
        match &functional {
            Functional::Lp(_) => {
                let kind = if spec.m == 1 { GridKind::Lattice } else { GridKind::LowDiscrepancy };
                grid = Some(build_grid(spec.m, grid_nodes, kind)?);
            }
            Functional::Sup => search = Some(SupSearch::new(spec.m, spec.degree, strategy)?),
            Functional::GradSup => {
                if spec.m != 1 {
                    return Err(Error::Unsupported("gradient norms are implemented on CP^1 only"));
                }
                search = Some(SupSearch::new(spec.m, spec.degree, strategy)?);
            }
            Functional::Overlap(x) => {
                if x.dim() != spec.m {
                    return Err(Error::DimensionMismatch { expected: spec.m, got: x.dim() });
                }
            }
        }
        Ok(Self { spec, functional, basis, grid, search })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn functional(&self) -> &Functional {
        &self.functional
    }

    pub fn eval(&self, s: &SectionCoefficients) -> Result<f64> {
        match (&self.functional, &self.grid, &self.search) {
            (Functional::Lp(p), Some(g), _) => {
                let ev = SectionEvaluator::new(s, &self.basis)?;
                Ok(g.integrate(|x| ev.magnitude(x).powf(*p)).powf(1.0 / p))
            }
            (Functional::Sup, _, Some(search)) => Ok(search.sup(s)?.value),
            (Functional::GradSup, _, Some(search)) => Ok(search.grad_sup(s)?.value),
            (Functional::Overlap(x), _, _) => overlap_angle_with(&s.normalized(), x, &self.basis),
            _ => unreachable!("evaluator state built by new"),
        }
    }

    /// Full report for the norm functionals (`sup`, `lp`, `grad_sup`).
    pub fn report(&self, s: &SectionCoefficients) -> Result<NormReport> {
        match (&self.functional, &self.search) {
            (Functional::Sup, Some(search)) => search.sup(s),
            (Functional::GradSup, Some(search)) => search.grad_sup(s),
            (Functional::Lp(p), _) => Ok(NormReport { p: *p, value: self.eval(s)?, method: NormMethod::Grid, error_bound: None }),
            _ => Err(Error::Unsupported("overlap is not a norm")),
        }
    }

    pub fn sample_trial(&self, seed: u64, trial: u64) -> SectionCoefficients {
        sample(&self.spec, &mut trial_rng(seed, cell_id(&self.spec), trial))
    }

    /// Value for trial `trial` of the stream `(seed, cell_id(spec))`.
    pub fn eval_trial(&self, seed: u64, trial: u64) -> Result<f64> {
        self.eval(&self.sample_trial(seed, trial))
    }
}

/// Stream identifier for an ensemble: trials at different `(m, N)` are independent.
pub fn cell_id(spec: &EnsembleSpec) -> u64 {
    ((spec.m as u64) << 40) ^ spec.degree as u64
}

/// Runs independent trials; implementations must return results in trial order.
pub trait TrialRunner {
    fn run<T, F>(&self, trials: u64, task: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync + Send;
}

/// Runs trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn run<T, F>(&self, trials: u64, task: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64) -> Result<T> + Sync + Send,
    {
        (0..trials).map(task).collect()
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { min: MIN_TRIALS, got: trials });
    }
    Ok(())
}

/// Functional values over `trials` seeded samples.
pub fn sample_values(
    evaluator: &FunctionalEvaluator,
    trials: u64,
    seed: u64,
    runner: &impl TrialRunner,
) -> Result<Vec<f64>> {
    runner.run(trials, |t| evaluator.eval_trial(seed, t))
}

/// Monte Carlo `P{F(s) > threshold}`; the exact value is attached as the
/// reference for the overlap functional.
pub fn mc_tail(
    evaluator: &FunctionalEvaluator,
    threshold: f64,
    trials: u64,
    seed: u64,
    runner: &impl TrialRunner,
) -> Result<TailEstimate> {
    check_trials(trials)?;
    let values = sample_values(evaluator, trials, seed, runner)?;
    let reference = match evaluator.functional() {
        Functional::Overlap(_) if (0.0..=1.0).contains(&threshold) => {
            Some(overlap_tail_exact(evaluator.spec().dimension() as u64, threshold)?)
        }
        _ => None,
    };
    Ok(tail_from_values(&values, threshold, reference))
}

/// Monte Carlo median of `F(s)`.
pub fn mc_median(
    evaluator: &FunctionalEvaluator,
    trials: u64,
    seed: u64,
    runner: &impl TrialRunner,
) -> Result<MedianEstimate> {
    check_trials(trials)?;
    median_from_values(&sample_values(evaluator, trials, seed, runner)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Sup-norm tail `k_N N^{-C² (d_N - 1) / N^m}`.
    Thm11,
    /// `L^p` deviation tail `exp(-C r² N^{2m/p})`.
    Thm13,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TheoremParams {
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub m: Option<usize>,
    pub degree: Option<usize>,
    pub p: Option<f64>,
}

/// Right-hand side of the sup-norm or `L^p` tail estimate. The sup-norm
/// version uses `k_N = ⌈R_N^{-2m}⌉ = ⌈N^{m(m+1)}⌉` balls.
pub fn theorem_tail_reference(which: Theorem, params: &TheoremParams) -> Result<f64> {
    let c = params.c.ok_or(Error::IncompleteParams("C"))?;
    let m = params.m.ok_or(Error::IncompleteParams("m"))?;
    let degree = params.degree.ok_or(Error::IncompleteParams("N"))?;
    let n = degree as f64;
    match which {
        Theorem::Thm11 => {
            let d = dimension(m, degree)? as f64;
            let k = n.powi((m * (m + 1)) as i32).ceil();
            Ok((k.ln() - c * c * (d - 1.0) / n.powi(m as i32) * n.ln()).exp())
        }
        Theorem::Thm13 => {
            let r = params.r.ok_or(Error::IncompleteParams("r"))?;
            let p = params.p.ok_or(Error::IncompleteParams("p"))?;
            Ok((-c * r * r * n.powf(2.0 * m as f64 / p)).exp())
        }
    }
}

/// One empirical deviation tail `P{|F - median| > r}` at degree `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationTail {
    pub degree: usize,
    pub r: f64,
    pub prob: f64,
}

/// Largest `C` with `exp(-C r² N^{2m/p}) ≥ prob` at every point; `None` when
/// no point constrains `C` (all tails empty).
pub fn fit_thm13_constant(m: usize, p: f64, tails: &[DeviationTail]) -> Option<f64> {
    tails
        .iter()
        .filter(|t| t.prob > 0.0 && t.r > 0.0)
        .map(|t| -t.prob.ln() / (t.r * t.r * (t.degree as f64).powf(2.0 * m as f64 / p)))
        .reduce(f64::min)
}

/// Empirical deviation tails of `values` about their median.
pub fn deviation_tails(values: &[f64], degree: usize, radii: &[f64]) -> Result<Vec<DeviationTail>> {
    let med = median_from_values(values)?.value;
    Ok(radii
        .iter()
        .map(|&r| DeviationTail {
            degree,
            r,
            prob: values.iter().filter(|v| (**v - med).abs() > r).count() as f64 / values.len() as f64,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewTrials { min: 1, got: 0 });
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let v = x[i].min(y[j]);
        while i < n && x[i] <= v {
            i += 1;
        }
        while j < m && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult { statistic: d, p_value: kolmogorov_sf(lambda) })
}
