//! `L^p`, sup and gradient norms of sections, and bounds on the `L^p → L^q`
//! mapping norm of the Szegő projector.

use alloc::{format, vec::Vec};
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::ensembles::{basis_norms, dimension, BasisNormalizer, SectionCoefficients, SectionEvaluator};
use crate::geometry::{build_grid, covering_grid, total_volume, GridKind, ProjectivePoint, QuadratureGrid};
use crate::concentration::ln_moment_a;
use crate::kernels::kernel_lr_integral_exact;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormMethod {
    #[serde(rename = "grid")]
    Grid,
    #[serde(rename = "grid+refine")]
    GridRefine,
}

impl NormMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormMethod::Grid => "grid",
            NormMethod::GridRefine => "grid+refine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    /// `f64::INFINITY` for the sup norm.
    pub p: f64,
    pub value: f64,
    pub method: NormMethod,
    pub error_bound: Option<f64>,
}

/// Search parameters for [`SupStrategy::Refine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefineOptions {
    /// Coarse grid size is `coarse_factor · N^m`.
    pub coarse_factor: usize,
    pub steps: usize,
    pub starts: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self { coarse_factor: 64, steps: 50, starts: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupStrategy {
    /// Maximum over the covering lattice of mesh `R_N` (`m = 1` only).
    Exhaustive,
    /// Coarse-grid maximum followed by compass ascent on the sphere.
    Refine(RefineOptions),
}

impl Default for SupStrategy {
    fn default() -> Self {
        SupStrategy::Refine(RefineOptions::default())
    }
}

/// Lipschitz constant of `|s|` for unit `c`: `sup |∇Φ̃_N| = √(N d_N / V_m)`.
pub fn spatial_lipschitz(m: usize, degree: usize) -> Result<f64> {
    let d = dimension(m, degree)? as f64;
    Ok((degree as f64 * d / total_volume(m)).sqrt())
}

/// Lipschitz constant of `|∇s|` for unit `c` (`m = 1`).
pub fn gradient_lipschitz(m: usize, degree: usize) -> Result<f64> {
    let d = dimension(m, degree)? as f64;
    Ok((1.0 + 2f64.sqrt()) * degree as f64 * (d / total_volume(m)).sqrt())
}

fn check_grid(s: &SectionCoefficients, grid: &QuadratureGrid) -> Result<()> {
    if grid.dim() != s.spec().m {
        return Err(Error::DimensionMismatch { expected: s.spec().m, got: grid.dim() });
    }
    Ok(())
}

/// `(Σ w_i |s(x_i)|^p)^{1/p}`; `p = ∞` is the refined sup norm.
pub fn lp_norm(s: &SectionCoefficients, p: f64, grid: &QuadratureGrid) -> Result<NormReport> {
    if p == f64::INFINITY {
        return sup_norm(s, SupStrategy::default());
    }
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(format!("p = {p}; need 2 <= p <= inf")));
    }
    check_grid(s, grid)?;
    let basis = basis_norms(s.spec().m, s.spec().degree)?;
    let ev = SectionEvaluator::new(s, &basis)?;
    let value = grid.integrate(|x| ev.magnitude(x).powf(p)).powf(1.0 / p);
    Ok(NormReport { p, value, method: NormMethod::Grid, error_bound: None })
}

/// `|∇s_N|(x)` (`m = 1`).
pub fn gradient_norm(s: &SectionCoefficients, x: &ProjectivePoint) -> Result<f64> {
    if s.spec().m != 1 {
        return Err(Error::Unsupported("gradient norms are implemented on CP^1 only"));
    }
    let basis = basis_norms(1, s.spec().degree)?;
    SectionEvaluator::new(s, &basis)?.gradient_norm(x)
}

/// Reusable maximizer of `|s|` and `|∇s|` for one `(m, N)`; holds the basis
/// and coarse grid so repeated trials do not rebuild them.
#[derive(Debug, Clone)]
pub struct SupSearch {
    m: usize,
    degree: usize,
    strategy: SupStrategy,
    basis: BasisNormalizer,
    grid: QuadratureGrid,
    spacing: f64,
}

impl SupSearch {
    pub fn new(m: usize, degree: usize, strategy: SupStrategy) -> Result<Self> {
        let basis = basis_norms(m, degree)?;
        let (grid, spacing) = match strategy {
            SupStrategy::Exhaustive => {
                let g = covering_grid(m, degree)?;
                let h = g.mesh().unwrap_or(0.0);
                (g, h)
            }
            SupStrategy::Refine(opts) => {
                if opts.starts == 0 {
                    return Err(Error::Domain("refine needs at least one start".into()));
                }
                let n = (degree as u128)
                    .checked_pow(m as u32)
                    .and_then(|v| v.checked_mul(opts.coarse_factor.max(1) as u128))
                    .filter(|v| *v <= crate::geometry::DEFAULT_COVERING_CAP as u128)
                    .ok_or(Error::InfeasibleGrid {
                        needed: u128::MAX,
                        cap: crate::geometry::DEFAULT_COVERING_CAP,
                    })? as usize;
                let kind = if m == 1 { GridKind::Lattice } else { GridKind::LowDiscrepancy };
                let g = build_grid(m, n, kind)?;
                // typical nearest-neighbour spacing
                let h = g.mesh().unwrap_or((total_volume(m) / n as f64).powf(0.5 / m as f64));
                (g, h)
            }
        };
        Ok(Self { m, degree, strategy, basis, grid, spacing })
    }

    pub fn strategy(&self) -> SupStrategy {
        self.strategy
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    fn check(&self, s: &SectionCoefficients) -> Result<()> {
        if s.spec().m != self.m || s.spec().degree != self.degree {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), got: s.coeffs().len() });
        }
        Ok(())
    }

    /// `sup |s|` with an error bound relative to the norm of `c`.
    pub fn sup(&self, s: &SectionCoefficients) -> Result<NormReport> {
        self.check(s)?;
        let ev = SectionEvaluator::new(s, &self.basis)?;
        let lip = spatial_lipschitz(self.m, self.degree)? * s.norm();
        self.maximize(|x| Ok(ev.magnitude(x)), lip)
    }

    /// `sup |∇s|` (`m = 1`).
    pub fn grad_sup(&self, s: &SectionCoefficients) -> Result<NormReport> {
        self.check(s)?;
        if self.m != 1 {
            return Err(Error::Unsupported("gradient norms are implemented on CP^1 only"));
        }
        let ev = SectionEvaluator::new(s, &self.basis)?;
        let lip = gradient_lipschitz(self.m, self.degree)? * s.norm();
        self.maximize(|x| ev.gradient_norm(x), lip)
    }

    fn maximize<F>(&self, f: F, lip: f64) -> Result<NormReport>
    where
        F: Fn(&ProjectivePoint) -> Result<f64>,
    {
        let values = self.grid.nodes().iter().map(&f).collect::<Result<Vec<f64>>>()?;
        match self.strategy {
            SupStrategy::Exhaustive => {
                let value = values.iter().copied().fold(0.0, f64::max);
                Ok(NormReport {
                    p: f64::INFINITY,
                    value,
                    method: NormMethod::Grid,
                    error_bound: Some(lip * self.spacing),
                })
            }
            SupStrategy::Refine(opts) => {
                let mut order: Vec<usize> = (0..values.len()).collect();
                let k = opts.starts.min(order.len());
                order.select_nth_unstable_by(k - 1, |a, b| values[*b].total_cmp(&values[*a]));
                order.truncate(k);
                order.sort_unstable();
                let mut best = 0.0f64;
                let mut best_step = self.spacing;
                for i in order {
                    let (v, h) = ascend(&self.grid.nodes()[i], values[i], &f, self.spacing, opts.steps)?;
                    if v > best {
                        best = v;
                        best_step = h;
                    }
                }
                Ok(NormReport {
                    p: f64::INFINITY,
                    value: best,
                    method: NormMethod::GridRefine,
                    error_bound: Some(lip * best_step),
                })
            }
        }
    }
}

// Compass search along the 2m real horizontal directions; the step halves
// whenever no direction improves.
fn ascend<F>(start: &ProjectivePoint, v0: f64, f: &F, h0: f64, steps: usize) -> Result<(f64, f64)>
where
    F: Fn(&ProjectivePoint) -> Result<f64>,
{
    let mut x = start.clone();
    let mut v = v0;
    let mut h = h0;
    for _ in 0..steps {
        let mut moved: Option<(ProjectivePoint, f64)> = None;
        for dir in x.tangent_basis() {
            let idir: Vec<C64> = dir.iter().map(|z| z * C64::i()).collect();
            for d in [&dir, &idir] {
                for t in [h, -h] {
                    let y = x.geodesic(d, t);
                    let fy = f(&y)?;
                    if fy > moved.as_ref().map_or(v, |m| m.1) {
                        moved = Some((y, fy));
                    }
                }
            }
        }
        match moved {
            Some((y, fy)) => {
                x = y;
                v = fy;
            }
            None => h *= 0.5,
        }
    }
    Ok((v, h))
}

/// `sup_M |s_N|`.
pub fn sup_norm(s: &SectionCoefficients, strategy: SupStrategy) -> Result<NormReport> {
    SupSearch::new(s.spec().m, s.spec().degree, strategy)?.sup(s)
}

/// `sup_M |∇s_N|` (`m = 1`).
pub fn grad_sup_norm(s: &SectionCoefficients, strategy: SupStrategy) -> Result<NormReport> {
    if s.spec().m != 1 {
        return Err(Error::Unsupported("gradient norms are implemented on CP^1 only"));
    }
    SupSearch::new(1, s.spec().degree, strategy)?.grad_sup(s)
}

/// Two-sided estimate of `‖Π_N‖_{L^p → L^q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappingNormBounds {
    /// `‖Π_N f‖_q / ‖f‖_p` for a coherent state `f`.
    pub lower: f64,
    /// Schur–Young bound, replaced by the projection norm 1 when `p = q = 2`.
    pub upper: f64,
    /// `(sup_z ∫ |Π_N(z, w)|^r dV(w))^{1/r}`, or `d_N / V_m` for `r = ∞`.
    pub schur_young: f64,
    /// Young exponent `1/r = 1 - 1/p + 1/q`.
    pub r: f64,
}

fn young_exponent(p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0) || !(q >= p) {
        return Err(Error::InvalidExponent(format!("need 1 <= p <= q <= inf, got p = {p}, q = {q}")));
    }
    let inv = 1.0 - 1.0 / p + 1.0 / q;
    Ok(if inv == 0.0 { f64::INFINITY } else { 1.0 / inv })
}

// ‖c_w‖_p for the normalized coherent state at any w.
fn coherent_lp(m: usize, degree: usize, p: f64) -> Result<f64> {
    let diag = dimension(m, degree)? as f64 / total_volume(m);
    if p == f64::INFINITY {
        return Ok(diag.sqrt());
    }
    // |c_w(z)| = √(d/V) |<z,w>|^N and |<z,w>|² is Beta(1, m)
    let ln = 0.5 * p * diag.ln() + total_volume(m).ln() + ln_moment_a(degree as f64 * p, m + 1);
    Ok((ln / p).exp())
}

/// Mapping-norm bounds. The upper bound is closed form (the kernel's
/// `L^r` norm does not depend on the base point); with a grid the lower bound
/// is measured on it instead of taken from the closed form.
pub fn mapping_norm_estimate(
    m: usize,
    degree: usize,
    p: f64,
    q: f64,
    grid: Option<&QuadratureGrid>,
) -> Result<MappingNormBounds> {
    let r = young_exponent(p, q)?;
    let diag = dimension(m, degree)? as f64 / total_volume(m);
    let schur_young = if r == f64::INFINITY {
        diag
    } else {
        kernel_lr_integral_exact(m, degree, r)?.powf(1.0 / r)
    };
    let upper = if p == 2.0 && q == 2.0 { schur_young.min(1.0) } else { schur_young };
    let lower = match grid {
        None => coherent_lp(m, degree, q)? / coherent_lp(m, degree, p)?,
        Some(g) => {
            if g.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, got: g.dim() });
            }
            let w = ProjectivePoint::basis(m, 0);
            let profile = |x: &ProjectivePoint| diag.sqrt() * x.inner(&w).norm().powi(degree as i32);
            let norm = |e: f64| -> f64 {
                if e == f64::INFINITY {
                    g.nodes().iter().map(profile).fold(0.0, f64::max)
                } else {
                    g.integrate(|x| profile(x).powf(e)).powf(1.0 / e)
                }
            };
            norm(q) / norm(p)
        }
    };
    Ok(MappingNormBounds { lower, upper, schur_young, r })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample, EnsembleSpec, Measure};
    use crate::kernels::coherent_state;
    use crate::rng::trial_rng;
    use core::f64::consts::PI;

    fn haar(m: usize, n: usize, seed: u64, trial: u64) -> SectionCoefficients {
        let spec = EnsembleSpec::new(m, n, Measure::HaarSphere).unwrap();
        sample(&spec, &mut trial_rng(seed, n as u64, trial))
    }

    #[test]
    fn parseval_on_grid() {
        let g = build_grid(1, 10_000, GridKind::Lattice).unwrap();
        for n in [1usize, 5, 20] {
            let s = haar(1, n, 30, 0);
            let r = lp_norm(&s, 2.0, &g).unwrap();
            assert!((r.value - 1.0).abs() < 1e-2);
            assert_eq!(r.method, NormMethod::Grid);
            assert!(r.error_bound.is_none());
        }
        assert!(lp_norm(&haar(1, 5, 30, 0), 1.5, &g).is_err());
        let g2 = build_grid(2, 100, GridKind::LowDiscrepancy).unwrap();
        assert!(matches!(lp_norm(&haar(1, 5, 30, 0), 4.0, &g2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn coherent_lp_growth() {
        let w = ProjectivePoint::basis(1, 0).geodesic(&[C64::new(0.0, 0.0), C64::new(0.0, 1.0)], 0.4);
        let g = build_grid(1, 40_000, GridKind::Lattice).unwrap();
        let v100 = lp_norm(&coherent_state(100, &w).unwrap(), 4.0, &g).unwrap().value;
        let v400 = lp_norm(&coherent_state(400, &w).unwrap(), 4.0, &g).unwrap().value;
        assert!((v100 - coherent_lp(1, 100, 4.0).unwrap()).abs() < 1e-3 * v100);
        assert!(((v400 / v100) / 4f64.powf(0.25) - 1.0).abs() < 0.1);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = trial_rng(31, 0, 0);
        let h = 1e-5;
        for trial in 0..200u64 {
            let n = 1 + (trial as usize * 7) % 60;
            let s = haar(1, n, 31, trial);
            let x = ProjectivePoint::random(1, &mut rng);
            let mag = |y: &ProjectivePoint| crate::ensembles::evaluate(&s, y).unwrap().magnitude;
            let v = &x.tangent_basis()[0];
            let iv: Vec<C64> = v.iter().map(|z| z * C64::i()).collect();
            let d1 = (mag(&x.geodesic(v, h)) - mag(&x.geodesic(v, -h))) / (2.0 * h);
            let d2 = (mag(&x.geodesic(&iv, h)) - mag(&x.geodesic(&iv, -h))) / (2.0 * h);
            let fd = d1.hypot(d2);
            let g = gradient_norm(&s, &x).unwrap();
            assert!((g - fd).abs() <= 1e-4 * g.max(1e-12), "N={n}: {g} vs {fd}");
        }
        assert!(matches!(gradient_norm(&haar(2, 3, 31, 0), &ProjectivePoint::basis(2, 0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn gradient_vanishes_at_coherent_peak() {
        let mut rng = trial_rng(32, 0, 0);
        let w = ProjectivePoint::random(1, &mut rng);
        let s = coherent_state(30, &w).unwrap();
        assert!(gradient_norm(&s, &w).unwrap() < 1e-6);
    }

    #[test]
    fn lipschitz_constants_dominate() {
        let mut rng = trial_rng(33, 0, 0);
        for n in [3usize, 17, 64] {
            let lip = spatial_lipschitz(1, n).unwrap();
            for t in 0..50 {
                let s = haar(1, n, 33, t);
                let x = ProjectivePoint::random(1, &mut rng);
                assert!(gradient_norm(&s, &x).unwrap() <= lip * (1.0 + 1e-9));
            }
            // equality for the coherent state one geodesic step from its peak
            let w = ProjectivePoint::basis(1, 0);
            let s = coherent_state(n, &w).unwrap();
            let peak_slope = (0..400)
                .map(|k| gradient_norm(&s, &w.geodesic(&w.tangent_basis()[0], k as f64 * 0.004)).unwrap())
                .fold(0.0, f64::max);
            assert!(peak_slope <= lip && peak_slope > 0.5 * lip);
        }
    }

    #[test]
    fn coherent_sup_is_known() {
        let mut rng = trial_rng(34, 0, 0);
        for n in [10usize, 64] {
            let w = ProjectivePoint::random(1, &mut rng);
            let s = coherent_state(n, &w).unwrap();
            let exact = ((n as f64 + 1.0) / PI).sqrt();
            for strategy in [SupStrategy::Exhaustive, SupStrategy::default()] {
                let r = sup_norm(&s, strategy).unwrap();
                let eb = r.error_bound.unwrap();
                assert!(r.value <= exact * (1.0 + 1e-12));
                assert!(exact - r.value <= eb, "{strategy:?}: {} vs {exact} ± {eb}", r.value);
            }
        }
    }

    #[test]
    fn refine_finds_monomial_maximum() {
        // |b z^k| (1+|z|²)^{-N/2} is maximal at |z|² = k/(N-k)
        let n = 20usize;
        let spec = EnsembleSpec::new(1, n, Measure::HaarSphere).unwrap();
        let basis = basis_norms(1, n).unwrap();
        for j in [3usize, 10, 15] {
            let mut c = alloc::vec![C64::new(0.0, 0.0); n + 1];
            c[j] = C64::new(1.0, 0.0);
            let s = SectionCoefficients::new(spec, c).unwrap();
            let (a0, a1) = (j as f64, (n - j) as f64);
            // at the maximum |x_0|² = a0/N, |x_1|² = a1/N
            let exact = (basis.log_norms()[j] + 0.5 * (a0 * (a0 / n as f64).ln() + a1 * (a1 / n as f64).ln())).exp();
            let r = sup_norm(&s, SupStrategy::default()).unwrap();
            assert!((r.value - exact).abs() <= 2.0 * r.error_bound.unwrap().max(1e-12) + 1e-12 * exact);
            assert!(r.value <= exact * (1.0 + 1e-12));
        }
    }

    #[test]
    fn exhaustive_and_refine_agree() {
        for t in 0..100u64 {
            let n = [4usize, 16, 64][t as usize % 3];
            let s = haar(1, n, 35, t);
            let a = sup_norm(&s, SupStrategy::Exhaustive).unwrap();
            let b = sup_norm(&s, SupStrategy::default()).unwrap();
            assert!((a.value - b.value).abs() <= a.error_bound.unwrap() + b.error_bound.unwrap());
        }
    }

    #[test]
    fn homogeneity_and_ordering() {
        let g = build_grid(1, 8_000, GridKind::Lattice).unwrap();
        let v = total_volume(1);
        for t in 0..10u64 {
            let s = haar(1, 12, 36, t);
            let big = s.scaled(3.5);
            for p in [2.0, 4.0, 7.5] {
                let a = lp_norm(&s, p, &g).unwrap().value;
                let b = lp_norm(&big, p, &g).unwrap().value;
                assert!((b - 3.5 * a).abs() < 1e-12 * b);
            }
            let a = sup_norm(&s, SupStrategy::default()).unwrap();
            let b = sup_norm(&big, SupStrategy::default()).unwrap();
            assert!((b.value - 3.5 * a.value).abs() < 1e-9 * b.value);
            let mut last = 0.0;
            for p in [2.0, 3.0, 4.0, 6.0, 10.0] {
                let mean = lp_norm(&s, p, &g).unwrap().value / v.powf(1.0 / p);
                assert!(mean >= last * (1.0 - 1e-12));
                last = mean;
            }
            assert!(a.value >= last);
        }
    }

    #[test]
    fn grad_sup_of_coherent_state() {
        let w = ProjectivePoint::basis(1, 0);
        let ratio = |n: usize| {
            let s = coherent_state(n, &w).unwrap();
            grad_sup_norm(&s, SupStrategy::default()).unwrap().value / sup_norm(&s, SupStrategy::default()).unwrap().value
        };
        assert!(((ratio(400) / ratio(100)) / 2.0 - 1.0).abs() < 0.25);
        // the profile √(d/V) cos^N t has slope maximum √(d/V) √N (1-1/N)^{(N-1)/2}
        let n = 100.0f64;
        let exact = ((n + 1.0) / PI).sqrt() * n.sqrt() * (1.0 - 1.0 / n).powf((n - 1.0) / 2.0);
        let s = coherent_state(100, &w).unwrap();
        let r = grad_sup_norm(&s, SupStrategy::default()).unwrap();
        assert!((r.value - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn mapping_norm_examples() {
        let b = mapping_norm_estimate(1, 50, 2.0, 2.0, None).unwrap();
        assert!((b.upper - 1.0).abs() < 0.05 && (b.lower - 1.0).abs() < 1e-12);
        assert!(b.schur_young > 1.5);
        let ns = [25.0, 100.0, 400.0];
        for (p, q, e) in [(2.0, f64::INFINITY, 0.5), (1.0, f64::INFINITY, 1.0), (2.0, 4.0, 0.25)] {
            let up: Vec<f64> = ns.iter().map(|&n| mapping_norm_estimate(1, n as usize, p, q, None).unwrap().upper).collect();
            let k = crate::fit::power_law_exponent(&ns, &up).unwrap();
            assert!((k / e - 1.0).abs() < 0.1, "({p},{q}): {k}");
            for &n in &ns {
                let b = mapping_norm_estimate(1, n as usize, p, q, None).unwrap();
                assert!(b.lower <= b.upper * (1.0 + 1e-12));
            }
        }
        let band: Vec<f64> = ns
            .iter()
            .map(|&n| mapping_norm_estimate(1, n as usize, 2.0, f64::INFINITY, None).unwrap().upper / n.sqrt())
            .collect();
        let (lo, hi) = band.iter().fold((f64::MAX, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!(hi / lo <= 1.5);
        assert!(mapping_norm_estimate(1, 10, 4.0, 2.0, None).is_err());
        assert!(mapping_norm_estimate(1, 10, 0.5, 2.0, None).is_err());
    }

    #[test]
    fn mapping_norm_lower_on_grid() {
        let g = build_grid(1, 20_000, GridKind::Lattice).unwrap();
        for (p, q) in [(2.0, 4.0), (1.0, 3.0), (2.0, f64::INFINITY)] {
            let a = mapping_norm_estimate(1, 30, p, q, None).unwrap();
            let b = mapping_norm_estimate(1, 30, p, q, Some(&g)).unwrap();
            assert!((a.lower - b.lower).abs() < 1e-2 * a.lower, "({p},{q}) {} {}", a.lower, b.lower);
        }
    }
}
