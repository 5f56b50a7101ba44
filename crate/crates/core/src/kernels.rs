//! The Szegő kernel of `O(N) → CP^m` and its scaling limits.
//!
//! On unit lifts the kernel is `Π_N(x, y) = (d_N / V_m) <x, y>^N`. It is kept
//! as a log-magnitude plus a phase because `cos^N d` underflows long before
//! the degrees of interest run out.

use alloc::{vec, vec::Vec};
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::concentration::ln_moment_a;
use crate::ensembles::{
    basis_norms, dimension, lifted_map, BasisNormalizer, EnsembleSpec, Measure, SectionCoefficients,
};
use crate::fit::ols;
use crate::geometry::{total_volume, ProjectivePoint, QuadratureGrid, Unitary};
use crate::special::factorial;
use crate::{Error, Result, C64};

/// `|Π| = exp(log_abs)`, `arg Π = phase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub log_abs: f64,
    pub phase: f64,
}

impl KernelValue {
    pub fn abs(&self) -> f64 {
        self.log_abs.exp()
    }

    pub fn to_complex(&self) -> C64 {
        C64::from_polar(self.abs(), self.phase)
    }
}

fn ln_diagonal(m: usize, degree: usize) -> Result<f64> {
    Ok((dimension(m, degree)? as f64).ln() - total_volume(m).ln())
}

fn same_dim(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    Ok(())
}

/// Closed-form `Π_N(x, y) = (d_N / V_m) <x, y>^N`.
pub fn szego(degree: usize, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<KernelValue> {
    same_dim(x, y)?;
    let ip = x.inner(y);
    let n = degree as f64;
    let log_abs = if degree == 0 {
        ln_diagonal(x.dim(), 0)?
    } else {
        ln_diagonal(x.dim(), degree)? + n * ip.norm().ln()
    };
    let raw = libm::fmod(n * ip.arg(), 2.0 * PI);
    let phase = if raw < 0.0 { raw + 2.0 * PI } else { raw };
    Ok(KernelValue { log_abs, phase })
}

/// `Σ_α Φ̃_α(x) conj(Φ̃_α(y))` through the orthonormal basis.
pub fn szego_basis_sum(basis: &BasisNormalizer, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<C64> {
    same_dim(x, y)?;
    if basis.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: x.dim() });
    }
    let (px, py) = (lifted_map(x, basis), lifted_map(y, basis));
    Ok(px.iter().zip(&py).map(|(a, b)| a * b.conj()).sum())
}

/// `π^m Π_N(x,x) / N^m - 1 = (d_N m! - N^m) / N^m` held as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalDiagnostic {
    pub numerator: u128,
    pub denominator: u128,
}

impl DiagonalDiagnostic {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalValue {
    /// `Π_N(x, x) = d_N / V_m`.
    pub value: f64,
    pub diagnostic: DiagonalDiagnostic,
}

/// Diagonal of the kernel, constant on `CP^m`.
pub fn szego_diagonal(m: usize, degree: usize) -> Result<DiagonalValue> {
    if degree == 0 {
        return Err(Error::Domain("diagnostic needs N >= 1".into()));
    }
    let d = dimension(m, degree)? as u128;
    let overflow = Error::DimensionOverflow { m, degree };
    let mf = factorial(m as u64).ok_or(overflow.clone())?;
    let nm = (degree as u128).checked_pow(m as u32).ok_or(overflow.clone())?;
    let scaled = d.checked_mul(mf).ok_or(overflow)?;
    Ok(DiagonalValue {
        value: d as f64 / total_volume(m),
        diagnostic: DiagonalDiagnostic { numerator: scaled - nm, denominator: nm },
    })
}

/// Point `(u, θ)` of the reduced Heisenberg group.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergPoint {
    pub u: Vec<C64>,
    pub theta: f64,
}

impl HeisenbergPoint {
    pub fn new(u: Vec<C64>, theta: f64) -> Self {
        Self { u, theta }
    }
}

/// `Π_1^H(u,θ; v,φ) = π^{-m} exp(i(θ-φ) + i Im(u·v̄) - |u-v|²/2)`.
pub fn heisenberg(p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<C64> {
    if p.u.len() != q.u.len() {
        return Err(Error::DimensionMismatch { expected: p.u.len(), got: q.u.len() });
    }
    let m = p.u.len();
    let cross: C64 = p.u.iter().zip(&q.u).map(|(a, b)| a * b.conj()).sum();
    let dist2: f64 = p.u.iter().zip(&q.u).map(|(a, b)| (a - b).norm_sqr()).sum();
    let exponent = C64::new(-0.5 * dist2, p.theta - q.theta + cross.im);
    Ok(exponent.exp() * PI.powi(-(m as i32)))
}

/// Largest `|u|`, `|v|` accepted by [`near_diagonal_error`].
pub const DEFAULT_CHART_RADIUS: f64 = 1.0;

/// Normal chart at a base point: `u ↦ U (1, u/√N) / |·|` with `U e_0 = z_0`.
#[derive(Debug, Clone)]
pub struct ScalingChart {
    unitary: Unitary,
    scale: f64,
}

impl ScalingChart {
    pub fn new(base: &ProjectivePoint, degree: usize) -> Self {
        Self {
            unitary: Unitary::moving_origin_to(base),
            scale: 1.0 / (degree as f64).sqrt(),
        }
    }

    /// Point with rescaled chart coordinates `u` (θ = 0 slice).
    pub fn point(&self, u: &[C64]) -> ProjectivePoint {
        let mut lift = Vec::with_capacity(u.len() + 1);
        lift.push(C64::new(1.0, 0.0));
        lift.extend(u.iter().map(|z| z * self.scale));
        let local = ProjectivePoint::from_lift(lift).expect("finite chart point");
        self.unitary.apply(&local)
    }
}

/// Deterministic sample of the ball `|u| ≤ ρ` in `C^m`, origin first.
pub fn ball_samples(m: usize, rho: f64, count: usize) -> Vec<Vec<C64>> {
    let dims = 2 * m;
    // R-sequence in the cube [-ρ, ρ]^{2m}, rejected to the ball
    let mut g = 2.0f64;
    for _ in 0..64 {
        g -= (g.powi(dims as i32 + 1) - g - 1.0) / ((dims as f64 + 1.0) * g.powi(dims as i32) - 1.0);
    }
    let alpha: Vec<f64> = (1..=dims).map(|j| (1.0 / g.powi(j as i32)) % 1.0).collect();
    let mut out = vec![vec![C64::new(0.0, 0.0); m]];
    let mut k = 1u64;
    while out.len() < count {
        let coords: Vec<f64> = alpha
            .iter()
            .map(|a| rho * (2.0 * ((0.5 + k as f64 * a) % 1.0) - 1.0))
            .collect();
        k += 1;
        if coords.iter().map(|c| c * c).sum::<f64>() <= rho * rho {
            out.push(coords.chunks(2).map(|c| C64::new(c[0], c[1])).collect());
        }
    }
    out
}

/// `max |N^{-m} Π_N(z_0 + u/√N, 0; z_0 + v/√N, 0) - Π_1^H(u, 0; v, 0)|` over
/// `sample_count²` pairs from the ball of radius `rho`.
pub fn near_diagonal_error(m: usize, degree: usize, rho: f64, sample_count: usize) -> Result<f64> {
    if !(rho >= 0.0) || rho > DEFAULT_CHART_RADIUS {
        return Err(Error::ChartRadius { radius: rho, max: DEFAULT_CHART_RADIUS });
    }
    if degree == 0 || m == 0 {
        return Err(Error::Domain("need m >= 1 and N >= 1".into()));
    }
    let mut base_lift = vec![C64::new(1.0, 0.0)];
    base_lift.extend((1..=m).map(|j| C64::new(0.3 / j as f64, -0.2 * j as f64)));
    let base = ProjectivePoint::from_lift(base_lift)?;
    let chart = ScalingChart::new(&base, degree);
    let samples = ball_samples(m, rho, sample_count.max(1));
    let points: Vec<ProjectivePoint> = samples.iter().map(|u| chart.point(u)).collect();
    let model: Vec<HeisenbergPoint> = samples
        .iter()
        .map(|u| HeisenbergPoint::new(u.clone(), 0.0))
        .collect();
    let scale = (degree as f64).powi(-(m as i32));
    let mut worst: f64 = 0.0;
    for (x, hx) in points.iter().zip(&model) {
        for (y, hy) in points.iter().zip(&model) {
            let k = szego(degree, x, y)?.to_complex() * scale;
            worst = worst.max((k - heisenberg(hx, hy)?).norm());
        }
    }
    Ok(worst)
}

/// Fit of `log |Π_N(z, w)| ≈ log C + m log N - λ √N d(z, w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub lambda_hat: f64,
    /// `C` of the fitted line.
    pub prefactor: f64,
    /// Largest absolute residual of the fit in log space.
    pub residual: f64,
}

impl DecayFit {
    /// Constant `C*` for which `|Π_N| ≤ C* N^m exp(-λ̂ √N d)` holds at every
    /// distance, from `cos d ≤ exp(-d²/2)` and `-t²/2 + λt ≤ λ²/2`.
    pub fn envelope_constant(&self, m: usize, degree: usize) -> Result<f64> {
        let diag = ln_diagonal(m, degree)? - m as f64 * (degree as f64).ln();
        Ok((diag + 0.5 * self.lambda_hat * self.lambda_hat).exp())
    }
}

/// `log |Π_N|` at Fubini–Study distance `d` from a point.
pub fn log_kernel_at_distance(m: usize, degree: usize, d: f64) -> Result<f64> {
    let x = ProjectivePoint::basis(m, 0);
    let mut lift = vec![C64::new(0.0, 0.0); m + 1];
    lift[0] = C64::new(d.cos(), 0.0);
    lift[1] = C64::new(d.sin(), 0.0);
    let y = ProjectivePoint::from_lift(lift)?;
    Ok(szego(degree, &x, &y)?.log_abs)
}

/// Least-squares decay fit over `distances ⊂ (0, π/2]`; `π/2` itself (where
/// the kernel vanishes) is skipped.
pub fn offdiagonal_fit(m: usize, degree: usize, distances: &[f64]) -> Result<DecayFit> {
    if distances.iter().any(|d| !(*d > 0.0) || *d > PI / 2.0 + 1e-12) {
        return Err(Error::Domain("distances must lie in (0, π/2]".into()));
    }
    let usable: Vec<f64> = distances
        .iter()
        .copied()
        .filter(|d| *d < PI / 2.0 - 1e-9)
        .collect();
    if usable.len() < 3 {
        return Err(Error::DegenerateFit("need at least three distances below π/2"));
    }
    let n = degree as f64;
    let t: Vec<f64> = usable.iter().map(|d| n.sqrt() * d).collect();
    let y = usable
        .iter()
        .map(|d| Ok(log_kernel_at_distance(m, degree, *d)? - m as f64 * n.ln()))
        .collect::<Result<Vec<f64>>>()?;
    let line = ols(&t, &y)?;
    let lambda_hat = -line.slope;
    if !(lambda_hat > 0.0) || !lambda_hat.is_finite() {
        return Err(Error::DegenerateFit("fitted decay rate is not positive"));
    }
    Ok(DecayFit { lambda_hat, prefactor: line.intercept.exp(), residual: line.max_residual })
}

/// Gaussian-regime majorant `(π^{-m} + 0.1) N^m exp(-0.45 N d²)` checked for
/// `d ≤ N^{-1/3}`.
pub fn gaussian_regime_bound(m: usize, degree: usize, d: f64) -> f64 {
    let n = degree as f64;
    (PI.powi(-(m as i32)) + 0.1) * n.powi(m as i32) * (-0.45 * n * d * d).exp()
}

/// Normalized coherent state `Π_N(·, w) / √Π_N(w, w)`.
pub fn coherent_state(degree: usize, w: &ProjectivePoint) -> Result<SectionCoefficients> {
    let spec = EnsembleSpec::new(w.dim(), degree, Measure::HaarSphere)?;
    let basis = basis_norms(w.dim(), degree)?;
    let phi = lifted_map(w, &basis);
    let norm = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    SectionCoefficients::new(spec, phi.iter().map(|z| z.conj() / norm).collect())
}

/// Quadrature estimate of `∫ |Π_N(z, w)|^r dV(w)`.
pub fn kernel_lr_integral(degree: usize, r: f64, z: &ProjectivePoint, grid: &QuadratureGrid) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::InvalidExponent(alloc::format!("r = {r} < 1")));
    }
    if grid.dim() != z.dim() {
        return Err(Error::DimensionMismatch { expected: grid.dim(), got: z.dim() });
    }
    let mut total = 0.0;
    for (w, weight) in grid.nodes().iter().zip(grid.weights()) {
        total += weight * (r * szego(degree, z, w)?.log_abs).exp();
    }
    Ok(total)
}

/// Closed form `∫ |Π_N(z, w)|^r dV(w) = (d_N/V_m)^r V_m A_{Nr, m+1}`
/// (the modulus `|<z,w>|²` is Beta(1, m) distributed).
pub fn kernel_lr_integral_exact(m: usize, degree: usize, r: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::InvalidExponent(alloc::format!("r = {r} < 1")));
    }
    let ln = r * ln_diagonal(m, degree)? + total_volume(m).ln() + ln_moment_a(degree as f64 * r, m + 1);
    Ok(ln.exp())
}

/// `cos θ_x = |c · Φ̃_N(x)| / |Φ̃_N(x)|` for a unit-norm section.
pub fn overlap_angle(s: &SectionCoefficients, x: &ProjectivePoint) -> Result<f64> {
    let basis = basis_norms(s.spec().m, s.spec().degree)?;
    overlap_angle_with(s, x, &basis)
}

pub fn overlap_angle_with(s: &SectionCoefficients, x: &ProjectivePoint, basis: &BasisNormalizer) -> Result<f64> {
    let norm = s.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotUnitNorm(norm));
    }
    if x.dim() != s.spec().m {
        return Err(Error::DimensionMismatch { expected: s.spec().m, got: x.dim() });
    }
    let phi = lifted_map(x, basis);
    let dot: C64 = phi.iter().zip(s.coeffs()).map(|(p, c)| p * c).sum();
    let len = phi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok((dot.norm() / len).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{evaluate, sample};
    use crate::geometry::{build_grid, fs_distance, unit_lift, GridKind};
    use crate::rng::trial_rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn szego_examples() {
        let mut rng = trial_rng(21, 0, 0);
        let x = ProjectivePoint::random(1, &mut rng);
        let k = szego(7, &x, &x).unwrap();
        assert!((k.abs() - 8.0 / PI).abs() < 1e-12);
        assert!(k.phase.abs() < 1e-12 || (k.phase - 2.0 * PI).abs() < 1e-12);
        let basis = basis_norms(1, 7).unwrap();
        assert!((szego_basis_sum(&basis, &x, &x).unwrap() - c(8.0 / PI, 0.0)).norm() < 1e-12);

        let e0 = ProjectivePoint::basis(1, 0);
        let e1 = ProjectivePoint::basis(1, 1);
        assert_eq!(szego(3, &e0, &e1).unwrap().abs(), 0.0);

        let y = unit_lift(&[c(1.0, 0.0)], 0).unwrap();
        let k = szego(2, &e0, &y).unwrap().to_complex();
        assert!((k - c(3.0 / (2.0 * PI), 0.0)).norm() < 1e-14);
        let b = basis_norms(1, 2).unwrap();
        assert!((szego_basis_sum(&b, &e0, &y).unwrap() - k).norm() < 1e-14);
    }

    #[test]
    fn hermitian_symmetry() {
        let mut rng = trial_rng(22, 0, 0);
        for _ in 0..50 {
            let x = ProjectivePoint::random(2, &mut rng);
            let y = ProjectivePoint::random(2, &mut rng);
            let a = szego(6, &x, &y).unwrap().to_complex();
            let b = szego(6, &y, &x).unwrap().to_complex();
            assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1e-300));
            assert!(szego(6, &x, &x).unwrap().to_complex().re > 0.0);
        }
    }

    #[test]
    fn diagonal_examples() {
        let d = szego_diagonal(1, 9).unwrap();
        assert!((d.value - 10.0 / PI).abs() < 1e-14);
        assert_eq!(d.diagnostic.value(), 1.0 / 9.0);
        let d = szego_diagonal(2, 10).unwrap();
        assert!((d.value - 66.0 * 2.0 / (PI * PI)).abs() < 1e-12);
        assert_eq!(d.diagnostic, DiagonalDiagnostic { numerator: 32, denominator: 100 });
        assert_eq!(d.diagnostic.value(), 0.32);
        let seq: Vec<f64> = (1..50).map(|n| szego_diagonal(3, n).unwrap().diagnostic.value()).collect();
        assert!(seq.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn heisenberg_examples() {
        let z = HeisenbergPoint::new(vec![c(0.0, 0.0)], 0.0);
        assert!((heisenberg(&z, &z).unwrap() - c(1.0 / PI, 0.0)).norm() < 1e-15);
        let u = HeisenbergPoint::new(vec![c(0.4, -1.1), c(0.2, 0.3)], 0.7);
        let k = heisenberg(&u, &u).unwrap();
        assert!((k - c(1.0 / (PI * PI), 0.0)).norm() < 1e-15);
        let u = HeisenbergPoint::new(vec![c(0.6, 0.8)], 0.0);
        let k = heisenberg(&u, &z).unwrap();
        assert!((k.norm() - (-0.5f64).exp() / PI).abs() < 1e-15);
        let v = HeisenbergPoint::new(vec![c(-0.3, 0.1)], 1.0);
        assert!(heisenberg(&u, &v).unwrap().norm() < 1.0 / PI);
    }

    #[test]
    fn scaling_limit_diagonal_term() {
        // at u = v = 0 the only error is |N^{-1}(N+1)/π - 1/π| = 1/(πN)
        for n in [10usize, 100] {
            let chart = ScalingChart::new(&ProjectivePoint::basis(1, 0), n);
            let p = chart.point(&[c(0.0, 0.0)]);
            let k = szego(n, &p, &p).unwrap().abs() / n as f64;
            assert!((k - 1.0 / PI - 1.0 / (PI * n as f64)).abs() < 1e-14);
        }
    }

    // In a normal chart on CP^m the first correction vanishes, so the error
    // decays like 1/N: quadrupling N divides it by about four.
    #[test]
    fn near_diagonal_error_decays() {
        let e: Vec<f64> = [25usize, 100, 400, 1600]
            .iter()
            .map(|&n| near_diagonal_error(1, n, 1.0, 30).unwrap())
            .collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
        for w in e.windows(2) {
            assert!((w[1] / w[0] - 0.25).abs() < 0.02, "{e:?}");
        }
        assert!(near_diagonal_error(2, 100, 1.0, 15).unwrap() < 0.01);
        assert!(matches!(near_diagonal_error(1, 10, 1.5, 5), Err(Error::ChartRadius { .. })));
    }

    #[test]
    fn chart_distances_scale_like_sqrt_n() {
        let mut rng = trial_rng(23, 0, 0);
        let base = ProjectivePoint::random(2, &mut rng);
        let chart = ScalingChart::new(&base, 400);
        let d = fs_distance(&chart.point(&[c(0.0, 0.0), c(0.0, 0.0)]), &base);
        assert!(d < 1e-7);
        let p = chart.point(&[c(0.5, 0.0), c(0.0, 0.0)]);
        assert!((fs_distance(&p, &base) * 20.0 - 0.5).abs() < 1e-3);
    }

    #[test]
    fn decay_fit_examples() {
        assert!(log_kernel_at_distance(1, 10, PI / 2.0).unwrap() < -300.0);
        let distances: Vec<f64> = (0..20).map(|k| 0.05 + 0.95 * k as f64 / 19.0).collect();
        let fit = offdiagonal_fit(1, 100, &distances).unwrap();
        assert!(fit.lambda_hat > 0.3);
        assert!(fit.residual.is_finite());
        assert!(offdiagonal_fit(1, 100, &[0.1, 0.2]).is_err());
        assert!(offdiagonal_fit(1, 100, &[0.1, 0.2, 2.0]).is_err());
        // π/2 is skipped, leaving too few points
        assert!(offdiagonal_fit(1, 100, &[0.1, 0.2, PI / 2.0]).is_err());
    }

    #[test]
    fn decay_envelope_holds_everywhere() {
        for n in [100usize, 400, 1600] {
            let t: Vec<f64> = (0..30).map(|k| (0.5 + 3.5 * k as f64 / 29.0) / (n as f64).sqrt()).collect();
            let fit = offdiagonal_fit(1, n, &t).unwrap();
            let cstar = fit.envelope_constant(1, n).unwrap();
            for k in 1..=2000 {
                let d = PI / 2.0 * k as f64 / 2000.0;
                let lhs = log_kernel_at_distance(1, n, d).unwrap();
                let rhs = cstar.ln() + (n as f64).ln() - fit.lambda_hat * (n as f64).sqrt() * d;
                assert!(lhs <= rhs + 1e-9);
            }
        }
    }

    #[test]
    fn gaussian_regime() {
        for n in [10usize, 100, 1000] {
            let dmax = (n as f64).powf(-1.0 / 3.0);
            for k in 0..=200 {
                let d = dmax * k as f64 / 200.0;
                let lhs = log_kernel_at_distance(1, n, d).unwrap().exp();
                assert!(lhs <= gaussian_regime_bound(1, n, d));
            }
        }
    }

    #[test]
    fn coherent_state_examples() {
        let mut rng = trial_rng(24, 0, 0);
        let w = ProjectivePoint::random(1, &mut rng);
        let s = coherent_state(10, &w).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let peak = evaluate(&s, &w).unwrap().magnitude;
        assert!((peak - (11.0 / PI).sqrt()).abs() < 1e-10);
        assert!((peak - 1.871).abs() < 1e-3);
        for _ in 0..20 {
            let z = ProjectivePoint::random(1, &mut rng);
            let ratio = evaluate(&s, &z).unwrap().magnitude / peak;
            assert!((ratio - z.inner(&w).norm().powi(10)).abs() < 1e-10);
        }
        let g = build_grid(1, 10_000, GridKind::Lattice).unwrap();
        let basis = basis_norms(1, 10).unwrap();
        let ev = crate::ensembles::SectionEvaluator::new(&s, &basis).unwrap();
        assert!((g.integrate(|x| ev.magnitude(x).powi(2)) - 1.0).abs() < 1e-2);
        // argmax over the grid lies within two meshes of w
        let best = g
            .nodes()
            .iter()
            .max_by(|a, b| ev.magnitude(a).total_cmp(&ev.magnitude(b)))
            .unwrap();
        assert!(fs_distance(best, &w) <= 2.0 * g.mesh().unwrap());
    }

    #[test]
    fn lr_integral_oracle() {
        let g = build_grid(1, 20_000, GridKind::Lattice).unwrap();
        let z = ProjectivePoint::from_lift(vec![c(0.6, 0.1), c(-0.3, 0.7)]).unwrap();
        for (n, r) in [(5usize, 1.0), (5, 2.0), (10, 4.0), (25, 1.5)] {
            let est = kernel_lr_integral(n, r, &z, &g).unwrap();
            let exact = kernel_lr_integral_exact(1, n, r).unwrap();
            // m = 1: ((N+1)/π)^r · π · 2/(Nr + 2)
            let by_hand = ((n as f64 + 1.0) / PI).powf(r) * PI * 2.0 / (n as f64 * r + 2.0);
            assert!((exact - by_hand).abs() < 1e-12 * by_hand);
            assert!((est - exact).abs() < 1e-3 * exact, "N={n} r={r}: {est} vs {exact}");
        }
        // reproducing property at r = 2
        for n in [3usize, 50, 400] {
            let v = kernel_lr_integral_exact(1, n, 2.0).unwrap();
            assert!((v - (n as f64 + 1.0) / PI).abs() < 1e-12 * v);
        }
        let v = kernel_lr_integral_exact(2, 6, 2.0).unwrap();
        assert!((v - szego_diagonal(2, 6).unwrap().value).abs() < 1e-12 * v);
    }

    #[test]
    fn lr_exponents() {
        let ns = [25.0, 100.0, 400.0];
        let at = |r: f64| -> Vec<f64> { ns.iter().map(|&n| kernel_lr_integral_exact(1, n as usize, r).unwrap()).collect() };
        let r1 = at(1.0);
        assert!((r1[1] / r1[0] - 1.0).abs() < 0.1);
        let k4 = crate::fit::power_law_exponent(&ns, &at(4.0)).unwrap();
        assert!((k4 - 3.0).abs() < 0.15, "{k4}");
    }

    #[test]
    fn overlap_examples() {
        let mut rng = trial_rng(25, 0, 0);
        let w = ProjectivePoint::random(1, &mut rng);
        let s = coherent_state(12, &w).unwrap();
        assert!((overlap_angle(&s, &w).unwrap() - 1.0).abs() < 1e-10);
        // a section vanishing at e_0: only the (0, N) monomial
        let spec = EnsembleSpec::new(1, 4, Measure::HaarSphere).unwrap();
        let mut coeffs = vec![c(0.0, 0.0); 5];
        coeffs[0] = c(1.0, 0.0);
        let s = SectionCoefficients::new(spec, coeffs).unwrap();
        assert!(overlap_angle(&s, &ProjectivePoint::basis(1, 0)).unwrap() < 1e-15);
        // |s(x)| = √(d_N/V_m) cos θ_x
        let s = sample(&spec, &mut rng);
        let x = ProjectivePoint::random(1, &mut rng);
        let lhs = evaluate(&s, &x).unwrap().magnitude;
        let rhs = (5.0 / PI).sqrt() * overlap_angle(&s, &x).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        assert!(matches!(overlap_angle(&s.scaled(2.0), &x), Err(Error::NotUnitNorm(_))));
    }

    #[test]
    fn schwarz_bound() {
        let mut rng = trial_rng(26, 0, 0);
        let spec = EnsembleSpec::new(1, 15, Measure::HaarSphere).unwrap();
        let bound = (16.0 / PI).sqrt();
        for _ in 0..1000 {
            let s = sample(&spec, &mut rng);
            let x = ProjectivePoint::random(1, &mut rng);
            assert!(evaluate(&s, &x).unwrap().magnitude <= bound * (1.0 + 1e-12));
        }
    }
}
