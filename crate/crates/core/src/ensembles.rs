//! Section spaces `H^0(CP^m, O(N))`, their orthonormal monomial bases and
//! random sections.
//!
//! Sections are homogeneous polynomials of degree `N` in `m + 1` variables,
//! evaluated on unit lifts. The basis element for the multi-index `α`
//! (`|α| = N`) is `b_α x^α` with
//! `b_α² = (N+m)! / (m! α! V_m)`, which is orthonormal for the volume
//! `V_m = π^m / m!`. Multi-indices are ordered lexicographically.

use alloc::{format, vec, vec::Vec};

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{total_volume, ProjectivePoint, QuadratureGrid};
use crate::rng::complex_gaussian;
use crate::special::{binomial, ln_factorial};
use crate::{Error, Result, C64};

/// Largest section-space dimension the crate will build a basis for.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 22;

// Above this the Horner fast path for m = 1 would over/underflow.
const HORNER_MAX_DEGREE: usize = 1800;

/// Probability law on the coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Uniform on the unit sphere of `C^{d_N}`.
    HaarSphere,
    /// iid standard complex Gaussians.
    Gaussian,
}

/// `(m, N, measure)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub m: usize,
    #[serde(rename = "N")]
    pub degree: usize,
    pub measure: Measure,
}

impl EnsembleSpec {
    pub fn new(m: usize, degree: usize, measure: Measure) -> Result<Self> {
        let spec = Self { m, degree, measure };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.degree == 0 {
            return Err(Error::InvalidEnsemble(format!(
                "need m >= 1 and N >= 1, got m = {}, N = {}",
                self.m, self.degree
            )));
        }
        dimension(self.m, self.degree).map(|_| ())
    }

    /// `d_N`.
    pub fn dimension(&self) -> usize {
        dimension(self.m, self.degree).expect("validated spec")
    }
}

/// `d_N = C(N + m, m)`.
pub fn dimension(m: usize, degree: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidEnsemble("m must be at least 1".into()));
    }
    binomial((degree + m) as u64, m as u64)
        .and_then(|d| usize::try_from(d).ok())
        .ok_or(Error::DimensionOverflow { m, degree })
}

/// All `α ∈ N^{m+1}` with `|α| = N`, in lexicographic order.
pub fn multi_indices(m: usize, degree: usize) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, slots: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=left {
            prefix.push(first);
            fill(prefix, slots - 1, left - first, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(m + 1), m + 1, degree as u32, &mut out);
    out
}

/// Orthonormalizing constants `b_α` of the monomial basis (stored as `ln b_α`).
#[derive(Debug, Clone, PartialEq)]
pub struct BasisNormalizer {
    m: usize,
    degree: usize,
    indices: Vec<Vec<u32>>,
    log_norms: Vec<f64>,
}

/// Worst Gram-matrix deviations from the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramReport {
    pub max_off_diagonal: f64,
    pub max_diagonal_deviation: f64,
}

/// Closed-form normalizers for `(m, N)`; dimension capped at
/// [`DEFAULT_DIMENSION_CAP`].
pub fn basis_norms(m: usize, degree: usize) -> Result<BasisNormalizer> {
    let d = dimension(m, degree)?;
    if d > DEFAULT_DIMENSION_CAP {
        return Err(Error::DimensionOverflow { m, degree });
    }
    let indices = multi_indices(m, degree);
    let common = ln_factorial((degree + m) as u64) - ln_factorial(m as u64) - total_volume(m).ln();
    let log_norms = indices
        .iter()
        .map(|a| 0.5 * (common - a.iter().map(|&k| ln_factorial(k as u64)).sum::<f64>()))
        .collect();
    Ok(BasisNormalizer { m, degree, indices, log_norms })
}

impl BasisNormalizer {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of basis elements `d_N`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[Vec<u32>] {
        &self.indices
    }

    pub fn log_norms(&self) -> &[f64] {
        &self.log_norms
    }

    /// Position of `α` in the basis order.
    pub fn position(&self, alpha: &[u32]) -> Option<usize> {
        self.indices.binary_search_by(|a| a.as_slice().cmp(alpha)).ok()
    }

    /// Gram matrix of the basis under `grid`, compared with the identity.
    pub fn gram_report(&self, grid: &QuadratureGrid) -> Result<GramReport> {
        check_dim(self.m, grid.dim())?;
        let d = self.len();
        let mut gram = vec![C64::new(0.0, 0.0); d * d];
        for (x, w) in grid.nodes().iter().zip(grid.weights()) {
            let phi = lifted_map(x, self);
            for a in 0..d {
                let pa = phi[a] * *w;
                for b in a..d {
                    gram[a * d + b] += pa * phi[b].conj();
                }
            }
        }
        let mut report = GramReport { max_off_diagonal: 0.0, max_diagonal_deviation: 0.0 };
        for a in 0..d {
            report.max_diagonal_deviation =
                report.max_diagonal_deviation.max((gram[a * d + a].re - 1.0).abs());
            for b in a + 1..d {
                report.max_off_diagonal = report.max_off_diagonal.max(gram[a * d + b].norm());
            }
        }
        Ok(report)
    }

    /// Fails with [`Error::NormalizationMismatch`] when the Gram matrix under
    /// `grid` is farther than `tol` from the identity.
    pub fn validate(&self, grid: &QuadratureGrid, tol: f64) -> Result<GramReport> {
        let report = self.gram_report(grid)?;
        if report.max_off_diagonal > tol || report.max_diagonal_deviation > tol {
            return Err(Error::NormalizationMismatch(format!(
                "m = {}, N = {}: off-diagonal {:.3e}, diagonal {:.3e}, tolerance {:.1e}",
                self.m, self.degree, report.max_off_diagonal, report.max_diagonal_deviation, tol
            )));
        }
        Ok(report)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Coefficients of a section in the orthonormal monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionCoefficients {
    spec: EnsembleSpec,
    coeffs: Vec<C64>,
}

impl SectionCoefficients {
    pub fn new(spec: EnsembleSpec, coeffs: Vec<C64>) -> Result<Self> {
        spec.validate()?;
        check_dim(spec.dimension(), coeffs.len())?;
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidEnsemble("non-finite coefficient".into()));
        }
        Ok(Self { spec, coeffs })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Euclidean norm of the coefficient vector (= L² norm of the section).
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Same section with coefficients multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|c| c * t).collect(),
        }
    }

    /// Same coefficients normalized to unit length.
    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.norm())
    }
}

/// Draws a random section. The Haar law is obtained by normalizing a
/// Gaussian vector.
pub fn sample<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> SectionCoefficients {
    let d = spec.dimension();
    let mut coeffs: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    if spec.measure == Measure::HaarSphere {
        let n = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        coeffs.iter_mut().for_each(|c| *c /= n);
    }
    SectionCoefficients { spec: *spec, coeffs }
}

/// The lifted Kodaira map `(b_α x^α)_α`, evaluated in the log domain.
pub fn lifted_map(x: &ProjectivePoint, basis: &BasisNormalizer) -> Vec<C64> {
    let lift = x.lift();
    let log_abs: Vec<f64> = lift.iter().map(|z| z.norm().ln()).collect();
    let args: Vec<f64> = lift.iter().map(|z| z.arg()).collect();
    basis
        .indices
        .iter()
        .zip(&basis.log_norms)
        .map(|(alpha, log_b)| {
            let mut log_mag = *log_b;
            let mut phase = 0.0;
            for (i, &k) in alpha.iter().enumerate() {
                if k > 0 {
                    log_mag += k as f64 * log_abs[i];
                    phase += k as f64 * args[i];
                }
            }
            if log_mag == f64::NEG_INFINITY {
                C64::new(0.0, 0.0)
            } else {
                C64::from_polar(log_mag.exp(), phase)
            }
        })
        .collect()
}

/// `Φ̃_N(x)` without a prebuilt basis.
pub fn lifted_map_for(x: &ProjectivePoint, degree: usize) -> Result<Vec<C64>> {
    Ok(lifted_map(x, &basis_norms(x.dim(), degree)?))
}

/// Value of a section at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// `ŝ_N(x) = c · Φ̃_N(x)` on the given lift.
    pub amplitude: C64,
    /// `|s_N(x)|`, independent of the lift's phase.
    pub magnitude: f64,
}

/// `ŝ_N(x)` and `|s_N(x)|`.
pub fn evaluate(s: &SectionCoefficients, x: &ProjectivePoint) -> Result<Evaluation> {
    check_dim(s.spec.m, x.dim())?;
    let basis = basis_norms(s.spec.m, s.spec.degree)?;
    let amplitude = SectionEvaluator::new(s, &basis)?.amplitude(x);
    Ok(Evaluation { amplitude, magnitude: amplitude.norm() })
}

/// Repeated evaluation of one section.
///
/// For `m = 1` the section is evaluated by Horner's rule in whichever affine
/// chart keeps the ratio of coordinates inside the unit disk; otherwise it
/// falls back to the log-domain lifted map.
#[derive(Debug, Clone)]
pub struct SectionEvaluator<'a> {
    basis: &'a BasisNormalizer,
    coeffs: &'a [C64],
    // c_j b_j for the m = 1 fast path, indexed by α_0
    scaled: Option<Vec<C64>>,
}

impl<'a> SectionEvaluator<'a> {
    pub fn new(s: &'a SectionCoefficients, basis: &'a BasisNormalizer) -> Result<Self> {
        check_dim(basis.m, s.spec.m)?;
        if basis.degree != s.spec.degree {
            return Err(Error::DimensionMismatch {
                expected: basis.degree,
                got: s.spec.degree,
            });
        }
        let scaled = (basis.m == 1 && basis.degree <= HORNER_MAX_DEGREE).then(|| {
            s.coeffs
                .iter()
                .zip(&basis.log_norms)
                .map(|(c, lb)| c * lb.exp())
                .collect()
        });
        Ok(Self { basis, coeffs: &s.coeffs, scaled })
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    /// `ŝ_N(x)`.
    pub fn amplitude(&self, x: &ProjectivePoint) -> C64 {
        match &self.scaled {
            Some(a) => {
                let (x0, x1) = (x.lift()[0], x.lift()[1]);
                let n = self.basis.degree as u32;
                if x1.norm_sqr() >= x0.norm_sqr() {
                    let t = x0 / x1;
                    let p = a.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * t + c);
                    p * x1.powu(n)
                } else {
                    let t = x1 / x0;
                    let p = a.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * t + c);
                    p * x0.powu(n)
                }
            }
            None => lifted_map(x, self.basis)
                .iter()
                .zip(self.coeffs)
                .map(|(phi, c)| phi * c)
                .sum(),
        }
    }

    /// `|s_N(x)|`.
    pub fn magnitude(&self, x: &ProjectivePoint) -> f64 {
        self.amplitude(x).norm()
    }

    /// Pointwise norm `|∇s_N|(x)` of the Chern covariant derivative (`m = 1`).
    ///
    /// In the affine chart `z` with `|s| = |f(z)| (1+|z|²)^{-N/2}`,
    /// `|∇s| = |f'(z) - N z̄ f(z) / (1+|z|²)| · (1+|z|²)^{1 - N/2}`;
    /// the last factor includes the metric factor `1 + |z|²` converting `dz`
    /// to a unit covector.
    pub fn gradient_norm(&self, x: &ProjectivePoint) -> Result<f64> {
        check_dim(1, x.dim())?;
        let a = self
            .scaled
            .as_ref()
            .ok_or(Error::Unsupported("gradient needs m = 1 and N <= 1800"))?;
        let (x0, x1) = (x.lift()[0], x.lift()[1]);
        // coefficients of f in descending powers of z
        let (z, descending): (C64, &mut dyn Iterator<Item = &C64>) =
            if x0.norm_sqr() >= x1.norm_sqr() {
                (x1 / x0, &mut a.iter())
            } else {
                (x0 / x1, &mut a.iter().rev())
            };
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for c in descending {
            dp = dp * z + p;
            p = p * z + c;
        }
        let w = 1.0 + z.norm_sqr();
        let n = self.basis.degree as f64;
        let covariant = dp - z.conj() * p * (n / w);
        Ok(covariant.norm() * ((1.0 - n / 2.0) * w.ln()).exp())
    }
}
