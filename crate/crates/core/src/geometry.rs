//! Points, Fubini–Study distance and quadrature on `CP^m`.
//!
//! A point is stored as a unit-norm lift in `C^{m+1}`. The total volume is
//! fixed to `V_m = π^m / m!`; with this normalization `CP^1` is a round sphere
//! of radius 1/2 and the distance `arccos |<x, y>|` is its intrinsic metric.

use alloc::{format, vec, vec::Vec};
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::{rng::complex_gaussian, Error, Result, C64};

/// Total volume `V_m = π^m / m!`.
pub fn total_volume(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc * PI / k as f64)
}

/// A point of `CP^m` given by a unit-norm lift.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    lift: Vec<C64>,
    chart_hint: usize,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn largest_index(v: &[C64]) -> usize {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm_sqr() > v[best].norm_sqr() {
            best = i;
        }
    }
    best
}

impl ProjectivePoint {
    /// Normalizes `lift` to unit length. The phase is kept as given.
    pub fn from_lift(mut lift: Vec<C64>) -> Result<Self> {
        if lift.len() < 2 {
            return Err(Error::InvalidPoint("lift needs at least two coordinates"));
        }
        if lift.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate"));
        }
        let n = norm(&lift);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidPoint("zero lift"));
        }
        for z in lift.iter_mut() {
            *z /= n;
        }
        let chart_hint = largest_index(&lift);
        Ok(Self { lift, chart_hint })
    }

    /// The coordinate point `e_i` of `CP^m`.
    pub fn basis(m: usize, i: usize) -> Self {
        let mut lift = vec![C64::new(0.0, 0.0); m + 1];
        lift[i] = C64::new(1.0, 0.0);
        Self { lift, chart_hint: i }
    }

    /// Uniformly distributed point (pushforward of the round measure on `S^{2m+1}`).
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        loop {
            let v: Vec<C64> = (0..=m).map(|_| complex_gaussian(rng)).collect();
            if let Ok(p) = Self::from_lift(v) {
                return p;
            }
        }
    }

    pub fn lift(&self) -> &[C64] {
        &self.lift
    }

    /// Complex dimension `m`.
    pub fn dim(&self) -> usize {
        self.lift.len() - 1
    }

    /// Index of the largest-modulus coordinate.
    pub fn chart_hint(&self) -> usize {
        self.chart_hint
    }

    /// Hermitian product `Σ x_i conj(y_i)` of the lifts.
    pub fn inner(&self, other: &Self) -> C64 {
        self.lift
            .iter()
            .zip(&other.lift)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// Same projective point, lift multiplied by `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        let u = C64::from_polar(1.0, phi);
        Self {
            lift: self.lift.iter().map(|z| z * u).collect(),
            chart_hint: self.chart_hint,
        }
    }

    /// Canonical lift: largest-modulus coordinate real and positive.
    pub fn canonical(&self) -> Self {
        let k = self.chart_hint;
        let phase = self.lift[k].arg();
        self.with_phase(-phase)
    }

    /// Affine coordinates `x_j / x_chart`, `j != chart`.
    pub fn affine(&self, chart: usize) -> Option<Vec<C64>> {
        let pivot = *self.lift.get(chart)?;
        if pivot.norm_sqr() == 0.0 {
            return None;
        }
        Some(
            self.lift
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != chart)
                .map(|(_, z)| z / pivot)
                .collect(),
        )
    }

    /// Orthonormal basis (complex) of the horizontal space `lift^⊥`.
    pub fn tangent_basis(&self) -> Vec<Vec<C64>> {
        let n = self.lift.len();
        let mut out: Vec<Vec<C64>> = Vec::with_capacity(n - 1);
        for j in (0..n).filter(|&j| j != self.chart_hint) {
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[j] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                let against = core::iter::once(&self.lift).chain(out.iter());
                for b in against {
                    let c: C64 = v.iter().zip(b).map(|(a, bb)| a * bb.conj()).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= c * bi;
                    }
                }
            }
            let nv = norm(&v);
            for z in v.iter_mut() {
                *z /= nv;
            }
            out.push(v);
        }
        out
    }

    /// Point at distance `t` along the horizontal unit direction `dir`:
    /// `cos t · x + sin t · dir`.
    pub fn geodesic(&self, dir: &[C64], t: f64) -> Self {
        let (s, c) = t.sin_cos();
        let lift = self
            .lift
            .iter()
            .zip(dir)
            .map(|(x, v)| x * c + v * s)
            .collect();
        Self::from_lift(lift).expect("geodesic of unit vectors stays finite")
    }
}

/// Lift of the affine point `affine` in chart `chart`; the chart coordinate
/// comes out real and positive.
pub fn unit_lift(affine: &[C64], chart: usize) -> Result<ProjectivePoint> {
    let m = affine.len();
    if chart > m {
        return Err(Error::InvalidPoint("chart index out of range"));
    }
    let mut lift = Vec::with_capacity(m + 1);
    lift.extend_from_slice(&affine[..chart]);
    lift.push(C64::new(1.0, 0.0));
    lift.extend_from_slice(&affine[chart..]);
    ProjectivePoint::from_lift(lift)
}

/// Fubini–Study distance `arccos |<x, y>|` in `[0, π/2]`.
///
/// Evaluated as `atan2(|x ∧ y|, |<x, y>|)` to stay accurate near both ends.
pub fn fs_distance(x: &ProjectivePoint, y: &ProjectivePoint) -> f64 {
    let (a, b) = (x.lift(), y.lift());
    let mut wedge = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    wedge.sqrt().atan2(x.inner(y).norm())
}

/// Unitary matrix acting on lifts.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    n: usize,
    // row-major
    entries: Vec<C64>,
}

impl Unitary {
    /// A unitary whose first column is `target`, i.e. `U e_0 = target`.
    pub fn moving_origin_to(target: &ProjectivePoint) -> Self {
        let mut columns = vec![target.lift().to_vec()];
        columns.extend(target.tangent_basis());
        Self::from_columns(&columns)
    }

    /// Haar-random unitary via Gram–Schmidt on a complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
        while columns.len() < n {
            let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
            for _ in 0..2 {
                for b in &columns {
                    let c: C64 = v.iter().zip(b).map(|(a, bb)| a * bb.conj()).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= c * bi;
                    }
                }
            }
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|z| *z /= nv);
                columns.push(v);
            }
        }
        Self::from_columns(&columns)
    }

    fn from_columns(columns: &[Vec<C64>]) -> Self {
        let n = columns.len();
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                entries[i * n + j] = *z;
            }
        }
        Self { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entries[i * self.n + j] * v[j]).sum())
            .collect()
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_lift(self.apply_vec(p.lift())).expect("unitary image is a unit vector")
    }
}

/// How the quadrature nodes are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Equal-area spiral (Fibonacci) lattice on `S^2 = CP^1`; `m = 1` only.
    Lattice,
    /// Equal-weight Kronecker (R-sequence) points pushed to `CP^m`.
    LowDiscrepancy,
}

/// Covering constant of the spiral lattice in Fubini–Study units:
/// `mesh ≤ LATTICE_MESH_CONSTANT / √n`. The measured value is ≈ 1.3665.
pub const LATTICE_MESH_CONSTANT: f64 = 1.4;

/// Default node cap for covering grids.
pub const DEFAULT_COVERING_CAP: usize = 4_000_000;

/// Quadrature nodes and weights on `CP^m`, total mass `V_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    m: usize,
    nodes: Vec<ProjectivePoint>,
    weights: Vec<f64>,
    mesh: Option<f64>,
}

impl QuadratureGrid {
    /// Validating constructor used by deserializers.
    pub fn from_parts(
        m: usize,
        nodes: Vec<ProjectivePoint>,
        weights: Vec<f64>,
        mesh: Option<f64>,
    ) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidGrid(format!(
                "{} nodes vs {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(p) = nodes.iter().find(|p| p.dim() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: p.dim() });
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidGrid("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let v = total_volume(m);
        if ((total - v) / v).abs() > 1e-10 {
            return Err(Error::InvalidGrid(format!("weights sum to {total}, expected {v}")));
        }
        Ok(Self { m, nodes, weights, mesh })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ProjectivePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Covering radius in Fubini–Study distance, when known.
    pub fn mesh(&self) -> Option<f64> {
        self.mesh
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate<F: FnMut(&ProjectivePoint) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

fn equal_weights(m: usize, n: usize) -> Vec<f64> {
    let v = total_volume(m);
    let w = v / n as f64;
    let mut weights = vec![w; n];
    // absorb the rounding of n · (V/n) in the last weight
    let rest: f64 = weights[..n - 1].iter().sum();
    weights[n - 1] = v - rest;
    weights
}

fn spiral_lattice(n: usize) -> Vec<ProjectivePoint> {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let phi = 2.0 * PI * ((k as f64 / golden) % 1.0);
            // polar angle Θ with cos Θ = z; the lift is (cos Θ/2, sin Θ/2 · e^{iφ})
            let c = ((1.0 + z) / 2.0).max(0.0).sqrt();
            let s = ((1.0 - z) / 2.0).max(0.0).sqrt();
            ProjectivePoint::from_lift(vec![C64::new(c, 0.0), C64::from_polar(s, phi)])
                .expect("lattice point")
        })
        .collect()
}

/// Generalized golden ratio: the positive root of `x^{d+1} = x + 1`.
fn harmonious(d: usize) -> f64 {
    let mut x = 2.0f64;
    for _ in 0..64 {
        let f = x.powi(d as i32 + 1) - x - 1.0;
        let df = (d as f64 + 1.0) * x.powi(d as i32) - 1.0;
        x -= f / df;
    }
    x
}

fn kronecker_points(m: usize, n: usize) -> Vec<ProjectivePoint> {
    let dims = 2 * m + 1;
    let g = harmonious(dims);
    let alpha: Vec<f64> = (1..=dims).map(|j| (1.0 / g.powi(j as i32)) % 1.0).collect();
    (1..=n)
        .map(|k| {
            let u: Vec<f64> = alpha
                .iter()
                .map(|a| (0.5 + k as f64 * a) % 1.0)
                .collect();
            // normalized exponentials are uniform on the simplex of |x_i|^2
            let e: Vec<f64> = u[..=m].iter().map(|&t| -(t.max(1e-300)).ln()).collect();
            let total: f64 = e.iter().sum();
            let mut lift = Vec::with_capacity(m + 1);
            lift.push(C64::new((e[0] / total).sqrt(), 0.0));
            for i in 1..=m {
                lift.push(C64::from_polar((e[i] / total).sqrt(), 2.0 * PI * u[m + i]));
            }
            ProjectivePoint::from_lift(lift).expect("kronecker point")
        })
        .collect()
}

/// Equal-weight quadrature grid with `node_count` nodes.
pub fn build_grid(m: usize, node_count: usize, kind: GridKind) -> Result<QuadratureGrid> {
    if m == 0 {
        return Err(Error::InvalidGrid("m must be at least 1".into()));
    }
    if node_count == 0 {
        return Err(Error::InvalidGrid("node_count must be at least 1".into()));
    }
    let (nodes, mesh) = match kind {
        GridKind::Lattice => {
            if m != 1 {
                return Err(Error::LatticeUnsupported(m));
            }
            (
                spiral_lattice(node_count),
                Some(LATTICE_MESH_CONSTANT / (node_count as f64).sqrt()),
            )
        }
        GridKind::LowDiscrepancy => (kronecker_points(m, node_count), None),
    };
    Ok(QuadratureGrid {
        m,
        nodes,
        weights: equal_weights(m, node_count),
        mesh,
    })
}

/// Ball radius `R_N = N^{-(m+1)/2}` of the covering argument.
pub fn covering_radius(m: usize, degree: usize) -> f64 {
    (degree as f64).powf(-((m + 1) as f64) / 2.0)
}

/// Lattice whose mesh is at most `R_N`.
pub fn covering_grid(m: usize, degree: usize) -> Result<QuadratureGrid> {
    covering_grid_with_cap(m, degree, DEFAULT_COVERING_CAP)
}

pub fn covering_grid_with_cap(m: usize, degree: usize, cap: usize) -> Result<QuadratureGrid> {
    if degree == 0 {
        return Err(Error::InvalidGrid("degree must be at least 1".into()));
    }
    if m != 1 {
        // ~N^{m(m+1)} balls and no lattice construction: never attempted
        let needed = (degree as u128)
            .checked_pow((m * (m + 1)) as u32)
            .unwrap_or(u128::MAX);
        return Err(Error::InfeasibleGrid { needed, cap: 0 });
    }
    let r = covering_radius(m, degree);
    let needed = (LATTICE_MESH_CONSTANT / r).powi(2).ceil();
    if needed > cap as f64 {
        return Err(Error::InfeasibleGrid { needed: needed as u128, cap });
    }
    build_grid(m, needed as usize, GridKind::Lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn unit_lift_examples() {
        let p = unit_lift(&[c(0.0, 0.0)], 0).unwrap();
        assert_eq!(p.lift(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let p = unit_lift(&[c(1.0, 0.0)], 0).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((p.lift()[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((p.lift()[1] - c(h, 0.0)).norm() < 1e-15);
        let p = unit_lift(&[c(0.0, 1.0), c(0.0, 0.0)], 0).unwrap();
        assert!((p.lift()[0] - c(h, 0.0)).norm() < 1e-15);
        assert!((p.lift()[1] - c(0.0, h)).norm() < 1e-15);
        assert_eq!(p.lift()[2], c(0.0, 0.0));
        // chart coordinate is real positive in any chart
        let p = unit_lift(&[c(3.0, -2.0), c(0.5, 0.5)], 1).unwrap();
        assert!(p.lift()[1].im == 0.0 && p.lift()[1].re > 0.0);
        assert!(unit_lift(&[c(1.0, 0.0)], 2).is_err());
    }

    #[test]
    fn distance_examples() {
        let x = ProjectivePoint::basis(1, 0);
        let y = ProjectivePoint::basis(1, 1);
        assert_eq!(fs_distance(&x, &x), 0.0);
        assert!((fs_distance(&x, &y) - PI / 2.0).abs() < 1e-15);
        let a = unit_lift(&[c(0.0, 0.0)], 0).unwrap();
        let b = unit_lift(&[c(1.0, 0.0)], 0).unwrap();
        assert!((fs_distance(&a, &b) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_phase() {
        let p = ProjectivePoint::from_lift(vec![c(0.1, 0.2), c(-0.7, 0.4)]).unwrap();
        let q = p.canonical();
        assert_eq!(q.chart_hint(), 1);
        assert!(q.lift()[1].im.abs() < 1e-15 && q.lift()[1].re > 0.0);
        assert!(fs_distance(&p, &q) < 1e-7);
    }

    #[test]
    fn rejects_bad_lifts() {
        assert!(ProjectivePoint::from_lift(vec![c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(ProjectivePoint::from_lift(vec![c(1.0, 0.0)]).is_err());
        assert!(ProjectivePoint::from_lift(vec![c(f64::NAN, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let mut rng = trial_rng(3, 0, 0);
        let p = ProjectivePoint::random(3, &mut rng);
        let t = p.tangent_basis();
        assert_eq!(t.len(), 3);
        let dot = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x * y.conj()).sum() };
        for (i, v) in t.iter().enumerate() {
            assert!(dot(v, p.lift()).norm() < 1e-14);
            for (j, w) in t.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(v, w) - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
        let q = p.geodesic(&t[0], 0.3);
        assert!((fs_distance(&p, &q) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn unitary_moves_origin() {
        let mut rng = trial_rng(4, 0, 0);
        let z = ProjectivePoint::random(2, &mut rng);
        let u = Unitary::moving_origin_to(&z);
        let image = u.apply(&ProjectivePoint::basis(2, 0));
        assert!(fs_distance(&image, &z) < 1e-7);
        let r = Unitary::random(3, &mut rng);
        let a = ProjectivePoint::random(2, &mut rng);
        let b = ProjectivePoint::random(2, &mut rng);
        assert!((fs_distance(&a, &b) - fs_distance(&r.apply(&a), &r.apply(&b))).abs() < 1e-12);
    }

    #[test]
    fn lattice_weights_sum_to_volume() {
        let g = build_grid(1, 1000, GridKind::Lattice).unwrap();
        assert!((g.total_weight() - PI).abs() < 1e-10 * PI);
        assert!((g.integrate(|_| 1.0) - PI).abs() < 1e-10 * PI);
        assert!(g.weights().iter().all(|w| *w > 0.0));
        for m in 1..=3 {
            let g = build_grid(m, 500, GridKind::LowDiscrepancy).unwrap();
            let v = total_volume(m);
            assert!((g.total_weight() - v).abs() < 1e-10 * v);
        }
    }

    #[test]
    fn lattice_rejected_for_higher_m() {
        assert_eq!(build_grid(2, 10, GridKind::Lattice), Err(Error::LatticeUnsupported(2)));
        assert!(build_grid(1, 0, GridKind::Lattice).is_err());
    }

    #[test]
    fn volumes() {
        assert_eq!(total_volume(1), PI);
        assert!((total_volume(2) - PI * PI / 2.0).abs() < 1e-15);
        assert!((total_volume(3) - PI.powi(3) / 6.0).abs() < 1e-14);
    }

    // ∫ |<x, y>|^{2N} dV(y) = V_m m! N! / (N+m)!, which is π/(N+1) on CP^1.
    #[test]
    fn lattice_integrates_kernel_moments() {
        let g = build_grid(1, 10_000, GridKind::Lattice).unwrap();
        let mut rng = trial_rng(5, 0, 0);
        let x = ProjectivePoint::random(1, &mut rng);
        for n in [1, 5, 20] {
            let est = g.integrate(|y| x.inner(y).norm_sqr().powi(n));
            let exact = PI / (n as f64 + 1.0);
            assert!((est - exact).abs() < 1e-3, "N={n}: {est} vs {exact}");
        }
    }

    #[test]
    fn low_discrepancy_moments_m2() {
        let g = build_grid(2, 40_000, GridKind::LowDiscrepancy).unwrap();
        let x = ProjectivePoint::from_lift(vec![c(0.3, 0.1), c(0.5, -0.2), c(0.1, 0.7)]).unwrap();
        for n in [1usize, 3] {
            let est = g.integrate(|y| x.inner(y).norm_sqr().powi(n as i32));
            // V_2 · 2! · N! / (N+2)!
            let exact = total_volume(2) * 2.0 / ((n + 1) * (n + 2)) as f64;
            assert!((est - exact).abs() < 2e-3 * exact.max(1.0), "N={n}: {est} vs {exact}");
        }
    }

    #[test]
    fn covering_grid_examples() {
        let g = covering_grid(1, 4).unwrap();
        assert!(g.mesh().unwrap() <= 0.25);
        let g = covering_grid(1, 100).unwrap();
        assert!(g.len() <= DEFAULT_COVERING_CAP);
        assert!(g.mesh().unwrap() <= covering_radius(1, 100));
        assert!(matches!(covering_grid(2, 3), Err(Error::InfeasibleGrid { .. })));
        assert!(matches!(
            covering_grid_with_cap(1, 1000, 10_000),
            Err(Error::InfeasibleGrid { .. })
        ));
    }

    // Brute-force probe of the covering radius against the reported mesh.
    #[test]
    fn lattice_mesh_bound_holds_under_probing() {
        let mut rng = trial_rng(6, 0, 0);
        for n in [50usize, 400, 2000] {
            let g = build_grid(1, n, GridKind::Lattice).unwrap();
            let mesh = g.mesh().unwrap();
            let mut worst: f64 = 0.0;
            for _ in 0..4000 {
                let p = ProjectivePoint::random(1, &mut rng);
                let near = g
                    .nodes()
                    .iter()
                    .map(|q| fs_distance(&p, q))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(near);
            }
            assert!(worst <= mesh, "n={n}: probed {worst} > mesh {mesh}");
            // the constant is not loose by more than ~25%
            assert!(worst > 0.75 * mesh, "n={n}: probed {worst}, mesh {mesh}");
        }
    }
}
