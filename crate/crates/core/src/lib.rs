//! Random holomorphic sections of `O(N)` over complex projective space.
//!
//! Everything in this crate is pure numerics: points and quadrature on `CP^m`,
//! the orthonormal monomial basis of `H^0(CP^m, O(N))`, the closed-form Szegő
//! kernel and its scaling limits, `L^p` / sup / gradient norms of sections, and
//! exact probabilistic oracles plus Monte Carlo estimators for their tails.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and thread pools live in the `szego-lab` crate.
//!
//! Volume convention: the total volume of `CP^m` is `V_m = π^m / m!`, so that
//! the diagonal of the Szegő kernel is `d_N / V_m = π^{-m} N^m + O(N^{m-1})`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod concentration;
pub mod ensembles;
mod error;
pub mod fit;
pub mod geometry;
pub mod kernels;
pub mod norms;
pub mod rng;
pub mod special;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub use concentration::{Functional, FunctionalEvaluator, MedianEstimate, Sequential, TailEstimate, TrialRunner};
pub use ensembles::{BasisNormalizer, EnsembleSpec, Measure, SectionCoefficients};
pub use geometry::{GridKind, ProjectivePoint, QuadratureGrid};
pub use kernels::{DecayFit, HeisenbergPoint, KernelValue};
pub use norms::{MappingNormBounds, NormMethod, NormReport, SupSearch, SupStrategy};
