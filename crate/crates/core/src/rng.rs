//! Counter-based random streams.
//!
//! Every Monte Carlo trial draws from its own ChaCha stream keyed by
//! `(master_seed, cell)` and selected by the trial index, so a trial's
//! randomness never depends on which worker runs it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::C64;

/// Random stream for one trial.
///
/// `cell` separates independent experiment cells (for example different
/// degrees `N`) that share a master seed.
pub fn trial_rng(master_seed: u64, cell: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&cell.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Standard complex Gaussian: real and imaginary parts iid `N(0, 1/2)`,
/// so `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}
