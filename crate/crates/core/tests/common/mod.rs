//! Shared helpers for integration tests.
#![allow(dead_code)]

pub mod ot;

use gyrator::SymMat2;
use rand::Rng;

/// Random SPD matrix with eigenvalues in `[lo, hi]`.
pub fn random_spd(rng: &mut impl Rng, lo: f64, hi: f64) -> SymMat2 {
    let l1 = rng.random_range(lo..hi);
    let l2 = rng.random_range(lo..hi);
    let phi = rng.random_range(0.0..std::f64::consts::PI);
    SymMat2::from_eigen(l1.max(l2), l1.min(l2), phi)
}
