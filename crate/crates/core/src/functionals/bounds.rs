//! Isoperimetric and efficiency bounds.

use std::f64::consts::PI;

/// `1 − 4πμ / f̄`, an upper bound on the efficiency of any cycle when
/// `f̄ ≥ A_f / A` bounds the mean work density. Negative values mean no
/// positive-work cycle exists.
pub fn efficiency_bound(mu: f64, f_bar: f64) -> f64 {
    1.0 - 4.0 * PI * mu / f_bar
}

/// `1 − 2πμ / f̄`, the efficiency bound implied by `ℓ² ≥ 2πA`, which holds
/// on the gyrator surface. With `f̄ = ½` this is `1 − 4πμ`.
pub fn rotsym_efficiency_bound(mu: f64, f_bar: f64) -> f64 {
    1.0 - 2.0 * PI * mu / f_bar
}

/// The tighter conjectured bound `1 − 8πμ` for the gyrator.
pub fn conjectured_efficiency_bound(mu: f64) -> f64 {
    1.0 - 8.0 * PI * mu
}

/// Lower bound `4πA − 4π²(A/2π − ln(1 + A/2π))` on `ℓ²` for a simple closed
/// curve of area `A` on a rotationally symmetric surface of curvature ≤ 1.
/// Never below `2πA`.
pub fn isoperimetric_bound_rotsym(area: f64) -> f64 {
    let u = area / (2.0 * PI);
    let bound = 4.0 * PI * area - 4.0 * PI * PI * (u - u.ln_1p());
    debug_assert!(bound >= 2.0 * PI * area - 1e-12 * area.abs());
    bound
}

/// `4πA + kA²`, the isoperimetric bound on `ℓ²` when the curvature is at most
/// `−k < 0`.
pub fn negative_curvature_bound(area: f64, k: f64) -> f64 {
    4.0 * PI * area + k * area * area
}
