//! Polar chart `(r, θ)` on the constant-determinant covariances and its
//! Cartesian embedding `(x, y) = (r cos θ, r sin θ)`.
//!
//! The polar chart degenerates at `r = 0` (the isotropic state). Every
//! quantity the discretized curves need is therefore also provided as a
//! smooth function of the embedding coordinates.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::matrix::SymMat2;
use crate::error::Result;

/// Lower bound on `r` for points taking part in optimization.
pub const R_MIN: f64 = 1e-3;

/// Point `(r, θ)` of the polar chart. `θ` is kept unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub const fn new(r: f64, theta: f64) -> Self {
        PolarPoint { r, theta }
    }

    /// Cartesian embedding `(r cos θ, r sin θ)`.
    pub fn embed(self) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [self.r * c, self.r * s]
    }

    /// Inverse of [`PolarPoint::embed`], choosing the branch of `θ` closest
    /// to `theta_near`.
    pub fn from_embedding(w: [f64; 2], theta_near: f64) -> Self {
        let r = w[0].hypot(w[1]);
        let raw = w[1].atan2(w[0]);
        PolarPoint { r, theta: unwrap_near(raw, theta_near) }
    }
}

/// Shifts `angle` by a multiple of 2π to lie within π of `reference`.
pub fn unwrap_near(angle: f64, reference: f64) -> f64 {
    angle + TAU * ((reference - angle) / TAU).round()
}

fn rotation(v: f64) -> [[f64; 2]; 2] {
    let (s, c) = v.sin_cos();
    [[c, s], [-s, c]]
}

/// Covariance `R(−θ/2) · diag(2ℓ²eʳ, 2ℓ²e⁻ʳ) · R(θ/2)` at chart point `p`.
pub fn sigma_from_polar(p: PolarPoint, ell_r: f64) -> SymMat2 {
    let a = rotation(-0.5 * p.theta);
    let b = rotation(0.5 * p.theta);
    let d = [2.0 * ell_r * ell_r * p.r.exp(), 2.0 * ell_r * ell_r * (-p.r).exp()];
    let mut m = [[0.0; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, out) in row.iter_mut().enumerate() {
            *out = a[i][0] * d[0] * b[0][j] + a[i][1] * d[1] * b[1][j];
        }
    }
    SymMat2::symmetrize(m)
}

/// Chart coordinates recovered from a covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartCoordinates {
    pub point: PolarPoint,
    pub ell_r: f64,
    /// `Σ` is a multiple of the identity, so `θ` is undefined (reported as 0).
    pub isotropic: bool,
}

/// Inverse chart: `ℓ_r = (det Σ / 4)^¼`, `r ≥ 0`, `θ ∈ [0, 2π)`.
pub fn polar_from_sigma(s: SymMat2) -> Result<ChartCoordinates> {
    s.require_spd()?;
    let ell_r = (s.det() / 4.0).powf(0.25);
    let m = s.scale(1.0 / (2.0 * ell_r * ell_r));
    let c = 0.5 * (m.xx - m.yy);
    let sn = m.xy;
    let rho = c.hypot(sn);
    let isotropic = rho <= 1e-15 * m.trace();
    let r = rho.asinh();
    let theta = if isotropic { 0.0 } else { sn.atan2(c).rem_euclid(TAU) };
    Ok(ChartCoordinates { point: PolarPoint::new(r, theta), ell_r, isotropic })
}

/// Covariance as a smooth function of the embedding coordinates:
/// `Σ = 2ℓ²[cosh ρ · I + (sinh ρ/ρ) · [[x, y], [y, −x]]]`, `ρ = |w|`.
pub fn sigma_from_embedding(w: [f64; 2], ell_r: f64) -> SymMat2 {
    let rho = w[0].hypot(w[1]);
    let k = 2.0 * ell_r * ell_r;
    let c = rho.cosh();
    let sc = smooth::sinhc(rho);
    SymMat2::new(k * (c + sc * w[0]), k * sc * w[1], k * (c - sc * w[0]))
}

/// Partial derivatives `(∂Σ/∂x, ∂Σ/∂y)` of [`sigma_from_embedding`].
pub fn sigma_embedding_jacobian(w: [f64; 2], ell_r: f64) -> [SymMat2; 2] {
    let rho = w[0].hypot(w[1]);
    let k = 2.0 * ell_r * ell_r;
    let sc = smooth::sinhc(rho);
    let scp = smooth::sinhc_p(rho);
    let dx = SymMat2::new(sc * w[0] + scp * w[0] * w[0] + sc, scp * w[0] * w[1], sc * w[0] - scp * w[0] * w[0] - sc);
    let dy = SymMat2::new(sc * w[1] + scp * w[1] * w[0], scp * w[1] * w[1] + sc, sc * w[1] - scp * w[1] * w[0]);
    [dx.scale(k), dy.scale(k)]
}

/// Even functions of `ρ` that appear in the embedded metric and one-forms.
///
/// Each has a removable singularity at `ρ = 0`; below `SERIES_CUTOFF` a
/// Taylor polynomial in `ρ²` is used instead of the closed form. Names
/// ending in `_p` denote `f'(ρ)/ρ`.
pub mod smooth {
    const SERIES_CUTOFF: f64 = 0.1;

    fn series(c: &[f64; 6], rho: f64) -> f64 {
        let t = rho * rho;
        c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
    }

    /// `sinh ρ / ρ`
    pub fn sinhc(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(&[1.0, 1.0 / 6.0, 1.0 / 120.0, 1.0 / 5040.0, 1.0 / 362880.0, 1.0 / 39916800.0], rho)
        } else {
            rho.sinh() / rho
        }
    }

    /// `(sinh ρ/ρ)' / ρ = (cosh ρ − sinh ρ/ρ) / ρ²`
    pub fn sinhc_p(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(&[1.0 / 3.0, 1.0 / 30.0, 1.0 / 840.0, 1.0 / 45360.0, 1.0 / 3991680.0, 1.0 / 518918400.0], rho)
        } else {
            (rho.cosh() - rho.sinh() / rho) / (rho * rho)
        }
    }

    /// `β = sinh²ρ / (ρ² cosh ρ)`: angular metric factor `G/ρ²`.
    pub fn beta(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(&[1.0, -1.0 / 6.0, 31.0 / 360.0, -173.0 / 5040.0, 25261.0 / 1814400.0, -675691.0 / 119750400.0], rho)
        } else {
            let s = rho.sinh();
            s * s / (rho * rho * rho.cosh())
        }
    }

    pub fn beta_p(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(
                &[
                    -1.0 / 3.0,
                    31.0 / 90.0,
                    -173.0 / 840.0,
                    25261.0 / 226800.0,
                    -675691.0 / 11975040.0,
                    99680491.0 / 3632428800.0,
                ],
                rho,
            )
        } else {
            let (s, c) = (rho.sinh(), rho.cosh());
            let g = s * s / c;
            let th = s / c;
            let gp = s * (2.0 - th * th);
            gp / rho.powi(3) - 2.0 * g / rho.powi(4)
        }
    }

    /// `α = (cosh ρ − β) / ρ²`: radial excess of the metric.
    pub fn alpha(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(
                &[2.0 / 3.0, -2.0 / 45.0, 1.0 / 28.0, -197.0 / 14175.0, 24133.0 / 4276800.0, -27689.0 / 12108096.0],
                rho,
            )
        } else {
            (rho.cosh() - beta(rho)) / (rho * rho)
        }
    }

    pub fn alpha_p(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(
                &[
                    -4.0 / 45.0,
                    1.0 / 7.0,
                    -394.0 / 4725.0,
                    0.045142162364384585,
                    -138445.0 / 6054048.0,
                    302992381.0 / 27243216000.0,
                ],
                rho,
            )
        } else {
            let bp = beta_p(rho) * rho;
            let num = rho.cosh() - beta(rho);
            let dnum = rho.sinh() - bp;
            (dnum / (rho * rho) - 2.0 * num / rho.powi(3)) / rho
        }
    }

    /// `d = (1 − tanh ρ/ρ) / ρ²`: coefficient of the quasi-static one-form.
    pub fn heat_form(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(
                &[1.0 / 3.0, -2.0 / 15.0, 17.0 / 315.0, -62.0 / 2835.0, 1382.0 / 155925.0, -21844.0 / 6081075.0],
                rho,
            )
        } else {
            (1.0 - rho.tanh() / rho) / (rho * rho)
        }
    }

    pub fn heat_form_p(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(
                &[
                    -4.0 / 15.0,
                    68.0 / 315.0,
                    -124.0 / 945.0,
                    11056.0 / 155925.0,
                    -43688.0 / 1216215.0,
                    3718276.0 / 212837625.0,
                ],
                rho,
            )
        } else {
            let th = rho.tanh();
            let sech2 = 1.0 - th * th;
            let dp = (-sech2 / rho + th / (rho * rho)) / (rho * rho) - 2.0 * (1.0 - th / rho) / rho.powi(3);
            dp / rho
        }
    }

    /// `(cosh ρ − 1) / ρ²`: coefficient of the Riemannian area one-form.
    pub fn area_form(rho: f64) -> f64 {
        if rho < SERIES_CUTOFF {
            series(&[0.5, 1.0 / 24.0, 1.0 / 720.0, 1.0 / 40320.0, 1.0 / 3628800.0, 1.0 / 479001600.0], rho)
        } else {
            (rho.cosh() - 1.0) / (rho * rho)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    #[test]
    fn origin_is_twice_identity() {
        for th in [0.0, 1.0, 4.0] {
            let s = sigma_from_polar(PolarPoint::new(0.0, th), 1.0);
            assert_relative_eq!(s.xx, 2.0, epsilon = 1e-14);
            assert_relative_eq!(s.yy, 2.0, epsilon = 1e-14);
            assert!(s.xy.abs() < 1e-14);
        }
    }

    #[test]
    fn axis_aligned_examples() {
        let s = sigma_from_polar(PolarPoint::new(1.0, 0.0), 1.0);
        assert_relative_eq!(s.xx, 2.0 * E, epsilon = 1e-14);
        assert_relative_eq!(s.yy, 2.0 / E, epsilon = 1e-14);
        let s = sigma_from_polar(PolarPoint::new(1.0, PI), 1.0);
        assert_relative_eq!(s.xx, 2.0 / E, epsilon = 1e-14);
        assert_relative_eq!(s.yy, 2.0 * E, epsilon = 1e-14);
        assert!(s.xy.abs() < 1e-14);
    }

    #[test]
    fn inverse_chart_examples() {
        let c = polar_from_sigma(SymMat2::scaled_identity(2.0)).unwrap();
        assert!(c.isotropic);
        assert_eq!(c.point, PolarPoint::new(0.0, 0.0));
        assert_relative_eq!(c.ell_r, 1.0, epsilon = 1e-15);

        let c = polar_from_sigma(SymMat2::diag(2.0 * E, 2.0 / E)).unwrap();
        assert_relative_eq!(c.point.r, 1.0, epsilon = 1e-14);
        assert!(c.point.theta.abs() < 1e-14);

        let s = sigma_from_polar(PolarPoint::new(0.7, 2.1), 1.3);
        let c = polar_from_sigma(s).unwrap();
        assert_relative_eq!(c.point.r, 0.7, epsilon = 1e-12);
        assert_relative_eq!(c.point.theta, 2.1, epsilon = 1e-12);
        assert_relative_eq!(c.ell_r, 1.3, epsilon = 1e-12);
    }

    #[test]
    fn inverse_chart_rejects_indefinite() {
        assert!(polar_from_sigma(SymMat2::diag(1.0, -0.5)).is_err());
    }

    #[test]
    fn embedding_form_matches_rotation_form() {
        for &(r, th) in &[(0.0, 0.3), (0.05, 2.0), (1.3, -0.4), (3.0, 5.5)] {
            let p = PolarPoint::new(r, th);
            let a = sigma_from_polar(p, 0.8);
            let b = sigma_from_embedding(p.embed(), 0.8);
            assert!(a.sub(b).norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn embedding_jacobian_matches_differences() {
        let h = 1e-6;
        for &w in &[[0.03, -0.02], [0.4, 0.9], [-1.7, 0.2]] {
            let jac = sigma_embedding_jacobian(w, 1.1);
            for k in 0..2 {
                let mut wp = w;
                let mut wm = w;
                wp[k] += h;
                wm[k] -= h;
                let fd = sigma_from_embedding(wp, 1.1).sub(sigma_from_embedding(wm, 1.1)).scale(0.5 / h);
                assert!(fd.sub(jac[k]).norm() < 1e-7, "k={k} w={w:?}");
            }
        }
    }

    #[test]
    fn series_and_closed_forms_agree_at_cutoff() {
        use smooth::*;
        let lo = 0.1 - 1e-12;
        let hi = 0.1 + 1e-12;
        for f in [sinhc, sinhc_p, beta, beta_p, alpha, alpha_p, heat_form, heat_form_p, area_form] {
            assert_relative_eq!(f(lo), f(hi), max_relative = 1e-9);
        }
    }

    #[test]
    fn derivative_helpers_are_consistent() {
        use smooth::*;
        let h = 1e-6;
        for rho in [0.05, 0.3, 1.2, 2.5] {
            for (f, fp) in [
                (beta as fn(f64) -> f64, beta_p as fn(f64) -> f64),
                (alpha, alpha_p),
                (heat_form, heat_form_p),
                (sinhc, sinhc_p),
            ] {
                let fd = (f(rho + h) - f(rho - h)) / (2.0 * h) / rho;
                assert_relative_eq!(fd, fp(rho), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn unwrap_picks_nearest_branch() {
        assert_relative_eq!(unwrap_near(0.1, 2.0 * TAU), 0.1 + 2.0 * TAU);
        assert_relative_eq!(unwrap_near(-3.0, 3.0), -3.0 + TAU);
    }
}
