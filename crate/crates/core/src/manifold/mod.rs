//! Geometry of the constant-determinant Gaussian states.
//!
//! A centered Gaussian on the plane with `det Σ = 4ℓ_r⁴` is a point `(r, θ)`
//! of the polar chart. The 2-Wasserstein metric restricted to these states is
//! `g = cosh r dr² + (sinh²r / cosh r) dθ²` in units of `ℓ_r²`.

mod chart;
mod matrix;
mod params;
pub mod surface;
mod transport;

use serde::{Deserialize, Serialize};

pub use chart::{
    polar_from_sigma, sigma_embedding_jacobian, sigma_from_embedding, sigma_from_polar, smooth, unwrap_near,
    ChartCoordinates, PolarPoint, R_MIN,
};
pub use matrix::{Mat2, SymMat2};
pub use params::ThermoParams;
pub use surface::{FlatChart, GyratorSurface, MetricJet, SurfaceMetric};
pub(crate) use transport::lyapunov_solve;
pub use transport::{
    bures_w2, bures_w2_squared, control_gain, gaussian_geodesic, lyapunov_operator, lyapunov_residual, GaussianGeodesic,
};

use crate::error::{Error, Result};
use crate::functionals::Cycle;

/// Diagonal components of the metric in the polar chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    pub e_rr: f64,
    pub e_tt: f64,
}

impl MetricTensor {
    pub fn det(&self) -> f64 {
        self.e_rr * self.e_tt
    }
}

pub fn metric(r: f64) -> MetricTensor {
    let c = r.cosh();
    let s = r.sinh();
    MetricTensor { e_rr: c, e_tt: s * s / c }
}

/// Work density `f = sin θ · sinh r / cosh²r`; `f · √det g = sin θ tanh²r`.
pub fn work_density(p: PolarPoint) -> f64 {
    let c = p.r.cosh();
    p.theta.sin() * p.r.sinh() / (c * c)
}

/// `1 / cosh³ r`
pub fn gaussian_curvature(r: f64) -> f64 {
    r.cosh().powi(-3)
}

fn central4(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Gaussian curvature of an orthogonal metric `E dr² + G dθ²` depending on
/// `r` only, `K = −(EG)^{−½} ∂_r(∂_r√G / √E)`, by nested finite differences.
pub fn numeric_gaussian_curvature(metric_fn: impl Fn(f64) -> MetricTensor, r: f64) -> f64 {
    let h = 1e-3;
    // √G is odd through the pole, which keeps the stencil valid for r < 2h
    let sqrt_g = |x: f64| x.signum() * metric_fn(x).e_tt.sqrt();
    let inner = |x: f64| central4(sqrt_g, x, h) / metric_fn(x).e_rr.sqrt();
    let m = metric_fn(r);
    -central4(inner, r, h) / m.det().sqrt()
}

/// Christoffel symbols `Γ[k][i][j]` of the polar metric, index 0 = `r`,
/// 1 = `θ`.
pub fn christoffel(r: f64) -> surface::Christoffel {
    let (c, s) = (r.cosh(), r.sinh());
    let e = c;
    let e_r = s;
    let g = s * s / c;
    let g_r = 2.0 * s - s * s * s / (c * c);
    let mut out = [[[0.0; 2]; 2]; 2];
    out[0][0][0] = e_r / (2.0 * e);
    out[0][1][1] = -g_r / (2.0 * e);
    out[1][0][1] = g_r / (2.0 * g);
    out[1][1][0] = g_r / (2.0 * g);
    out
}

fn check_neighbours(w: &[[f64; 2]], index: usize) -> Result<()> {
    let n = w.len();
    for k in [index + n - 2, index + n - 1, index, index + 1] {
        let (a, b) = (w[k % n], w[(k + 1) % n]);
        if a == b {
            return Err(Error::DegenerateCurve(format!("points {} and {} coincide", k % n, (k + 1) % n)));
        }
    }
    Ok(())
}

/// Signed geodesic curvature of `cycle` at `index` on the gyrator surface.
/// Positive when the curve bends toward the domain it encloses.
pub fn geodesic_curvature(cycle: &Cycle, index: usize) -> Result<f64> {
    geodesic_curvature_in(&GyratorSurface, cycle, index)
}

pub fn geodesic_curvature_in<M: SurfaceMetric + ?Sized>(metric: &M, cycle: &Cycle, index: usize) -> Result<f64> {
    let w = cycle.embedded_in(metric);
    if index >= w.len() {
        return Err(crate::error::invalid(format!("index {index} out of range")));
    }
    check_neighbours(&w, index)?;
    let (d1, d2) = surface::periodic_derivatives(&w, index);
    Ok(cycle.orientation().sign() * surface::curvature_from_derivatives(metric, w[index], d1, d2))
}

/// [`geodesic_curvature`] at every point.
pub fn geodesic_curvatures(cycle: &Cycle) -> Result<Vec<f64>> {
    geodesic_curvatures_in(&GyratorSurface, cycle)
}

pub fn geodesic_curvatures_in<M: SurfaceMetric + ?Sized>(metric: &M, cycle: &Cycle) -> Result<Vec<f64>> {
    let w = cycle.embedded_in(metric);
    let sign = cycle.orientation().sign();
    (0..w.len())
        .map(|i| {
            check_neighbours(&w, i)?;
            let (d1, d2) = surface::periodic_derivatives(&w, i);
            Ok(sign * surface::curvature_from_derivatives(metric, w[i], d1, d2))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn metric_examples() {
        let m0 = metric(0.0);
        assert_eq!((m0.e_rr, m0.e_tt), (1.0, 0.0));
        let m1 = metric(1.0);
        assert_relative_eq!(m1.e_rr, 1.5431, epsilon = 1e-4);
        assert_relative_eq!(m1.e_tt, 0.8951, epsilon = 1e-4);
        assert_relative_eq!(m1.det(), 1.3811, epsilon = 1e-4);
    }

    #[test]
    fn work_density_examples() {
        assert_eq!(work_density(PolarPoint::new(0.7, 0.0)), 0.0);
        assert_eq!(work_density(PolarPoint::new(0.0, FRAC_PI_2)), 0.0);
        let peak = work_density(PolarPoint::new(1f64.asinh(), FRAC_PI_2));
        assert_relative_eq!(peak, 0.5, epsilon = 1e-15);
        for i in 0..200 {
            let r = 0.02 * i as f64;
            assert!(work_density(PolarPoint::new(r, FRAC_PI_2)) <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(gaussian_curvature(0.0), 1.0);
        assert_relative_eq!(gaussian_curvature(1.0), 0.27216, epsilon = 1e-4);
        let far = gaussian_curvature(10.0);
        assert!(far > 0.0 && far < 1e-12);
    }

    #[test]
    fn curvature_matches_metric() {
        for i in 0..=29 {
            let r = 0.1 + 0.1 * i as f64;
            let k = numeric_gaussian_curvature(metric, r);
            assert!((k - gaussian_curvature(r)).abs() < 1e-6, "r = {r}");
        }
    }

    #[test]
    fn polar_christoffel_matches_embedding_jet() {
        // Γ transforms as a connection; compare geodesic accelerations instead
        let p = PolarPoint::new(0.8, 1.1);
        let v = [0.3, -0.7];
        let gam = christoffel(p.r);
        let acc_polar = [-(gam[0][0][0] * v[0] * v[0] + gam[0][1][1] * v[1] * v[1]), -2.0 * gam[1][0][1] * v[0] * v[1]];
        // map the polar geodesic acceleration to embedding coordinates
        let (s, c) = p.theta.sin_cos();
        let r = p.r;
        let j = [[c, -r * s], [s, r * c]];
        let wv = [j[0][0] * v[0] + j[0][1] * v[1], j[1][0] * v[0] + j[1][1] * v[1]];
        // second derivative of the embedding along the curve
        let hess = [-2.0 * s * v[0] * v[1] - r * c * v[1] * v[1], 2.0 * c * v[0] * v[1] - r * s * v[1] * v[1]];
        let wa = [
            j[0][0] * acc_polar[0] + j[0][1] * acc_polar[1] + hess[0],
            j[1][0] * acc_polar[0] + j[1][1] * acc_polar[1] + hess[1],
        ];
        let ge = GyratorSurface.jet(p.embed()).christoffel();
        for k in 0..2 {
            let mut expect = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    expect -= ge[k][a][b] * wv[a] * wv[b];
                }
            }
            assert_relative_eq!(wa[k], expect, epsilon = 1e-12);
        }
    }
}
