//! Riemannian surfaces in working coordinates, and geodesic curvature of
//! sampled curves.
//!
//! Curves are discretized in a working chart chosen by the surface. For the
//! gyrator manifold this is the Cartesian embedding of the polar chart,
//! which is smooth through the isotropic state `r = 0`. [`FlatChart`] treats
//! `(r, θ)` as Euclidean coordinates and serves as a test harness.

use super::chart::{smooth, PolarPoint};
use super::matrix::SymMat2;

/// Metric tensor and its first partial derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub g: SymMat2,
    /// `dg[k] = ∂g/∂w_k`
    pub dg: [SymMat2; 2],
}

/// `Γ[k][i][j]`, the Christoffel symbols of the second kind.
pub type Christoffel = [[[f64; 2]; 2]; 2];

impl MetricJet {
    pub fn christoffel(&self) -> Christoffel {
        let gi = self.g.inverse().to_mat();
        let d = |k: usize| self.dg[k].to_mat();
        let dg = [d(0), d(1)];
        let mut out = [[[0.0; 2]; 2]; 2];
        for (k, gk) in out.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = 0.0;
                    for l in 0..2 {
                        s += gi[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                    }
                    gk[i][j] = 0.5 * s;
                }
            }
        }
        out
    }
}

/// A two-dimensional Riemannian surface seen through a working chart.
pub trait SurfaceMetric: Sync {
    /// Maps a polar chart point to working coordinates.
    fn embed(&self, p: PolarPoint) -> [f64; 2];

    /// Maps working coordinates back, picking the `θ` branch near `theta_near`.
    fn chart_point(&self, w: [f64; 2], theta_near: f64) -> PolarPoint;

    fn jet(&self, w: [f64; 2]) -> MetricJet;

    fn tensor(&self, w: [f64; 2]) -> SymMat2 {
        self.jet(w).g
    }
}

/// The 2-Wasserstein metric `cosh r dr² + (sinh²r / cosh r) dθ²` of the
/// constant-determinant Gaussian states, in embedding coordinates, where it
/// reads `g = β(ρ)·I + α(ρ)·w w'`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GyratorSurface;

impl SurfaceMetric for GyratorSurface {
    fn embed(&self, p: PolarPoint) -> [f64; 2] {
        p.embed()
    }

    fn chart_point(&self, w: [f64; 2], theta_near: f64) -> PolarPoint {
        PolarPoint::from_embedding(w, theta_near)
    }

    fn jet(&self, w: [f64; 2]) -> MetricJet {
        let rho = w[0].hypot(w[1]);
        let (b, a) = (smooth::beta(rho), smooth::alpha(rho));
        let (bp, ap) = (smooth::beta_p(rho), smooth::alpha_p(rho));
        let g = SymMat2::new(b + a * w[0] * w[0], a * w[0] * w[1], b + a * w[1] * w[1]);
        let ww = SymMat2::new(w[0] * w[0], w[0] * w[1], w[1] * w[1]);
        // ∂_k g_ij = β' w_k δ_ij/ρ + α' w_k w_i w_j/ρ + α(δ_ik w_j + w_i δ_jk)
        let dg0 =
            SymMat2::scaled_identity(bp * w[0]).axpy(ap * w[0], ww).add(SymMat2::new(2.0 * a * w[0], a * w[1], 0.0));
        let dg1 =
            SymMat2::scaled_identity(bp * w[1]).axpy(ap * w[1], ww).add(SymMat2::new(0.0, a * w[0], 2.0 * a * w[1]));
        MetricJet { g, dg: [dg0, dg1] }
    }
}

/// `(r, θ)` treated as Euclidean coordinates (`E = G = 1`).
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatChart;

impl SurfaceMetric for FlatChart {
    fn embed(&self, p: PolarPoint) -> [f64; 2] {
        [p.r, p.theta]
    }

    fn chart_point(&self, w: [f64; 2], _theta_near: f64) -> PolarPoint {
        PolarPoint::new(w[0], w[1])
    }

    fn jet(&self, _w: [f64; 2]) -> MetricJet {
        MetricJet { g: SymMat2::IDENTITY, dg: [SymMat2::ZERO; 2] }
    }
}

/// Squared norm `v' g v`.
pub fn norm_sq(g: SymMat2, v: [f64; 2]) -> f64 {
    g.quad_form(v)
}

/// Unit normal obtained by rotating the tangent `v` by +90° in the metric
/// `g` (points to the left of the direction of travel).
pub fn left_normal(g: SymMat2, v: [f64; 2]) -> [f64; 2] {
    let gv = g.apply(v);
    let scale = 1.0 / (g.det().sqrt() * norm_sq(g, v).sqrt());
    [-gv[1] * scale, gv[0] * scale]
}

/// Signed geodesic curvature of a curve with velocity `w1` and acceleration
/// `w2` (in working coordinates), positive when turning left.
pub fn curvature_from_derivatives<M: SurfaceMetric + ?Sized>(
    metric: &M,
    w: [f64; 2],
    w1: [f64; 2],
    w2: [f64; 2],
) -> f64 {
    let jet = metric.jet(w);
    let gam = jet.christoffel();
    let mut acc = w2;
    for (k, a) in acc.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *a += gam[k][i][j] * w1[i] * w1[j];
            }
        }
    }
    let n = left_normal(jet.g, w1);
    jet.g.bilinear(acc, n) / norm_sq(jet.g, w1)
}

/// Fourth-order central first and second differences of a periodic sample
/// sequence at index `i`, in units of the sample spacing.
pub fn periodic_derivatives(w: &[[f64; 2]], i: usize) -> ([f64; 2], [f64; 2]) {
    let n = w.len();
    let at = |k: isize| w[(i as isize + k).rem_euclid(n as isize) as usize];
    let (m2, m1, p1, p2) = (at(-2), at(-1), at(1), at(2));
    let c = w[i];
    let mut d1 = [0.0; 2];
    let mut d2 = [0.0; 2];
    for k in 0..2 {
        d1[k] = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / 12.0;
        d2[k] = (-p2[k] + 16.0 * p1[k] - 30.0 * c[k] + 16.0 * m1[k] - m2[k]) / 12.0;
    }
    (d1, d2)
}

/// Central second-order differences at an interior index of an open sequence.
pub fn open_derivatives(w: &[[f64; 2]], i: usize) -> ([f64; 2], [f64; 2]) {
    assert!(i > 0 && i + 1 < w.len(), "index must be interior");
    let (a, c, b) = (w[i - 1], w[i], w[i + 1]);
    ([0.5 * (b[0] - a[0]), 0.5 * (b[1] - a[1])], [b[0] - 2.0 * c[0] + a[0], b[1] - 2.0 * c[1] + a[1]])
}
