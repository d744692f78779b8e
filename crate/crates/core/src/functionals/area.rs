//! The work-weighted area `A_f` as a line integral and as a surface integral.
//!
//! In the polar chart the quasi-static one-form is
//! `cos θ dr − tanh r sin θ dθ`, whose exterior derivative is
//! `sin θ tanh²r dr∧dθ = f · dA_g`. Along discretized cycles the one-form is
//! evaluated in the embedding `(x, y)`, where it reads
//! `(1 − y²d) dx + x y d dy` with `d(ρ) = (1 − tanh ρ/ρ)/ρ²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::cycle::Cycle;
use crate::manifold::smooth;

/// Coefficients `(ω_x, ω_y)` of the quasi-static one-form at `w`.
pub fn heat_one_form(w: [f64; 2]) -> [f64; 2] {
    let d = smooth::heat_form(w[0].hypot(w[1]));
    [1.0 - w[1] * w[1] * d, w[0] * w[1] * d]
}

/// One-form coefficients and their Jacobian `J[a][k] = ∂ω_a/∂w_k`.
pub(crate) fn heat_one_form_jet(w: [f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let rho = w[0].hypot(w[1]);
    let d = smooth::heat_form(rho);
    let dp = smooth::heat_form_p(rho);
    let (x, y) = (w[0], w[1]);
    let omega = [1.0 - y * y * d, x * y * d];
    let jac = [[-y * y * dp * x, -2.0 * y * d - y * y * y * dp], [y * d + x * x * y * dp, x * d + x * y * y * dp]];
    (omega, jac)
}

/// Trapezoidal sum `Σ ½(ω(wᵢ) + ω(wᵢ₊₁))·(wᵢ₊₁ − wᵢ)` over the closed polygon.
pub(crate) fn polygon_one_form(w: &[[f64; 2]], form: impl Fn([f64; 2]) -> [f64; 2]) -> f64 {
    let n = w.len();
    let vals: Vec<[f64; 2]> = w.iter().map(|&p| form(p)).collect();
    let mut acc = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let d = [w[j][0] - w[i][0], w[j][1] - w[i][1]];
        acc += 0.5 * ((vals[i][0] + vals[j][0]) * d[0] + (vals[i][1] + vals[j][1]) * d[1]);
    }
    acc
}

/// Work-weighted area `A_f = ∮ cos θ dr − tanh r sin θ dθ`. Changes sign with
/// the direction of traversal.
pub fn area_line_integral(cycle: &Cycle) -> f64 {
    polygon_one_form(&cycle.embedded(), heat_one_form)
}

/// Riemannian area enclosed by the cycle (signed by orientation), from the
/// one-form `(cosh r − 1) dθ`.
pub fn enclosed_area(cycle: &Cycle) -> f64 {
    polygon_one_form(&cycle.embedded(), |w| {
        let c = smooth::area_form(w[0].hypot(w[1]));
        [-c * w[1], c * w[0]]
    })
}

/// Region of the `(r, θ)` chart.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ChartDomain {
    Rectangle {
        r: (f64, f64),
        theta: (f64, f64),
    },
    /// Axis-aligned ellipse in the chart.
    Ellipse {
        center: (f64, f64),
        semi_axes: (f64, f64),
    },
}

impl ChartDomain {
    pub fn bounding_box(&self) -> ((f64, f64), (f64, f64)) {
        match *self {
            ChartDomain::Rectangle { r, theta } => (r, theta),
            ChartDomain::Ellipse { center, semi_axes } => {
                ((center.0 - semi_axes.0, center.0 + semi_axes.0), (center.1 - semi_axes.1, center.1 + semi_axes.1))
            }
        }
    }

    /// Positively oriented boundary sampled at `n` points.
    pub fn boundary(&self, n: usize) -> Vec<crate::manifold::PolarPoint> {
        use crate::manifold::PolarPoint;
        match *self {
            ChartDomain::Rectangle { r, theta } => {
                let per = n / 4;
                let corners = [(r.0, theta.0), (r.1, theta.0), (r.1, theta.1), (r.0, theta.1)];
                let mut pts = Vec::with_capacity(4 * per);
                for k in 0..4 {
                    let (a, b) = (corners[k], corners[(k + 1) % 4]);
                    for i in 0..per {
                        let s = i as f64 / per as f64;
                        pts.push(PolarPoint::new(a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)));
                    }
                }
                pts
            }
            ChartDomain::Ellipse { center, semi_axes } => (0..n)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / n as f64;
                    PolarPoint::new(center.0 + semi_axes.0 * a.cos(), center.1 + semi_axes.1 * a.sin())
                })
                .collect(),
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const PANEL_ORDER: usize = 32;

/// `∬_D sin θ tanh²r dr dθ`, i.e. the integral of `f` against the Riemannian
/// area form. The inner θ-integral is done in closed form over each section
/// of `D`, the outer one by composite 32-point Gauss–Legendre on `panels`
/// panels.
pub fn area_quadrature(domain: &ChartDomain, panels: usize) -> f64 {
    // integrand of the outer r-integral after the exact θ-integration
    let section = |r: f64, t0: f64, t1: f64| {
        let th = r.tanh();
        th * th * (t0.cos() - t1.cos())
    };
    match *domain {
        ChartDomain::Rectangle { r, theta } => {
            if !(r.1 > r.0) {
                return 0.0;
            }
            gauss_panels(r.0, r.1, panels, |x| section(x, theta.0, theta.1))
        }
        ChartDomain::Ellipse { center, semi_axes } => {
            // r = c + a sin φ removes the square-root behaviour at the ends
            let (a, b) = semi_axes;
            gauss_panels(-0.5 * PI, 0.5 * PI, panels, |phi| {
                let (s, c) = phi.sin_cos();
                let r = center.0 + a * s;
                a * c * section(r, center.1 - b * c, center.1 + b * c)
            })
        }
    }
}

fn gauss_panels(lo: f64, hi: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc += 0.5 * h * wi * f(a + 0.5 * h * (xi + 1.0));
        }
    }
    acc
}

/// `∬ sin θ tanh²r` over a region given by an indicator on a bounding box,
/// with a full two-dimensional Gauss–Legendre rule per panel. Accuracy at a
/// curved boundary is limited by the indicator's discontinuity.
pub fn area_quadrature_indicator(
    r_range: (f64, f64),
    theta_range: (f64, f64),
    indicator: impl Fn(f64, f64) -> bool,
    panels: usize,
) -> f64 {
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let hr = (r_range.1 - r_range.0) / panels as f64;
    let ht = (theta_range.1 - theta_range.0) / panels as f64;
    if !(hr > 0.0 && ht > 0.0) {
        return 0.0;
    }
    let mut acc = 0.0;
    for pr in 0..panels {
        for pt in 0..panels {
            for (xi, wi) in x.iter().zip(&w) {
                let r = r_range.0 + hr * (pr as f64 + 0.5 * (xi + 1.0));
                let th = r.tanh();
                for (xj, wj) in x.iter().zip(&w) {
                    let t = theta_range.0 + ht * (pt as f64 + 0.5 * (xj + 1.0));
                    if indicator(r, t) {
                        acc += 0.25 * hr * ht * wi * wj * t.sin() * th * th;
                    }
                }
            }
        }
    }
    acc
}
