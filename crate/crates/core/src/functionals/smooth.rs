//! Trigonometric interpolation of closed curves.

use std::f64::consts::TAU;

use super::cycle::Cycle;
use crate::manifold::{GyratorSurface, PolarPoint, SurfaceMetric};

/// Smooth periodic curve `w(φ)`, `φ ∈ [0, 1)`, interpolating the embedded
/// points of a cycle at equally spaced phases.
#[derive(Debug, Clone)]
pub struct SmoothCycle {
    mean: [f64; 2],
    /// `(a_k, b_k)` for `k = 1..=n/2`, per coordinate: `a cos 2πkφ + b sin 2πkφ`.
    modes: Vec<[[f64; 2]; 2]>,
    theta0: f64,
}

impl SmoothCycle {
    pub fn from_cycle(cycle: &Cycle) -> Self {
        Self::from_points(&cycle.embedded(), cycle.points()[0].theta)
    }

    /// `w` are samples at phases `k/n`; `theta0` picks the `θ` branch at `φ = 0`.
    pub fn from_points(w: &[[f64; 2]], theta0: f64) -> Self {
        let n = w.len();
        let inv = 1.0 / n as f64;
        let mut mean = [0.0; 2];
        for p in w {
            mean[0] += p[0] * inv;
            mean[1] += p[1] * inv;
        }
        let kmax = n / 2;
        let mut modes = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let mut m = [[0.0; 2]; 2];
            for (j, p) in w.iter().enumerate() {
                let (s, c) = (TAU * (k * j % n) as f64 * inv).sin_cos();
                for d in 0..2 {
                    m[d][0] += 2.0 * inv * p[d] * c;
                    m[d][1] += 2.0 * inv * p[d] * s;
                }
            }
            if 2 * k == n {
                // Nyquist mode: only the cosine part is resolved
                for row in &mut m {
                    row[0] *= 0.5;
                    row[1] = 0.0;
                }
            }
            modes.push(m);
        }
        SmoothCycle { mean, modes, theta0 }
    }

    pub fn eval(&self, phase: f64) -> [f64; 2] {
        self.eval_with_derivative(phase).0
    }

    /// Position and derivative with respect to the phase.
    pub fn eval_with_derivative(&self, phase: f64) -> ([f64; 2], [f64; 2]) {
        let mut w = self.mean;
        let mut dw = [0.0; 2];
        // rotate (cos, sin) by the base angle instead of calling sin_cos per mode
        let (s1, c1) = (TAU * phase).sin_cos();
        let (mut s, mut c) = (s1, c1);
        for (i, m) in self.modes.iter().enumerate() {
            let k = (i + 1) as f64;
            for d in 0..2 {
                w[d] += m[d][0] * c + m[d][1] * s;
                dw[d] += TAU * k * (-m[d][0] * s + m[d][1] * c);
            }
            let next_c = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = next_c;
        }
        (w, dw)
    }

    /// Chart point at `phase`, with `θ` taken on the branch near `theta_near`
    /// (or the cycle's first point when `None`).
    pub fn chart_point(&self, phase: f64, theta_near: Option<f64>) -> PolarPoint {
        GyratorSurface.chart_point(self.eval(phase), theta_near.unwrap_or(self.theta0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_samples_and_differentiates() {
        let n = 32;
        let f = |p: f64| [1.0 + 0.3 * (TAU * p).cos() + 0.05 * (3.0 * TAU * p).sin(), 0.8 + 0.2 * (TAU * p).sin()];
        let w: Vec<[f64; 2]> = (0..n).map(|k| f(k as f64 / n as f64)).collect();
        let s = SmoothCycle::from_points(&w, 0.0);
        for (k, p) in w.iter().enumerate() {
            let q = s.eval(k as f64 / n as f64);
            assert!((q[0] - p[0]).abs() < 1e-13 && (q[1] - p[1]).abs() < 1e-13);
        }
        let (_, d) = s.eval_with_derivative(0.137);
        let h = 1e-6;
        let (a, b) = (f(0.137 + h), f(0.137 - h));
        assert!((d[0] - (a[0] - b[0]) / (2.0 * h)).abs() < 1e-7);
        assert!((d[1] - (a[1] - b[1]) / (2.0 * h)).abs() < 1e-7);
    }

    #[test]
    fn nyquist_mode_is_interpolated() {
        let n = 8;
        let w: Vec<[f64; 2]> = (0..n).map(|k| [if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0]).collect();
        let s = SmoothCycle::from_points(&w, 0.0);
        for (k, p) in w.iter().enumerate() {
            assert!((s.eval(k as f64 / n as f64)[0] - p[0]).abs() < 1e-13);
        }
    }
}
