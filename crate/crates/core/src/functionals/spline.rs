//! Periodic cubic splines through planar points.

use crate::error::{Error, Result};

/// Solves a cyclic tridiagonal system
/// `sub[i]·x[i−1] + diag[i]·x[i] + sup[i]·x[i+1] = rhs[i]` (indices mod n)
/// by the Sherman–Morrison correction of the Thomas algorithm.
pub fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 3 && sub.len() == n && sup.len() == n && rhs.len() == n);
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= sup[n - 1] * sub[0] / gamma;
    let x = thomas(sub, &b, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = sup[n - 1];
    let z = thomas(sub, &b, sup, &u);
    let fact = (x[0] + sub[0] * x[n - 1] / gamma) / (1.0 + z[0] + sub[0] * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Periodic interpolating cubic spline `w(t)` with period `period`, through
/// `points[i]` at strictly increasing `knots[i]` in `[knots[0], knots[0] + period)`.
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    period: f64,
    points: Vec<[f64; 2]>,
    second: Vec<[f64; 2]>,
}

impl PeriodicSpline {
    pub fn new(knots: Vec<f64>, period: f64, points: Vec<[f64; 2]>) -> Result<Self> {
        let n = knots.len();
        if n < 3 || points.len() != n {
            return Err(Error::DegenerateCurve("spline needs at least three knots".into()));
        }
        let h: Vec<f64> = (0..n)
            .map(|i| if i + 1 < n { knots[i + 1] - knots[i] } else { knots[0] + period - knots[n - 1] })
            .collect();
        if h.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return Err(Error::DegenerateCurve("spline knots must be strictly increasing".into()));
        }
        // row i: h[i−1] M[i−1] + 2(h[i−1] + h[i]) M[i] + h[i] M[i+1] = 6(Δ[i]/h[i] − Δ[i−1]/h[i−1])
        let sub: Vec<f64> = (0..n).map(|i| h[(i + n - 1) % n]).collect();
        let sup = h.clone();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * (h[(i + n - 1) % n] + h[i])).collect();
        let mut second = vec![[0.0; 2]; n];
        for k in 0..2 {
            let slope = |i: usize| (points[(i + 1) % n][k] - points[i][k]) / h[i];
            let rhs: Vec<f64> = (0..n).map(|i| 6.0 * (slope(i) - slope((i + n - 1) % n))).collect();
            let m = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs);
            for (s, v) in second.iter_mut().zip(m) {
                s[k] = v;
            }
        }
        Ok(PeriodicSpline { knots, period, points, second })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn eval(&self, t: f64) -> [f64; 2] {
        let n = self.knots.len();
        let t0 = self.knots[0];
        let tt = t0 + (t - t0).rem_euclid(self.period);
        let i = match self.knots.partition_point(|&k| k <= tt) {
            0 => n - 1,
            p => p - 1,
        };
        let j = (i + 1) % n;
        let right = if j == 0 { t0 + self.period } else { self.knots[j] };
        let h = right - self.knots[i];
        let a = (right - tt) / h;
        let b = 1.0 - a;
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            *o = a * self.points[i][k]
                + b * self.points[j][k]
                + ((a * a * a - a) * self.second[i][k] + (b * b * b - b) * self.second[j][k]) * h * h / 6.0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn cyclic_solver_matches_dense_product() {
        let n = 7;
        let sub: Vec<f64> = (0..n).map(|i| 0.3 + 0.1 * i as f64).collect();
        let sup: Vec<f64> = (0..n).map(|i| 0.5 - 0.05 * i as f64).collect();
        let diag = vec![3.0; n];
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = solve_cyclic_tridiagonal(&sub, &diag, &sup, &rhs);
        for i in 0..n {
            let lhs = sub[i] * x[(i + n - 1) % n] + diag[i] * x[i] + sup[i] * x[(i + 1) % n];
            assert!((lhs - rhs[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn spline_interpolates_and_approximates_circle() {
        let n = 64;
        let knots: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let pts: Vec<[f64; 2]> = knots.iter().map(|t| [t.cos(), t.sin()]).collect();
        let s = PeriodicSpline::new(knots.clone(), TAU, pts.clone()).unwrap();
        for (t, p) in knots.iter().zip(&pts) {
            let q = s.eval(*t);
            assert!((q[0] - p[0]).abs() < 1e-14 && (q[1] - p[1]).abs() < 1e-14);
        }
        for i in 0..500 {
            let t = 0.0123 + TAU * i as f64 / 500.0;
            let q = s.eval(t + TAU);
            assert!((q[0] - t.cos()).abs() < 1e-5 && (q[1] - t.sin()).abs() < 1e-5);
        }
    }
}
