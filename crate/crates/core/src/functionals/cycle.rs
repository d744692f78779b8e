use serde::{Deserialize, Serialize};

use super::spline::PeriodicSpline;
use crate::error::{Error, Result};
use crate::manifold::{GyratorSurface, PolarPoint, SurfaceMetric, R_MIN};

/// Direction of traversal in the `(r, θ)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "positive")]
    Positive,
    #[serde(rename = "negative")]
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// Closed polygon of chart points; the last point connects to the first.
///
/// The orientation is derived from the signed area of the polygon in the
/// embedding `(r cos θ, r sin θ)`, which agrees with the orientation in the
/// `(r, θ)` plane for curves that do not wind around `r = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    points: Vec<PolarPoint>,
    orientation: Orientation,
}

pub const MIN_CYCLE_POINTS: usize = 8;

impl Cycle {
    /// Validates `points`: at least 8 points, `r ≥ R_MIN`, finite, and no two
    /// consecutive points equal.
    pub fn new(points: Vec<PolarPoint>) -> Result<Self> {
        if points.len() < MIN_CYCLE_POINTS {
            return Err(Error::DegenerateCurve(format!(
                "a cycle needs at least {MIN_CYCLE_POINTS} points, got {}",
                points.len()
            )));
        }
        for p in &points {
            if !(p.r.is_finite() && p.theta.is_finite()) {
                return Err(Error::DegenerateCurve("non-finite point".into()));
            }
            if p.r < R_MIN {
                return Err(Error::ChartViolation { r: p.r, r_min: R_MIN });
            }
        }
        let n = points.len();
        let w: Vec<[f64; 2]> = points.iter().map(|p| p.embed()).collect();
        for i in 0..n {
            if w[i] == w[(i + 1) % n] {
                return Err(Error::DegenerateCurve(format!("points {i} and {} coincide", (i + 1) % n)));
            }
        }
        let orientation = orientation_of(&w);
        Ok(Cycle { points, orientation })
    }

    /// Skips validation. Intended for degenerate test inputs such as a point
    /// repeated `n` times.
    pub fn new_unchecked(points: Vec<PolarPoint>, orientation: Orientation) -> Self {
        Cycle { points, orientation }
    }

    /// Builds a cycle from working coordinates of the gyrator surface,
    /// unwrapping `θ` continuously starting near `theta_start`.
    pub fn from_embedding(w: &[[f64; 2]], theta_start: f64) -> Result<Self> {
        Self::from_working(&GyratorSurface, w, theta_start)
    }

    pub fn from_working<M: SurfaceMetric + ?Sized>(metric: &M, w: &[[f64; 2]], theta_start: f64) -> Result<Self> {
        let mut theta = theta_start;
        let points = w
            .iter()
            .map(|&wi| {
                let p = metric.chart_point(wi, theta);
                theta = p.theta;
                p
            })
            .collect();
        Cycle::new(points)
    }

    pub fn points(&self) -> &[PolarPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<PolarPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Cycle { points, orientation: self.orientation.reversed() }
    }

    /// Points in the embedding `(r cos θ, r sin θ)`.
    pub fn embedded(&self) -> Vec<[f64; 2]> {
        self.embedded_in(&GyratorSurface)
    }

    pub fn embedded_in<M: SurfaceMetric + ?Sized>(&self, metric: &M) -> Vec<[f64; 2]> {
        self.points.iter().map(|&p| metric.embed(p)).collect()
    }

    /// Number of turns around the isotropic state `r = 0`.
    pub fn winding_number(&self) -> i64 {
        let w = self.embedded();
        let n = w.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = w[i][1].atan2(w[i][0]);
            let b = w[(i + 1) % n][1].atan2(w[(i + 1) % n][0]);
            total += crate::manifold::unwrap_near(b - a, 0.0);
        }
        (total / std::f64::consts::TAU).round() as i64
    }
}

fn orientation_of(w: &[[f64; 2]]) -> Orientation {
    let n = w.len();
    let c = w.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0] / n as f64, acc[1] + p[1] / n as f64]);
    let mut twice_area = 0.0;
    for i in 0..n {
        let (a, b) = (w[i], w[(i + 1) % n]);
        twice_area += (a[0] - c[0]) * (b[1] - c[1]) - (b[0] - c[0]) * (a[1] - c[1]);
    }
    if twice_area >= 0.0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

/// Metric length of the segment `a → b`, with the metric at the midpoint.
pub(crate) fn segment_length<M: SurfaceMetric + ?Sized>(metric: &M, a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    metric.tensor(m).quad_form(d).max(0.0).sqrt()
}

pub(crate) fn segment_lengths<M: SurfaceMetric + ?Sized>(metric: &M, w: &[[f64; 2]]) -> Vec<f64> {
    let n = w.len();
    (0..n).map(|i| segment_length(metric, w[i], w[(i + 1) % n])).collect()
}

/// Length `ℓ` of the closed polygon in the metric of `metric`.
pub fn cycle_length_in<M: SurfaceMetric + ?Sized>(metric: &M, cycle: &Cycle) -> f64 {
    segment_lengths(metric, &cycle.embedded_in(metric)).iter().sum()
}

/// Wasserstein length `ℓ` (in units of `ℓ_r`) of the cycle.
pub fn cycle_length(cycle: &Cycle) -> f64 {
    cycle_length_in(&GyratorSurface, cycle)
}

/// Relative spread `(max − min)/mean` of the segment lengths.
pub fn spacing_deviation_in<M: SurfaceMetric + ?Sized>(metric: &M, cycle: &Cycle) -> f64 {
    let s = segment_lengths(metric, &cycle.embedded_in(metric));
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let (lo, hi) = s.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    (hi - lo) / mean
}

const RESAMPLE_TOL: f64 = 1e-10;
const RESAMPLE_MAX_SWEEPS: usize = 50;

/// Resamples the cycle to `n` points with equal metric spacing, following a
/// periodic cubic spline through the original points. The first point is kept.
pub fn resample_constant_speed(cycle: &Cycle, n: usize) -> Result<Cycle> {
    resample_constant_speed_in(&GyratorSurface, cycle, n)
}

pub fn resample_constant_speed_in<M: SurfaceMetric + ?Sized>(metric: &M, cycle: &Cycle, n: usize) -> Result<Cycle> {
    if n < MIN_CYCLE_POINTS {
        return Err(crate::error::invalid(format!("resampling needs n ≥ {MIN_CYCLE_POINTS}, got {n}")));
    }
    let w = cycle.embedded_in(metric);
    let out = resample_points(metric, &w, n)?;
    let theta0 = cycle.points()[0].theta;
    Cycle::from_working(metric, &out, theta0)
}

/// Constant-speed resampling of a closed polygon given in working coordinates.
pub(crate) fn resample_points<M: SurfaceMetric + ?Sized>(
    metric: &M,
    w: &[[f64; 2]],
    n: usize,
) -> Result<Vec<[f64; 2]>> {
    let seg = segment_lengths(metric, w);
    let total: f64 = seg.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegenerateCurve("cycle has zero length".into()));
    }
    // drop repeated points so the spline knots are strictly increasing
    let mut knots = Vec::with_capacity(w.len());
    let mut pts = Vec::with_capacity(w.len());
    let mut t = 0.0;
    for (p, s) in w.iter().zip(&seg) {
        if *s > 1e-14 * total {
            knots.push(t);
            pts.push(*p);
        }
        t += s;
    }
    let spline = PeriodicSpline::new(knots, total, pts)?;

    let mut params: Vec<f64> = (0..n).map(|k| total * k as f64 / n as f64).collect();
    let mut out: Vec<[f64; 2]> = params.iter().map(|&s| spline.eval(s)).collect();
    for _ in 0..RESAMPLE_MAX_SWEEPS {
        let s = segment_lengths(metric, &out);
        let len: f64 = s.iter().sum();
        let mean = len / n as f64;
        let dev = s.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max) / mean;
        if dev < RESAMPLE_TOL {
            break;
        }
        // map the equally spaced arc-length targets back to spline parameters
        // by linear interpolation of (cumulative length → parameter)
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for v in &s {
            cum.push(cum.last().unwrap() + v);
        }
        let mut par_ext = params.clone();
        par_ext.push(params[0] + total);
        let mut next = Vec::with_capacity(n);
        let mut j = 0;
        for k in 0..n {
            let target = len * k as f64 / n as f64;
            while j + 1 < n && cum[j + 1] < target {
                j += 1;
            }
            let frac = if s[j] > 0.0 { (target - cum[j]) / s[j] } else { 0.0 };
            next.push(par_ext[j] + frac * (par_ext[j + 1] - par_ext[j]));
        }
        params = next;
        out = params.iter().map(|&s| spline.eval(s)).collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::FlatChart;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn chart_circle(center: PolarPoint, radius: f64, n: usize) -> Cycle {
        let pts = (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                PolarPoint::new(center.r + radius * a.cos(), center.theta + radius * a.sin())
            })
            .collect();
        Cycle::new(pts).unwrap()
    }

    #[test]
    fn validation() {
        let few = vec![PolarPoint::new(1.0, 0.0); 5];
        assert!(matches!(Cycle::new(few), Err(Error::DegenerateCurve(_))));
        let mut pts: Vec<PolarPoint> = chart_circle(PolarPoint::new(1.0, 1.0), 0.2, 16).into_points();
        pts[3] = pts[2];
        assert!(matches!(Cycle::new(pts.clone()), Err(Error::DegenerateCurve(_))));
        pts[3] = PolarPoint::new(1e-4, 1.0);
        assert!(matches!(Cycle::new(pts), Err(Error::ChartViolation { .. })));
    }

    #[test]
    fn orientation_and_winding() {
        let c = chart_circle(PolarPoint::new(1.0, FRAC_PI_2), 0.3, 32);
        assert_eq!(c.orientation(), Orientation::Positive);
        assert_eq!(c.reversed().orientation(), Orientation::Negative);
        assert_eq!(c.winding_number(), 0);
        let around: Vec<PolarPoint> = (0..32).map(|k| PolarPoint::new(0.5, TAU * k as f64 / 32.0)).collect();
        assert_eq!(Cycle::new(around).unwrap().winding_number(), 1);
    }

    #[test]
    fn point_cycle_has_zero_length() {
        let c = Cycle::new_unchecked(vec![PolarPoint::new(1.0, 1.0); 16], Orientation::Positive);
        assert_eq!(cycle_length(&c), 0.0);
    }

    #[test]
    fn doubled_radial_segment_length() {
        // θ fixed, r: 0.5 → 1.5 → 0.5; the exact length is 2∫√cosh r dr
        let n = 2000;
        let pts: Vec<PolarPoint> = (0..n)
            .map(|k| {
                let s = k as f64 / n as f64;
                let r = if s < 0.5 { 0.5 + 2.0 * s } else { 2.5 - 2.0 * s };
                PolarPoint::new(r, 0.4)
            })
            .collect();
        let c = Cycle::new_unchecked(pts, Orientation::Positive);
        let m = 20000;
        let h = 1.0 / m as f64;
        let oracle: f64 = (0..m).map(|k| (0.5 + (k as f64 + 0.5) * h).cosh().sqrt() * h).sum();
        assert_relative_eq!(cycle_length(&c), 2.0 * oracle, epsilon = 1e-3);
        assert_relative_eq!(oracle, 1.260682, epsilon = 1e-6);
    }

    #[test]
    fn resampling_uniform_circle_is_idempotent() {
        let c = chart_circle(PolarPoint::new(1.0, 1.0), 0.2, 128);
        let once = resample_constant_speed(&c, 128).unwrap();
        let twice = resample_constant_speed(&once, 128).unwrap();
        for (a, b) in once.points().iter().zip(twice.points()) {
            assert!((a.r - b.r).abs() < 1e-8 && (a.theta - b.theta).abs() < 1e-8);
        }
        let flat = chart_circle(PolarPoint::new(1.0, 1.0), 0.2, 128);
        let again = resample_constant_speed_in(&FlatChart, &flat, 128).unwrap();
        for (a, b) in flat.points().iter().zip(again.points()) {
            assert!((a.r - b.r).abs() < 1e-8 && (a.theta - b.theta).abs() < 1e-8);
        }
    }

    #[test]
    fn resampling_equalizes_and_preserves_length() {
        // nonuniform parametrization of an ellipse
        let n = 300;
        let pts: Vec<PolarPoint> = (0..n)
            .map(|k| {
                let u = TAU * k as f64 / n as f64;
                let a = u + 0.6 * u.sin();
                PolarPoint::new(1.2 + 0.5 * a.cos(), 1.5 + 0.9 * a.sin())
            })
            .collect();
        let c = Cycle::new(pts).unwrap();
        let r = resample_constant_speed(&c, 256).unwrap();
        assert_eq!(r.len(), 256);
        assert!(spacing_deviation_in(&GyratorSurface, &r) < 1e-6);
        assert_relative_eq!(cycle_length(&r), cycle_length(&c), max_relative = 1e-4);
    }

    #[test]
    fn flat_square_with_uneven_sampling() {
        // 3 points on the bottom/top edges for every 1 on the sides
        let mut pts = Vec::new();
        let side = |a: [f64; 2], b: [f64; 2], m: usize, pts: &mut Vec<PolarPoint>| {
            for k in 0..m {
                let s = k as f64 / m as f64;
                pts.push(PolarPoint::new(a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])));
            }
        };
        side([1.0, 1.0], [2.0, 1.0], 300, &mut pts);
        side([2.0, 1.0], [2.0, 2.0], 100, &mut pts);
        side([2.0, 2.0], [1.0, 2.0], 300, &mut pts);
        side([1.0, 2.0], [1.0, 1.0], 100, &mut pts);
        let c = Cycle::new(pts).unwrap();
        let r = resample_constant_speed_in(&FlatChart, &c, 400).unwrap();
        assert!(spacing_deviation_in(&FlatChart, &r) < 1e-6);
        assert_relative_eq!(cycle_length_in(&FlatChart, &r), 4.0, max_relative = 1e-3);
        // as many points on each side
        let bottom = r.points().iter().filter(|p| (p.theta - 1.0).abs() < 1e-3).count();
        let right = r.points().iter().filter(|p| (p.r - 2.0).abs() < 1e-3).count();
        assert!((bottom as i64 - right as i64).abs() <= 2, "{bottom} vs {right}");
    }
}
