//! Work-maximizing cycles: gradient ascent of `A_f − μℓ²` over closed
//! polygons on the gyrator surface.
//!
//! Each iteration moves the points along the metric normal by a smoothed
//! normal velocity `ψ = (I − 2μℓ ∂²_s)⁻¹ V`, where `V` is the normal
//! component of the discrete gradient per unit length, accepts the step by an
//! Armijo test and resamples the polygon to constant speed. The smoothing
//! makes the stiff curvature term well conditioned, so steps of order one
//! are stable at any resolution.

mod objective;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functionals::spline::solve_cyclic_tridiagonal;
use crate::functionals::{
    conjectured_efficiency_bound, cycle_functionals, resample_constant_speed, resample_points, rotsym_efficiency_bound,
    segment_lengths, Cycle, CycleFunctionals, Orientation,
};
use crate::manifold::{
    geodesic_curvatures, surface, work_density, GyratorSurface, PolarPoint, SurfaceMetric, ThermoParams, R_MIN,
};

pub use objective::objective_and_gradient;
pub use sweep::{operating_point_for_efficiency, sweep_mu, MuSweepRecord, OperatingPoint};

use objective::embedded_objective;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub n_points: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub step_shrink: f64,
    pub step_max: f64,
    pub armijo: f64,
    /// Converged when the RMS normal residual relative to the RMS of the
    /// area term falls below this.
    pub grad_tol: f64,
    pub r_min: f64,
    /// Seed for perturbed initial cycles.
    pub seed: u64,
    /// Sweeps start each `μ` from the previous optimum.
    pub warm_start: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            n_points: 256,
            max_iters: 20_000,
            step_init: 0.1,
            step_shrink: 0.5,
            step_max: 4.0,
            armijo: 1e-4,
            grad_tol: 1e-6,
            r_min: R_MIN,
            seed: 0,
            warm_start: true,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 32 {
            return Err(invalid(format!("n_points must be at least 32 (got {})", self.n_points)));
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return Err(invalid("step_shrink must lie in (0, 1)"));
        }
        for (name, v) in [
            ("step_init", self.step_init),
            ("step_max", self.step_max),
            ("armijo", self.armijo),
            ("grad_tol", self.grad_tol),
            ("r_min", self.r_min),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive (got {v})")));
            }
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizationStatus {
    Converged,
    NotConverged,
    /// The cycle shrank to a point: no positive-work cycle at this `μ`.
    Collapsed,
}

/// Spread of `κ/f` along a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocStatistics {
    /// `stdev(κ/f) / mean(κ/f)`.
    pub dispersion: f64,
    pub mean_ratio: f64,
    /// `1 / (2ℓμ)`.
    pub expected_ratio: f64,
    /// Points with `|f| ≥ 1e−6` that entered the statistics.
    pub points_used: usize,
}

impl FocStatistics {
    /// `|mean − expected| / expected`.
    pub fn mean_deviation(&self) -> f64 {
        (self.mean_ratio - self.expected_ratio).abs() / self.expected_ratio
    }
}

/// Statistics of `κᵢ/fᵢ` for the stationarity condition `κ/f = 1/(2ℓμ)`.
pub fn foc_residual(cycle: &Cycle, mu: f64) -> Result<FocStatistics> {
    let kappa = geodesic_curvatures(cycle)?;
    let length = crate::functionals::cycle_length(cycle);
    let ratios: Vec<f64> = cycle
        .points()
        .iter()
        .zip(&kappa)
        .filter_map(|(p, k)| {
            let f = work_density(*p);
            (f.abs() >= 1e-6).then_some(k / f)
        })
        .collect();
    let m = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / m;
    let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / m;
    Ok(FocStatistics {
        dispersion: var.sqrt() / mean.abs(),
        mean_ratio: mean,
        expected_ratio: 1.0 / (2.0 * length * mu),
        points_used: ratios.len(),
    })
}

/// Number of pairs of non-adjacent polygon edges that cross, in the embedding.
pub fn self_intersections(cycle: &Cycle) -> usize {
    let w = cycle.embedded();
    let n = w.len();
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let mut count = 0;
    for i in 0..n {
        let (a, b) = (w[i], w[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (w[j], w[(j + 1) % n]);
            let (d1, d2) = (orient(a, b, c), orient(a, b, d));
            let (d3, d4) = (orient(c, d, a), orient(c, d, b));
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

/// Center of the default initial cycle: the maximum of the work density.
pub fn default_center() -> PolarPoint {
    PolarPoint::new(1f64.asinh(), std::f64::consts::FRAC_PI_2)
}

/// Coordinate circle `(r, θ) = center + radius·(cos φ, sin φ)`, resampled to
/// constant speed. `Negative` traverses it clockwise.
pub fn initial_cycle(center: PolarPoint, radius: f64, n: usize, orientation: Orientation) -> Result<Cycle> {
    if n < 32 {
        return Err(invalid(format!("initial cycles need n ≥ 32 (got {n})")));
    }
    if !(radius > 0.0) {
        return Err(invalid("radius must be positive"));
    }
    if center.r - radius < R_MIN {
        return Err(Error::ChartViolation { r: center.r - radius, r_min: R_MIN });
    }
    let sign = orientation.sign();
    let pts = (0..n)
        .map(|k| {
            let a = sign * std::f64::consts::TAU * k as f64 / n as f64;
            PolarPoint::new(center.r + radius * a.cos(), center.theta + radius * a.sin())
        })
        .collect();
    resample_constant_speed(&Cycle::new(pts)?, n)
}

/// Circle with random low-order radial harmonics of relative size up to
/// `amplitude`, drawn from `seed`.
pub fn perturbed_initial_cycle(center: PolarPoint, radius: f64, n: usize, amplitude: f64, seed: u64) -> Result<Cycle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64)> =
        (0..4).map(|_| (rng.random_range(-1.0..1.0) * amplitude, rng.random_range(-1.0..1.0) * amplitude)).collect();
    let pts = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            let scale = 1.0
                + modes
                    .iter()
                    .enumerate()
                    .map(|(m, (c, s))| c * ((m + 2) as f64 * a).cos() + s * ((m + 2) as f64 * a).sin())
                    .sum::<f64>();
            PolarPoint::new(center.r + radius * scale * a.cos(), center.theta + radius * scale * a.sin())
        })
        .collect::<Vec<_>>();
    if pts.iter().any(|p| p.r < R_MIN) {
        return Err(Error::ChartViolation { r: pts.iter().map(|p| p.r).fold(f64::INFINITY, f64::min), r_min: R_MIN });
    }
    resample_constant_speed(&Cycle::new(pts)?, n)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub mu: f64,
    pub cycle: Cycle,
    /// Functionals in units `k_B = γ = T_r = ℓ_r = 1`.
    pub functionals: CycleFunctionals,
    pub objective: f64,
    pub foc: Option<FocStatistics>,
    /// Final relative normal residual.
    pub gradient_residual: f64,
    pub iterations: usize,
    pub status: OptimizationStatus,
    pub self_intersections: usize,
    /// `1 − 4πμ`
    pub efficiency_bound: f64,
    /// `1 − 8πμ`
    pub conjectured_bound: f64,
    /// Objective after each accepted step.
    #[serde(skip)]
    pub history: Vec<f64>,
}

impl OptimizationResult {
    pub fn converged(&self) -> bool {
        self.status == OptimizationStatus::Converged
    }

    /// `η ≤ 1 − 8πμ`, or `None` when `η` is undefined.
    pub fn satisfies_conjecture(&self) -> Option<bool> {
        self.functionals.efficiency.map(|e| e <= self.conjectured_bound)
    }
}

const COLLAPSE_LENGTH: f64 = 1e-3;
const COLLAPSE_PATIENCE: usize = 10;
const MIN_STEP: f64 = 1e-14;

/// Normal velocity, smoothed step direction and residual at `w`.
struct Direction {
    /// Displacement per unit step length, per point.
    step: Vec<[f64; 2]>,
    /// Directional derivative of the objective along `step`.
    slope: f64,
    residual: f64,
}

fn ascent_direction(w: &[[f64; 2]], obj: &objective::EmbeddedObjective, mu: f64) -> Direction {
    let n = w.len();
    let seg = segment_lengths(&GyratorSurface, w);
    let h_mean = obj.length / n as f64;
    let mut v = vec![0.0; n];
    let mut va = vec![0.0; n];
    let mut normals = vec![[0.0; 2]; n];
    for i in 0..n {
        let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
        let t = [w[ip][0] - w[im][0], w[ip][1] - w[im][1]];
        let g = GyratorSurface.tensor(w[i]);
        let nrm = surface::left_normal(g, t);
        let h = 0.5 * (seg[i] + seg[im]);
        normals[i] = nrm;
        v[i] = (obj.grad[i][0] * nrm[0] + obj.grad[i][1] * nrm[1]) / h;
        va[i] = (obj.grad_area[i][0] * nrm[0] + obj.grad_area[i][1] * nrm[1]) / h;
    }
    let beta = 2.0 * mu * obj.length;
    let c = beta / (h_mean * h_mean);
    let psi = solve_cyclic_tridiagonal(&vec![-c; n], &vec![1.0 + 2.0 * c; n], &vec![-c; n], &v);
    let step: Vec<[f64; 2]> = psi.iter().zip(&normals).map(|(p, nr)| [p * nr[0], p * nr[1]]).collect();
    let slope = obj.grad.iter().zip(&step).map(|(g, s)| g[0] * s[0] + g[1] * s[1]).sum();
    let rms = |x: &[f64]| (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
    let scale = rms(&va);
    let residual = if scale > 0.0 { rms(&v) / scale } else { f64::INFINITY };
    Direction { step, slope, residual }
}

fn clamp_chart(w: &mut [[f64; 2]], r_min: f64) {
    for p in w.iter_mut() {
        let r = p[0].hypot(p[1]);
        if r < r_min {
            *p = if r > 0.0 { [p[0] * r_min / r, p[1] * r_min / r] } else { [r_min, 0.0] };
        }
    }
}

/// Maximizes `A_f − μℓ²` starting from `init`.
pub fn optimize_cycle(init: &Cycle, mu: f64, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(invalid(format!("mu must be positive (got {mu})")));
    }
    let n = cfg.n_points;
    let mut w = resample_points(&GyratorSurface, &init.embedded(), n)?;
    let mut theta_ref = init.points()[0].theta;
    let mut obj = embedded_objective(&w, mu);
    let mut alpha = cfg.step_init;
    let mut history = vec![obj.value];
    let mut small = 0;
    let mut status = OptimizationStatus::NotConverged;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        let dir = ascent_direction(&w, &obj, mu);
        residual = dir.residual;
        if residual <= cfg.grad_tol {
            status = OptimizationStatus::Converged;
            break;
        }
        if obj.length < COLLAPSE_LENGTH {
            small += 1;
            if small >= COLLAPSE_PATIENCE {
                status = OptimizationStatus::Collapsed;
                break;
            }
        } else {
            small = 0;
        }
        let mut accepted = None;
        while alpha >= MIN_STEP {
            let mut cand: Vec<[f64; 2]> =
                w.iter().zip(&dir.step).map(|(p, s)| [p[0] + alpha * s[0], p[1] + alpha * s[1]]).collect();
            clamp_chart(&mut cand, cfg.r_min);
            if let Ok(cand) = resample_points(&GyratorSurface, &cand, n) {
                let cobj = embedded_objective(&cand, mu);
                if cobj.value.is_finite() && cobj.value >= obj.value + cfg.armijo * alpha * dir.slope {
                    accepted = Some((cand, cobj));
                    break;
                }
            }
            alpha *= cfg.step_shrink;
        }
        let Some((cand, cobj)) = accepted else {
            break;
        };
        iterations += 1;
        theta_ref = PolarPoint::from_embedding(cand[0], theta_ref).theta;
        w = cand;
        obj = cobj;
        history.push(obj.value);
        alpha = (alpha / cfg.step_shrink).min(cfg.step_max);
    }

    clamp_chart(&mut w, cfg.r_min);
    let cycle = Cycle::from_embedding(&w, theta_ref)?;
    let params = ThermoParams::nondimensional(mu);
    let functionals = cycle_functionals(&cycle, &params);
    let foc = if status == OptimizationStatus::Collapsed { None } else { foc_residual(&cycle, mu).ok() };
    Ok(OptimizationResult {
        mu,
        self_intersections: self_intersections(&cycle),
        cycle,
        objective: functionals.objective(mu),
        functionals,
        foc,
        gradient_residual: residual,
        iterations,
        status,
        efficiency_bound: rotsym_efficiency_bound(mu, 0.5),
        conjectured_bound: conjectured_efficiency_bound(mu),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_cycle_examples() {
        let c = initial_cycle(default_center(), 0.3, 256, Orientation::Positive).unwrap();
        let a = crate::functionals::area_line_integral(&c);
        assert!(a > 0.0);
        let r = initial_cycle(default_center(), 0.3, 256, Orientation::Negative).unwrap();
        assert!((crate::functionals::area_line_integral(&r) + a).abs() < 1e-6 * a);
        assert!(matches!(
            initial_cycle(PolarPoint::new(0.2, 1.0), 0.3, 64, Orientation::Positive),
            Err(Error::ChartViolation { .. })
        ));
    }

    #[test]
    fn small_loop_area_asymptotics() {
        let center = PolarPoint::new(1.3, 1.2);
        let rad = 1e-4;
        let c = initial_cycle(center, rad, 64, Orientation::Positive).unwrap();
        let m = crate::manifold::metric(center.r);
        let expect = work_density(center) * m.det().sqrt() * std::f64::consts::PI * rad * rad;
        let got = crate::functionals::area_line_integral(&c);
        assert!((got / expect - 1.0).abs() < 1e-2, "{got} vs {expect}");
    }

    #[test]
    fn figure_eight_is_self_intersecting() {
        // odd count so that no vertex sits on the crossing
        let n = 63;
        let pts = (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                PolarPoint::new(1.0 + 0.3 * a.sin(), 1.5 + 0.3 * (2.0 * a).sin())
            })
            .collect();
        let c = Cycle::new_unchecked(pts, Orientation::Positive);
        assert_eq!(self_intersections(&c), 1);
        let circle = initial_cycle(default_center(), 0.3, 64, Orientation::Positive).unwrap();
        assert_eq!(self_intersections(&circle), 0);
    }

    #[test]
    fn large_mu_collapses() {
        let init = initial_cycle(default_center(), 0.3, 64, Orientation::Positive).unwrap();
        let cfg = OptimizerConfig { n_points: 64, ..Default::default() };
        let res = optimize_cycle(&init, 0.3, &cfg).unwrap();
        assert_eq!(res.status, OptimizationStatus::Collapsed);
        assert!(res.history.windows(2).all(|w| w[1] >= w[0]));
    }
}
