//! Heat, work and efficiency of cycles and of general covariance paths.

use serde::{Deserialize, Serialize};

use super::area::area_line_integral;
use super::cycle::{cycle_length, Cycle};
use super::smooth::SmoothCycle;
use crate::error::{invalid, Error, Result};
use crate::manifold::{lyapunov_operator, sigma_embedding_jacobian, sigma_from_embedding, SymMat2, ThermoParams};

/// Thermodynamic functionals of one cycle at one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleFunctionals {
    /// `A_f`, dimensionless.
    pub area_f: f64,
    /// `ℓ` in units of `ℓ_r`.
    pub length: f64,
    pub q_qs: f64,
    pub q_diss: f64,
    pub w_out: f64,
    /// `W_out / Q_qs`; `None` when `A_f ≤ 0`.
    pub efficiency: Option<f64>,
}

impl CycleFunctionals {
    /// `Q_qs = k_B T_r A_f`, `Q_diss = γℓ_r²ℓ²/t_f`, `W_out = Q_qs − Q_diss`.
    pub fn from_geometry(area_f: f64, length: f64, params: &ThermoParams) -> Self {
        let q_qs = params.energy_scale() * area_f;
        let q_diss = params.gamma * params.ell_r * params.ell_r * length * length / params.tf;
        let w_out = q_qs - q_diss;
        let efficiency = (area_f > 0.0).then(|| w_out / q_qs);
        CycleFunctionals { area_f, length, q_qs, q_diss, w_out, efficiency }
    }

    /// `A_f − μℓ²`, the work in units of `k_B T_r`.
    pub fn objective(&self, mu: f64) -> f64 {
        self.area_f - mu * self.length * self.length
    }
}

/// Functionals of a cycle traversed at constant speed in time `params.tf`.
pub fn cycle_functionals(cycle: &Cycle, params: &ThermoParams) -> CycleFunctionals {
    CycleFunctionals::from_geometry(area_line_integral(cycle), cycle_length(cycle), params)
}

/// Relative deviation above which supplied derivatives are rejected.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-2;

/// Time-sampled covariance path with derivative samples.
///
/// A periodic path samples `[t₀, t₀ + period)`; the sample at `t₀ + period`
/// is implied to equal the first one.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePath {
    times: Vec<f64>,
    sigmas: Vec<SymMat2>,
    derivatives: Vec<SymMat2>,
    period: Option<f64>,
    supplied: bool,
}

impl CovariancePath {
    /// Open path; derivatives by finite differences.
    pub fn new(times: Vec<f64>, sigmas: Vec<SymMat2>) -> Result<Self> {
        Self::build(times, sigmas, None)
    }

    /// Closed path of period `period`; derivatives by periodic finite differences.
    pub fn periodic(times: Vec<f64>, sigmas: Vec<SymMat2>, period: f64) -> Result<Self> {
        Self::build(times, sigmas, Some(period))
    }

    fn build(times: Vec<f64>, sigmas: Vec<SymMat2>, period: Option<f64>) -> Result<Self> {
        if times.len() < 3 || times.len() != sigmas.len() {
            return Err(invalid("a covariance path needs at least three samples, one per time"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("path times must be strictly increasing"));
        }
        if let Some(p) = period {
            if !(p > times[times.len() - 1] - times[0]) {
                return Err(invalid("period must exceed the sampled time span"));
            }
        }
        for s in &sigmas {
            s.require_spd()?;
        }
        let mut path = CovariancePath { times, sigmas, derivatives: Vec::new(), period, supplied: false };
        path.derivatives = path.finite_differences();
        Ok(path)
    }

    /// Replaces the derivative samples with supplied values.
    pub fn with_derivatives(mut self, derivatives: Vec<SymMat2>) -> Result<Self> {
        if derivatives.len() != self.times.len() {
            return Err(invalid("one derivative sample per time is required"));
        }
        self.derivatives = derivatives;
        self.supplied = true;
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sigmas(&self) -> &[SymMat2] {
        &self.sigmas
    }

    pub fn derivatives(&self) -> &[SymMat2] {
        &self.derivatives
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Second-order finite differences on the (possibly nonuniform) grid,
    /// wrapping around for periodic paths and one-sided at open ends.
    pub fn finite_differences(&self) -> Vec<SymMat2> {
        let n = self.times.len();
        let t = &self.times;
        let s = &self.sigmas;
        // three-point derivative at the middle node of (ta, tb, tc)
        let mid = |h1: f64, h2: f64, a: SymMat2, b: SymMat2, c: SymMat2| {
            a.scale(-h2 / (h1 * (h1 + h2))).axpy((h2 - h1) / (h1 * h2), b).axpy(h1 / (h2 * (h1 + h2)), c)
        };
        (0..n)
            .map(|i| match self.period {
                Some(p) => {
                    let (ip, im) = ((i + 1) % n, (i + n - 1) % n);
                    let tp = if i + 1 == n { t[0] + p } else { t[ip] };
                    let tm = if i == 0 { t[n - 1] - p } else { t[im] };
                    mid(t[i] - tm, tp - t[i], s[im], s[i], s[ip])
                }
                None if i == 0 => {
                    let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
                    s[0].scale(-(2.0 * h1 + h2) / (h1 * (h1 + h2)))
                        .axpy((h1 + h2) / (h1 * h2), s[1])
                        .axpy(-h1 / (h2 * (h1 + h2)), s[2])
                }
                None if i + 1 == n => {
                    let (h1, h2) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
                    s[n - 3]
                        .scale(h2 / (h1 * (h1 + h2)))
                        .axpy(-(h1 + h2) / (h1 * h2), s[n - 2])
                        .axpy((2.0 * h2 + h1) / (h2 * (h1 + h2)), s[n - 1])
                }
                None => mid(t[i] - t[i - 1], t[i + 1] - t[i], s[i - 1], s[i], s[i + 1]),
            })
            .collect()
    }

    /// Trapezoidal integral of per-sample values over the path.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let n = self.times.len();
        let mut acc = 0.0;
        for i in 0..n - 1 {
            acc += 0.5 * (values[i] + values[i + 1]) * (self.times[i + 1] - self.times[i]);
        }
        if let Some(p) = self.period {
            acc += 0.5 * (values[n - 1] + values[0]) * (self.times[0] + p - self.times[n - 1]);
        }
        acc
    }
}

/// Quasi-static and dissipated heat absorbed along a covariance path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathHeat {
    pub q_qs: f64,
    pub q_diss: f64,
}

impl PathHeat {
    pub fn work_out(&self) -> f64 {
        self.q_qs - self.q_diss
    }
}

/// `Q_qs = ½∫Tr[L_Σ[T]Σ̇]dt` and `Q_diss = (γ/2)∫Tr[L_Σ[Σ̇]Σ̇]dt`.
///
/// Supplied derivatives are checked against finite differences first.
pub fn heat_decomposition_covariance(path: &CovariancePath, params: &ThermoParams) -> Result<PathHeat> {
    if path.supplied {
        let fd = path.finite_differences();
        let scale = fd.iter().chain(&path.derivatives).map(|d| d.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            for (index, (a, b)) in path.derivatives.iter().zip(&fd).enumerate() {
                let deviation = a.sub(*b).norm() / scale;
                if deviation > DERIVATIVE_TOLERANCE {
                    return Err(Error::InconsistentDerivatives { index, deviation });
                }
            }
        }
    }
    let temp = params.temperature_matrix();
    let mut qs = Vec::with_capacity(path.len());
    let mut diss = Vec::with_capacity(path.len());
    for (s, d) in path.sigmas.iter().zip(&path.derivatives) {
        qs.push(0.5 * lyapunov_operator(*s, temp)?.trace_product(*d));
        diss.push(0.5 * params.gamma * lyapunov_operator(*s, *d)?.trace_product(*d));
    }
    Ok(PathHeat { q_qs: path.integrate(&qs), q_diss: path.integrate(&diss) })
}

/// Periodic covariance path traced by `cycle` over `[0, t_f)` at `n_steps`
/// uniform times, following the trigonometric interpolant of the cycle's
/// embedded points. Derivatives are exact for that interpolant.
pub fn covariance_path_from_cycle(cycle: &Cycle, params: &ThermoParams, n_steps: usize) -> Result<CovariancePath> {
    if n_steps < 3 {
        return Err(invalid("at least three time steps are required"));
    }
    let smooth = SmoothCycle::from_cycle(cycle);
    let tf = params.tf;
    let mut times = Vec::with_capacity(n_steps);
    let mut sigmas = Vec::with_capacity(n_steps);
    let mut derivs = Vec::with_capacity(n_steps);
    for k in 0..n_steps {
        let phase = k as f64 / n_steps as f64;
        let (w, dw) = smooth.eval_with_derivative(phase);
        let jac = sigma_embedding_jacobian(w, params.ell_r);
        times.push(phase * tf);
        sigmas.push(sigma_from_embedding(w, params.ell_r));
        derivs.push(jac[0].scale(dw[0] / tf).axpy(dw[1] / tf, jac[1]));
    }
    CovariancePath::periodic(times, sigmas, tf)?.with_derivatives(derivs)
}
