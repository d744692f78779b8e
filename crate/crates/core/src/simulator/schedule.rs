use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::functionals::{Cycle, SmoothCycle};
use crate::manifold::{
    control_gain, lyapunov_operator, sigma_embedding_jacobian, sigma_from_embedding, SymMat2, ThermoParams, R_MIN,
};

/// Periodic control protocol `K(t)` on a uniform grid over `[0, t_f]`,
/// together with the covariance path it is designed to produce.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ControlSchedule {
    params: ThermoParams,
    /// `n_steps + 1` grid times; the last equals `t_f`.
    times: Vec<f64>,
    gains: Vec<SymMat2>,
    sigmas_ref: Vec<SymMat2>,
    sigma_dots_ref: Vec<SymMat2>,
}

impl ControlSchedule {
    /// Builds a schedule from per-node samples (`n_steps + 1` of each, the
    /// last repeating the first).
    pub fn from_samples(
        params: ThermoParams,
        gains: Vec<SymMat2>,
        sigmas_ref: Vec<SymMat2>,
        sigma_dots_ref: Vec<SymMat2>,
    ) -> Result<Self> {
        params.validate()?;
        let m = gains.len();
        if m < 3 || sigmas_ref.len() != m || sigma_dots_ref.len() != m {
            return Err(invalid("a schedule needs at least two intervals and matching samples"));
        }
        let n = m - 1;
        let times = (0..=n).map(|k| params.tf * k as f64 / n as f64).collect();
        Ok(ControlSchedule { params, times, gains, sigmas_ref, sigma_dots_ref })
    }

    /// Constant gain `K = L_Σ[T]`, which holds the covariance at `sigma`.
    pub fn stationary(sigma: SymMat2, params: &ThermoParams, n_steps: usize) -> Result<Self> {
        let k = control_gain(sigma, SymMat2::ZERO, params)?;
        let m = n_steps + 1;
        Self::from_samples(*params, vec![k; m], vec![sigma; m], vec![SymMat2::ZERO; m])
    }

    /// Constant gain `gain` with the covariance at its steady state
    /// `Σ = L_K[T]`.
    pub fn static_gain(gain: SymMat2, params: &ThermoParams, n_steps: usize) -> Result<Self> {
        let sigma = lyapunov_operator(gain.require_spd()?, params.temperature_matrix())?;
        let m = n_steps + 1;
        Self::from_samples(*params, vec![gain; m], vec![sigma; m], vec![SymMat2::ZERO; m])
    }

    pub fn params(&self) -> &ThermoParams {
        &self.params
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn gains(&self) -> &[SymMat2] {
        &self.gains
    }

    pub fn sigmas_ref(&self) -> &[SymMat2] {
        &self.sigmas_ref
    }

    pub fn sigma_dots_ref(&self) -> &[SymMat2] {
        &self.sigma_dots_ref
    }

    /// Number of grid intervals.
    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        self.params.tf / self.n_steps() as f64
    }

    /// Gain held over interval `j`: the average of its end values.
    pub fn held_gain(&self, j: usize) -> SymMat2 {
        self.gains[j].add(self.gains[j + 1]).scale(0.5)
    }

    /// `K(t)` by periodic four-point Lagrange interpolation of the grid values.
    pub fn gain_at(&self, t: f64) -> SymMat2 {
        let n = self.n_steps();
        let u = (t / self.step()).rem_euclid(n as f64);
        let j = (u.floor() as usize).min(n - 1);
        let s = u - j as f64;
        let idx = |k: isize| (j as isize + k).rem_euclid(n as isize) as usize;
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        let mut out = SymMat2::ZERO;
        for (k, wk) in (-1..=2).zip(w) {
            out = out.axpy(wk, self.gains[idx(k)]);
        }
        out
    }

    /// Largest violation of `γΣ̇ + KΣ + ΣK = T` over the grid (max entry).
    pub fn lyapunov_residual(&self) -> f64 {
        self.gains
            .iter()
            .zip(&self.sigmas_ref)
            .zip(&self.sigma_dots_ref)
            .map(|((k, s), sd)| crate::manifold::lyapunov_residual(*s, *sd, *k, &self.params).max_abs())
            .fold(0.0, f64::max)
    }
}

/// Gains that steer the covariance along `cycle` (traversed at constant
/// speed over `params.tf`) on `n_steps` uniform intervals.
///
/// Requires `n_steps ≥ 16 · cycle.len()`.
pub fn schedule_from_cycle(cycle: &Cycle, params: &ThermoParams, n_steps: usize) -> Result<ControlSchedule> {
    if n_steps < 16 * cycle.len() {
        return Err(invalid(format!("n_steps must be at least 16 × {} cycle points (got {n_steps})", cycle.len())));
    }
    if let Some(p) = cycle.points().iter().find(|p| p.r < R_MIN) {
        return Err(Error::ChartViolation { r: p.r, r_min: R_MIN });
    }
    let smooth = SmoothCycle::from_cycle(cycle);
    let tf = params.tf;
    let mut gains = Vec::with_capacity(n_steps + 1);
    let mut sigmas = Vec::with_capacity(n_steps + 1);
    let mut dots = Vec::with_capacity(n_steps + 1);
    for k in 0..n_steps {
        let phase = k as f64 / n_steps as f64;
        let (w, dw) = smooth.eval_with_derivative(phase);
        let jac = sigma_embedding_jacobian(w, params.ell_r);
        let s = sigma_from_embedding(w, params.ell_r);
        let sd = jac[0].scale(dw[0] / tf).axpy(dw[1] / tf, jac[1]);
        gains.push(control_gain(s, sd, params)?);
        sigmas.push(s);
        dots.push(sd);
    }
    gains.push(gains[0]);
    sigmas.push(sigmas[0]);
    dots.push(dots[0]);
    ControlSchedule::from_samples(*params, gains, sigmas, dots)
}

/// Smallest divisor of `round(tf/dt)` that is at least `min_steps`, so that
/// `dt` divides the grid spacing.
pub fn steps_for(tf: f64, dt: f64, min_steps: usize) -> Result<usize> {
    let total = (tf / dt).round();
    if !(total >= 1.0) || ((total * dt - tf).abs() > 1e-9 * tf) {
        return Err(invalid(format!("dt = {dt} does not divide t_f = {tf}")));
    }
    let total = total as usize;
    (min_steps.max(1)..=total)
        .find(|d| total % d == 0)
        .ok_or_else(|| invalid(format!("t_f/dt = {total} has no divisor ≥ {min_steps}")))
}

/// Schedule intervals and simulation step for period `tf`: the divisor from
/// [`steps_for`] when `dt` divides `tf`, otherwise `min_steps` intervals with
/// the step shortened to the largest value `≤ dt` that divides them.
pub fn plan_time_grid(tf: f64, dt: f64, min_steps: usize) -> Result<(usize, f64)> {
    if !(dt > 0.0 && dt.is_finite() && tf > 0.0 && tf.is_finite()) || min_steps == 0 {
        return Err(invalid(format!("invalid time grid: tf = {tf}, dt = {dt}")));
    }
    if let Ok(n) = steps_for(tf, dt, min_steps) {
        return Ok((n, dt));
    }
    let sub = (tf / min_steps as f64 / dt).ceil().max(1.0);
    Ok((min_steps, tf / (min_steps as f64 * sub)))
}
