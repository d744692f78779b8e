//! Deterministic references for the ensemble energetics.

use serde::{Deserialize, Serialize};

use super::schedule::ControlSchedule;
use crate::error::{invalid, Result};
use crate::manifold::{lyapunov_solve, Mat2, SymMat2};

/// Expected energetics of one period. Signs follow [`super::EnergeticsEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEnergetics {
    pub work_in: f64,
    pub heat_x: f64,
    pub heat_y: f64,
    pub delta_energy: f64,
}

impl ExpectedEnergetics {
    pub fn heat_total(&self) -> f64 {
        self.heat_x + self.heat_y
    }
}

/// Per-bath heats absorbed along the schedule's reference covariance path,
/// integrating `γ⁻¹(k_B K_ii T_i − (KΣK)_ii)` with the periodic trapezoid rule.
pub fn analytic_bath_heats(schedule: &ControlSchedule) -> [f64; 2] {
    let n = schedule.n_steps();
    let mut q = [0.0; 2];
    for (k, s) in schedule.gains()[..n].iter().zip(&schedule.sigmas_ref()[..n]) {
        let r = heat_rates(*k, *s, schedule);
        q[0] += r[0];
        q[1] += r[1];
    }
    let h = schedule.step();
    [q[0] * h, q[1] * h]
}

fn heat_rates(k: SymMat2, s: SymMat2, schedule: &ControlSchedule) -> [f64; 2] {
    let p = schedule.params();
    let ksk = k.congruence(s);
    [(p.kb * k.xx * p.tx - ksk.xx) / p.gamma, (p.kb * k.yy * p.ty - ksk.yy) / p.gamma]
}

fn matmul(a: Mat2, b: Mat2) -> Mat2 {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn check_substeps(schedule: &ControlSchedule, dt: f64) -> Result<usize> {
    let h = schedule.step();
    let sub = (h / dt).round();
    if !(dt > 0.0) || sub < 1.0 || (sub * dt - h).abs() > 1e-9 * h {
        return Err(invalid(format!("dt = {dt} must divide the schedule spacing {h}")));
    }
    Ok(sub as usize)
}

/// Exact expectation of the Euler–Maruyama estimator in
/// [`super::simulate_ensemble`], obtained by propagating second moments
/// through the discrete update `ξ' = (I − dtK/γ)ξ + noise`.
pub fn em_moment_reference(schedule: &ControlSchedule, dt: f64) -> Result<ExpectedEnergetics> {
    let sub = check_substeps(schedule, dt)?;
    let p = schedule.params();
    let noise = SymMat2::diag(2.0 * p.kb * p.tx * dt / p.gamma, 2.0 * p.kb * p.ty * dt / p.gamma);
    let n = schedule.n_steps();
    let held: Vec<SymMat2> = (0..n).map(|j| schedule.held_gain(j)).collect();
    let mut s = schedule.sigmas_ref()[0];
    let e0 = 0.5 * held[0].trace_product(s);
    let mut out = ExpectedEnergetics { work_in: 0.0, heat_x: 0.0, heat_y: 0.0, delta_energy: 0.0 };
    for (j, k) in held.iter().enumerate() {
        if j > 0 {
            out.work_in += 0.5 * k.sub(held[j - 1]).trace_product(s);
        }
        let a = SymMat2::IDENTITY.axpy(-dt / p.gamma, *k);
        let km = k.to_mat();
        for _ in 0..sub {
            let next = a.congruence(s).add(noise);
            // E[ξ ξ'ᵀ] = Σ A
            let c = s.mul(a);
            let kc = matmul(km, c);
            let ks = k.mul(s);
            let kn = k.mul(next);
            let kct = matmul(km, [[c[0][0], c[1][0]], [c[0][1], c[1][1]]]);
            out.heat_x += 0.5 * (kc[0][0] - ks[0][0] + kn[0][0] - kct[0][0]);
            out.heat_y += 0.5 * (kc[1][1] - ks[1][1] + kn[1][1] - kct[1][1]);
            s = next;
        }
    }
    out.work_in += 0.5 * held[0].sub(held[n - 1]).trace_product(s);
    out.delta_energy = 0.5 * held[0].trace_product(s) - e0;
    Ok(out)
}

/// `∫₀ʰ e^{−tK/γ} D e^{−tK/γ} dt` and `e^{−hK/γ}` for symmetric `K`.
fn decay_integral(k: SymMat2, d: SymMat2, h: f64, gamma: f64) -> (SymMat2, SymMat2) {
    let (l1, l2, phi) = k.eigen();
    let (c, s) = (phi.cos(), phi.sin());
    // D in the eigenbasis of K
    let dp = [
        c * c * d.xx + 2.0 * c * s * d.xy + s * s * d.yy,
        (c * c - s * s) * d.xy + c * s * (d.yy - d.xx),
        s * s * d.xx - 2.0 * c * s * d.xy + c * c * d.yy,
    ];
    let f = |rate: f64| {
        let x = rate * h / gamma;
        if x.abs() < 1e-8 {
            h * (1.0 - 0.5 * x)
        } else {
            -(-x).exp_m1() * gamma / rate
        }
    };
    let ip = [dp[0] * f(2.0 * l1), dp[1] * f(l1 + l2), dp[2] * f(2.0 * l2)];
    let back = SymMat2::new(
        c * c * ip[0] - 2.0 * c * s * ip[1] + s * s * ip[2],
        c * s * (ip[0] - ip[2]) + (c * c - s * s) * ip[1],
        s * s * ip[0] + 2.0 * c * s * ip[1] + c * c * ip[2],
    );
    let e = SymMat2::from_eigen((-l1 * h / gamma).exp(), (-l2 * h / gamma).exp(), phi);
    (back, e)
}

/// Energetics of the piecewise-constant schedule used by the simulator,
/// integrated exactly on each interval (the `dt → 0` limit of
/// [`em_moment_reference`]).
pub fn exact_hold_reference(schedule: &ControlSchedule) -> ExpectedEnergetics {
    let p = schedule.params();
    let temp = p.temperature_matrix();
    let n = schedule.n_steps();
    let h = schedule.step();
    let held: Vec<SymMat2> = (0..n).map(|j| schedule.held_gain(j)).collect();
    let mut s = schedule.sigmas_ref()[0];
    let e0 = 0.5 * held[0].trace_product(s);
    let mut out = ExpectedEnergetics { work_in: 0.0, heat_x: 0.0, heat_y: 0.0, delta_energy: 0.0 };
    for (j, k) in held.iter().enumerate() {
        if j > 0 {
            out.work_in += 0.5 * k.sub(held[j - 1]).trace_product(s);
        }
        let eq = lyapunov_solve(*k, temp);
        let (int, e) = decay_integral(*k, s.sub(eq), h, p.gamma);
        // ∫Σ dt over the interval
        let sigma_int = eq.scale(h).add(int);
        let ksk = k.congruence(sigma_int);
        out.heat_x += (p.kb * k.xx * p.tx * h - ksk.xx) / p.gamma;
        out.heat_y += (p.kb * k.yy * p.ty * h - ksk.yy) / p.gamma;
        s = eq.add(e.congruence(s.sub(eq)));
    }
    out.work_in += 0.5 * held[0].sub(held[n - 1]).trace_product(s);
    out.delta_energy = 0.5 * held[0].trace_product(s) - e0;
    out
}
