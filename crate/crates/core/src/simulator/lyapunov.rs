use super::schedule::ControlSchedule;
use crate::error::{Error, Result};
use crate::functionals::CovariancePath;
use crate::manifold::SymMat2;

fn rhs(k: SymMat2, s: SymMat2, temp: SymMat2, gamma: f64) -> SymMat2 {
    temp.sub(k.anticommutator(s)).scale(1.0 / gamma)
}

/// Integrates `γΣ̇ = −KΣ − ΣK + T` over one period with classical RK4, one
/// step per schedule interval.
pub fn propagate_lyapunov(schedule: &ControlSchedule, sigma0: SymMat2) -> Result<CovariancePath> {
    propagate_lyapunov_substeps(schedule, sigma0, 1)
}

/// [`propagate_lyapunov`] with `substeps` RK4 steps per schedule interval;
/// intermediate gains come from [`ControlSchedule::gain_at`].
pub fn propagate_lyapunov_substeps(
    schedule: &ControlSchedule,
    sigma0: SymMat2,
    substeps: usize,
) -> Result<CovariancePath> {
    sigma0.require_spd()?;
    let p = schedule.params();
    let temp = p.temperature_matrix();
    let gamma = p.gamma;
    let n = schedule.n_steps();
    let m = substeps.max(1);
    let h = schedule.step() / m as f64;
    let mut times = Vec::with_capacity(n + 1);
    let mut sigmas = Vec::with_capacity(n + 1);
    let mut dots = Vec::with_capacity(n + 1);
    let mut s = sigma0;
    times.push(0.0);
    sigmas.push(s);
    dots.push(rhs(schedule.gains()[0], s, temp, gamma));
    for j in 0..n {
        for q in 0..m {
            let t = schedule.times()[j] + q as f64 * h;
            let k0 = if q == 0 { schedule.gains()[j] } else { schedule.gain_at(t) };
            let kh = schedule.gain_at(t + 0.5 * h);
            let k1 = if q + 1 == m { schedule.gains()[j + 1] } else { schedule.gain_at(t + h) };
            let a = rhs(k0, s, temp, gamma);
            let b = rhs(kh, s.axpy(0.5 * h, a), temp, gamma);
            let c = rhs(kh, s.axpy(0.5 * h, b), temp, gamma);
            let d = rhs(k1, s.axpy(h, c), temp, gamma);
            s = s.axpy(h / 6.0, a.add(b.scale(2.0)).add(c.scale(2.0)).add(d));
            if !s.is_positive_definite() {
                return Err(Error::LostPositivity { time: t + h });
            }
        }
        times.push(schedule.times()[j + 1]);
        sigmas.push(s);
        dots.push(rhs(schedule.gains()[j + 1], s, temp, gamma));
    }
    CovariancePath::new(times, sigmas)?.with_derivatives(dots)
}
