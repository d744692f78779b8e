//! Euler–Maruyama simulation of the two-temperature Langevin ensemble.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::schedule::ControlSchedule;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::manifold::SymMat2;

pub const MIN_PARTICLES: usize = 1000;

/// Escape radius, in units of `ℓ_r`, beyond which integration is declared unstable.
const ESCAPE_RADIUS: f64 = 1e6;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn from_samples(x: impl ExactSizeIterator<Item = f64> + Clone) -> Self {
        let n = x.len() as f64;
        let mean = x.clone().sum::<f64>() / n;
        let var = x.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        Estimate { mean, se: (var / n).sqrt() }
    }

    /// `(mean − value) / se`; zero when both the deviation and `se` vanish.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = self.mean - value;
        if d == 0.0 {
            0.0
        } else {
            d / self.se
        }
    }
}

/// Empirical covariance of the ensemble with per-entry standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub time: f64,
    pub xx: Estimate,
    pub xy: Estimate,
    pub yy: Estimate,
}

impl CovarianceEstimate {
    /// Largest `|z|` of the entries against `sigma`.
    pub fn max_abs_z(&self, sigma: SymMat2) -> f64 {
        [self.xx.z_score(sigma.xx), self.xy.z_score(sigma.xy), self.yy.z_score(sigma.yy)]
            .iter()
            .fold(0.0f64, |m, z| m.max(z.abs()))
    }
}

/// Ensemble averages of the stochastic energetics over one period.
///
/// `work_in` is the work done on the particle; `heat_x` and `heat_y` are the
/// heats absorbed from the respective baths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergeticsEstimate {
    pub n_particles: usize,
    pub dt: f64,
    pub seed: u64,
    pub work_in: Estimate,
    pub heat_x: Estimate,
    pub heat_y: Estimate,
    pub heat_total: Estimate,
    pub delta_energy: Estimate,
    /// `ΔE − W − Q` per trajectory; its `se` is the combined standard error
    /// of `ΔE`, `W` and `Q`.
    pub first_law_residual: Estimate,
    pub mid_covariance: CovarianceEstimate,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    work: f64,
    heat: [f64; 2],
    e0: f64,
    e1: f64,
    mid: [f64; 2],
}

/// Runs `n` independent particles through one period of `schedule` with time
/// step `dt` (which must divide the schedule spacing).
///
/// Particle `i` draws from the ChaCha8 stream `i` of `seed`, and results are
/// reduced in particle order, so the output does not depend on `exec`.
pub fn simulate_ensemble(
    schedule: &ControlSchedule,
    n: usize,
    dt: f64,
    seed: u64,
    exec: Execution,
) -> Result<EnergeticsEstimate> {
    if n < MIN_PARTICLES {
        return Err(invalid(format!("at least {MIN_PARTICLES} particles are required (got {n})")));
    }
    let h = schedule.step();
    let sub = (h / dt).round();
    if !(dt > 0.0) || sub < 1.0 || (sub * dt - h).abs() > 1e-9 * h {
        return Err(invalid(format!("dt = {dt} must divide the schedule spacing {h}")));
    }
    let sub = sub as usize;
    let p = *schedule.params();
    let chol = schedule.sigmas_ref()[0].cholesky()?;
    let held: Vec<SymMat2> = (0..schedule.n_steps()).map(|j| schedule.held_gain(j)).collect();
    let noise = [(2.0 * p.kb * p.tx * dt / p.gamma).sqrt(), (2.0 * p.kb * p.ty * dt / p.gamma).sqrt()];
    let drift = dt / p.gamma;
    let escape = ESCAPE_RADIUS * p.ell_r;
    let mid_step = schedule.n_steps() / 2;

    let tallies = exec.map_indexed(n, |i| -> Result<Tally> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
        let (z0, z1) = (normal(), normal());
        let mut xi = [chol[0] * z0, chol[1] * z0 + chol[2] * z1];
        let mut t = Tally { e0: 0.5 * held[0].quad_form(xi), ..Default::default() };
        for (j, k) in held.iter().enumerate() {
            if j > 0 {
                t.work += 0.5 * k.sub(held[j - 1]).quad_form(xi);
            }
            if j == mid_step {
                t.mid = xi;
            }
            let mut force = k.apply(xi);
            for step in 0..sub {
                let next =
                    [xi[0] - drift * force[0] + noise[0] * normal(), xi[1] - drift * force[1] + noise[1] * normal()];
                let next_force = k.apply(next);
                t.heat[0] += 0.5 * (force[0] + next_force[0]) * (next[0] - xi[0]);
                t.heat[1] += 0.5 * (force[1] + next_force[1]) * (next[1] - xi[1]);
                xi = next;
                force = next_force;
                if !(xi[0].abs() <= escape && xi[1].abs() <= escape) {
                    return Err(Error::UnstableIntegration { particle: i, step: j * sub + step + 1 });
                }
            }
        }
        t.work += 0.5 * held[0].sub(held[held.len() - 1]).quad_form(xi);
        t.e1 = 0.5 * held[0].quad_form(xi);
        Ok(t)
    });
    let tallies = tallies.into_iter().collect::<Result<Vec<_>>>()?;

    let est = |f: &dyn Fn(&Tally) -> f64| Estimate::from_samples(tallies.iter().map(f));
    let work_in = est(&|t| t.work);
    let heat_x = est(&|t| t.heat[0]);
    let heat_y = est(&|t| t.heat[1]);
    let heat_total = est(&|t| t.heat[0] + t.heat[1]);
    let delta_energy = est(&|t| t.e1 - t.e0);
    let residual = est(&|t| t.e1 - t.e0 - t.work - t.heat[0] - t.heat[1]);
    let combined = (delta_energy.se.powi(2) + work_in.se.powi(2) + heat_total.se.powi(2)).sqrt();
    Ok(EnergeticsEstimate {
        n_particles: n,
        dt,
        seed,
        work_in,
        heat_x,
        heat_y,
        heat_total,
        delta_energy,
        first_law_residual: Estimate { mean: residual.mean, se: combined },
        mid_covariance: CovarianceEstimate {
            time: schedule.times()[mid_step],
            xx: est(&|t| t.mid[0] * t.mid[0]),
            xy: est(&|t| t.mid[0] * t.mid[1]),
            yy: est(&|t| t.mid[1] * t.mid[1]),
        },
    })
}
