use serde::{Deserialize, Serialize};

use super::{default_center, initial_cycle, optimize_cycle, OptimizationResult, OptimizationStatus, OptimizerConfig};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::functionals::{conjectured_efficiency_bound, rotsym_efficiency_bound, Cycle, Orientation};

/// One point of the optimal envelope `A_f*(ℓ)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuSweepRecord {
    pub mu: f64,
    pub length: f64,
    pub area_f: f64,
    /// `A_f − μℓ²` in units of `k_B T_r`.
    pub w_star: f64,
    pub efficiency: Option<f64>,
    pub eta_bound_4pi: f64,
    pub eta_bound_8pi_conjecture: f64,
    pub foc_residual: Option<f64>,
    pub status: OptimizationStatus,
    pub iterations: usize,
    pub self_intersections: usize,
    #[serde(skip)]
    pub cycle: Option<Cycle>,
}

impl MuSweepRecord {
    fn from_result(res: &OptimizationResult) -> Self {
        let collapsed = res.status == OptimizationStatus::Collapsed;
        MuSweepRecord {
            mu: res.mu,
            length: res.functionals.length,
            area_f: res.functionals.area_f,
            w_star: if collapsed { res.objective.min(0.0) } else { res.objective },
            efficiency: res.functionals.efficiency,
            eta_bound_4pi: rotsym_efficiency_bound(res.mu, 0.5),
            eta_bound_8pi_conjecture: conjectured_efficiency_bound(res.mu),
            foc_residual: res.foc.map(|f| f.dispersion),
            status: res.status,
            iterations: res.iterations,
            self_intersections: res.self_intersections,
            cycle: (!collapsed).then(|| res.cycle.clone()),
        }
    }
}

const INITIAL_RADIUS: f64 = 0.3;

fn fresh_start(cfg: &OptimizerConfig) -> Result<Cycle> {
    initial_cycle(default_center(), INITIAL_RADIUS, cfg.n_points, Orientation::Positive)
}

/// Optimizes at each `μ` and returns the records sorted by increasing `μ`.
///
/// With `cfg.warm_start` the values are visited from large to small `μ`, each
/// starting from the previous optimum (or from the default circle after a
/// collapse). Without it every `μ` starts from the default circle and the
/// values are distributed over `exec`.
pub fn sweep_mu(mus: &[f64], cfg: &OptimizerConfig, exec: Execution) -> Result<Vec<MuSweepRecord>> {
    if mus.is_empty() {
        return Err(invalid("the μ list is empty"));
    }
    if mus.iter().any(|m| !(*m > 0.0 && m.is_finite())) {
        return Err(invalid("every μ must be positive"));
    }
    cfg.validate()?;
    let mut sorted = mus.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    sorted.dedup();

    let mut records = if cfg.warm_start {
        let mut out = Vec::with_capacity(sorted.len());
        let mut prev: Option<Cycle> = None;
        for &mu in sorted.iter().rev() {
            let init = match &prev {
                Some(c) => c.clone(),
                None => fresh_start(cfg)?,
            };
            let res = optimize_cycle(&init, mu, cfg)?;
            prev = (res.status != OptimizationStatus::Collapsed).then(|| res.cycle.clone());
            out.push(MuSweepRecord::from_result(&res));
        }
        out
    } else {
        exec.map_slice(&sorted, |&mu| -> Result<MuSweepRecord> {
            let res = optimize_cycle(&fresh_start(cfg)?, mu, cfg)?;
            Ok(MuSweepRecord::from_result(&res))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?
    };
    records.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    Ok(records)
}

/// Best cycle for a prescribed efficiency at period ratio `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub mu: f64,
    pub eta: f64,
    pub length: f64,
    pub area_f: f64,
    /// `η · A_f*(ℓ)` in units of `k_B T_r`.
    pub work: f64,
}

/// Finds `ℓ` with `A_f*(ℓ)(1 − η) = μℓ²` on the envelope traced by `sweep`,
/// interpolating linearly between records in `A_f/ℓ²`.
pub fn operating_point_for_efficiency(eta: f64, mu: f64, sweep: &[MuSweepRecord]) -> Result<OperatingPoint> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(invalid(format!("eta must lie in (0, 1) (got {eta})")));
    }
    let target = mu / (1.0 - eta);
    let mut env: Vec<&MuSweepRecord> =
        sweep.iter().filter(|r| r.status != OptimizationStatus::Collapsed && r.area_f > 0.0).collect();
    env.sort_by(|a, b| a.length.total_cmp(&b.length));
    let ratio = |r: &MuSweepRecord| r.area_f / (r.length * r.length);
    for pair in env.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (ga, gb) = (ratio(a) - target, ratio(b) - target);
        if ga == 0.0 || ga * gb < 0.0 || (gb == 0.0 && ga != 0.0) {
            let s = if ga == gb { 0.0 } else { ga / (ga - gb) };
            let length = a.length + s * (b.length - a.length);
            let area_f = a.area_f + s * (b.area_f - a.area_f);
            return Ok(OperatingPoint { mu, eta, length, area_f, work: eta * area_f });
        }
    }
    if let [only] = env.as_slice() {
        if (ratio(only) - target).abs() <= 1e-12 * target {
            return Ok(OperatingPoint { mu, eta, length: only.length, area_f: only.area_f, work: eta * only.area_f });
        }
    }
    Err(Error::NoCrossing { eta })
}
