use serde::{Deserialize, Serialize};

use super::ensemble::{EnergeticsEstimate, Estimate};
use crate::error::Result;
use crate::functionals::{covariance_path_from_cycle, cycle_functionals, Cycle};
use crate::manifold::{control_gain, ThermoParams};

/// `|z|` above which a row is flagged.
pub const Z_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub quantity: String,
    pub analytic: f64,
    pub monte_carlo: Option<f64>,
    pub standard_error: Option<f64>,
    pub z: Option<f64>,
    pub flagged: bool,
}

/// Analytic cycle energetics against a Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub params: ThermoParams,
    pub rows: Vec<ComparisonRow>,
    pub max_abs_z: f64,
    pub passed: bool,
}

impl ComparisonReport {
    pub fn row(&self, quantity: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }
}

fn compared(quantity: &str, analytic: f64, mc: Estimate) -> ComparisonRow {
    let z = mc.z_score(analytic);
    ComparisonRow {
        quantity: quantity.to_string(),
        analytic,
        monte_carlo: Some(mc.mean),
        standard_error: Some(mc.se),
        z: Some(z),
        flagged: !(z.abs() <= Z_THRESHOLD),
    }
}

fn analytic_only(quantity: &str, analytic: f64) -> ComparisonRow {
    ComparisonRow {
        quantity: quantity.to_string(),
        analytic,
        monte_carlo: None,
        standard_error: None,
        z: None,
        flagged: false,
    }
}

/// Compares `mc` with the energetics of `cycle` run at `params`.
///
/// Per-bath heats are integrated along the smooth covariance path of the
/// cycle; any `|z| > 3` fails the report.
pub fn compare_report(cycle: &Cycle, params: &ThermoParams, mc: &EnergeticsEstimate) -> Result<ComparisonReport> {
    let f = cycle_functionals(cycle, params);
    let path = covariance_path_from_cycle(cycle, params, 16 * cycle.len())?;
    let mut rates_x = Vec::with_capacity(path.len());
    let mut rates_y = Vec::with_capacity(path.len());
    for (s, sd) in path.sigmas().iter().zip(path.derivatives()) {
        let k = control_gain(*s, *sd, params)?;
        let ksk = k.congruence(*s);
        rates_x.push((params.kb * k.xx * params.tx - ksk.xx) / params.gamma);
        rates_y.push((params.kb * k.yy * params.ty - ksk.yy) / params.gamma);
    }
    let qx = path.integrate(&rates_x);
    let qy = path.integrate(&rates_y);
    let neg = |e: Estimate| Estimate { mean: -e.mean, se: e.se };

    let rows = vec![
        compared("work_out", f.w_out, neg(mc.work_in)),
        compared("heat_x", qx, mc.heat_x),
        compared("heat_y", qy, mc.heat_y),
        compared("heat_total", qx + qy, mc.heat_total),
        compared("delta_energy", 0.0, mc.delta_energy),
        compared("first_law_residual", 0.0, mc.first_law_residual),
        analytic_only("q_qs", f.q_qs),
        analytic_only("q_diss", f.q_diss),
        analytic_only("efficiency", f.efficiency.unwrap_or(f64::NAN)),
    ];
    let max_abs_z = rows.iter().filter_map(|r| r.z).fold(0.0f64, |m, z| m.max(z.abs()));
    let passed = rows.iter().all(|r| !r.flagged);
    Ok(ComparisonReport { params: *params, rows, max_abs_z, passed })
}
