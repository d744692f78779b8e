use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{output_path, Header, RunConfig};
use super::{CliError, CommonArgs, SimulateArgs, SweepArgs, EXIT_NO_POSITIVE_WORK, EXIT_VERIFICATION};
use crate::exec::Execution;
use crate::functionals::{cycle_functionals, Cycle, CycleFunctionals, Orientation};
use crate::manifold::{
    gaussian_curvature, geodesic_curvatures, metric, numeric_gaussian_curvature, work_density, PolarPoint, SymMat2,
    ThermoParams, R_MIN,
};
use crate::optimizer::{
    default_center, initial_cycle, operating_point_for_efficiency, optimize_cycle, sweep_mu, FocStatistics,
    OptimizationStatus,
};
use crate::simulator::{
    compare_report, plan_time_grid, schedule_from_cycle, simulate_ensemble, ComparisonReport, EnergeticsEstimate,
    Z_THRESHOLD,
};

const INITIAL_RADIUS: f64 = 0.3;
const F_SURFACE_THETA: usize = 121;
const F_SURFACE_R: usize = 61;

/// Contents of `cycle.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleFile {
    pub header: Header,
    pub mu: f64,
    pub params: ThermoParams,
    pub orientation: Orientation,
    pub points: Vec<PolarPoint>,
    /// Nondimensional functionals (`k_B = γ = T_r = ℓ_r = 1`).
    pub functionals: CycleFunctionals,
    /// Functionals in the units of `params`.
    pub functionals_physical: CycleFunctionals,
    pub objective: f64,
    pub foc_residual: Option<FocStatistics>,
    pub gradient_residual: f64,
    pub iterations: usize,
    pub status: OptimizationStatus,
    pub converged: bool,
    pub self_intersections: usize,
    pub efficiency_bound: f64,
    pub conjectured_bound: f64,
    pub satisfies_conjecture: Option<bool>,
}

impl CycleFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("cannot parse {}: {e}", path.display())))
    }

    /// Rebuilds and validates the stored cycle.
    pub fn cycle(&self) -> Result<Cycle, CliError> {
        let c = Cycle::new(self.points.clone()).map_err(CliError::from_lib)?;
        if c.orientation() != self.orientation {
            return Err(CliError::usage("stored orientation does not match the points"));
        }
        Ok(c)
    }
}

/// Contents of `verify.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyFile {
    pub header: Header,
    pub params: ThermoParams,
    pub dt: f64,
    pub n_steps: usize,
    pub report: ComparisonReport,
    pub estimate: EnergeticsEstimate,
    pub mid_covariance_reference: SymMat2,
    pub mid_covariance_max_z: f64,
    pub passed: bool,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// CSV preceded by `#` comment lines holding the header.
fn write_csv<T: Serialize>(path: &Path, header: &Header, rows: &[T]) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let config = serde_json::to_string(&header.config).map_err(|e| CliError::io(path, e))?;
    writeln!(out, "# {} {} {}", header.tool, header.version, header.command).map_err(|e| CliError::io(path, e))?;
    writeln!(out, "# config: {config}").map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

#[derive(Serialize)]
struct CycleRow {
    r: f64,
    theta: f64,
    kappa: f64,
    f: f64,
    kappa_over_f: Option<f64>,
}

pub fn optimize(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args)?;
    let params = cfg.params()?;
    let mu = params.mu();
    let init = initial_cycle(default_center(), INITIAL_RADIUS, cfg.optimizer.n_points, Orientation::Positive)
        .map_err(CliError::from_lib)?;
    let res = optimize_cycle(&init, mu, &cfg.optimizer).map_err(CliError::from_lib)?;
    if res.status == OptimizationStatus::Collapsed || res.functionals.w_out <= 0.0 {
        return Err(CliError {
            code: EXIT_NO_POSITIVE_WORK,
            message: format!(
                "no positive-work cycle at mu = {mu} (cycle collapsed after {} iterations)",
                res.iterations
            ),
        });
    }
    prepare_out(&args.out)?;
    let header = Header::new("optimize", &cfg);
    let file = CycleFile {
        header: header.clone(),
        mu,
        params,
        orientation: res.cycle.orientation(),
        points: res.cycle.points().to_vec(),
        functionals: res.functionals,
        functionals_physical: cycle_functionals(&res.cycle, &params),
        objective: res.objective,
        foc_residual: res.foc,
        gradient_residual: res.gradient_residual,
        iterations: res.iterations,
        status: res.status,
        converged: res.converged(),
        self_intersections: res.self_intersections,
        efficiency_bound: res.efficiency_bound,
        conjectured_bound: res.conjectured_bound,
        satisfies_conjecture: res.satisfies_conjecture(),
    };
    write_json(&output_path(&args.out, "cycle.json"), &file)?;

    let kappa = geodesic_curvatures(&res.cycle).map_err(CliError::from_lib)?;
    let rows: Vec<CycleRow> = res
        .cycle
        .points()
        .iter()
        .zip(&kappa)
        .map(|(p, k)| {
            let f = work_density(*p);
            CycleRow { r: p.r, theta: p.theta, kappa: *k, f, kappa_over_f: (f != 0.0).then(|| k / f) }
        })
        .collect();
    write_csv(&output_path(&args.out, "cycle.csv"), &header, &rows)?;

    let eta = res.functionals.efficiency.unwrap_or(f64::NAN);
    println!(
        "mu = {mu}: W_out = {:.6} (k_B T_r), length = {:.6}, efficiency = {eta:.6}, bound 1-4*pi*mu = {:.6}, conjectured 1-8*pi*mu = {:.6}",
        res.functionals.w_out, res.functionals.length, res.efficiency_bound, res.conjectured_bound
    );
    if !res.converged() {
        return Err(CliError::usage(format!(
            "optimizer did not converge in {} iterations (residual {:.3e})",
            res.iterations, res.gradient_residual
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    mu: f64,
    ell: f64,
    area_f: f64,
    w_star: f64,
    eta: Option<f64>,
    eta_bound_4pi: Option<f64>,
    eta_bound_8pi_conjecture: Option<f64>,
    foc_residual: Option<f64>,
    converged: Option<bool>,
    status: String,
    iterations: Option<usize>,
    kind: &'static str,
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let mut cfg = RunConfig::resolve(&args.common)?;
    if !args.mus.is_empty() {
        cfg.mus = args.mus.clone();
    }
    if !args.mu_range.is_empty() {
        let [lo, hi, n] = args.mu_range[..] else {
            return Err(CliError::usage("--mu-range expects LO,HI,N"));
        };
        if !(lo > 0.0 && hi >= lo && n >= 1.0 && n.fract() == 0.0) {
            return Err(CliError::usage("--mu-range expects 0 < LO <= HI and a whole N >= 1"));
        }
        cfg.mus = log_spaced(lo, hi, n as usize);
    }
    if cfg.mus.is_empty() {
        return Err(CliError::usage(
            "no mu values given; usage: gyrator sweep --mus 0.005,0.01,0.02 | --mu-range LO,HI,N",
        ));
    }
    if let Some(bad) = cfg.mus.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(CliError::usage(format!("mu values must be > 0 (got {bad})")));
    }
    let records = sweep_mu(&cfg.mus, &cfg.optimizer, Execution::default()).map_err(CliError::from_lib)?;
    let mut rows: Vec<SweepRow> = records
        .iter()
        .map(|r| SweepRow {
            mu: r.mu,
            ell: r.length,
            area_f: r.area_f,
            w_star: r.w_star,
            eta: r.efficiency,
            eta_bound_4pi: Some(r.eta_bound_4pi),
            eta_bound_8pi_conjecture: Some(r.eta_bound_8pi_conjecture),
            foc_residual: r.foc_residual,
            converged: Some(r.status == OptimizationStatus::Converged),
            status: format!("{:?}", r.status).to_lowercase(),
            iterations: Some(r.iterations),
            kind: "optimum",
        })
        .collect();
    if let Some(eta) = cfg.eta {
        let mu = cfg.params()?.mu();
        let op = operating_point_for_efficiency(eta, mu, &records).map_err(CliError::from_lib)?;
        rows.push(SweepRow {
            mu: op.mu,
            ell: op.length,
            area_f: op.area_f,
            w_star: op.work,
            eta: Some(op.eta),
            eta_bound_4pi: None,
            eta_bound_8pi_conjecture: None,
            foc_residual: None,
            converged: None,
            status: "interpolated".to_string(),
            iterations: None,
            kind: "operating_point",
        });
    }
    prepare_out(&args.common.out)?;
    write_csv(&output_path(&args.common.out, "sweep.csv"), &Header::new("sweep", &cfg), &rows)?;
    let converged = records.iter().filter(|r| r.status == OptimizationStatus::Converged).count();
    println!("sweep: {} mu values, {converged} converged", records.len());
    Ok(())
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let stored = CycleFile::read(&args.cycle)?;
    let cycle = stored.cycle()?;
    let params = if cfg.has_period() { cfg.params()? } else { stored.params };
    params.validate().map_err(CliError::from_lib)?;
    let (n_steps, dt) = plan_time_grid(params.tf, cfg.dt(&params), 16 * cycle.len()).map_err(CliError::from_lib)?;
    let schedule = schedule_from_cycle(&cycle, &params, n_steps).map_err(CliError::from_lib)?;
    let estimate =
        simulate_ensemble(&schedule, cfg.n_particles, dt, cfg.seed, Execution::default()).map_err(|e| match e {
            crate::Error::InvalidParameter(_) => CliError::from_lib(e),
            other => CliError { code: EXIT_VERIFICATION, message: other.to_string() },
        })?;
    let report = compare_report(&cycle, &params, &estimate).map_err(CliError::from_lib)?;
    let mid_ref = schedule.sigmas_ref()[n_steps / 2];
    let mid_z = estimate.mid_covariance.max_abs_z(mid_ref);
    let passed = report.passed && mid_z <= Z_THRESHOLD;
    let file = VerifyFile {
        header: Header::new("simulate", &cfg),
        params,
        dt,
        n_steps,
        report,
        estimate,
        mid_covariance_reference: mid_ref,
        mid_covariance_max_z: mid_z,
        passed,
    };
    prepare_out(&args.common.out)?;
    write_json(&output_path(&args.common.out, "verify.json"), &file)?;
    for row in &file.report.rows {
        match (row.monte_carlo, row.z) {
            (Some(mc), Some(z)) => {
                println!("{:<20} analytic {:>14.6} mc {:>14.6} z {:>7.2}", row.quantity, row.analytic, mc, z)
            }
            _ => println!("{:<20} analytic {:>14.6}", row.quantity, row.analytic),
        }
    }
    println!("{:<20} max |z| {:.2}", "mid_covariance", mid_z);
    if !passed {
        return Err(CliError {
            code: EXIT_VERIFICATION,
            message: format!("verification failed: max |z| = {:.2}", file.report.max_abs_z.max(mid_z)),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct GeometryRow {
    r: f64,
    e_rr: f64,
    e_tt: f64,
    sqrt_det: f64,
    f: f64,
    curvature: f64,
    curvature_numeric: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct SurfaceRow {
    r: f64,
    theta: f64,
    x: f64,
    y: f64,
    f: f64,
}

pub fn geometry_check(args: &CommonArgs) -> Result<(), CliError> {
    let mut cfg = RunConfig::resolve(args)?;
    if cfg.r_min < R_MIN {
        eprintln!("warning: r_min = {} lies outside the chart; clamped to {R_MIN}", cfg.r_min);
        cfg.r_min = R_MIN;
    }
    if !(cfg.r_max > cfg.r_min) || cfg.samples < 2 {
        return Err(CliError::usage("geometry grid needs r_max > r_min and at least two samples"));
    }
    let header = Header::new("geometry-check", &cfg);
    let grid = |n: usize, k: usize| cfg.r_min + (cfg.r_max - cfg.r_min) * k as f64 / (n - 1) as f64;
    let rows: Vec<GeometryRow> = (0..cfg.samples)
        .map(|k| {
            let r = grid(cfg.samples, k);
            let m = metric(r);
            let curvature = gaussian_curvature(r);
            let curvature_numeric = numeric_gaussian_curvature(metric, r);
            GeometryRow {
                r,
                e_rr: m.e_rr,
                e_tt: m.e_tt,
                sqrt_det: m.det().sqrt(),
                f: work_density(PolarPoint::new(r, std::f64::consts::FRAC_PI_2)),
                curvature,
                curvature_numeric,
                deviation: (curvature_numeric - curvature).abs(),
            }
        })
        .collect();
    let surface: Vec<SurfaceRow> = (0..F_SURFACE_R)
        .flat_map(|i| {
            let r = grid(F_SURFACE_R, i);
            (0..F_SURFACE_THETA).map(move |j| {
                let theta = std::f64::consts::TAU * j as f64 / (F_SURFACE_THETA - 1) as f64;
                let p = PolarPoint::new(r, theta);
                let [x, y] = p.embed();
                SurfaceRow { r, theta, x, y, f: work_density(p) }
            })
        })
        .collect();
    prepare_out(&args.out)?;
    write_csv(&output_path(&args.out, "geometry.csv"), &header, &rows)?;
    write_csv(&output_path(&args.out, "f_surface.csv"), &header, &surface)?;
    let max_dev = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    println!("max curvature deviation: {max_dev:.3e} over r in [{}, {}]", cfg.r_min, cfg.r_max);
    Ok(())
}
