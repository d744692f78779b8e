use gyrator::optimizer::{default_center, initial_cycle, optimize_cycle, OptimizerConfig};
use gyrator::simulator::{compare_report, plan_time_grid, schedule_from_cycle, simulate_ensemble};
use gyrator::{Cycle, Execution, Orientation, ThermoParams};

fn optimal_cycle(mu: f64) -> Cycle {
    let cfg = OptimizerConfig { n_points: 64, ..Default::default() };
    let init = initial_cycle(default_center(), 0.3, cfg.n_points, Orientation::Positive).unwrap();
    optimize_cycle(&init, mu, &cfg).unwrap().cycle
}

#[test]
fn report_flags_a_mismatched_period() {
    let mu = 0.03;
    let cycle = optimal_cycle(mu);
    let params = ThermoParams::nondimensional(mu);
    let (n_steps, dt) = plan_time_grid(params.tf, 0.01, 16 * cycle.len()).unwrap();
    let schedule = schedule_from_cycle(&cycle, &params, n_steps).unwrap();
    let mc = simulate_ensemble(&schedule, 4000, dt, 5, Execution::default()).unwrap();

    let matched = compare_report(&cycle, &params, &mc).unwrap();
    assert!(matched.passed, "{matched:?}");

    let wrong = compare_report(&cycle, &params.with_tf(2.0 * params.tf), &mc).unwrap();
    assert!(!wrong.passed);
    assert!(wrong.row("work_out").unwrap().flagged);
}
