use std::f64::consts::{PI, TAU};

use gyrator::functionals::{
    area_line_integral, area_quadrature, cycle_functionals, heat_decomposition_covariance, ChartDomain,
};
use gyrator::manifold::{
    bures_w2, control_gain, lyapunov_operator, lyapunov_residual, metric, polar_from_sigma, sigma_from_polar,
    GaussianGeodesic,
};
use gyrator::{CovariancePath, Cycle, PolarPoint, SymMat2, ThermoParams};
use proptest::prelude::*;

fn spd() -> impl Strategy<Value = SymMat2> {
    (0.2..3.0f64, 0.2..3.0f64, 0.0..PI).prop_map(|(a, b, phi)| SymMat2::from_eigen(a.max(b), a.min(b), phi))
}

fn sym() -> impl Strategy<Value = SymMat2> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| SymMat2::new(a, b, c))
}

fn ellipse() -> impl Strategy<Value = ChartDomain> {
    (0.05..0.6f64, 0.05..1.5f64, 0.0..TAU, 0.0..1.0f64).prop_map(|(a, b, theta, u)| ChartDomain::Ellipse {
        center: (a + 0.05 + u * (2.5 - a), theta),
        semi_axes: (a, b),
    })
}

fn near(a: SymMat2, b: SymMat2, tol: f64) -> bool {
    a.sub(b).max_abs() <= tol * (1.0 + a.max_abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chart_round_trip(r in 1e-3..4.0f64, theta in 0.0..TAU, ell in 0.3..3.0f64) {
        let s = sigma_from_polar(PolarPoint::new(r, theta), ell);
        prop_assert!((s.det() - 4.0 * ell.powi(4)).abs() <= 1e-12 * s.max_abs().powi(2));
        let back = polar_from_sigma(s).unwrap();
        prop_assert!((back.ell_r - ell).abs() < 1e-9 * ell);
        prop_assert!((back.point.r - r).abs() < 1e-9);
        let dtheta = (back.point.theta - theta).rem_euclid(TAU);
        prop_assert!(dtheta.min(TAU - dtheta) * r.sinh() < 1e-8);
    }

    #[test]
    fn metric_determinant(r in 0.0..5.0f64) {
        let g = metric(r);
        prop_assert!((g.det() - r.sinh().powi(2)).abs() <= 1e-12 * (1.0 + r.sinh().powi(2)));
    }

    #[test]
    fn lyapunov_identity(a in spd(), x in sym()) {
        let l = lyapunov_operator(a, x).unwrap();
        prop_assert!(near(a.anticommutator(l), x, 1e-11));
    }

    #[test]
    fn recovered_gain_solves_covariance_equation(s in spd(), sdot in sym(), mu in 0.005..0.5f64) {
        let params = ThermoParams::nondimensional(mu);
        let k = control_gain(s, sdot, &params).unwrap();
        prop_assert!(lyapunov_residual(s, sdot, k, &params).max_abs() < 1e-10);
    }

    #[test]
    fn bures_is_a_metric(a in spd(), b in spd(), c in spd()) {
        let ab = bures_w2(a, b).unwrap();
        prop_assert!(bures_w2(a, a).unwrap() < 1e-6);
        prop_assert!((ab - bures_w2(b, a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= bures_w2(a, c).unwrap() + bures_w2(c, b).unwrap() + 1e-10);
    }

    #[test]
    fn geodesic_has_constant_speed(a in spd(), b in spd(), s in 0.0..1.0f64) {
        let geo = GaussianGeodesic::new(a, b).unwrap();
        let d = bures_w2(a, b).unwrap();
        prop_assert!(near(geo.at(0.0), a, 1e-12) && near(geo.at(1.0), b, 1e-10));
        prop_assert!((bures_w2(a, geo.at(s)).unwrap() - s * d).abs() < 1e-6);
        prop_assert!((bures_w2(geo.at(s), b).unwrap() - (1.0 - s) * d).abs() < 1e-6);
    }

    #[test]
    fn stokes_on_ellipses(dom in ellipse()) {
        let cycle = Cycle::new(dom.boundary(4000)).unwrap();
        prop_assert!((area_line_integral(&cycle) - area_quadrature(&dom, 16)).abs() < 1e-4);
    }

    #[test]
    fn dissipation_is_nonnegative_and_orientation_blind(dom in ellipse(), mu in 0.001..0.2f64) {
        let params = ThermoParams::nondimensional(mu);
        let cycle = Cycle::new(dom.boundary(256)).unwrap();
        let fwd = cycle_functionals(&cycle, &params);
        let rev = cycle_functionals(&cycle.reversed(), &params);
        prop_assert!(fwd.q_diss > 0.0);
        prop_assert!((fwd.q_diss - rev.q_diss).abs() <= 1e-12 * fwd.q_diss);
        prop_assert!((fwd.area_f + rev.area_f).abs() <= 1e-12 * fwd.area_f.abs().max(1e-300));
    }

    #[test]
    fn geodesic_minimises_dissipation(a in spd(), b in spd(), p in sym(), amp in 0.05..1.0f64) {
        let params = ThermoParams::nondimensional(0.1);
        let tf = params.tf;
        let geo = GaussianGeodesic::new(a, b).unwrap();
        let lmin = a.min_eigenvalue().min(b.min_eigenvalue());
        prop_assume!(p.norm() > 1e-3);
        let p = p.scale(amp * lmin / p.norm());
        let n = 400;
        let times: Vec<f64> = (0..=n).map(|k| tf * k as f64 / n as f64).collect();
        let build = |bend: f64| {
            let s = times.iter().map(|t| { let s = t / tf; geo.at(s).axpy(bend * s * (1.0 - s), p) }).collect();
            let v = times.iter().map(|t| { let s = t / tf; geo.velocity(s).axpy(bend * (1.0 - 2.0 * s), p).scale(1.0 / tf) }).collect();
            CovariancePath::new(times.clone(), s).unwrap().with_derivatives(v).unwrap()
        };
        let straight = heat_decomposition_covariance(&build(0.0), &params).unwrap().q_diss;
        let bent = heat_decomposition_covariance(&build(1.0), &params).unwrap().q_diss;
        prop_assert!(bent > straight);
    }
}
