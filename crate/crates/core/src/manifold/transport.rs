//! Lyapunov algebra, control-gain recovery and Bures–Wasserstein transport
//! between centered Gaussians.

use super::matrix::SymMat2;
use super::params::ThermoParams;
use crate::error::Result;

/// `L_A[X] = ∫₀^∞ e^{−τA} X e^{−τA} dτ`, the unique symmetric `L` with
/// `A·L + L·A = X`.
///
/// Solved in closed form: with `B = A − tr(A)·I`,
/// `L = (det A · X + B X B) / (2 tr A det A)`.
pub fn lyapunov_operator(a: SymMat2, x: SymMat2) -> Result<SymMat2> {
    a.require_spd()?;
    Ok(lyapunov_solve(a, x))
}

/// [`lyapunov_operator`] without the definiteness check. The formula holds
/// whenever `tr A · det A ≠ 0`.
pub(crate) fn lyapunov_solve(a: SymMat2, x: SymMat2) -> SymMat2 {
    let tr = a.trace();
    let det = a.det();
    let b = a.sub(SymMat2::scaled_identity(tr));
    x.scale(det).add(b.congruence(x)).scale(1.0 / (2.0 * tr * det))
}

/// Gain `K = L_Σ[T − γΣ̇]` that makes `γΣ̇ = −KΣ − ΣK + T` hold.
pub fn control_gain(sigma: SymMat2, sigma_dot: SymMat2, params: &ThermoParams) -> Result<SymMat2> {
    let rhs = params.temperature_matrix().axpy(-params.gamma, sigma_dot);
    lyapunov_operator(sigma, rhs)
}

/// Residual `γΣ̇ + KΣ + ΣK − T` of the covariance equation.
pub fn lyapunov_residual(sigma: SymMat2, sigma_dot: SymMat2, gain: SymMat2, params: &ThermoParams) -> SymMat2 {
    sigma_dot.scale(params.gamma).add(gain.anticommutator(sigma)).sub(params.temperature_matrix())
}

/// Squared Bures–Wasserstein distance
/// `tr S₀ + tr S₁ − 2 tr (S₀^½ S₁ S₀^½)^½` between `N(0, S₀)` and `N(0, S₁)`.
pub fn bures_w2_squared(s0: SymMat2, s1: SymMat2) -> Result<f64> {
    s0.require_spd()?;
    s1.require_spd()?;
    // For 2×2 PSD M, tr √M = √(tr M + 2√det M); here M = S₀^½ S₁ S₀^½.
    let tr_m = s0.trace_product(s1);
    let det_m = (s0.det() * s1.det()).sqrt();
    let fidelity = (tr_m + 2.0 * det_m).sqrt();
    Ok((s0.trace() + s1.trace() - 2.0 * fidelity).max(0.0))
}

pub fn bures_w2(s0: SymMat2, s1: SymMat2) -> Result<f64> {
    bures_w2_squared(s0, s1).map(f64::sqrt)
}

/// Constant-speed Wasserstein geodesic (McCann interpolation)
/// `Σ_s = M_s Σ₀ M_s`, `M_s = (1−s)I + sT`, where `T` is the optimal
/// transport map from `N(0, Σ₀)` to `N(0, Σ₁)`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianGeodesic {
    s0: SymMat2,
    s1: SymMat2,
    map: SymMat2,
}

impl GaussianGeodesic {
    pub fn new(s0: SymMat2, s1: SymMat2) -> Result<Self> {
        s0.require_spd()?;
        s1.require_spd()?;
        let r = s0.sqrt_psd();
        let ri = r.inverse();
        let mid = r.congruence(s1).sqrt_psd();
        let map = ri.congruence(mid);
        Ok(GaussianGeodesic { s0, s1, map })
    }

    /// Optimal transport map `T = S₀^{−½}(S₀^½ S₁ S₀^½)^½ S₀^{−½}`.
    pub fn transport_map(&self) -> SymMat2 {
        self.map
    }

    fn interpolant(&self, s: f64) -> SymMat2 {
        SymMat2::scaled_identity(1.0 - s).axpy(s, self.map)
    }

    pub fn at(&self, s: f64) -> SymMat2 {
        if s == 0.0 {
            self.s0
        } else if s == 1.0 {
            self.s1
        } else {
            self.interpolant(s).congruence(self.s0)
        }
    }

    /// `dΣ_s/ds = (T − I)Σ₀M_s + M_sΣ₀(T − I)`.
    pub fn velocity(&self, s: f64) -> SymMat2 {
        let m = self.interpolant(s);
        let d = self.map.sub(SymMat2::IDENTITY);
        let p = d.mul(self.s0);
        let p = [
            [p[0][0] * m.xx + p[0][1] * m.xy, p[0][0] * m.xy + p[0][1] * m.yy],
            [p[1][0] * m.xx + p[1][1] * m.xy, p[1][0] * m.xy + p[1][1] * m.yy],
        ];
        SymMat2::new(2.0 * p[0][0], p[0][1] + p[1][0], 2.0 * p[1][1])
    }
}

/// Point at parameter `s ∈ [0, 1]` on the Gaussian geodesic from `s0` to `s1`.
pub fn gaussian_geodesic(s0: SymMat2, s1: SymMat2, s: f64) -> Result<SymMat2> {
    Ok(GaussianGeodesic::new(s0, s1)?.at(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lyapunov_examples() {
        let x = SymMat2::new(0.3, -0.8, 1.7);
        let l = lyapunov_operator(SymMat2::IDENTITY, x).unwrap();
        assert!(l.sub(x.scale(0.5)).norm() < 1e-15);

        let l = lyapunov_operator(SymMat2::diag(2.0, 5.0), SymMat2::diag(3.0, 7.0)).unwrap();
        assert_relative_eq!(l.xx, 0.75, epsilon = 1e-15);
        assert_relative_eq!(l.yy, 0.7, epsilon = 1e-15);

        let l = lyapunov_operator(SymMat2::diag(1.0, 2.0), SymMat2::new(0.0, 1.0, 0.0)).unwrap();
        assert_relative_eq!(l.xy, 1.0 / 3.0, epsilon = 1e-15);
        assert!(l.xx.abs() < 1e-15 && l.yy.abs() < 1e-15);
    }

    #[test]
    fn lyapunov_rejects_indefinite() {
        assert!(lyapunov_operator(SymMat2::diag(1.0, -1.0), SymMat2::IDENTITY).is_err());
    }

    #[test]
    fn lyapunov_matches_integral_definition() {
        // low-accuracy quadrature of ∫ e^{-τA} X e^{-τA} dτ in the eigenbasis
        let a = SymMat2::new(1.3, 0.4, 0.7);
        let x = SymMat2::new(0.5, -0.2, 1.1);
        let (l1, l2, phi) = a.eigen();
        let n = 20000;
        let tmax = 40.0;
        let h = tmax / n as f64;
        let mut acc = SymMat2::ZERO;
        for k in 0..=n {
            let t = k as f64 * h;
            let e = SymMat2::from_eigen((-t * l1).exp(), (-t * l2).exp(), phi);
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            acc = acc.axpy(w * h, e.congruence(x));
        }
        let l = lyapunov_operator(a, x).unwrap();
        assert!(acc.sub(l).norm() < 1e-6);
    }

    #[test]
    fn control_gain_equilibrium_is_identity() {
        let p = ThermoParams::nondimensional(0.01);
        let sigma = p.temperature_matrix().scale(0.5);
        let k = control_gain(sigma, SymMat2::ZERO, &p).unwrap();
        assert!(k.sub(SymMat2::IDENTITY).norm() < 1e-14);
    }

    #[test]
    fn control_gain_without_temperature_is_linear_in_velocity() {
        let mut p = ThermoParams::nondimensional(0.01);
        p.gamma = 2.5;
        let sigma = SymMat2::new(2.0, 0.3, 1.0);
        let sd = SymMat2::new(0.1, -0.4, 0.2);
        let with_t = control_gain(sigma, sd, &p).unwrap();
        let t_only = lyapunov_operator(sigma, p.temperature_matrix()).unwrap();
        let expected = lyapunov_operator(sigma, sd).unwrap().scale(-p.gamma);
        assert!(with_t.sub(t_only).sub(expected).norm() < 1e-13);
    }

    #[test]
    fn bures_examples() {
        let a = SymMat2::new(1.5, 0.2, 0.8);
        assert!(bures_w2(a, a).unwrap() < 1e-7);
        let w2 = bures_w2_squared(SymMat2::IDENTITY, SymMat2::scaled_identity(4.0)).unwrap();
        assert_relative_eq!(w2, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn geodesic_examples() {
        let g = GaussianGeodesic::new(SymMat2::IDENTITY, SymMat2::scaled_identity(4.0)).unwrap();
        assert_eq!(g.at(0.0), SymMat2::IDENTITY);
        assert_eq!(g.at(1.0), SymMat2::scaled_identity(4.0));
        assert!(g.at(0.5).sub(SymMat2::scaled_identity(2.25)).norm() < 1e-14);
    }

    #[test]
    fn geodesic_map_pushes_forward() {
        let s0 = SymMat2::new(2.0, 0.5, 1.0);
        let s1 = SymMat2::new(0.7, -0.3, 3.0);
        let g = GaussianGeodesic::new(s0, s1).unwrap();
        assert!(g.transport_map().congruence(s0).sub(s1).norm() < 1e-12);
    }

    #[test]
    fn geodesic_velocity_matches_differences() {
        let s0 = SymMat2::new(2.0, 0.5, 1.0);
        let s1 = SymMat2::new(0.7, -0.3, 3.0);
        let g = GaussianGeodesic::new(s0, s1).unwrap();
        let h = 1e-6;
        let fd = g.interpolant(0.3 + h).congruence(s0).sub(g.interpolant(0.3 - h).congruence(s0)).scale(0.5 / h);
        assert!(fd.sub(g.velocity(0.3)).norm() < 1e-8);
    }
}
