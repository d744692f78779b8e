use serde::{Deserialize, Serialize};

use super::matrix::SymMat2;
use crate::error::{invalid, Result};

/// Physical constants of the gyrator and the cycle period.
///
/// Library routines work in units where `k_B = γ = T_r = ℓ_r = 1`; use
/// [`ThermoParams::nondimensional`] for that case. Physical values are
/// accepted everywhere and only enter through `μ`, `k_B·T_r` and `ℓ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoParams {
    pub gamma: f64,
    #[serde(rename = "Tx")]
    pub tx: f64,
    #[serde(rename = "Ty")]
    pub ty: f64,
    #[serde(rename = "kB")]
    pub kb: f64,
    pub ell_r: f64,
    pub tf: f64,
}

impl ThermoParams {
    pub fn new(gamma: f64, tx: f64, ty: f64, kb: f64, ell_r: f64, tf: f64) -> Result<Self> {
        let p = ThermoParams { gamma, tx, ty, kb, ell_r, tf };
        p.validate()?;
        Ok(p)
    }

    /// `k_B = γ = ℓ_r = 1`, `T_x = 3`, `T_y = 1` (so `T_r = 1`), `t_f = 1/μ`.
    pub fn nondimensional(mu: f64) -> Self {
        ThermoParams { gamma: 1.0, tx: 3.0, ty: 1.0, kb: 1.0, ell_r: 1.0, tf: 1.0 / mu }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma, self.tx, self.ty, self.kb, self.ell_r, self.tf].iter().all(|v| v.is_finite());
        if !finite {
            return Err(invalid("parameters must be finite"));
        }
        if self.ty <= 0.0 {
            return Err(invalid(format!("Ty must be > 0 (got {})", self.ty)));
        }
        if self.tx <= self.ty {
            return Err(invalid(format!("Tx must exceed Ty (got Tx = {}, Ty = {})", self.tx, self.ty)));
        }
        for (name, v) in [("gamma", self.gamma), ("kB", self.kb), ("ell_r", self.ell_r), ("tf", self.tf)] {
            if v <= 0.0 {
                return Err(invalid(format!("{name} must be > 0 (got {v})")));
            }
        }
        Ok(())
    }

    /// Half the temperature difference `(T_x − T_y)/2`.
    pub fn t_r(&self) -> f64 {
        0.5 * (self.tx - self.ty)
    }

    /// Diffusive time `γℓ_r² / (k_B T_r)`.
    pub fn t_c(&self) -> f64 {
        self.gamma * self.ell_r * self.ell_r / (self.kb * self.t_r())
    }

    pub fn mu(&self) -> f64 {
        self.t_c() / self.tf
    }

    /// Energy unit `k_B T_r`.
    pub fn energy_scale(&self) -> f64 {
        self.kb * self.t_r()
    }

    /// `T = 2k_B · diag(T_x, T_y)`, the noise term of the covariance equation.
    pub fn temperature_matrix(&self) -> SymMat2 {
        SymMat2::diag(2.0 * self.kb * self.tx, 2.0 * self.kb * self.ty)
    }

    /// Same constants with a different period.
    pub fn with_tf(self, tf: f64) -> Self {
        ThermoParams { tf, ..self }
    }

    /// Same constants with the period chosen so that `t_c / t_f = mu`.
    pub fn with_mu(self, mu: f64) -> Self {
        let tf = self.t_c() / mu;
        self.with_tf(tf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nondimensional_units() {
        let p = ThermoParams::nondimensional(0.02);
        assert_eq!(p.t_r(), 1.0);
        assert_eq!(p.t_c(), 1.0);
        assert!((p.mu() - 0.02).abs() < 1e-15);
        assert_eq!(p.energy_scale(), 1.0);
    }

    #[test]
    fn validation() {
        assert!(ThermoParams::new(1.0, 2.0, 0.0, 1.0, 1.0, 100.0).is_err());
        assert!(ThermoParams::new(1.0, 1.0, 2.0, 1.0, 1.0, 100.0).is_err());
        assert!(ThermoParams::new(-1.0, 2.0, 1.0, 1.0, 1.0, 100.0).is_err());
        assert!(ThermoParams::new(1.0, 2.0, 1.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(ThermoParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 100.0).is_ok());
    }

    #[test]
    fn physical_mu() {
        let p = ThermoParams::new(2.0, 5.0, 1.0, 0.5, 3.0, 10.0).unwrap();
        // t_c = 2·9/(0.5·2) = 18
        assert!((p.t_c() - 18.0).abs() < 1e-12);
        assert!((p.with_mu(0.1).tf - 180.0).abs() < 1e-9);
    }

    #[test]
    fn serde_names() {
        let p = ThermoParams::nondimensional(0.01);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"Tx\"") && s.contains("\"kB\""));
        let back: ThermoParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
