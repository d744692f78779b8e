use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
///
/// Used for covariances (which must be positive definite), control gains
/// (symmetric, not necessarily definite) and their time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct SymMat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

/// General (not necessarily symmetric) 2×2 matrix, row major.
pub type Mat2 = [[f64; 2]; 2];

impl SymMat2 {
    pub const ZERO: SymMat2 = SymMat2 { xx: 0.0, xy: 0.0, yy: 0.0 };
    pub const IDENTITY: SymMat2 = SymMat2 { xx: 1.0, xy: 0.0, yy: 1.0 };

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        SymMat2 { xx, xy, yy }
    }

    pub const fn diag(xx: f64, yy: f64) -> Self {
        SymMat2 { xx, xy: 0.0, yy }
    }

    pub fn scaled_identity(s: f64) -> Self {
        SymMat2::diag(s, s)
    }

    /// Symmetric part of a general matrix.
    pub fn symmetrize(m: Mat2) -> Self {
        SymMat2::new(m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1])
    }

    pub fn to_mat(self) -> Mat2 {
        [[self.xx, self.xy], [self.xy, self.yy]]
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn scale(self, s: f64) -> Self {
        SymMat2::new(s * self.xx, s * self.xy, s * self.yy)
    }

    pub fn add(self, o: Self) -> Self {
        SymMat2::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }

    pub fn sub(self, o: Self) -> Self {
        SymMat2::new(self.xx - o.xx, self.xy - o.xy, self.yy - o.yy)
    }

    /// `self + s·o`
    pub fn axpy(self, s: f64, o: Self) -> Self {
        SymMat2::new(self.xx + s * o.xx, self.xy + s * o.xy, self.yy + s * o.yy)
    }

    /// Frobenius norm.
    pub fn norm(self) -> f64 {
        (self.xx * self.xx + 2.0 * self.xy * self.xy + self.yy * self.yy).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.xx.abs().max(self.xy.abs()).max(self.yy.abs())
    }

    pub fn is_finite(self) -> bool {
        self.xx.is_finite() && self.xy.is_finite() && self.yy.is_finite()
    }

    /// Matrix product `self · o` (general result).
    pub fn mul(self, o: Self) -> Mat2 {
        [
            [self.xx * o.xx + self.xy * o.xy, self.xx * o.xy + self.xy * o.yy],
            [self.xy * o.xx + self.yy * o.xy, self.xy * o.xy + self.yy * o.yy],
        ]
    }

    /// `tr(self · o)`
    pub fn trace_product(self, o: Self) -> f64 {
        self.xx * o.xx + 2.0 * self.xy * o.xy + self.yy * o.yy
    }

    /// Anticommutator `self·o + o·self`, symmetric whenever both factors are.
    pub fn anticommutator(self, o: Self) -> Self {
        let p = self.mul(o);
        SymMat2::new(2.0 * p[0][0], p[0][1] + p[1][0], 2.0 * p[1][1])
    }

    /// Congruence `self · s · self`.
    pub fn congruence(self, s: Self) -> Self {
        let p = self.mul(s);
        SymMat2::new(
            p[0][0] * self.xx + p[0][1] * self.xy,
            p[0][0] * self.xy + p[0][1] * self.yy,
            p[1][0] * self.xy + p[1][1] * self.yy,
        )
    }

    pub fn apply(self, v: [f64; 2]) -> [f64; 2] {
        [self.xx * v[0] + self.xy * v[1], self.xy * v[0] + self.yy * v[1]]
    }

    /// `v' · self · v`
    pub fn quad_form(self, v: [f64; 2]) -> f64 {
        self.xx * v[0] * v[0] + 2.0 * self.xy * v[0] * v[1] + self.yy * v[1] * v[1]
    }

    /// `u' · self · v`
    pub fn bilinear(self, u: [f64; 2], v: [f64; 2]) -> f64 {
        let sv = self.apply(v);
        u[0] * sv[0] + u[1] * sv[1]
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues(self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let rad = (0.5 * (self.xx - self.yy)).hypot(self.xy);
        (mean + rad, mean - rad)
    }

    /// Eigen-decomposition `(λ_max, λ_min, φ)` with the `λ_max` eigenvector
    /// equal to `(cos φ, sin φ)`.
    pub fn eigen(self) -> (f64, f64, f64) {
        let (l1, l2) = self.eigenvalues();
        let phi = 0.5 * (2.0 * self.xy).atan2(self.xx - self.yy);
        (l1, l2, phi)
    }

    /// Rebuilds a matrix from eigenvalues and the angle of the first eigenvector.
    pub fn from_eigen(l1: f64, l2: f64, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        SymMat2::new(l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c)
    }

    pub fn min_eigenvalue(self) -> f64 {
        self.eigenvalues().1
    }

    pub fn is_positive_definite(self) -> bool {
        self.is_finite() && self.xx > 0.0 && self.det() > 0.0 && self.min_eigenvalue() > 0.0
    }

    /// Errors with [`Error::NonSpdInput`] unless strictly positive definite.
    pub fn require_spd(self) -> Result<Self> {
        if self.is_positive_definite() {
            Ok(self)
        } else {
            Err(Error::NonSpdInput { min_eigenvalue: self.min_eigenvalue() })
        }
    }

    pub fn inverse(self) -> Self {
        let d = self.det();
        SymMat2::new(self.yy / d, -self.xy / d, self.xx / d)
    }

    /// Principal square root of a positive semidefinite matrix.
    ///
    /// Closed form from Cayley–Hamilton: `√M = (M + √det M · I) / √(tr M + 2√det M)`.
    pub fn sqrt_psd(self) -> Self {
        let s = self.det().max(0.0).sqrt();
        let t = (self.trace() + 2.0 * s).max(0.0).sqrt();
        if t == 0.0 {
            return SymMat2::ZERO;
        }
        SymMat2::new((self.xx + s) / t, self.xy / t, (self.yy + s) / t)
    }

    /// Lower Cholesky factor `[[l00, 0], [l10, l11]]` of an SPD matrix.
    pub fn cholesky(self) -> Result<[f64; 3]> {
        self.require_spd()?;
        let l00 = self.xx.sqrt();
        let l10 = self.xy / l00;
        let l11 = (self.yy - l10 * l10).sqrt();
        Ok([l00, l10, l11])
    }
}
