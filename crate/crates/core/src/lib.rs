//! Finite-time thermodynamic cycles of the Brownian gyrator.
//!
//! The gyrator is an overdamped particle in a quadratic potential
//! `U = ½ ξ'Kξ` coupled to two heat baths at temperatures `Tx > Ty`. Its
//! Gaussian state `N(0, Σ)` is steered along closed paths of constant
//! `det Σ`, which form a surface carrying the 2-Wasserstein metric. On that
//! surface the quasi-static heat is a weighted area and the dissipation is a
//! squared length, so maximizing work is an isoperimetric problem.
//!
//! Layout:
//!
//! - [`manifold`]: polar chart, metric, curvature, Lyapunov algebra and
//!   Bures–Wasserstein transport.
//! - [`functionals`]: area, length, heats, work, efficiency and bounds.
//! - [`optimizer`]: gradient ascent on discretized cycles and `μ` sweeps.
//! - [`simulator`]: control schedules, covariance ODE and Langevin ensembles.
//! - [`cli`]: the `gyrator` command-line tool.

pub mod cli;
pub mod error;
pub mod exec;
pub mod functionals;
pub mod manifold;
pub mod optimizer;
pub mod simulator;

pub use error::{Error, Result};
pub use exec::Execution;
pub use functionals::{CovariancePath, Cycle, CycleFunctionals, Orientation};
pub use manifold::{PolarPoint, SymMat2, ThermoParams, R_MIN};
