//! Control protocols and Langevin verification of cycle energetics.
//!
//! The particle obeys `γ dξ = −Kξ dt + √(2k_B γ T_i) dB` with a control gain
//! held piecewise constant on a uniform grid. Work is the energy change at
//! the gain jumps; heat is the Stratonovich integral `∫(Kξ)_i ∘ dξ_i` per
//! bath, so the first law holds along every trajectory.

mod ensemble;
mod lyapunov;
mod reference;
mod report;
mod schedule;

pub use ensemble::{simulate_ensemble, CovarianceEstimate, EnergeticsEstimate, Estimate, MIN_PARTICLES};
pub use lyapunov::{propagate_lyapunov, propagate_lyapunov_substeps};
pub use reference::{analytic_bath_heats, em_moment_reference, exact_hold_reference, ExpectedEnergetics};
pub use report::{compare_report, ComparisonReport, ComparisonRow, Z_THRESHOLD};
pub use schedule::{plan_time_grid, schedule_from_cycle, steps_for, ControlSchedule};
