//! Path functionals: weighted area, length, heat, work and efficiency.
//!
//! For a cycle traversed at constant speed in time `t_f`,
//! `Q_qs = k_B T_r A_f`, `Q_diss = γℓ_r²ℓ²/t_f` and the work output is
//! `k_B T_r (A_f − μℓ²)` with `μ = t_c / t_f`.

mod area;
mod bounds;
mod cycle;
mod heat;
mod smooth;
pub mod spline;

pub(crate) use area::heat_one_form_jet;
pub use area::{
    area_line_integral, area_quadrature, area_quadrature_indicator, enclosed_area, gauss_legendre, heat_one_form,
    ChartDomain,
};
pub use bounds::{
    conjectured_efficiency_bound, efficiency_bound, isoperimetric_bound_rotsym, negative_curvature_bound,
    rotsym_efficiency_bound,
};
pub use cycle::{
    cycle_length, cycle_length_in, resample_constant_speed, resample_constant_speed_in, spacing_deviation_in, Cycle,
    Orientation, MIN_CYCLE_POINTS,
};
pub(crate) use cycle::{resample_points, segment_lengths};
pub use heat::{
    covariance_path_from_cycle, cycle_functionals, heat_decomposition_covariance, CovariancePath, CycleFunctionals,
    PathHeat, DERIVATIVE_TOLERANCE,
};
pub use smooth::SmoothCycle;
