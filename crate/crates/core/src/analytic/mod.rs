//! Closed-form quantities: transverse spectra, thresholds, the threshold
//! bounds for compactly supported bending, and thin/mild-curvature
//! asymptotics.

mod asymptotics;
mod bounds;
mod transverse;

pub use asymptotics::{
    default_phi0, dn_count_width, effective_1d_ground, mild_coeff_d, EffectiveGround, MildCoefficients,
    MILD_RATIO_BOUND,
};
pub use bounds::{
    bound_d, bound_dn, dirichlet_a, dirichlet_constant, dirichlet_g, dirichlet_h, dn_c_plus, dn_constant,
    dn_minimal_value, thin_gap_dn, BoundReport,
};
pub use transverse::{
    essential_threshold, mean_u_dn, transverse_eigenvalue, transverse_mode, transverse_mode_derivative, BoundaryType,
};
