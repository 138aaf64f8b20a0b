//! Curvature profiles, Frenet reconstruction, and the strip hypothesis.

mod hypothesis;
mod profile;
mod trace;

pub use hypothesis::{check_hypothesis, HypothesisReport};
pub use profile::{bump_shape_integral, CurvatureProfile, ProfileKind, ProfileMeta, ProfileStats, Support};
pub use trace::{reconstruct_curve, CurveTrace};

/// Point evaluation of `k(s)`.
pub fn eval_curvature(profile: &CurvatureProfile, s: f64) -> f64 {
    profile.eval(s)
}

/// Integral summaries of `profile`; fails for non-integrable profiles.
pub fn profile_stats(profile: &CurvatureProfile) -> crate::Result<ProfileStats> {
    profile.stats()
}
