use std::f64::consts::PI;

use super::transverse::{essential_threshold, mean_u_dn, BoundaryType};
use crate::{Error, Result};

/// Closed-form upper bound on the bottom of the spectrum for a curvature
/// supported in an interval of half-width `s0`, with every intermediate.
///
/// Fields that do not apply to the boundary type are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub iota: BoundaryType,
    pub e1: f64,
    pub alpha: f64,
    pub s0: f64,
    pub d: f64,
    /// Upper bound on `inf σ`.
    pub bound_value: f64,
    /// The printed constant `C^ι(s0, d, α)`.
    pub constant: f64,
    pub degenerate: bool,
    pub mean_u: Option<f64>,
    pub c_plus: Option<f64>,
    pub f_min: f64,
    pub h_value: Option<f64>,
    pub g_value: Option<f64>,
    pub a_value: Option<f64>,
    pub c1_plus: Option<f64>,
    pub c2_plus: Option<f64>,
    pub epsilon0: Option<f64>,
}

impl BoundReport {
    /// `E₁ - bound_value`, the guaranteed gap.
    pub fn gap(&self) -> f64 {
        self.e1 - self.bound_value
    }
}

const IDENTITY_TOL: f64 = 1e-12;

fn check_identity(e1: f64, f_min: f64, bound_value: f64) -> Result<()> {
    let lhs = e1 + f_min;
    let scale = bound_value.abs().max(f64::MIN_POSITIVE);
    if (lhs - bound_value).abs() > IDENTITY_TOL * scale {
        return Err(Error::Inconsistent(format!(
            "E1 + f_min = {lhs:.17e} but E1 - C^2 alpha^p = {bound_value:.17e}"
        )));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{name} must be positive, got {v}")))
    }
}

/// `c₊`, the minimizer of `c ↦ f(s0, c)` in the mixed case.
pub fn dn_c_plus(s0: f64, d: f64, alpha: f64) -> f64 {
    let mu = mean_u_dn(d);
    let r = alpha * s0 / d;
    -2.0 / r + 1.0 - (1.0 / r) * (-6.0 * r + 4.0 + 3.0 * alpha * alpha * mu / d).sqrt()
}

/// Closed-form value of `f(s0, c₊)`.
pub fn dn_minimal_value(s0: f64, d: f64, alpha: f64) -> f64 {
    let mu = mean_u_dn(d);
    let root = (1.0 - 1.5 * alpha * s0 / d + 0.75 * alpha * alpha * mu / d).sqrt();
    (-3.0 * alpha * alpha / (d * d)) / (4.0 * (1.0 + root).powi(2))
}

/// The printed constant `C^{DN}(s0, d, α)`.
pub fn dn_constant(s0: f64, d: f64, alpha: f64) -> f64 {
    let e1 = essential_threshold(BoundaryType::DN, d);
    let root = (1.0 - 1.5 * alpha * s0 / d + 0.75 * alpha * alpha * (0.5 + 2.0 / (PI * PI))).sqrt();
    e1.sqrt() * (3f64.sqrt() / PI) / (1.0 + root)
}

/// Threshold bound for the mixed Dirichlet–Neumann strip, `α ≤ 0`.
pub fn bound_dn(s0: f64, d: f64, alpha: f64) -> Result<BoundReport> {
    check_positive("s0", s0)?;
    check_positive("d", d)?;
    if alpha > 0.0 || !alpha.is_finite() {
        return Err(Error::DomainError(format!("mixed-case bound needs alpha <= 0, got {alpha}")));
    }
    let e1 = essential_threshold(BoundaryType::DN, d);
    let constant = dn_constant(s0, d, alpha);
    let mean_u = mean_u_dn(d);
    if alpha == 0.0 {
        return Ok(BoundReport {
            iota: BoundaryType::DN,
            e1,
            alpha,
            s0,
            d,
            bound_value: e1,
            constant,
            degenerate: true,
            mean_u: Some(mean_u),
            c_plus: None,
            f_min: 0.0,
            h_value: None,
            g_value: None,
            a_value: None,
            c1_plus: None,
            c2_plus: None,
            epsilon0: None,
        });
    }
    let c_plus = dn_c_plus(s0, d, alpha);
    let f_min = dn_minimal_value(s0, d, alpha);
    let bound_value = e1 - constant * constant * alpha * alpha;
    check_identity(e1, f_min, bound_value)?;
    Ok(BoundReport {
        iota: BoundaryType::DN,
        e1,
        alpha,
        s0,
        d,
        bound_value,
        constant,
        degenerate: false,
        mean_u: Some(mean_u),
        c_plus: Some(c_plus),
        f_min,
        h_value: None,
        g_value: None,
        a_value: None,
        c1_plus: None,
        c2_plus: None,
        epsilon0: None,
    })
}

/// `h(c) = (2/π²)(d/s0)/(c - 1)` of the Dirichlet two-mode family.
pub fn dirichlet_h(c: f64, s0: f64, d: f64) -> f64 {
    2.0 / (PI * PI) * (d / s0) / (c - 1.0)
}

/// `g(c) = (s0/d)(c + 2) - 3α/4`.
pub fn dirichlet_g(c: f64, s0: f64, d: f64, alpha: f64) -> f64 {
    s0 / d * (c + 2.0) - 0.75 * alpha
}

/// `A(c₂, ε) = (16/3π²) α ε + ε² (2 g(c₂) + h(c₂))`.
pub fn dirichlet_a(c2: f64, eps: f64, s0: f64, d: f64, alpha: f64) -> f64 {
    16.0 / (3.0 * PI * PI) * alpha * eps + eps * eps * (2.0 * dirichlet_g(c2, s0, d, alpha) + dirichlet_h(c2, s0, d))
}

/// The printed constant `C^D(s0, d, α)`.
pub fn dirichlet_constant(s0: f64, d: f64, alpha: f64) -> f64 {
    let q = s0 / d - alpha / 4.0 + 2.0 / (3.0 * PI);
    let ratio = (4.0 * s0 - alpha * d) / (4.0 * s0 - alpha * d + 8.0 * d / (3.0 * PI));
    let root = (1.0 + (4.0 * alpha / (3.0 * PI)).powi(2) * ratio).sqrt();
    16.0 / 27.0 * (3f64.sqrt() / (PI * PI)) / (d * q) / (1.0 + root)
}

/// Threshold bound for the Dirichlet strip.
pub fn bound_d(s0: f64, d: f64, alpha: f64) -> Result<BoundReport> {
    check_positive("s0", s0)?;
    check_positive("d", d)?;
    if !alpha.is_finite() || !(s0 / d - alpha / 4.0 > 0.0) {
        return Err(Error::DomainError(format!(
            "Dirichlet bound needs s0/d - alpha/4 > 0, got {}",
            s0 / d - alpha / 4.0
        )));
    }
    let e1 = essential_threshold(BoundaryType::D, d);
    let constant = dirichlet_constant(s0, d, alpha);
    let c2_plus = 1.0 + d / (PI * s0);
    let h2 = dirichlet_h(c2_plus, s0, d);
    let g2 = dirichlet_g(c2_plus, s0, d, alpha);
    let epsilon0 = -(8.0 * alpha / (3.0 * PI * PI)) / (h2 + 2.0 * g2);
    let a_value = dirichlet_a(c2_plus, epsilon0, s0, d, alpha);
    let q = s0 / d - alpha / 4.0;

    if alpha == 0.0 {
        return Ok(BoundReport {
            iota: BoundaryType::D,
            e1,
            alpha,
            s0,
            d,
            bound_value: e1,
            constant,
            degenerate: true,
            mean_u: None,
            c_plus: None,
            f_min: 0.0,
            h_value: Some(h2),
            g_value: Some(g2),
            a_value: Some(a_value),
            c1_plus: None,
            c2_plus: Some(c2_plus),
            epsilon0: Some(epsilon0),
        });
    }

    // First stationary equation in x = c₁ - 1; A < 0 gives one positive root.
    let qa = s0 / d * a_value;
    let qb = 4.0 / (PI * PI);
    let qc = 6.0 / (PI * PI) * (d / s0) * q;
    let disc = qb * qb - 4.0 * qa * qc;
    let x = (-qb - disc.sqrt()) / (2.0 * qa);
    let c1_plus = 1.0 + x;

    let f_min = -(3.0 * PI.powi(4) / (4.0 * d * d)) * a_value * a_value
        / (1.0 + (1.0 - 1.5 * a_value * PI * PI * q).sqrt()).powi(2);
    let bound_value = e1 - constant * constant * alpha.powi(4);
    check_identity(e1, f_min, bound_value)?;

    Ok(BoundReport {
        iota: BoundaryType::D,
        e1,
        alpha,
        s0,
        d,
        bound_value,
        constant,
        degenerate: false,
        mean_u: None,
        c_plus: None,
        f_min,
        h_value: Some(h2),
        g_value: Some(g2),
        a_value: Some(a_value),
        c1_plus: Some(c1_plus),
        c2_plus: Some(c2_plus),
        epsilon0: Some(epsilon0),
    })
}

/// Leading thin-strip term `-α / (2 s0 d)` of the mixed-case gap estimate.
pub fn thin_gap_dn(s0: f64, d: f64, alpha: f64) -> f64 {
    -alpha / (2.0 * s0 * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degenerate_alpha() {
        let r = bound_dn(1.0, 0.2, 0.0).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.bound_value, r.e1);
        let r = bound_d(1.0, 0.2, 0.0).unwrap();
        assert_eq!(r.epsilon0, Some(0.0));
        assert_eq!(r.a_value, Some(0.0));
        assert_eq!(r.f_min, 0.0);
        assert_eq!(r.bound_value, r.e1);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bound_dn(1.0, 0.2, 0.1), Err(Error::DomainError(_))));
        assert!(matches!(bound_d(0.1, 1.0, 1.0), Err(Error::DomainError(_))));
    }

    // Frozen from a 40-digit evaluation of the printed formulas.
    #[test]
    fn mixed_case_reference_values() {
        let r = bound_dn(1.0, 0.2, -0.1).unwrap();
        assert_relative_eq!(r.c_plus.unwrap(), 10.299463848737357, max_relative = 1e-13);
        assert_relative_eq!(r.f_min, -0.034690090576426356, max_relative = 1e-13);
    }

    #[test]
    fn dirichlet_reference_values() {
        let r = bound_d(1.0, 0.2, -0.1).unwrap();
        assert_relative_eq!(r.a_value.unwrap(), -2.3232022393434783e-5, max_relative = 1e-12);
        assert_relative_eq!(r.c1_plus.unwrap(), 3491.524961422783, max_relative = 1e-10);
        assert_relative_eq!(r.c2_plus.unwrap(), 1.0636619772367581, max_relative = 1e-14);
        assert_relative_eq!(r.epsilon0.unwrap(), 8.598407642266893e-4, max_relative = 1e-12);
        assert_relative_eq!(r.f_min, -2.4622931594294469e-7, max_relative = 1e-11);
        let r = bound_d(1.0, 0.2, 0.3).unwrap();
        assert_relative_eq!(r.f_min, -2.0586846749392107e-5, max_relative = 1e-11);
        assert_relative_eq!(r.epsilon0.unwrap(), -2.629734840045888e-3, max_relative = 1e-12);
    }

    #[test]
    fn printed_a_simplification_agrees() {
        for &(s0, d, alpha) in &[(1.0, 0.2, -0.1), (0.5, 0.3, 0.7), (2.0, 0.1, -1.5)] {
            let r = bound_d(s0, d, alpha).unwrap();
            let printed = -32.0 * alpha * alpha / (9.0 * PI.powi(4)) / (2.0 / PI + 3.0 * (s0 / d - alpha / 4.0));
            assert_relative_eq!(r.a_value.unwrap(), printed, max_relative = 1e-12);
        }
    }

    #[test]
    fn bounds_lie_strictly_below_threshold() {
        for alpha in [-2.0, -0.5, -0.01] {
            let r = bound_dn(0.7, 0.3, alpha).unwrap();
            assert!(r.bound_value < r.e1 && r.f_min < 0.0);
        }
        for alpha in [-1.0, -0.01, 0.02, 0.9] {
            let r = bound_d(0.7, 0.3, alpha).unwrap();
            assert!(r.bound_value < r.e1 && r.f_min < 0.0);
        }
    }

    #[test]
    fn thin_gap() {
        assert_eq!(thin_gap_dn(1.0, 0.1, 0.0), 0.0);
        assert_relative_eq!(thin_gap_dn(1.0, 0.1, -0.2), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn thin_gap_ratio_tends_to_one() {
        let (s0, alpha) = (1.0, -0.5);
        let ratios: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&d| bound_dn(s0, d, alpha).unwrap().gap() / thin_gap_dn(s0, d, alpha))
            .collect();
        for w in ratios.windows(2) {
            assert!((w[1] - 1.0).abs() < (w[0] - 1.0).abs());
        }
        let r = bound_dn(s0, 1e-6, alpha).unwrap();
        assert_relative_eq!(r.gap() / thin_gap_dn(s0, 1e-6, alpha), 1.0, max_relative = 1e-2);
    }
}
