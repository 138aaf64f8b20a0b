use std::f64::consts::PI;

use crate::assemble::assemble_1d_schrodinger;
use crate::eigsolve::{smallest_eigs, SolverOptions};
use crate::quadrature::GaussRule;
use crate::{CurvatureProfile, Error, FunctionTable, Result};

/// `128 / (9√3 π²) ≈ 0.832`: the mild-curvature ratio between the
/// threshold bound's `α⁴` coefficient and the thin-strip coefficient.
pub const MILD_RATIO_BOUND: f64 = 128.0 / (9.0 * 1.732_050_807_568_877_2 * PI * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MildCoefficients {
    /// `‖k‖²_{L²} / 8`.
    pub c_thin: f64,
    pub ratio_bound: f64,
}

/// Thin-strip coefficient of a mildly curved Dirichlet strip.
///
/// The ratio is only meaningful for small `d`; callers comparing it against
/// computed gaps should stay in that regime.
pub fn mild_coeff_d(profile: &CurvatureProfile) -> Result<MildCoefficients> {
    Ok(MildCoefficients { c_thin: profile.l2_norm2()? / 8.0, ratio_bound: MILD_RATIO_BOUND })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveGround {
    pub eigenvalue: f64,
    /// Whether the eigenvalue is negative, i.e. a genuine bound state of
    /// `-Δ - k²/4` rather than the Dirichlet box level.
    pub bound_state: bool,
}

/// Ground state of `-d²/ds² - k²/4` on `[-S, S]` with Dirichlet ends.
///
/// Nodal potential values are averages of `-k²/4` over the dual cells, so
/// jumps in `k` that fall on nodes are resolved to second order.
pub fn effective_1d_ground(profile: &CurvatureProfile, half_length: f64, n_s: usize) -> Result<EffectiveGround> {
    if n_s < 4 || !(half_length > 0.0) {
        return Err(Error::InvalidInput(format!("effective_1d_ground needs n_s >= 4, S > 0, got {n_s}, {half_length}")));
    }
    let h = 2.0 * half_length / n_s as f64;
    let values = (0..=n_s)
        .map(|i| {
            let s = -half_length + i as f64 * h;
            let a = (s - 0.5 * h).max(-half_length);
            let b = (s + 0.5 * h).min(half_length);
            -0.25 * profile.integrate_over(a, b, |k| k * k) / (b - a)
        })
        .collect();
    let potential = FunctionTable::new(-half_length, h, values);
    let asm = assemble_1d_schrodinger(&potential, half_length, n_s)?;
    let res = smallest_eigs(&asm, 1, &SolverOptions::default())?;
    let eigenvalue = res.eigenvalues[0];
    Ok(EffectiveGround { eigenvalue, bound_state: eigenvalue < 0.0 })
}

/// Default `φ₀` for [`dn_count_width`]: the C¹ bump `(1 - x²)²` on the
/// first of `n` equal subdivisions of `J`.
pub fn default_phi0(j: (f64, f64), n: usize, samples: usize) -> FunctionTable {
    let len = (j.1 - j.0) / n as f64;
    FunctionTable::c1_bump(j.0, j.0 + len, samples)
}

/// Width below which the translated copies of `φ₀ χ₁` along `J` all have
/// negative energy, certifying at least `n` mixed-case bound states.
pub fn dn_count_width(profile: &CurvatureProfile, j: (f64, f64), phi0: &FunctionTable, n: usize) -> Result<f64> {
    let (a, b) = j;
    if n == 0 || !(b > a) {
        return Err(Error::InvalidInput(format!("dn_count_width needs n >= 1 and a proper interval, got {n}, ({a}, {b})")));
    }
    const PROBES: usize = 2000;
    for i in 0..=PROBES {
        let s = a + (b - a) * i as f64 / PROBES as f64;
        let k = profile.eval(s);
        if !(k < 0.0) {
            return Err(Error::DomainError(format!("curvature must be negative on J, k({s}) = {k}")));
        }
    }
    let cell = (b - a) / n as f64;
    if let Some((lo, hi)) = phi0.support() {
        let slack = 1e-12 * (b - a);
        if lo < a - slack || hi > a + cell + slack {
            return Err(Error::DomainError(format!(
                "phi0 support [{lo}, {hi}] is not inside the first subdivision [{a}, {}]",
                a + cell
            )));
        }
    } else {
        return Err(Error::DomainError("phi0 vanishes identically".into()));
    }
    let grad2 = phi0.derivative_norm2();
    let rule = GaussRule::new(8, 1);
    let mut best = f64::INFINITY;
    for jj in 1..=n {
        let shift = (jj - 1) as f64 * cell;
        let mut acc = 0.0;
        for i in 0..phi0.len() - 1 {
            let (lo, hi) = (phi0.node(i), phi0.node(i + 1));
            acc += rule.integrate(lo, hi, |s| phi0.eval(s).powi(2) * profile.eval(s + shift).abs());
        }
        best = best.min(acc / grad2);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ratio_constant() {
        assert_relative_eq!(MILD_RATIO_BOUND, 0.831_968_891, max_relative = 1e-8);
        let c = mild_coeff_d(&CurvatureProfile::zero()).unwrap();
        assert_eq!(c.c_thin, 0.0);
    }

    #[test]
    fn constant_curvature_coefficient() {
        let (a, s0) = (0.7, 1.5);
        let p = CurvatureProfile::piecewise_linear(vec![(-s0 - 1e-9, 0.0), (-s0, a), (s0, a), (s0 + 1e-9, 0.0)]).unwrap();
        assert_relative_eq!(mild_coeff_d(&p).unwrap().c_thin, a * a * s0 / 4.0, max_relative = 1e-8);
    }

    #[test]
    fn free_interval_level() {
        let g = effective_1d_ground(&CurvatureProfile::zero(), 5.0, 400).unwrap();
        assert!(!g.bound_state);
        assert_relative_eq!(g.eigenvalue, (PI / 10.0).powi(2), max_relative = 1e-4);
    }

    fn square_well_energy(v0: f64, s0: f64) -> f64 {
        // Even ground state: q tan(q s0) = κ with q² + κ² = V0.
        let f = |kappa: f64| {
            let q = (v0 - kappa * kappa).sqrt();
            q * (q * s0).tan() - kappa
        };
        let hi_q = (PI / (2.0 * s0)).min(v0.sqrt());
        let (mut lo, mut hi) = ((v0 - hi_q * hi_q).max(0.0).sqrt() + 1e-14, v0.sqrt() - 1e-14);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let kappa = 0.5 * (lo + hi);
        -kappa * kappa
    }

    #[test]
    fn square_well_matches_transcendental_ground_state() {
        let (k0, s0) = (1.2, 1.0);
        let p = CurvatureProfile::piecewise_linear(vec![(-s0 - 1e-12, 0.0), (-s0, k0), (s0, k0), (s0 + 1e-12, 0.0)]).unwrap();
        let g = effective_1d_ground(&p, 40.0, 16000).unwrap();
        let exact = square_well_energy(k0 * k0 / 4.0, s0);
        assert!(g.bound_state);
        assert_relative_eq!(g.eigenvalue, exact, max_relative = 1e-4);
    }

    #[test]
    fn deeper_curvature_lowers_ground_state() {
        let mut last = f64::INFINITY;
        for amp in [0.2, 0.4, 0.8, 1.6] {
            let p = CurvatureProfile::bump(amp, 0.0, 1.0, 2).unwrap();
            let g = effective_1d_ground(&p, 10.0, 800).unwrap();
            assert!(g.eigenvalue < last);
            last = g.eigenvalue;
        }
    }

    #[test]
    fn count_width_constant_curvature() {
        let kappa = 0.8;
        let p = CurvatureProfile::piecewise_linear(vec![(-10.0, -kappa), (10.0, -kappa)]).unwrap();
        let j = (-2.0, 2.0);
        let phi = default_phi0(j, 3, 401);
        let d = dn_count_width(&p, j, &phi, 3).unwrap();
        let norm2 = phi.trapezoid_with(|_, v| v * v);
        assert_relative_eq!(d, kappa * norm2 / phi.derivative_norm2(), max_relative = 1e-4);
    }

    #[test]
    fn count_width_non_increasing() {
        let p = CurvatureProfile::bump(-1.0, 0.0, 2.0, 2).unwrap();
        let j = (-1.5, 1.5);
        let phi = default_phi0(j, 4, 201);
        let widths: Vec<f64> = (1..=4).map(|n| dn_count_width(&p, j, &phi, n).unwrap()).collect();
        for w in widths.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn count_width_rejects_nonnegative_curvature() {
        let p = CurvatureProfile::bump(-1.0, 0.0, 1.0, 2).unwrap();
        let phi = default_phi0((-0.5, 1.5), 1, 101);
        assert!(matches!(dn_count_width(&p, (-0.5, 1.5), &phi, 1), Err(Error::DomainError(_))));
    }
}
