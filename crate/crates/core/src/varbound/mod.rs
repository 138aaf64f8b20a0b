//! Trial-function quotients `Q₁[ψ] / ‖ψ‖²` and their minimizers.
//!
//! `Q₁[ψ] = Q[ψ] - E₁‖ψ‖²` is the energy excess over the essential
//! threshold, so a trial with a negative quotient certifies a bound state.
//! Integrals are taken with composite Simpson in `u` and Gauss–Legendre on
//! the cells of the trial's `s`-table, so piecewise-linear trials are
//! integrated without interpolation error.

mod estimates;
mod periodic;

pub use estimates::{
    f_d, f_dn, minimize_f_d, minimize_f_dn, mollifier, mollifier_derivative, mollifier_table, tilde_f_d, DMinimum,
    DnMinimum, EPS_BOUND,
};
pub use periodic::{periodic_cell_energy, periodic_trial_energy, smooth_cutoff, PeriodicCellEnergy};

use crate::analytic::{essential_threshold, transverse_mode, transverse_mode_derivative};
use crate::quadrature::{gauss_legendre, simpson_weights};
use crate::{BoundaryType, CurvatureProfile, Error, FunctionTable, Result};

/// Simpson intervals across the width unless configured otherwise.
pub const DEFAULT_U_INTERVALS: usize = 32;
const S_GAUSS_ORDER: usize = 4;

/// Energy excess, squared norm and their quotient for one trial function.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialEvaluation {
    pub q1: f64,
    pub norm2: f64,
    pub quotient: f64,
    /// `∫ |φ̇|² ⟨G^{-1/2}⟩ ds` of the separated part.
    pub longitudinal: f64,
    /// `½[χ₁(d)² - χ₁(0)²] ∫ k |φ|² ds`; zero unless `ι = DN`.
    pub boundary_term: f64,
    pub perturbation: Option<PerturbationTerms>,
}

/// Coefficients of `Q₁[ψ + εη] = Q₁[ψ] + ε·linear + ε²·quadratic` and the
/// same for the norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationTerms {
    pub eps: f64,
    pub linear: f64,
    pub quadratic: f64,
    pub norm_linear: f64,
    pub norm_quadratic: f64,
}

/// Samples of the first transverse mode (and an optional multiplier `υ`) on
/// the Simpson grid of `(0, d)`.
pub(crate) struct CrossSection {
    pub e1: f64,
    u: Vec<f64>,
    w: Vec<f64>,
    chi: Vec<f64>,
    dchi: Vec<f64>,
    norm: f64,
    /// `½[χ₁(d)² - χ₁(0)²]`.
    pub boundary_coeff: f64,
}

impl CrossSection {
    pub fn new(iota: BoundaryType, d: f64, intervals: usize) -> Result<Self> {
        if !(d > 0.0) || intervals < 2 || intervals % 2 == 1 {
            return Err(Error::InvalidInput(format!(
                "cross-section quadrature needs d > 0 and an even interval count, got {d}, {intervals}"
            )));
        }
        let h = d / intervals as f64;
        let u: Vec<f64> = (0..=intervals).map(|j| j as f64 * h).collect();
        let w = simpson_weights(intervals, h);
        let chi: Vec<f64> = u.iter().map(|&x| transverse_mode(iota, 1, d, x)).collect();
        let dchi = u.iter().map(|&x| transverse_mode_derivative(iota, 1, d, x)).collect();
        let norm = w.iter().zip(&chi).map(|(w, c)| w * c * c).sum();
        let boundary_coeff = 0.5 * (transverse_mode(iota, 1, d, d).powi(2) - transverse_mode(iota, 1, d, 0.0).powi(2));
        Ok(Self { e1: essential_threshold(iota, d), u, w, chi, dchi, norm, boundary_coeff })
    }

    /// `⟨G^{-1/2}⟩(k)` and `⟨G^{1/2}⟩(k)` with respect to `χ₁²`, normalized by
    /// the same rule so that `k = 0` gives exactly 1.
    pub fn expectations(&self, k: f64) -> (f64, f64) {
        let mut inv = 0.0;
        let mut lin = 0.0;
        for ((u, w), c) in self.u.iter().zip(&self.w).zip(&self.chi) {
            let g = 1.0 - u * k;
            inv += w * c * c / g;
            lin += w * c * c * g;
        }
        (inv / self.norm, lin / self.norm)
    }

    /// Plain `u`-integrals `(∫ a b / G, ∫ a' b' G - E₁ ∫ a b G, ∫ a b G)`
    /// for transverse factors `a = υ_a χ₁`, `b = υ_b χ₁`.
    pub fn pair_integrals(&self, k: f64, ups_a: &Multiplier, ups_b: &Multiplier) -> (f64, f64, f64) {
        let (mut inv, mut grad, mut mass) = (0.0, 0.0, 0.0);
        for (j, &u) in self.u.iter().enumerate() {
            let g = 1.0 - u * k;
            let (va, da) = ups_a.at(u);
            let (vb, db) = ups_b.at(u);
            let a = va * self.chi[j];
            let b = vb * self.chi[j];
            let ap = da * self.chi[j] + va * self.dchi[j];
            let bp = db * self.chi[j] + vb * self.dchi[j];
            inv += self.w[j] * a * b / g;
            grad += self.w[j] * ap * bp * g;
            mass += self.w[j] * a * b * g;
        }
        (inv, grad - self.e1 * mass, mass)
    }
}

/// Linear transverse multiplier `υ(u) = c₀ + c₁ u`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Multiplier {
    c0: f64,
    c1: f64,
}

impl Multiplier {
    pub const ONE: Multiplier = Multiplier { c0: 1.0, c1: 0.0 };

    /// `υ^D = -2u/d`, `υ^{DN} = 1`.
    pub fn for_boundary(iota: BoundaryType, d: f64) -> Result<Self> {
        match iota {
            BoundaryType::D => Ok(Multiplier { c0: 0.0, c1: -2.0 / d }),
            BoundaryType::DN => Ok(Multiplier::ONE),
            BoundaryType::N => Err(Error::InvalidInput("the perturbed trial is defined for D and DN only".into())),
        }
    }

    fn at(&self, u: f64) -> (f64, f64) {
        (self.c0 + self.c1 * u, self.c1)
    }
}

/// Gauss nodes on `[-1, 1]` for the per-cell `s` rule.
pub(crate) struct CellRule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl CellRule {
    pub fn new() -> Self {
        let (x, w) = gauss_legendre(S_GAUSS_ORDER);
        Self { x, w }
    }

    pub fn for_each<F: FnMut(f64, f64)>(&self, a: f64, b: f64, mut f: F) {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, w) in self.x.iter().zip(&self.w) {
            f(mid + half * x, w * half);
        }
    }
}

/// Value and slope of a table's interpolant at a point strictly inside cell `i`.
pub(crate) fn table_cell(t: &FunctionTable, i: usize, s: f64) -> (f64, f64) {
    let slope = t.slope(i);
    (t.values[i] + slope * (s - t.node(i)), slope)
}

/// Splits `[a, b]` at `breaks` and into pieces no longer than `h_max`.
pub(crate) fn pieces(a: f64, b: f64, breaks: &[f64], h_max: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * (1.0 + y.abs()));
    let mut out = Vec::new();
    for w in pts.windows(2) {
        let m = ((w[1] - w[0]) / h_max).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / m as f64;
        for i in 0..m {
            out.push((w[0] + i as f64 * h, if i + 1 == m { w[1] } else { w[0] + (i + 1) as f64 * h }));
        }
    }
    out
}

fn check_tail(phi: &FunctionTable) -> Result<()> {
    let scale = phi.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-14 * scale;
    if phi.values[0].abs() > tol || phi.values[phi.len() - 1].abs() > tol {
        return Err(Error::UnsupportedTail);
    }
    if scale == 0.0 {
        return Err(Error::InvalidInput("trial function vanishes identically".into()));
    }
    Ok(())
}

/// Separated trial `φ(s) χ₁(u)`: the longitudinal term weighted by
/// `⟨G^{-1/2}⟩` plus the boundary term, which only the mixed case has.
pub fn quotient_separated(profile: &CurvatureProfile, d: f64, iota: BoundaryType, phi: &FunctionTable) -> Result<TrialEvaluation> {
    quotient_separated_with(profile, d, iota, phi, DEFAULT_U_INTERVALS)
}

pub fn quotient_separated_with(
    profile: &CurvatureProfile,
    d: f64,
    iota: BoundaryType,
    phi: &FunctionTable,
    u_intervals: usize,
) -> Result<TrialEvaluation> {
    check_tail(phi)?;
    let xs = CrossSection::new(iota, d, u_intervals)?;
    let rule = CellRule::new();
    let breaks = profile.breakpoints();
    let (mut longitudinal, mut curvature, mut norm2) = (0.0, 0.0, 0.0);
    for i in 0..phi.len() - 1 {
        let (a, b) = (phi.node(i), phi.node(i + 1));
        if phi.values[i] == 0.0 && phi.values[i + 1] == 0.0 {
            continue;
        }
        for (pa, pb) in pieces(a, b, &breaks, f64::INFINITY) {
            rule.for_each(pa, pb, |s, w| {
                let (v, dv) = table_cell(phi, i, s);
                let k = profile.eval(s);
                let (inv, lin) = xs.expectations(k);
                longitudinal += w * dv * dv * inv;
                curvature += w * k * v * v;
                norm2 += w * v * v * lin;
            });
        }
    }
    let boundary_term = if iota == BoundaryType::DN { xs.boundary_coeff * curvature } else { 0.0 };
    let q1 = longitudinal + boundary_term;
    Ok(TrialEvaluation { q1, norm2, quotient: q1 / norm2, longitudinal, boundary_term, perturbation: None })
}

/// Mollifier plateau `φ_c(·; n)` of the perturbed trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub n: f64,
    pub c: f64,
}

/// Goldstone–Jaffe trial `φ_c(s; n) χ₁(u) + ε φ(s) υ(u) χ₁(u)` with
/// `υ^D = -2u/d`, `υ^{DN} = 1`.
///
/// The cross term is the one whose sign can be chosen through `ε`; it is
/// reported as `perturbation.linear`.
pub fn quotient_perturbed(
    profile: &CurvatureProfile,
    d: f64,
    iota: BoundaryType,
    plateau: Plateau,
    phi_bump: &FunctionTable,
    eps: f64,
) -> Result<TrialEvaluation> {
    quotient_perturbed_with(profile, d, iota, plateau, phi_bump, eps, DEFAULT_U_INTERVALS)
}

#[allow(clippy::too_many_arguments)]
pub fn quotient_perturbed_with(
    profile: &CurvatureProfile,
    d: f64,
    iota: BoundaryType,
    plateau: Plateau,
    phi_bump: &FunctionTable,
    eps: f64,
    u_intervals: usize,
) -> Result<TrialEvaluation> {
    let Plateau { n, c } = plateau;
    if !(n > 0.0 && c > 1.0) {
        return Err(Error::InvalidInput(format!("plateau needs n > 0 and c > 1, got {n}, {c}")));
    }
    let ups = Multiplier::for_boundary(iota, d)?;
    check_tail(phi_bump)?;
    check_single_sign(profile, phi_bump)?;

    let xs = CrossSection::new(iota, d, u_intervals)?;
    let rule = CellRule::new();
    let (lo, hi) = (phi_bump.start.min(-c * n), phi_bump.end().max(c * n));
    let mut breaks = profile.breakpoints();
    breaks.extend([-c * n, -n, n, c * n]);
    breaks.extend((0..phi_bump.len()).map(|i| phi_bump.node(i)));
    let h_max = phi_bump.step.min(n / 16.0).min((c - 1.0) * n / 16.0);

    let (mut longitudinal, mut curvature, mut norm_aa) = (0.0, 0.0, 0.0);
    let (mut q_ab, mut q_bb, mut n_ab, mut n_bb) = (0.0, 0.0, 0.0, 0.0);
    for (pa, pb) in pieces(lo, hi, &breaks, h_max) {
        let mid = 0.5 * (pa + pb);
        let cell = ((mid - phi_bump.start) / phi_bump.step).floor();
        let in_bump = cell >= 0.0 && (cell as usize) < phi_bump.len() - 1;
        rule.for_each(pa, pb, |s, w| {
            let k = profile.eval(s);
            let (fa, dfa) = (mollifier(s, n, c), mollifier_derivative(s, n, c));
            if fa != 0.0 || dfa != 0.0 {
                let (inv, lin) = xs.expectations(k);
                longitudinal += w * dfa * dfa * inv;
                curvature += w * k * fa * fa;
                norm_aa += w * fa * fa * lin;
            }
            if in_bump {
                let (fb, dfb) = table_cell(phi_bump, cell as usize, s);
                let (inv_ab, pot_ab, mass_ab) = xs.pair_integrals(k, &Multiplier::ONE, &ups);
                let (inv_bb, pot_bb, mass_bb) = xs.pair_integrals(k, &ups, &ups);
                q_ab += w * (dfa * dfb * inv_ab + fa * fb * pot_ab);
                n_ab += w * fa * fb * mass_ab;
                q_bb += w * (dfb * dfb * inv_bb + fb * fb * pot_bb);
                n_bb += w * fb * fb * mass_bb;
            }
        });
    }
    let boundary_term = if iota == BoundaryType::DN { xs.boundary_coeff * curvature } else { 0.0 };
    let terms = PerturbationTerms {
        eps,
        linear: 2.0 * q_ab,
        quadratic: q_bb,
        norm_linear: 2.0 * n_ab,
        norm_quadratic: n_bb,
    };
    let q1 = longitudinal + boundary_term + eps * terms.linear + eps * eps * terms.quadratic;
    let norm2 = norm_aa + eps * terms.norm_linear + eps * eps * terms.norm_quadratic;
    Ok(TrialEvaluation { q1, norm2, quotient: q1 / norm2, longitudinal, boundary_term, perturbation: Some(terms) })
}

/// `k` must keep one strict sign wherever `φ` does not vanish.
fn check_single_sign(profile: &CurvatureProfile, phi: &FunctionTable) -> Result<()> {
    let mut sign = 0.0;
    for i in 0..phi.len() - 1 {
        if phi.values[i] == 0.0 && phi.values[i + 1] == 0.0 {
            continue;
        }
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            if (t == 0.0 && phi.values[i] == 0.0) || (t == 1.0 && phi.values[i + 1] == 0.0) {
                continue;
            }
            let k = profile.eval(phi.node(i) + t * phi.step);
            if k == 0.0 || (sign != 0.0 && k.signum() != sign) {
                return Err(Error::BadSupport);
            }
            sign = k.signum();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussRule;
    use approx::assert_relative_eq;

    fn arc(kappa: f64, half: f64) -> CurvatureProfile {
        CurvatureProfile::piecewise_linear(vec![(-half, kappa), (half, kappa)]).unwrap()
    }

    #[test]
    fn straight_strip_is_pure_kinetic() {
        let phi = FunctionTable::c1_bump(-1.0, 1.0, 201);
        for iota in BoundaryType::ALL {
            let t = quotient_separated(&CurvatureProfile::zero(), 0.7, iota, &phi).unwrap();
            assert_relative_eq!(t.q1, phi.derivative_norm2(), max_relative = 1e-14);
            assert_eq!(t.boundary_term, 0.0);
            assert!(t.quotient > 0.0);
        }
    }

    #[test]
    fn tail_is_rejected() {
        let phi = FunctionTable::sample(-1.0, 1.0, 11, |s| 1.0 - s * s + 0.1);
        assert_eq!(quotient_separated(&CurvatureProfile::zero(), 1.0, BoundaryType::D, &phi), Err(Error::UnsupportedTail));
    }

    #[test]
    fn constant_arc_matches_plane_quadrature() {
        // Direct ∫∫ |∂sψ|²/G + |∂uψ|² G - E₁|ψ|² G over the interpolant.
        let (kappa, d) = (0.6, 0.5);
        let profile = arc(kappa, 10.0);
        let phi = FunctionTable::c1_bump(-1.5, 1.5, 61);
        let iota = BoundaryType::DN;
        // Simpson's h⁴ error at 32 intervals is a few 1e-8 here.
        let t = quotient_separated_with(&profile, d, iota, &phi, 128).unwrap();
        let e1 = essential_threshold(iota, d);
        let rule = GaussRule::new(12, 4);
        let (mut q, mut nrm) = (0.0, 0.0);
        for i in 0..phi.len() - 1 {
            let (a, b) = (phi.node(i), phi.node(i + 1));
            let slope = phi.slope(i);
            q += rule.integrate(a, b, |s| {
                let v = phi.eval(s);
                rule.integrate(0.0, d, |u| {
                    let g = 1.0 - u * kappa;
                    let c = transverse_mode(iota, 1, d, u);
                    let dc = transverse_mode_derivative(iota, 1, d, u);
                    (slope * c).powi(2) / g + (v * dc).powi(2) * g - e1 * (v * c).powi(2) * g
                })
            });
            nrm += rule.integrate(a, b, |s| {
                let v = phi.eval(s);
                rule.integrate(0.0, d, |u| (v * transverse_mode(iota, 1, d, u)).powi(2) * (1.0 - u * kappa))
            });
        }
        assert_relative_eq!(t.q1, q, max_relative = 1e-8);
        assert_relative_eq!(t.norm2, nrm, max_relative = 1e-8);
    }

    #[test]
    fn negative_curvature_beats_printed_estimate() {
        let profile = CurvatureProfile::bump(-0.9, 0.0, 2.0, 2).unwrap();
        let d = 0.4;
        let phi = FunctionTable::c1_bump(-1.0, 1.0, 201);
        let t = quotient_separated(&profile, d, BoundaryType::DN, &phi).unwrap();
        let estimate = phi.derivative_norm2() + t.boundary_term;
        assert_relative_eq!(t.boundary_term * d, {
            let rule = GaussRule::new(8, 1);
            (0..phi.len() - 1)
                .map(|i| rule.integrate(phi.node(i), phi.node(i + 1), |s| phi.eval(s).powi(2) * profile.eval(s)))
                .sum::<f64>()
        }, max_relative = 1e-12);
        assert!(t.q1 <= estimate);
    }

    #[test]
    fn perturbed_reduces_to_separated_at_zero_eps() {
        let profile = CurvatureProfile::bump(-0.8, 0.0, 1.0, 2).unwrap();
        let (n, c) = (1.0, 3.0);
        let plateau_table = mollifier_table(n, c, 1000);
        let phi = FunctionTable::c1_bump(-0.8, 0.8, 81);
        for iota in [BoundaryType::D, BoundaryType::DN] {
            let sep = quotient_separated(&profile, 0.3, iota, &plateau_table).unwrap();
            let per = quotient_perturbed(&profile, 0.3, iota, Plateau { n, c }, &phi, 0.0).unwrap();
            assert_relative_eq!(sep.q1, per.q1, max_relative = 1e-10, epsilon = 1e-12);
            assert_relative_eq!(sep.norm2, per.norm2, max_relative = 1e-10);
        }
    }

    #[test]
    fn linear_coefficient_large_plateau_limit() {
        let profile = CurvatureProfile::bump(-0.8, 0.0, 1.0, 2).unwrap();
        let d = 0.3;
        let phi = FunctionTable::c1_bump(-0.8, 0.8, 161);
        let direct: f64 = (0..phi.len() - 1)
            .map(|i| GaussRule::new(8, 1).integrate(phi.node(i), phi.node(i + 1), |s| phi.eval(s) * profile.eval(s)))
            .sum();
        for iota in [BoundaryType::D, BoundaryType::DN] {
            let t = quotient_perturbed(&profile, d, iota, Plateau { n: 8.0, c: 2.0 }, &phi, 0.01).unwrap();
            let lin = t.perturbation.unwrap().linear;
            assert_relative_eq!(lin, 2.0 / d * direct, max_relative = 0.02);
        }
    }

    #[test]
    fn perturbation_creates_negative_quotient() {
        let profile = CurvatureProfile::bump(-0.8, 0.0, 1.0, 2).unwrap();
        let d = 0.3;
        let phi = FunctionTable::c1_bump(-0.8, 0.8, 161);
        let plateau = Plateau { n: 1.0, c: 400.0 };
        let bare = quotient_perturbed(&profile, d, BoundaryType::D, plateau, &phi, 0.0).unwrap();
        assert!(bare.quotient >= 0.0);
        let t = bare.perturbation.unwrap();
        // Optimal ε for the numerator, opposite in sign to α.
        let eps = -t.linear / (2.0 * t.quadratic);
        assert!(eps > 0.0);
        let best = quotient_perturbed(&profile, d, BoundaryType::D, plateau, &phi, eps).unwrap();
        assert!(best.quotient < 0.0, "{}", best.quotient);
    }

    #[test]
    fn bump_across_sign_change_is_rejected() {
        let profile = CurvatureProfile::piecewise_linear(vec![(-1.0, -1.0), (1.0, 1.0)]).unwrap();
        let phi = FunctionTable::c1_bump(-0.5, 0.5, 21);
        let r = quotient_perturbed(&profile, 0.3, BoundaryType::D, Plateau { n: 1.0, c: 2.0 }, &phi, 0.1);
        assert_eq!(r, Err(Error::BadSupport));
    }
}
