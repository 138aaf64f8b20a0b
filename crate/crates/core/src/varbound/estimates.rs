use std::f64::consts::PI;

use crate::analytic::{dirichlet_g, dirichlet_h, mean_u_dn};
use crate::optimize::{golden_section, logspace, nelder_mead};
use crate::{Error, FunctionTable, Result};

/// A-priori bound `|ε| < 32/(9π²)` on the mixing parameter of the Dirichlet
/// two-mode family.
pub const EPS_BOUND: f64 = 32.0 / (9.0 * PI * PI);

/// Plateau cutoff: 1 on `|s| < n`, linear down to 0 at `|s| = cn`.
pub fn mollifier(s: f64, n: f64, c: f64) -> f64 {
    let a = s.abs();
    if a < n {
        1.0
    } else if a < c * n {
        (c * n - a) / ((c - 1.0) * n)
    } else {
        0.0
    }
}

/// Derivative of [`mollifier`], taken one-sided at the kinks.
pub fn mollifier_derivative(s: f64, n: f64, c: f64) -> f64 {
    let a = s.abs();
    if a >= n && a < c * n {
        -s.signum() / ((c - 1.0) * n)
    } else {
        0.0
    }
}

/// The mollifier sampled on `[-cn - h, cn + h]` with `per_n` cells per unit
/// `n`; exact as an interpolant when `c·per_n` is an integer.
pub fn mollifier_table(n: f64, c: f64, per_n: usize) -> FunctionTable {
    let h = n / per_n as f64;
    let cells = (c * n / h).ceil() as usize + 1;
    let start = -(cells as f64) * h;
    let values = (0..=2 * cells).map(|i| mollifier(start + i as f64 * h, n, c)).collect();
    FunctionTable::new(start, h, values)
}

/// Mixed-case quotient of the mollifier trial,
/// `(2/(c-1) + αn/d) / (⅔(c+2)n² - α⟨u⟩n)`.
pub fn f_dn(n: f64, c: f64, s0: f64, d: f64, alpha: f64) -> f64 {
    debug_assert!(n >= s0 && c > 1.0);
    let mean_u = mean_u_dn(d);
    (2.0 / (c - 1.0) + alpha * n / d) / (2.0 / 3.0 * (c + 2.0) * n * n - alpha * mean_u * n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnMinimum {
    pub n: f64,
    pub c: f64,
    pub f: f64,
}

/// Grid scan of `f_dn` over `n ∈ [s0, 50 s0]`, `c - 1 ∈ [10⁻⁴, 99]` (both
/// log-spaced, 64 points) and alternating golden-section refinement.
pub fn minimize_f_dn(s0: f64, d: f64, alpha: f64) -> Result<DnMinimum> {
    if !(alpha < 0.0) || !(s0 > 0.0) || !(d > 0.0) {
        return Err(Error::DomainError(format!("minimize_f_dn needs alpha < 0, s0, d > 0; got {alpha}, {s0}, {d}")));
    }
    let ns = logspace(s0, 50.0 * s0, 64);
    let cs: Vec<f64> = logspace(1e-4, 99.0, 64).into_iter().map(|x| 1.0 + x).collect();
    let mut best = DnMinimum { n: ns[0], c: cs[0], f: f64::INFINITY };
    for &n in &ns {
        for &c in &cs {
            let f = f_dn(n, c, s0, d, alpha);
            if f < best.f {
                best = DnMinimum { n, c, f };
            }
        }
    }

    let f = |n: f64, c: f64| f_dn(n, c, s0, d, alpha);
    for _ in 0..100 {
        let prev = best;
        // c is refined in ln(c - 1) with a wide bracket; f(n, ·) is unimodal.
        let (lx, _) = golden_section(|x| f(best.n, 1.0 + x.exp()), (1e-8f64).ln(), (1e9f64).ln(), 1e-13);
        best.c = 1.0 + lx.exp();
        let (n, _) = golden_section(|n| f(n, best.c), s0, (best.n * 2.0).min(50.0 * s0).max(s0 * 1.01), 1e-13);
        let n = if f(s0, best.c) <= f(n, best.c) { s0 } else { n };
        best.n = n;
        best.f = f(best.n, best.c);
        if (best.f - prev.f).abs() <= 1e-15 * best.f.abs() && (best.n - prev.n).abs() <= 1e-12 * s0 {
            break;
        }
    }
    Ok(best)
}

/// `(3π²/2d²)·[h(c₁) + (16/3π²)αε + ε²(2g(c₂) + h(c₂))] / [g(c₁) + (16/3π²)αε + ε²g(c₂)]`.
pub fn tilde_f_d(c1: f64, c2: f64, eps: f64, s0: f64, d: f64, alpha: f64) -> f64 {
    let (num, _) = d_numerator(c1, c2, eps, s0, d, alpha);
    let den = dirichlet_g(c1, s0, d, alpha) + 16.0 / (3.0 * PI * PI) * alpha * eps + eps * eps * dirichlet_g(c2, s0, d, alpha);
    1.5 * PI * PI / (d * d) * num / den
}

fn d_numerator(c1: f64, c2: f64, eps: f64, s0: f64, d: f64, alpha: f64) -> (f64, f64) {
    let g2 = dirichlet_g(c2, s0, d, alpha);
    let h2 = dirichlet_h(c2, s0, d);
    let num = dirichlet_h(c1, s0, d) + 16.0 / (3.0 * PI * PI) * alpha * eps + eps * eps * (2.0 * g2 + h2);
    (num, g2)
}

/// `tilde_f_d` with its denominator replaced by the larger `g(c₁)`; defined
/// on the region where `tilde_f_d < 0`.
pub fn f_d(c1: f64, c2: f64, eps: f64, s0: f64, d: f64, alpha: f64) -> Result<f64> {
    if !(c1 > 1.0 && c2 > 1.0) {
        return Err(Error::DomainError(format!("f_d needs c1, c2 > 1, got {c1}, {c2}")));
    }
    if !(tilde_f_d(c1, c2, eps, s0, d, alpha) < 0.0) {
        return Err(Error::OutsideNegativeRegion { c1, c2, eps });
    }
    let (num, _) = d_numerator(c1, c2, eps, s0, d, alpha);
    Ok(1.5 * PI * PI / (d * d) * num / dirichlet_g(c1, s0, d, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DMinimum {
    pub c1: f64,
    pub c2: f64,
    pub eps: f64,
    pub f: f64,
}

/// Minimizes `f_d` over the negative region: a grid in
/// `(ln(c₁ - 1), ln(c₂ - 1), ε)` followed by restarted Nelder–Mead.
///
/// Outside the region the objective continues as `tilde_f_d ≥ 0`, which
/// meets `f_d` at zero on the region's boundary.
pub fn minimize_f_d(s0: f64, d: f64, alpha: f64) -> Result<DMinimum> {
    if alpha == 0.0 || !alpha.is_finite() || !(s0 > 0.0) || !(d > 0.0) {
        return Err(Error::DomainError(format!("minimize_f_d needs alpha != 0, s0, d > 0; got {alpha}, {s0}, {d}")));
    }
    if !(s0 / d - alpha / 4.0 > 0.0) {
        return Err(Error::DomainError("minimize_f_d needs s0/d - alpha/4 > 0".into()));
    }
    let objective = |x: &[f64]| {
        let (c1, c2, eps) = (1.0 + x[0].exp(), 1.0 + x[1].exp(), x[2]);
        if eps.abs() >= EPS_BOUND {
            return f64::INFINITY;
        }
        match f_d(c1, c2, eps, s0, d, alpha) {
            Ok(v) => v,
            Err(_) => tilde_f_d(c1, c2, eps, s0, d, alpha),
        }
    };

    let l1 = logspace(1e-3, 1e9, 48);
    let l2 = logspace(1e-5, 1e4, 36);
    let mut e = vec![0.0];
    for x in logspace(1e-7, 0.99 * EPS_BOUND, 30) {
        e.push(-x);
        e.push(x);
    }
    e.sort_by(f64::total_cmp);

    let mut best = (vec![0.0; 3], f64::INFINITY);
    for &a in &l1 {
        for &b in &l2 {
            for &eps in &e {
                let x = [a.ln(), b.ln(), eps];
                let v = objective(&x);
                if v < best.1 {
                    best = (x.to_vec(), v);
                }
            }
        }
    }
    if !(best.1 < 0.0) {
        return Err(Error::DomainError("no point of the negative region found on the scan grid".into()));
    }
    for _ in 0..6 {
        let step = [0.5, 0.5, 0.25 * best.0[2].abs().max(1e-6)];
        let (x, v) = nelder_mead(objective, &best.0, &step, 1e-15, 20_000);
        let done = (best.1 - v).abs() <= 1e-14 * v.abs();
        if v <= best.1 {
            best = (x, v);
        }
        if done {
            break;
        }
    }
    let x = &best.0;
    Ok(DMinimum { c1: 1.0 + x[0].exp(), c2: 1.0 + x[1].exp(), eps: x[2], f: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{bound_d, bound_dn, dirichlet_a};
    use approx::assert_relative_eq;

    #[test]
    fn mollifier_shape() {
        let (n, c) = (1.5, 3.0);
        assert_eq!(mollifier(0.3, n, c), 1.0);
        assert_eq!(mollifier(-n, n, c), 1.0);
        assert_eq!(mollifier(c * n, n, c), 0.0);
        assert_eq!(mollifier(-7.0, n, c), 0.0);
        assert_relative_eq!(mollifier(n * (1.0 + c) / 2.0, n, c), 0.5, max_relative = 1e-15);
        let t = mollifier_table(n, c, 40);
        assert_relative_eq!(t.derivative_norm2(), 2.0 / ((c - 1.0) * n), max_relative = 1e-12);
    }

    #[test]
    fn f_dn_without_bending() {
        let (n, c) = (1.3, 2.5);
        assert_relative_eq!(f_dn(n, c, 1.0, 0.2, 0.0), 3.0 / ((c - 1.0) * (c + 2.0) * n * n), max_relative = 1e-14);
    }

    #[test]
    fn f_dn_at_closed_form_minimizer() {
        let (s0, d, alpha) = (1.0, 0.2, -0.1);
        let r = bound_dn(s0, d, alpha).unwrap();
        assert_relative_eq!(f_dn(s0, r.c_plus.unwrap(), s0, d, alpha), r.f_min, max_relative = 1e-12);
    }

    #[test]
    fn dn_minimizer_sits_on_the_boundary() {
        let (s0, d, alpha) = (1.0, 0.2, -0.1);
        let m = minimize_f_dn(s0, d, alpha).unwrap();
        assert_relative_eq!(m.n, s0, max_relative = 1e-9);
        let r = bound_dn(s0, d, alpha).unwrap();
        assert_relative_eq!(m.f, r.f_min, max_relative = 1e-6);
        assert_relative_eq!(m.c, r.c_plus.unwrap(), max_relative = 1e-4);
    }

    #[test]
    fn dn_minimum_vanishes_with_bending() {
        let mut last = f64::NEG_INFINITY;
        for alpha in [-0.4, -0.1, -0.03, -0.01, -0.003] {
            let f = minimize_f_dn(1.0, 0.2, alpha).unwrap().f;
            assert!(f < 0.0 && f > last);
            last = f;
        }
        assert!(last > -1e-3);
    }

    #[test]
    fn tilde_f_without_mixing() {
        let (c1, s0, d, alpha) = (5.0, 1.0, 0.2, -0.1);
        let expect = 1.5 * PI * PI / (d * d) * dirichlet_h(c1, s0, d) / dirichlet_g(c1, s0, d, alpha);
        assert_relative_eq!(tilde_f_d(c1, 3.0, 0.0, s0, d, alpha), expect, max_relative = 1e-14);
        assert!(expect > 0.0);
    }

    #[test]
    fn f_d_at_closed_form_point() {
        let (s0, d, alpha) = (1.0, 0.2, -0.1);
        let r = bound_d(s0, d, alpha).unwrap();
        let (c1, c2, e0) = (r.c1_plus.unwrap(), r.c2_plus.unwrap(), r.epsilon0.unwrap());
        let a = dirichlet_a(c2, e0, s0, d, alpha);
        let printed = 1.5 * PI * PI / (d * d) * (dirichlet_h(c1, s0, d) + a) / dirichlet_g(c1, s0, d, alpha);
        assert_relative_eq!(f_d(c1, c2, e0, s0, d, alpha).unwrap(), printed, max_relative = 1e-14);
        assert_relative_eq!(f_d(c1, c2, e0, s0, d, alpha).unwrap(), r.f_min, max_relative = 1e-10);
    }

    #[test]
    fn f_d_outside_region() {
        assert!(matches!(f_d(2.0, 2.0, 0.0, 1.0, 0.2, -0.1), Err(Error::OutsideNegativeRegion { .. })));
    }

    #[test]
    fn tilde_below_f_d_on_region() {
        let (s0, d, alpha) = (1.0, 0.2, -0.3);
        let mut hits = 0;
        for c1 in logspace(1.0, 1e5, 20) {
            for c2 in logspace(1e-3, 10.0, 20) {
                for i in 0..20 {
                    let eps = 1e-3 + 0.05 * i as f64 / 19.0;
                    if let Ok(f) = f_d(1.0 + c1, 1.0 + c2, eps, s0, d, alpha) {
                        hits += 1;
                        assert!(tilde_f_d(1.0 + c1, 1.0 + c2, eps, s0, d, alpha) <= f);
                    }
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn d_minimizer_matches_closed_form() {
        for (s0, d, alpha) in [(1.0, 0.2, -0.1), (1.0, 0.2, 0.3), (2.0, 0.5, -0.6)] {
            let r = bound_d(s0, d, alpha).unwrap();
            let m = minimize_f_d(s0, d, alpha).unwrap();
            assert_relative_eq!(m.f, r.f_min, max_relative = 1e-5);
            assert_eq!(m.eps.signum(), -alpha.signum());
            assert!(m.f < 0.0);
        }
    }
}
