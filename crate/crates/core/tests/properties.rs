use proptest::prelude::*;

use stripspec_core::analytic::{bound_d, bound_dn, essential_threshold, transverse_eigenvalue};
use stripspec_core::assemble::{assemble_forms, build_grid};
use stripspec_core::curvegeom::{reconstruct_curve, Support};
use stripspec_core::eigsolve::{smallest_eigs, SolverOptions};
use stripspec_core::varbound::{f_dn, mollifier, quotient_separated, tilde_f_d, f_d};
use stripspec_core::{BoundaryType, CurvatureProfile, EndCondition, FunctionTable};

fn small_bump() -> impl Strategy<Value = CurvatureProfile> {
    (-1.5f64..1.5, -0.5f64..0.5, 0.4f64..1.2, 1u32..4)
        .prop_map(|(a, c, w, p)| CurvatureProfile::bump_with_angle(a, c, w, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transverse_levels_increase_and_scale(d in 0.1f64..3.0, n in 1u32..8) {
        for iota in BoundaryType::ALL {
            prop_assert!(transverse_eigenvalue(iota, n + 1, d) > transverse_eigenvalue(iota, n, d));
            let scaled = transverse_eigenvalue(iota, n, 2.0 * d) * 4.0;
            prop_assert!((scaled - transverse_eigenvalue(iota, n, d)).abs() <= 1e-12 * scaled.max(1.0));
        }
        let (n_, dn, dd) = (essential_threshold(BoundaryType::N, d), essential_threshold(BoundaryType::DN, d), essential_threshold(BoundaryType::D, d));
        prop_assert!(n_ < dn && dn < dd);
    }

    #[test]
    fn bounds_are_strictly_below_threshold(s0 in 0.3f64..3.0, d in 0.05f64..0.5, a in 0.01f64..1.0) {
        let dn = bound_dn(s0, d, -a).unwrap();
        prop_assert!(dn.bound_value < dn.e1 && dn.f_min < 0.0);
        let dneg = bound_d(s0, d, -a).unwrap();
        prop_assert!(dneg.bound_value < dneg.e1);
        let dpos = bound_d(s0, d, a).unwrap();
        prop_assert!(dpos.bound_value < dpos.e1);
    }

    #[test]
    fn mollifier_stays_in_unit_interval(s in -20.0f64..20.0, n in 0.1f64..5.0, c in 1.01f64..10.0) {
        let v = mollifier(s, n, c);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, mollifier(-s, n, c));
    }

    #[test]
    fn f_dn_is_positive_without_bending(n in 0.5f64..10.0, c in 1.01f64..50.0) {
        prop_assert!(f_dn(n, c, 0.5, 0.2, 0.0) > 0.0);
    }

    #[test]
    fn tilde_f_never_exceeds_f_on_region(c1 in 0.0f64..12.0, c2 in -6.0f64..3.0, eps in -0.3f64..0.3, alpha in -0.8f64..0.8) {
        let (c1, c2) = (1.0 + c1.exp(), 1.0 + c2.exp());
        if let Ok(f) = f_d(c1, c2, eps, 1.0, 0.2, alpha) {
            prop_assert!(tilde_f_d(c1, c2, eps, 1.0, 0.2, alpha) <= f);
        }
    }

    #[test]
    fn metric_factor_is_bracketed(p in small_bump(), d in 0.05f64..0.4) {
        let meta = *p.meta();
        prop_assume!(d * meta.sup_kplus < 1.0);
        let (lo, hi) = (1.0 - d * meta.sup_kplus, 1.0 + d * meta.sup_kminus);
        for i in 0..=50 {
            let s = -2.0 + 4.0 * i as f64 / 50.0;
            for j in 0..=4 {
                let g = 1.0 - (d * j as f64 / 4.0) * p.eval(s);
                prop_assert!(g >= lo - 1e-14 && g <= hi + 1e-14);
            }
        }
    }

    #[test]
    fn turning_angle_matches_alpha(p in small_bump()) {
        let stats = p.stats().unwrap();
        prop_assert!(matches!(stats.support, Support::Interval(..) | Support::Empty));
        // Order-1 bumps have kinks off the grid, so Simpson is only second order there.
        let t = reconstruct_curve(&p, 3.0, 6000).unwrap();
        let turn = t.theta[t.len() - 1] - t.theta[0];
        prop_assert!((turn - stats.alpha).abs() < 1e-6, "{} vs {}", turn, stats.alpha);
    }

    #[test]
    fn mirrored_profile_mirrors_the_trace(p in small_bump()) {
        let a = reconstruct_curve(&p, 2.0, 4000).unwrap();
        let b = reconstruct_curve(&p.reflected(), 2.0, 4000).unwrap();
        let n = a.len();
        for i in 0..n {
            let (x, y) = (a.gamma[i][0], a.gamma[i][1]);
            let (xr, yr) = (b.gamma[n - 1 - i][0], b.gamma[n - 1 - i][1]);
            prop_assert!((x + xr).abs() < 1e-7 && (y - yr).abs() < 1e-7, "{} {}", x + xr, y - yr);
        }
    }

    #[test]
    fn separated_quotient_with_flat_strip_is_kinetic(w in 0.3f64..2.0, d in 0.1f64..2.0) {
        let phi = FunctionTable::c1_bump(-w, w, 81);
        for iota in BoundaryType::ALL {
            let t = quotient_separated(&CurvatureProfile::zero(), d, iota, &phi).unwrap();
            prop_assert!((t.q1 - phi.derivative_norm2()).abs() <= 1e-13 * t.q1);
            prop_assert!((t.quotient - t.q1 / t.norm2).abs() <= 1e-15 * t.quotient.abs());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn spectra_respect_orderings(p in small_bump(), d in 0.15f64..0.35) {
        prop_assume!(d * p.meta().sup_kplus < 0.9);
        let opts = SolverOptions::default();
        let g = build_grid(2.0, d, 48, 4).unwrap();
        let mut by_bc = Vec::new();
        for iota in [BoundaryType::N, BoundaryType::DN, BoundaryType::D] {
            let neu = smallest_eigs(&assemble_forms(&p, &g, iota, EndCondition::Neumann).unwrap(), 1, &opts).unwrap();
            let dir = smallest_eigs(&assemble_forms(&p, &g, iota, EndCondition::Dirichlet).unwrap(), 1, &opts).unwrap();
            prop_assert!(neu.lambda_min() <= dir.lambda_min());
            prop_assert!(neu.lambda_min() >= -1e-10 * dir.lambda_min().max(1.0));
            by_bc.push(dir.lambda_min());
        }
        prop_assert!(by_bc[0] <= by_bc[1] && by_bc[1] <= by_bc[2]);
    }

    #[test]
    fn solves_are_reproducible(p in small_bump()) {
        let g = build_grid(2.0, 0.2, 60, 4).unwrap();
        let asm = assemble_forms(&p, &g, BoundaryType::D, EndCondition::Dirichlet).unwrap();
        let a = smallest_eigs(&asm, 3, &SolverOptions::default()).unwrap();
        let b = smallest_eigs(&asm, 3, &SolverOptions::default()).unwrap();
        prop_assert_eq!(a.eigenvalues, b.eigenvalues);
    }
}
