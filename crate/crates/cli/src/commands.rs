use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;
use stripspec_core::analytic::{bound_d, bound_dn, essential_threshold};
use stripspec_core::assemble::{assemble_forms, build_grid};
use stripspec_core::curvegeom::{check_hypothesis, reconstruct_curve, Support};
use stripspec_core::eigsolve::{count_below, count_below_adaptive, radiating_eigs, smallest_eigs, DEFAULT_MARGIN};
use stripspec_core::export::{bound_row, write_field, write_rows, write_trace, BOUND_COLUMNS, SPECTRUM_COLUMNS};
use stripspec_core::varbound::{minimize_f_d, minimize_f_dn};
use stripspec_core::verify::{self, VerifyOptions};
use stripspec_core::{BoundReport, BoundaryType, CurvatureProfile, EndCondition, Error, FormAssembly, SolverOptions};

use crate::config::{end_name, EndChoice, RunConfig, SweepAxis};
use crate::CliError;

pub const HYPOTHESIS_COLUMNS: [&str; 12] = [
    "thinness",
    "thinness_ok",
    "umlauf_violation",
    "self_intersection_found",
    "c_minus",
    "c_plus",
    "lattice_ds",
    "lattice_du",
    "witness_s1",
    "witness_u1",
    "witness_s2",
    "witness_u2",
];
pub const SUMMARY_COLUMNS: [&str; 6] = ["end_bc", "iota", "E1", "threshold", "lambda_min", "count"];
pub const BOUNDS_EXTRA_COLUMNS: [&str; 2] = ["f_min_numeric", "relative_gap"];
pub const SWEEP_COLUMNS: [&str; 7] = ["index", "value", "lambda_min", "threshold", "gap", "bound_value", "count"];
pub const FIT_COLUMNS: [&str; 3] = ["axis", "exponent", "points"];
pub const VERIFY_COLUMNS: [&str; 4] = ["id", "title", "passed", "detail"];

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Output(format!("cannot create {}: {e}", path.display())))
}

fn num(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        String::new()
    }
}

fn resolution(cfg: &RunConfig) -> usize {
    cfg.geometry.resolution.unwrap_or(4 * cfg.strip.n_s)
}

pub fn geometry(cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.strip;
    let report = check_hypothesis(&cfg.profile, s.d, s.half_length, resolution(cfg))?;
    let trace = reconstruct_curve(&cfg.profile, s.half_length, s.n_s)?;
    let (w1, w2) = report.witness.map_or(([f64::NAN; 2], [f64::NAN; 2]), |(a, b)| (a, b));
    let row = vec![
        num(report.thinness),
        report.thinness_ok.to_string(),
        report.umlauf_violation.to_string(),
        report.self_intersection_found.to_string(),
        num(report.c_minus),
        num(report.c_plus),
        num(report.lattice_spacing.0),
        num(report.lattice_spacing.1),
        num(w1[0]),
        num(w1[1]),
        num(w2[0]),
        num(w2[1]),
    ];
    write_rows(create(&cfg.output_dir, "hypothesis.csv")?, &HYPOTHESIS_COLUMNS, &[row])?;
    write_trace(create(&cfg.output_dir, "trace.csv")?, &trace)?;
    println!(
        "thinness d*sup k+ = {:.6} ({}), turning check {}, self-intersection {}",
        report.thinness,
        if report.thinness_ok { "ok" } else { "violated" },
        if report.umlauf_violation { "violated" } else { "ok" },
        if report.self_intersection_found { "found" } else { "none" },
    );
    if report.holds() {
        Ok(())
    } else {
        Err(CliError::Hypothesis(format!(
            "thinness {} , turning violation {}, self-intersection {}",
            report.thinness, report.umlauf_violation, report.self_intersection_found
        )))
    }
}

fn require_hypothesis(cfg: &RunConfig, profile: &CurvatureProfile, d: f64, half_length: f64) -> Result<(), CliError> {
    let report = check_hypothesis(profile, d, half_length, resolution(cfg))?;
    if report.holds() {
        Ok(())
    } else {
        Err(CliError::Hypothesis(format!(
            "thinness {}, turning violation {}, self-intersection {}",
            report.thinness, report.umlauf_violation, report.self_intersection_found
        )))
    }
}

/// Lowest levels of one truncated problem.
struct Solved {
    eigenvalues: Vec<f64>,
    residuals: Vec<Option<f64>>,
    ground: Option<Vec<f64>>,
    threshold: f64,
    count: usize,
}

fn solve(asm: &FormAssembly, iota: BoundaryType, d: f64, m: usize, opts: &SolverOptions) -> Result<Solved, CliError> {
    if asm.end_bc == EndCondition::Radiating {
        let r = radiating_eigs(asm, m, opts).map_err(|e| CliError::Solver(e.to_string()))?;
        return Ok(Solved {
            residuals: vec![None; r.eigenvalues.len()],
            ground: r.vectors.first().cloned(),
            eigenvalues: r.eigenvalues,
            threshold: r.threshold,
            count: r.count,
        });
    }
    let e1 = essential_threshold(iota, d);
    let mut res = smallest_eigs(asm, m.min(asm.dim()), opts)?;
    if !res.converged {
        return Err(CliError::Solver(format!("{} of {} pairs converged", res.len(), res.requested)));
    }
    let count = match count_below(&res, e1, DEFAULT_MARGIN) {
        Ok(c) => c,
        Err(Error::InsufficientPairs { .. }) => {
            let (c, wider) = count_below_adaptive(asm, e1, DEFAULT_MARGIN, opts)?;
            if !wider.converged {
                return Err(CliError::Solver(format!("{} of {} pairs converged", wider.len(), wider.requested)));
            }
            res = wider;
            c
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Solved {
        residuals: res.residuals.iter().map(|&r| Some(r)).collect(),
        ground: res.vectors.first().cloned(),
        eigenvalues: res.eigenvalues,
        threshold: e1,
        count,
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.strip;
    require_hypothesis(cfg, &cfg.profile, s.d, s.half_length)?;
    let trace = reconstruct_curve(&cfg.profile, s.half_length, s.n_s)?;
    let grid = build_grid(s.half_length, s.d, s.n_s, s.n_u)?;
    let opts = cfg.solver_options();
    let e1 = essential_threshold(s.iota, s.d);
    let mut summary = Vec::new();
    let mut lows = Vec::new();
    for bc in s.end_bc.conditions() {
        let name = end_name(bc);
        let asm = assemble_forms(&cfg.profile, &grid, s.iota, bc)?;
        if cfg.spectrum.dump_matrices {
            asm.k.write_matrix_market(create(&cfg.output_dir, &format!("K_{name}.mtx"))?)?;
            asm.m.write_matrix_market(create(&cfg.output_dir, &format!("M_{name}.mtx"))?)?;
        }
        let solved = solve(&asm, s.iota, s.d, cfg.solver.m, &opts)?;
        let rows: Vec<Vec<String>> = solved
            .eigenvalues
            .iter()
            .zip(&solved.residuals)
            .enumerate()
            .map(|(i, (l, r))| vec![i.to_string(), num(*l), r.map(num).unwrap_or_default()])
            .collect();
        write_rows(create(&cfg.output_dir, &format!("spectrum_{name}.csv"))?, &SPECTRUM_COLUMNS, &rows)?;
        if let Some(x) = &solved.ground {
            write_field(create(&cfg.output_dir, &format!("field_{name}.csv"))?, &asm, x, Some(&trace))?;
        }
        let low = solved.eigenvalues.first().copied().unwrap_or(f64::NAN);
        println!(
            "{name} ends: lambda_min = {}, threshold = {}, bound states = {}",
            if low.is_finite() { format!("{low:.10}") } else { "none below threshold".into() },
            solved.threshold,
            solved.count
        );
        summary.push(vec![
            name.to_string(),
            s.iota.to_string(),
            num(e1),
            num(solved.threshold),
            num(low),
            solved.count.to_string(),
        ]);
        lows.push(low);
    }
    if s.end_bc == EndChoice::Both {
        println!("bracket: {} <= lambda_min <= {}", lows[0], lows[1]);
    }
    write_rows(create(&cfg.output_dir, "summary.csv")?, &SUMMARY_COLUMNS, &summary)?;
    Ok(())
}

fn support_half_width(profile: &CurvatureProfile) -> Result<(f64, f64), CliError> {
    let stats = profile.stats()?;
    match stats.support {
        Support::Interval(..) => Ok((stats.s0, stats.alpha)),
        Support::Empty => Ok((0.0, 0.0)),
        Support::Unbounded => Err(CliError::Config("bounds need a compactly supported curvature".into())),
    }
}

fn closed_form(iota: BoundaryType, s0: f64, d: f64, alpha: f64) -> stripspec_core::Result<BoundReport> {
    match iota {
        BoundaryType::D => bound_d(s0, d, alpha),
        BoundaryType::DN => bound_dn(s0, d, alpha),
        BoundaryType::N => Err(Error::DomainError("no threshold bound for the Neumann strip".into())),
    }
}

pub fn bounds(cfg: &RunConfig) -> Result<(), CliError> {
    let (s0, alpha) = support_half_width(&cfg.profile)?;
    let (iota, d) = (cfg.strip.iota, cfg.strip.d);
    let report = closed_form(iota, s0, d, alpha)?;
    let numeric = match iota {
        BoundaryType::DN if alpha < 0.0 => Some(minimize_f_dn(s0, d, alpha)?.f),
        BoundaryType::D if alpha != 0.0 => Some(minimize_f_d(s0, d, alpha)?.f),
        _ => None,
    };
    let gap = numeric.map(|f| ((f - report.f_min) / report.f_min).abs());
    let mut header: Vec<&str> = BOUND_COLUMNS.to_vec();
    header.extend(BOUNDS_EXTRA_COLUMNS);
    let mut row = bound_row(&report);
    row.push(numeric.map(num).unwrap_or_default());
    row.push(gap.map(num).unwrap_or_default());
    write_rows(create(&cfg.output_dir, "bounds.csv")?, &header, &[row])?;
    println!(
        "{iota}: E1 = {}, bound = {}, gap = {}{}",
        report.e1,
        report.bound_value,
        report.gap(),
        if report.degenerate { " (degenerate: alpha = 0)" } else { "" }
    );
    if let (Some(f), Some(g)) = (numeric, gap) {
        println!("closed-form f_min = {}, numeric minimum = {f}, relative gap = {g:.3e}", report.f_min);
    }
    Ok(())
}

/// Slope of `log y` against `log x` by least squares.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

struct SweepPoint {
    lambda_min: f64,
    threshold: f64,
    bound_value: f64,
    count: usize,
}

fn sweep_point(cfg: &RunConfig, axis: SweepAxis, value: f64, bc: EndCondition) -> Result<SweepPoint, CliError> {
    let s = &cfg.strip;
    let (mut profile, mut d, mut half_length, mut n_s) = (cfg.profile.clone(), s.d, s.half_length, s.n_s);
    match axis {
        SweepAxis::Beta => profile = CurvatureProfile::scaled(value, cfg.profile.clone()),
        SweepAxis::D => d = value,
        SweepAxis::S => {
            if cfg.sweep.as_ref().is_some_and(|sw| sw.fixed_step) {
                n_s = ((s.n_s as f64) * value / s.half_length).round().max(4.0) as usize;
            }
            half_length = value;
        }
    }
    require_hypothesis(cfg, &profile, d, half_length)?;
    let grid = build_grid(half_length, d, n_s, s.n_u)?;
    let asm = assemble_forms(&profile, &grid, s.iota, bc)?;
    let solved = solve(&asm, s.iota, d, cfg.solver.m, &cfg.solver_options())?;
    let bound_value = support_half_width(&profile)
        .ok()
        .and_then(|(s0, alpha)| closed_form(s.iota, s0, d, alpha).ok())
        .map_or(f64::NAN, |r| r.bound_value);
    Ok(SweepPoint {
        lambda_min: solved.eigenvalues.first().copied().unwrap_or(f64::NAN),
        threshold: solved.threshold,
        bound_value,
        count: solved.count,
    })
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let sw = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("sweep needs a [sweep] section".into()))?;
    let bc = match cfg.strip.end_bc {
        EndChoice::Both => return Err(CliError::Config("sweep needs a single end condition, not both".into())),
        other => other.conditions()[0],
    };
    let points: Vec<SweepPoint> =
        sw.values.par_iter().map(|&v| sweep_point(cfg, sw.axis, v, bc)).collect::<Result<_, _>>()?;
    let mut header = SWEEP_COLUMNS;
    header[1] = sw.axis.name();
    let rows: Vec<Vec<String>> = points
        .iter()
        .zip(&sw.values)
        .enumerate()
        .map(|(i, (p, v))| {
            vec![
                i.to_string(),
                num(*v),
                num(p.lambda_min),
                num(p.threshold),
                num(p.threshold - p.lambda_min),
                num(p.bound_value),
                p.count.to_string(),
            ]
        })
        .collect();
    write_rows(create(&cfg.output_dir, "sweep.csv")?, &header, &rows)?;
    let fit: Vec<(f64, f64)> =
        points.iter().zip(&sw.values).map(|(p, v)| (v.abs(), p.threshold - p.lambda_min)).collect();
    let used = fit.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).count();
    let exponent = loglog_slope(&fit);
    write_rows(
        create(&cfg.output_dir, "sweep_fit.csv")?,
        &FIT_COLUMNS,
        &[vec![sw.axis.name().to_string(), exponent.map(num).unwrap_or_default(), used.to_string()]],
    )?;
    for (row, p) in rows.iter().zip(&points) {
        println!("{} = {}: lambda_min = {}, gap = {}, count = {}", sw.axis.name(), row[1], row[2], row[4], p.count);
    }
    match exponent {
        Some(e) => println!("fitted gap exponent in {}: {e:.4} over {used} points", sw.axis.name()),
        None => println!("fitted gap exponent: fewer than two points with a positive gap"),
    }
    Ok(())
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let mut opts = VerifyOptions {
        solver: cfg.solver_options(),
        tolerance_scale: cfg.verify.tolerance_scale,
        ..VerifyOptions::default()
    };
    if !cfg.verify.cases.is_empty() {
        opts.bracket_cases = cfg
            .verify
            .cases
            .iter()
            .map(|p| {
                let path = cfg.base_dir.join(p);
                let case = RunConfig::load(&path)?;
                let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                Ok(case.bracket_case(&name))
            })
            .collect::<Result<_, CliError>>()?;
    }
    let outcomes: Vec<_> = cfg.verify.criteria.par_iter().map(|&id| verify::run(id, &opts)).collect();
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| vec![o.id.to_string(), o.title.to_string(), o.passed.to_string(), o.detail.clone()])
        .collect();
    write_rows(create(&cfg.output_dir, "verify.csv")?, &VERIFY_COLUMNS, &rows)?;
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("criteria {} failed", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [0.1, 0.2, 0.4, 0.8].iter().map(|&x: &f64| (x, 3.0 * x.powi(4))).collect();
        assert!((loglog_slope(&pts).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&pts[..1]), None);
        assert_eq!(loglog_slope(&[(1.0, -1.0), (2.0, 0.0)]), None);
    }
}
