//! CSV writers for traces, bound reports, spectra and eigenvector fields.
//!
//! Numbers are written in Rust's shortest round-trip form, so identical
//! inputs give byte-identical files.

use std::io::Write;

use crate::{BoundReport, CurveTrace, Error, FormAssembly, Result, SpectralResult, TrialEvaluation};

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes a header and rows of pre-formatted fields.
pub fn write_rows<W: Write, R: AsRef<[String]>>(w: W, header: &[&str], rows: &[R]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(io_err)?;
    for r in rows {
        out.write_record(r.as_ref()).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub const TRACE_COLUMNS: [&str; 6] = ["s", "theta", "gamma_x", "gamma_y", "n_x", "n_y"];

pub fn write_trace<W: Write>(w: W, trace: &CurveTrace) -> Result<()> {
    let rows: Vec<Vec<String>> = (0..trace.len())
        .map(|i| {
            vec![
                trace.s[i].to_string(),
                trace.theta[i].to_string(),
                trace.gamma[i][0].to_string(),
                trace.gamma[i][1].to_string(),
                trace.normal[i][0].to_string(),
                trace.normal[i][1].to_string(),
            ]
        })
        .collect();
    write_rows(w, &TRACE_COLUMNS, &rows)
}

pub const BOUND_COLUMNS: [&str; 17] = [
    "iota", "E1", "alpha", "s0", "d", "bound_value", "C", "degenerate", "mean_u", "c_plus", "f_min", "h_value",
    "g_value", "A_value", "c1_plus", "c2_plus", "epsilon0",
];

pub fn bound_row(r: &BoundReport) -> Vec<String> {
    vec![
        r.iota.to_string(),
        r.e1.to_string(),
        r.alpha.to_string(),
        r.s0.to_string(),
        r.d.to_string(),
        r.bound_value.to_string(),
        r.constant.to_string(),
        r.degenerate.to_string(),
        opt(r.mean_u),
        opt(r.c_plus),
        r.f_min.to_string(),
        opt(r.h_value),
        opt(r.g_value),
        opt(r.a_value),
        opt(r.c1_plus),
        opt(r.c2_plus),
        opt(r.epsilon0),
    ]
}

pub fn write_bound_reports<W: Write>(w: W, reports: &[BoundReport]) -> Result<()> {
    let rows: Vec<Vec<String>> = reports.iter().map(bound_row).collect();
    write_rows(w, &BOUND_COLUMNS, &rows)
}

pub const SPECTRUM_COLUMNS: [&str; 3] = ["index", "eigenvalue", "residual"];

pub fn write_spectrum<W: Write>(w: W, result: &SpectralResult) -> Result<()> {
    let rows: Vec<Vec<String>> = (0..result.len())
        .map(|i| vec![i.to_string(), result.eigenvalues[i].to_string(), result.residuals[i].to_string()])
        .collect();
    write_rows(w, &SPECTRUM_COLUMNS, &rows)
}

pub const FIELD_COLUMNS: [&str; 5] = ["s", "u", "x", "y", "value"];

/// Eigenvector on every grid node, with physical coordinates when a trace
/// covering the grid is supplied (otherwise `x = s`, `y = u`).
pub fn write_field<W: Write>(w: W, assembly: &FormAssembly, x: &[f64], trace: Option<&CurveTrace>) -> Result<()> {
    let grid = assembly
        .grid
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("field export needs a two-dimensional assembly".into()))?;
    let full = assembly.expand(x);
    let mut rows = Vec::with_capacity(full.len());
    for i in 0..=grid.n_s {
        for j in 0..=grid.n_u {
            let (s, u) = (grid.s(i), grid.u(j));
            let p = match trace {
                Some(t) => t.strip_map(s, u)?,
                None => [s, u],
            };
            rows.push(vec![
                s.to_string(),
                u.to_string(),
                p[0].to_string(),
                p[1].to_string(),
                full[grid.node_index(i, j)].to_string(),
            ]);
        }
    }
    write_rows(w, &FIELD_COLUMNS, &rows)
}

pub const TRIAL_COLUMNS: [&str; 5] = ["Q1", "norm2", "quotient", "longitudinal", "boundary_term"];

pub fn trial_row(t: &TrialEvaluation) -> Vec<String> {
    vec![
        t.q1.to_string(),
        t.norm2.to_string(),
        t.quotient.to_string(),
        t.longitudinal.to_string(),
        t.boundary_term.to_string(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::bound_dn;
    use crate::assemble::{assemble_forms, build_grid};
    use crate::curvegeom::reconstruct_curve;
    use crate::eigsolve::{smallest_eigs, SolverOptions};
    use crate::{BoundaryType, CurvatureProfile, EndCondition};

    fn text<F: FnOnce(&mut Vec<u8>) -> Result<()>>(f: F) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn trace_columns() {
        let t = reconstruct_curve(&CurvatureProfile::zero(), 1.0, 4).unwrap();
        let s = text(|b| write_trace(b, &t));
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("s,theta,gamma_x,gamma_y,n_x,n_y"));
        assert_eq!(lines.count(), 5);
    }

    #[test]
    fn bound_report_round_trips() {
        let r = bound_dn(1.0, 0.2, -0.1).unwrap();
        let s = text(|b| write_bound_reports(b, &[r.clone()]));
        let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), BOUND_COLUMNS.len());
        assert_eq!(row[0], "DN");
        assert_eq!(row[10].parse::<f64>().unwrap(), r.f_min);
        assert_eq!(row[14], "");
    }

    #[test]
    fn spectrum_and_field_are_deterministic() {
        let g = build_grid(2.0, 0.5, 20, 4).unwrap();
        let p = CurvatureProfile::bump(-1.0, 0.0, 1.0, 2).unwrap();
        let asm = assemble_forms(&p, &g, BoundaryType::D, EndCondition::Dirichlet).unwrap();
        let r = smallest_eigs(&asm, 2, &SolverOptions::default()).unwrap();
        let a = text(|b| write_spectrum(b, &r));
        let again = smallest_eigs(&asm, 2, &SolverOptions::default()).unwrap();
        assert_eq!(a, text(|b| write_spectrum(b, &again)));
        let trace = reconstruct_curve(&p, 2.0, 200).unwrap();
        let f = text(|b| write_field(b, &asm, r.eigenvector(0), Some(&trace)));
        assert_eq!(f.lines().count(), 1 + g.node_count());
    }
}
