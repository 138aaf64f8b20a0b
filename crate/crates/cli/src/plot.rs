use std::collections::HashMap;
use std::path::Path;

use crate::config::RunConfig;
use crate::svg::{ramp, Canvas};
use crate::CliError;

/// Columns of a CSV file, by header name.
struct Table {
    columns: HashMap<String, Vec<f64>>,
    rows: usize,
}

impl Table {
    fn read(path: &Path) -> Result<Option<Self>, CliError> {
        if !path.exists() {
            return Ok(None);
        }
        let bad = |e: csv::Error| CliError::Config(format!("cannot read {}: {e}", path.display()));
        let mut r = csv::Reader::from_path(path).map_err(bad)?;
        let headers: Vec<String> = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let mut columns: HashMap<String, Vec<f64>> = headers.iter().map(|h| (h.clone(), Vec::new())).collect();
        let mut rows = 0;
        for rec in r.records() {
            let rec = rec.map_err(bad)?;
            for (h, field) in headers.iter().zip(rec.iter()) {
                columns.get_mut(h).expect("header present").push(field.parse().unwrap_or(f64::NAN));
            }
            rows += 1;
        }
        Ok(Some(Self { columns, rows }))
    }

    fn col(&self, name: &str, path: &Path) -> Result<&[f64], CliError> {
        self.columns
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| CliError::Config(format!("{} has no column {name}", path.display())))
    }
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn write(cfg: &RunConfig, name: &str, svg: String) -> Result<(), CliError> {
    let path = cfg.output_dir.join(name);
    std::fs::write(&path, svg).map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Outer boundary `Γ + dN` and inner `Γ`, closed into one polygon.
fn outline(cfg: &RunConfig, trace: &Table, path: &Path) -> Result<String, CliError> {
    let d = cfg.strip.d;
    let (gx, gy) = (trace.col("gamma_x", path)?, trace.col("gamma_y", path)?);
    let (nx, ny) = (trace.col("n_x", path)?, trace.col("n_y", path)?);
    let inner: Vec<(f64, f64)> = gx.iter().zip(gy).map(|(&x, &y)| (x, y)).collect();
    let outer: Vec<(f64, f64)> = (0..trace.rows).map(|i| (gx[i] + d * nx[i], gy[i] + d * ny[i])).collect();
    let xr = range(inner.iter().chain(&outer).map(|p| p.0));
    let yr = range(inner.iter().chain(&outer).map(|p| p.1));
    let mut c = Canvas::new(800.0, 600.0, xr, yr, true);
    let mut band = inner.clone();
    band.extend(outer.iter().rev());
    c.polygon(&band, "#dde8f4", Some("none"));
    c.polyline(&inner, "#1f4e79", 1.5);
    c.polyline(&outer, "#b03a2e", 1.5);
    c.polyline(&[inner[0], outer[0]], "#555555", 1.0);
    c.polyline(&[inner[inner.len() - 1], outer[outer.len() - 1]], "#555555", 1.0);
    c.title(&format!("strip outline, d = {d}"));
    Ok(c.finish())
}

/// `|ψ|` on the physical strip, one quadrilateral per grid cell.
fn heat_map(cfg: &RunConfig, field: &Table, path: &Path) -> Result<String, CliError> {
    let nu = cfg.strip.n_u + 1;
    if field.rows == 0 || field.rows % nu != 0 {
        return Err(CliError::Config(format!(
            "{} has {} rows, not a multiple of n_u + 1 = {nu}; was it written with this config?",
            path.display(),
            field.rows
        )));
    }
    let (x, y, v) = (field.col("x", path)?, field.col("y", path)?, field.col("value", path)?);
    let vmax = v.iter().fold(0.0f64, |m, a| m.max(a.abs())).max(f64::MIN_POSITIVE);
    let mut c = Canvas::new(800.0, 600.0, range(x.iter().copied()), range(y.iter().copied()), true);
    let ns = field.rows / nu;
    for i in 0..ns - 1 {
        for j in 0..nu - 1 {
            let idx = [i * nu + j, (i + 1) * nu + j, (i + 1) * nu + j + 1, i * nu + j + 1];
            let mean = idx.iter().map(|&k| v[k].abs()).sum::<f64>() / 4.0;
            let pts: Vec<(f64, f64)> = idx.iter().map(|&k| (x[k], y[k])).collect();
            c.polygon(&pts, &ramp(mean / vmax), None);
        }
    }
    c.title("ground state |psi|");
    Ok(c.finish())
}

/// Gap against the sweep variable on log–log axes.
fn gap_curve(sweep: &Table, path: &Path) -> Result<String, CliError> {
    let axis = ["beta", "d", "S"]
        .into_iter()
        .find(|a| sweep.columns.contains_key(*a))
        .ok_or_else(|| CliError::Config(format!("{} has no sweep axis column", path.display())))?;
    let (xs, gaps) = (sweep.col(axis, path)?, sweep.col("gap", path)?);
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(gaps)
        .filter(|(x, g)| x.abs() > 0.0 && **g > 0.0)
        .map(|(x, g)| (x.abs().log10(), g.log10()))
        .collect();
    let mut c = Canvas::new(640.0, 480.0, range(pts.iter().map(|p| p.0)), range(pts.iter().map(|p| p.1)), false);
    c.axes(&format!("log10 |{axis}|"), "log10 gap");
    if pts.len() > 1 {
        c.polyline(&pts, "#1f4e79", 1.5);
    }
    for p in &pts {
        c.circle(p.0, p.1, 3.0, "#b03a2e");
    }
    c.title(&format!("gap below threshold vs {axis}"));
    Ok(c.finish())
}

pub fn plot(cfg: &RunConfig) -> Result<(), CliError> {
    let dir = &cfg.output_dir;
    let trace_path = dir.join("trace.csv");
    let trace = Table::read(&trace_path)?
        .ok_or_else(|| CliError::Config(format!("{} is missing; run geometry first", trace_path.display())))?;
    write(cfg, "outline.svg", outline(cfg, &trace, &trace_path)?)?;
    for bc in ["dirichlet", "radiating", "neumann"] {
        let p = dir.join(format!("field_{bc}.csv"));
        if let Some(field) = Table::read(&p)? {
            write(cfg, &format!("heatmap_{bc}.svg"), heat_map(cfg, &field, &p)?)?;
        }
    }
    let p = dir.join("sweep.csv");
    if let Some(sweep) = Table::read(&p)? {
        write(cfg, "gap.svg", gap_curve(&sweep, &p)?)?;
    }
    Ok(())
}
