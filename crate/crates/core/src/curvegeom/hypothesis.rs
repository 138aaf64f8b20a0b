use std::collections::HashMap;
use std::f64::consts::PI;

use super::trace::reconstruct_curve;
use crate::{CurvatureProfile, Error, Result};

/// Outcome of the non-overlap and thinness checks for a strip of width `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    /// `d · sup k₊`.
    pub thinness: f64,
    pub thinness_ok: bool,
    /// Total turning over some sub-interval exceeds 2π.
    pub umlauf_violation: bool,
    pub self_intersection_found: bool,
    /// Two lattice samples `(s, u)` whose images nearly coincide.
    pub witness: Option<([f64; 2], [f64; 2])>,
    pub c_minus: f64,
    pub c_plus: f64,
    /// Lattice spacing `(Δs, Δu)` the intersection test ran at.
    pub lattice_spacing: (f64, f64),
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.thinness_ok && !self.umlauf_violation && !self.self_intersection_found
    }
}

/// Checks thinness from metadata, the turning-angle pre-check, and samples
/// the strip map for self-intersections on a lattice with `resolution`
/// intervals along `[-S, S]`.
pub fn check_hypothesis(
    profile: &CurvatureProfile,
    d: f64,
    half_length: f64,
    resolution: usize,
) -> Result<HypothesisReport> {
    if !(d > 0.0) {
        return Err(Error::InvalidInput(format!("strip width must be positive, got {d}")));
    }
    let meta = profile.meta();
    let thinness = d * meta.sup_kplus;
    let c_minus = 1.0 - d * meta.sup_kplus;
    let c_plus = 1.0 + d * meta.sup_kminus;

    let trace = reconstruct_curve(profile, half_length, resolution.max(2))?;
    let max_theta = trace.theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_theta = trace.theta.iter().cloned().fold(f64::INFINITY, f64::min);
    let umlauf_violation = max_theta - min_theta > 2.0 * PI;

    let hs = trace.step();
    let n_u = ((d / hs).ceil() as usize).clamp(2, 64);
    let hu = d / n_u as f64;
    let spacing = hs.min(hu);
    let threshold = 0.5 * spacing;
    let cell = d / 4.0;

    let mut points = Vec::with_capacity(trace.len() * (n_u + 1));
    for (i, s) in trace.s.iter().enumerate() {
        for j in 0..=n_u {
            let u = j as f64 * hu;
            let g = trace.gamma[i];
            let n = trace.normal[i];
            points.push(([*s, u], [g[0] + u * n[0], g[1] + u * n[1]]));
        }
    }

    let key = |p: [f64; 2]| ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (idx, (_, p)) in points.iter().enumerate() {
        buckets.entry(key(*p)).or_default().push(idx);
    }

    let mut witness: Option<([f64; 2], [f64; 2])> = None;
    for (idx, (param, p)) in points.iter().enumerate() {
        let (cx, cy) = key(*p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = buckets.get(&(cx + dx, cy + dy)) else { continue };
                for &other in bucket {
                    if other <= idx {
                        continue;
                    }
                    let (oparam, q) = points[other];
                    if (oparam[0] - param[0]).abs() <= 2.0 * d {
                        continue;
                    }
                    let dist = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                    if dist < threshold {
                        let pair = if param[0] <= oparam[0] { (*param, oparam) } else { (oparam, *param) };
                        let better = match witness {
                            None => true,
                            Some((a, b)) => (pair.0[0], pair.1[0], pair.0[1], pair.1[1]) < (a[0], b[0], a[1], b[1]),
                        };
                        if better {
                            witness = Some(pair);
                        }
                    }
                }
            }
        }
    }

    Ok(HypothesisReport {
        thinness,
        thinness_ok: thinness < 1.0,
        umlauf_violation,
        self_intersection_found: witness.is_some(),
        witness,
        c_minus,
        c_plus,
        lattice_spacing: (hs, hu),
    })
}
