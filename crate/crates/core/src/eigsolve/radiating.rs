use super::{smallest_eigs_pencil, SolverOptions, SpectralResult};
use crate::assemble::RadiatingEnds;
use crate::{Error, FormAssembly, Result};

/// Bound states of a strip whose straight exterior is eliminated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiatingSpectrum {
    /// Discrete continuum threshold `E_{1,h}` of the end cross-section.
    pub threshold: f64,
    /// Number of eigenvalues below `threshold`.
    pub count: usize,
    /// The resolved bound states, ascending (at most `max_states`).
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub newton_steps: usize,
}

impl RadiatingSpectrum {
    pub fn gap(&self) -> Option<f64> {
        self.eigenvalues.first().map(|l| self.threshold - l)
    }
}

/// Relative screen against rounding at the threshold, where the straight
/// strip has `θ(E) = E` exactly.
const THRESHOLD_SCREEN: f64 = 1e-11;

fn pencil_at(asm: &FormAssembly, ends: &RadiatingEnds, lambda: f64, m: usize, opts: &SolverOptions) -> Result<SpectralResult> {
    let k = asm.k.with_added(&ends.dtn_triplets(lambda)?);
    let res = smallest_eigs_pencil(&k, &asm.m, m, opts)?;
    if !res.converged {
        return Err(Error::InvalidInput(format!("eigensolver did not converge for the exterior pencil at {lambda}")));
    }
    Ok(res)
}

/// Solves `(K + D(λ)) x = λ M x` below the discrete threshold.
///
/// With `θ_j(λ)` the `j`-th eigenvalue of the linear pencil `(K + D(λ), M)`,
/// every bound state is a fixed point `θ_j(λ) = λ`. `D` is non-increasing
/// in `λ`, so `θ_j(λ) - λ` is strictly decreasing and the fixed points are
/// counted by `θ_j(E) < E` and located by safeguarded Newton steps with the
/// Hellmann–Feynman slope `xᵀ D'(λ) x`.
pub fn radiating_eigs(asm: &FormAssembly, max_states: usize, opts: &SolverOptions) -> Result<RadiatingSpectrum> {
    let ends = asm
        .radiating
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("assembly was not built with radiating ends".into()))?;
    let e = ends.threshold();
    let cut = e * (1.0 - THRESHOLD_SCREEN);
    let n = asm.dim();

    let mut m = 4.min(n);
    let at_threshold = loop {
        let res = pencil_at(asm, ends, e, m, opts)?;
        if res.largest() > cut || m >= n {
            break res;
        }
        m = (2 * m).min(n);
    };
    let count = at_threshold.eigenvalues.iter().filter(|&&t| t < cut).count();

    let mut eigenvalues = Vec::new();
    let mut vectors = Vec::new();
    let mut newton_steps = 0;
    for j in 0..count.min(max_states) {
        let (mut lo, mut hi) = (at_threshold.eigenvalues[j], e);
        let mut lambda = lo;
        let mut last_vec = Vec::new();
        for _ in 0..200 {
            newton_steps += 1;
            let res = pencil_at(asm, ends, lambda, j + 1, opts)?;
            let theta = res.eigenvalues[j];
            let x = res.vectors[j].clone();
            let g = theta - lambda;
            last_vec = x;
            if g.abs() <= 1e-14 * e {
                break;
            }
            if g > 0.0 {
                lo = lambda;
            } else {
                hi = lambda;
            }
            let slope = ends.dtn_derivative_form(lambda, &last_vec)? - 1.0;
            let mut next = lambda - g / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - lambda).abs() <= 1e-15 * e {
                lambda = next;
                break;
            }
            lambda = next;
        }
        eigenvalues.push(lambda);
        vectors.push(last_vec);
    }

    Ok(RadiatingSpectrum { threshold: e, count, eigenvalues, vectors, newton_steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{assemble_forms, build_grid, EndCondition};
    use crate::eigsolve::smallest_eigs;
    use crate::{BoundaryType, CurvatureProfile};

    #[test]
    fn straight_strip_has_no_bound_state() {
        let g = build_grid(2.0, 0.5, 40, 4).unwrap();
        let asm = assemble_forms(&CurvatureProfile::zero(), &g, BoundaryType::D, EndCondition::Radiating).unwrap();
        let r = radiating_eigs(&asm, 4, &SolverOptions::default()).unwrap();
        assert_eq!(r.count, 0);
    }

    #[test]
    fn bound_state_is_bracketed_by_truncations() {
        let p = CurvatureProfile::bump_with_angle(-0.8, 0.0, 1.0, 2).unwrap();
        let g = build_grid(4.0, 0.3, 160, 6).unwrap();
        let rad = assemble_forms(&p, &g, BoundaryType::DN, EndCondition::Radiating).unwrap();
        let r = radiating_eigs(&rad, 1, &SolverOptions::default()).unwrap();
        assert!(r.count >= 1);
        let opts = SolverOptions::default();
        let dir = smallest_eigs(&assemble_forms(&p, &g, BoundaryType::DN, EndCondition::Dirichlet).unwrap(), 1, &opts).unwrap();
        let neu = smallest_eigs(&assemble_forms(&p, &g, BoundaryType::DN, EndCondition::Neumann).unwrap(), 1, &opts).unwrap();
        let l = r.eigenvalues[0];
        assert!(neu.lambda_min() <= l && l <= dir.lambda_min(), "{} {} {}", neu.lambda_min(), l, dir.lambda_min());
        // Lengthening the interior does not move an exact exterior treatment.
        let g2 = build_grid(8.0, 0.3, 320, 6).unwrap();
        let rad2 = assemble_forms(&p, &g2, BoundaryType::DN, EndCondition::Radiating).unwrap();
        let r2 = radiating_eigs(&rad2, 1, &SolverOptions::default()).unwrap();
        assert!((r2.eigenvalues[0] - l).abs() < 1e-9 * l);
    }
}
