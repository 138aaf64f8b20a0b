//! Generalized symmetric eigensolvers for `K x = λ M x`.

mod dense;
mod lanczos;
mod radiating;
mod skyline;

pub use dense::{dense_cholesky, dense_generalized, symmetric_eigen};
pub use lanczos::{pencil_scale, smallest_eigs_pencil};
pub use radiating::{radiating_eigs, RadiatingSpectrum};
pub use skyline::SkylineCholesky;

use crate::{Error, FormAssembly, Result};

/// Default seed of the Lanczos starting vector.
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Default relative counting margin.
pub const DEFAULT_MARGIN: f64 = 1e-3;
/// Largest dimension the dense oracle accepts.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Relative residual tolerance, `‖Kx - λMx‖ ≤ tol·|λ|·‖Mx‖`.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
    /// Shift `σ`; defaults to `-1e-8·max(K_ii/M_ii)`.
    pub shift: Option<f64>,
    /// Krylov basis size; defaults to `max(2m + 20, 40)`.
    pub krylov_dim: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_restarts: 400, seed: DEFAULT_SEED, shift: None, krylov_dim: None }
    }
}

/// Lowest eigenpairs of a pencil, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// `‖Kx - λMx‖ / ‖x‖` per pair.
    pub residuals: Vec<f64>,
    /// `M`-orthonormal eigenvectors in unknown numbering.
    pub vectors: Vec<Vec<f64>>,
    /// Operator applications used.
    pub iterations: usize,
    pub requested: usize,
    pub converged: bool,
}

impl SpectralResult {
    pub(crate) fn empty(requested: usize) -> Self {
        Self {
            eigenvalues: Vec::new(),
            residuals: Vec::new(),
            vectors: Vec::new(),
            iterations: 0,
            requested,
            converged: false,
        }
    }

    pub(crate) fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| self.eigenvalues[a].total_cmp(&self.eigenvalues[b]));
        self.eigenvalues = idx.iter().map(|&i| self.eigenvalues[i]).collect();
        self.residuals = idx.iter().map(|&i| self.residuals[i]).collect();
        self.vectors = idx.iter().map(|&i| std::mem::take(&mut self.vectors[i])).collect();
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn largest(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty result")
    }
}

/// The `m` smallest eigenpairs of an assembled form.
pub fn smallest_eigs(assembly: &FormAssembly, m: usize, opts: &SolverOptions) -> Result<SpectralResult> {
    smallest_eigs_pencil(&assembly.k, &assembly.m, m, opts)
}

/// Every eigenpair by dense reduction; independent of the sparse path.
pub fn dense_oracle(assembly: &FormAssembly) -> Result<SpectralResult> {
    let n = assembly.dim();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { dim: n, limit: DENSE_LIMIT });
    }
    let (vals, vecs) = dense_generalized(&assembly.k.to_dense(), &assembly.m.to_dense())?;
    let mut out = SpectralResult::empty(n);
    for (lambda, mut x) in vals.into_iter().zip(vecs) {
        lanczos::fix_sign(&mut x);
        let (r, _) = lanczos::residual(&assembly.k, &assembly.m, lambda, &x);
        out.eigenvalues.push(lambda);
        out.residuals.push(r / x.iter().map(|v| v * v).sum::<f64>().sqrt());
        out.vectors.push(x);
    }
    out.converged = true;
    Ok(out)
}

/// Eigenvalues strictly below `threshold·(1 - margin)`.
///
/// Fails unless the result reaches past `threshold·(1 + margin)`, since
/// otherwise eigenvalues below the window may be missing.
pub fn count_below(result: &SpectralResult, threshold: f64, margin: f64) -> Result<usize> {
    let window = threshold * (1.0 + margin);
    let largest = result.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY);
    if !(largest > window) {
        return Err(Error::InsufficientPairs { largest, window });
    }
    let cut = threshold * (1.0 - margin);
    Ok(result.eigenvalues.iter().filter(|&&l| l < cut).count())
}

/// Grows `m` until [`count_below`] can decide; returns the count and the
/// final result.
pub fn count_below_adaptive(
    assembly: &FormAssembly,
    threshold: f64,
    margin: f64,
    opts: &SolverOptions,
) -> Result<(usize, SpectralResult)> {
    let n = assembly.dim();
    let mut m = 4.min(n);
    loop {
        let res = smallest_eigs(assembly, m, opts)?;
        match count_below(&res, threshold, margin) {
            Ok(c) => return Ok((c, res)),
            Err(e @ Error::InsufficientPairs { .. }) if m >= n => return Err(e),
            Err(Error::InsufficientPairs { .. }) => m = (2 * m).min(n),
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{assemble_1d_schrodinger, assemble_forms, build_grid, EndCondition};
    use crate::{BoundaryType, CurvatureProfile, FunctionTable, SparseSymMatrix};
    use approx::assert_relative_eq;

    #[test]
    fn diagonal_pencil() {
        let n = 120;
        let k = SparseSymMatrix::from_triplets(n, (0..n).map(|i| (i, i, 1.0 + ((i * 37) % n) as f64)).collect());
        let m = SparseSymMatrix::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect());
        let r = smallest_eigs_pencil(&k, &m, 5, &SolverOptions::default()).unwrap();
        assert!(r.converged);
        for (i, l) in r.eigenvalues.iter().enumerate() {
            assert_relative_eq!(*l, 1.0 + i as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn interval_laplacian_matches_discrete_formula() {
        // Linear elements on (0, L) with n cells: λ_j = (6/h²)(1 - cos θ)/(2 + cos θ), θ = jπ/n.
        let n = 50;
        let pot = FunctionTable::sample(-1.0, 1.0, 3, |_| 0.0);
        let asm = assemble_1d_schrodinger(&pot, 1.0, n).unwrap();
        let dense = dense_oracle(&asm).unwrap();
        let h = 2.0 / n as f64;
        for (j, l) in dense.eigenvalues.iter().enumerate() {
            let t = (j + 1) as f64 * std::f64::consts::PI / n as f64;
            let exact = 6.0 / (h * h) * (1.0 - t.cos()) / (2.0 + t.cos());
            assert_relative_eq!(*l, exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn lanczos_agrees_with_dense_oracle() {
        let g = build_grid(2.0, 0.5, 40, 6).unwrap();
        let p = CurvatureProfile::bump(-1.2, 0.1, 0.8, 2).unwrap();
        for iota in BoundaryType::ALL {
            let asm = assemble_forms(&p, &g, iota, EndCondition::Neumann).unwrap();
            let dense = dense_oracle(&asm).unwrap();
            let sparse = smallest_eigs(&asm, 6, &SolverOptions::default()).unwrap();
            assert!(sparse.converged);
            for (a, b) in sparse.eigenvalues.iter().zip(&dense.eigenvalues) {
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{iota}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn eigenvectors_are_mass_orthonormal() {
        let g = build_grid(3.0, 0.4, 60, 4).unwrap();
        let p = CurvatureProfile::bump(-1.0, 0.0, 1.0, 2).unwrap();
        let asm = assemble_forms(&p, &g, BoundaryType::D, EndCondition::Dirichlet).unwrap();
        let r = smallest_eigs(&asm, 4, &SolverOptions::default()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let g = asm.m.bilinear(r.eigenvector(i), r.eigenvector(j));
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn count_below_window() {
        let mut r = SpectralResult::empty(3);
        r.eigenvalues = vec![0.5, 0.9995, 1.2];
        assert_eq!(count_below(&r, 1.0, 1e-3).unwrap(), 1);
        r.eigenvalues = vec![0.5, 0.9995, 1.0005];
        assert!(matches!(count_below(&r, 1.0, 1e-3), Err(Error::InsufficientPairs { .. })));
    }

    #[test]
    fn too_large_for_dense() {
        let g = build_grid(10.0, 1.0, 800, 4).unwrap();
        let asm = assemble_forms(&CurvatureProfile::zero(), &g, BoundaryType::N, EndCondition::Neumann).unwrap();
        assert!(matches!(dense_oracle(&asm), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn neumann_zero_mode() {
        let g = build_grid(2.0, 0.5, 40, 4).unwrap();
        let asm = assemble_forms(&CurvatureProfile::zero(), &g, BoundaryType::N, EndCondition::Neumann).unwrap();
        let r = smallest_eigs(&asm, 3, &SolverOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.eigenvalues[0].abs() < 1e-10);
    }
}
