use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{dense_generalized, symmetric_eigen};
use super::skyline::SkylineCholesky;
use super::{SolverOptions, SpectralResult};
use crate::{Error, Result, SparseSymMatrix};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Flips `x` so its largest-magnitude entry is positive.
pub(super) fn fix_sign(x: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for v in x.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// `max K_ii / M_ii`, the natural eigenvalue scale of a pencil.
pub fn pencil_scale(k: &SparseSymMatrix, m: &SparseSymMatrix) -> f64 {
    k.diagonal()
        .iter()
        .zip(m.diagonal())
        .filter(|(_, mi)| *mi > 0.0)
        .map(|(ki, mi)| ki / mi)
        .fold(0.0, f64::max)
}

pub(super) fn residual(k: &SparseSymMatrix, m: &SparseSymMatrix, lambda: f64, x: &[f64]) -> (f64, f64) {
    let kx = k.apply(x);
    let mx = m.apply(x);
    let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - lambda * b).collect();
    (norm(&r), norm(&mx))
}

fn dense_path(k: &SparseSymMatrix, m: &SparseSymMatrix, count: usize) -> Result<SpectralResult> {
    let (vals, vecs) = dense_generalized(&k.to_dense(), &m.to_dense())?;
    let mut out = SpectralResult::empty(count);
    for (lambda, mut x) in vals.into_iter().zip(vecs).take(count) {
        fix_sign(&mut x);
        let (r, _) = residual(k, m, lambda, &x);
        out.eigenvalues.push(lambda);
        out.residuals.push(r / norm(&x));
        out.vectors.push(x);
    }
    out.converged = true;
    Ok(out)
}

/// Finds `σ < λ_min` by growing `-σ` geometrically from `1e-8·scale` until
/// `K - σM` admits a Cholesky factor; positive semi-definite stiffness
/// succeeds at the first try.
fn shift_below_spectrum(k: &SparseSymMatrix, m: &SparseSymMatrix, scale: f64) -> Result<(f64, SkylineCholesky)> {
    let mut delta = 1e-8 * scale;
    let mut last_err = None;
    for _ in 0..60 {
        match SkylineCholesky::factor_shifted(k, m, delta) {
            Ok(f) => return Ok((-delta, f)),
            Err(e) => last_err = Some(e),
        }
        delta *= 4.0;
    }
    Err(last_err.unwrap())
}

/// Thick-restart shift-invert Lanczos for the `count` smallest eigenpairs
/// of `K x = λ M x`.
///
/// The operator `(K - σM)⁻¹ M` is self-adjoint in the `M` inner product;
/// the basis is kept `M`-orthonormal by two passes of full Gram–Schmidt,
/// and the projected matrix is assembled from the Gram–Schmidt
/// coefficients, so restarts need no special arrowhead bookkeeping.
pub fn smallest_eigs_pencil(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    count: usize,
    opts: &SolverOptions,
) -> Result<SpectralResult> {
    let n = k.dim();
    if count == 0 || n == 0 || m.dim() != n {
        return Err(Error::InvalidInput(format!("need 1 <= m and matching non-empty pencil, got m={count}, n={n}")));
    }
    let count = count.min(n);
    let p = opts.krylov_dim.unwrap_or((2 * count + 20).max(40)).max(count + 8);
    if p + 1 >= n {
        return dense_path(k, m, count);
    }

    let scale = pencil_scale(k, m).max(f64::MIN_POSITIVE);
    let (sigma, factor) = match opts.shift {
        Some(sigma) => (sigma, SkylineCholesky::factor_shifted(k, m, -sigma)?),
        None => shift_below_spectrum(k, m, scale)?,
    };
    let op = |x: &[f64]| {
        let mut y = m.apply(x);
        factor.solve_in_place(&mut y);
        y
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_vector = |basis: &[Vec<f64>], mbasis: &[Vec<f64>]| -> Vec<f64> {
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for (v, mv) in basis.iter().zip(mbasis) {
                let c = dot(mv, &w);
                w.iter_mut().zip(v).for_each(|(a, b)| *a -= c * b);
            }
        }
        let nrm = dot(&m.apply(&w), &w).sqrt();
        w.iter_mut().for_each(|a| *a /= nrm);
        w
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(p + 1);
    let mut mbasis: Vec<Vec<f64>> = Vec::with_capacity(p + 1);
    let v0 = random_vector(&basis, &mbasis);
    mbasis.push(m.apply(&v0));
    basis.push(v0);

    let mut h = vec![vec![0.0; p]; p];
    let mut kept = 0usize;
    let mut applications = 0usize;
    let mut best: Option<SpectralResult> = None;

    for _restart in 0..=opts.max_restarts {
        for j in kept.max(basis.len() - 1)..p {
            let mut w = op(&basis[j]);
            applications += 1;
            for _ in 0..2 {
                for i in 0..=j {
                    let c = dot(&mbasis[i], &w);
                    w.iter_mut().zip(&basis[i]).for_each(|(a, b)| *a -= c * b);
                    h[i][j] += c;
                }
            }
            let mw = m.apply(&w);
            let beta = dot(&mw, &w).max(0.0).sqrt();
            let col_scale = (0..=j).map(|i| h[i][j].abs()).fold(0.0, f64::max);
            if beta <= 1e-12 * col_scale.max(f64::MIN_POSITIVE) {
                // Invariant subspace: continue with a fresh direction.
                let v = random_vector(&basis, &mbasis);
                mbasis.push(m.apply(&v));
                basis.push(v);
            } else {
                basis.push(w.iter().map(|a| a / beta).collect());
                mbasis.push(mw.iter().map(|a| a / beta).collect());
            }
        }

        let mut hs = vec![vec![0.0; p]; p];
        for j in 0..p {
            for i in 0..=j {
                hs[i][j] = h[i][j];
                hs[j][i] = h[i][j];
            }
        }
        let (theta, s) = symmetric_eigen(&hs);
        // Largest θ first: those are the smallest λ.
        let order: Vec<usize> = (0..p).rev().collect();

        let mut result = SpectralResult::empty(count);
        let mut all_ok = true;
        for &idx in order.iter().take(count) {
            let th = theta[idx];
            let lambda = sigma + 1.0 / th;
            let mut x = vec![0.0; n];
            for (c, v) in s[idx].iter().zip(&basis) {
                x.iter_mut().zip(v).for_each(|(a, b)| *a += c * b);
            }
            fix_sign(&mut x);
            let (r, mx) = residual(k, m, lambda, &x);
            let ok = th > 0.0 && r <= opts.tol * (lambda.abs() + 1e-4 * scale) * mx;
            all_ok &= ok;
            result.eigenvalues.push(lambda);
            result.residuals.push(r / norm(&x));
            result.vectors.push(x);
        }
        result.iterations = applications;
        result.converged = all_ok;
        result.sort();
        if all_ok {
            return Ok(result);
        }
        best = Some(result);

        // Thick restart on the wanted end plus a buffer.
        let keep = (count + (p - count) / 2).min(p - 2);
        let next = basis.pop().unwrap();
        let next_m = mbasis.pop().unwrap();
        let mut new_basis = Vec::with_capacity(p + 1);
        let mut new_mbasis = Vec::with_capacity(p + 1);
        for &idx in order.iter().take(keep) {
            let mut y = vec![0.0; n];
            let mut my = vec![0.0; n];
            for ((c, v), mv) in s[idx].iter().zip(&basis).zip(&mbasis) {
                y.iter_mut().zip(v).for_each(|(a, b)| *a += c * b);
                my.iter_mut().zip(mv).for_each(|(a, b)| *a += c * b);
            }
            new_basis.push(y);
            new_mbasis.push(my);
        }
        for row in h.iter_mut() {
            row.iter_mut().for_each(|v| *v = 0.0);
        }
        for (i, &idx) in order.iter().take(keep).enumerate() {
            h[i][i] = theta[idx];
        }
        new_basis.push(next);
        new_mbasis.push(next_m);
        basis = new_basis;
        mbasis = new_mbasis;
        kept = keep;
    }
    Ok(best.expect("at least one sweep ran"))
}
