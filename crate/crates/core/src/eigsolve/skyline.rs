use crate::{Error, Result, SparseSymMatrix};

/// Envelope (skyline) Cholesky factor `A = L Lᵀ`.
///
/// Row `i` of `L` is stored densely from its first structural non-zero
/// column to the diagonal. On s-major tensor grids the envelope is a band
/// of width about `n_u`, so this is a band solver without the bookkeeping.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineCholesky {
    /// Factors `a + shift_coeff * b` (same dimension, any patterns).
    pub fn factor_shifted(a: &SparseSymMatrix, b: &SparseSymMatrix, shift_coeff: f64) -> Result<Self> {
        let n = a.dim();
        let mut first: Vec<usize> = (0..n).collect();
        for mat in [a, b] {
            for i in 0..n {
                if let Some((j, _)) = mat.row(i).next() {
                    first[i] = first[i].min(j);
                }
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0; start[n]];
        for (mat, coeff) in [(a, 1.0), (b, shift_coeff)] {
            if coeff == 0.0 {
                continue;
            }
            for i in 0..n {
                for (j, v) in mat.row(i) {
                    if j <= i {
                        data[start[i] + j - first[i]] += coeff * v;
                    }
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let ri = start[i] - fi;
                let rj = start[j] - fj;
                let mut s = data[ri + j];
                for k in lo..j {
                    s -= data[ri + k] * data[rj + k];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::FactorizationFailed { pivot: i, value: s });
                    }
                    data[ri + i] = s.sqrt();
                } else {
                    data[ri + j] = s / data[rj + j];
                }
            }
        }
        Ok(Self { first, start, data })
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.start[i] - fi;
            let mut s = x[i];
            for k in fi..i {
                s -= self.data[ri + k] * x[k];
            }
            x[i] = s / self.data[ri + i];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.start[i] - fi;
            x[i] /= self.data[ri + i];
            let xi = x[i];
            for k in fi..i {
                x[k] -= self.data[ri + k] * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal() {
        let n = 6;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = SparseSymMatrix::from_triplets(n, t);
        let zero = SparseSymMatrix::from_triplets(n, vec![]);
        let f = SkylineCholesky::factor_shifted(&a, &zero, 0.0).unwrap();
        let mut x = vec![1.0; n];
        f.solve_in_place(&mut x);
        let back = a.apply(&x);
        for v in back {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn reports_singular_pivot() {
        let a = SparseSymMatrix::from_dense(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let zero = SparseSymMatrix::from_triplets(2, vec![]);
        assert!(matches!(
            SkylineCholesky::factor_shifted(&a, &zero, 0.0),
            Err(Error::FactorizationFailed { pivot: 1, .. })
        ));
    }
}
