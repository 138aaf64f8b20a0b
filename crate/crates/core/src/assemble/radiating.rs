use super::Grid;
use crate::eigsolve::dense_generalized;
use crate::{BoundaryType, Error, Result};

/// Discrete transverse mode of the end cross-section.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseMode {
    /// Discrete transverse eigenvalue `E_{n,h}`.
    pub energy: f64,
    /// `M_u v_n`, with `v_n` mass-normalized.
    pub weight: Vec<f64>,
}

/// Exterior data for radiating ends.
///
/// Beyond `±S` the strip is straight, so the exterior discretization
/// separates into transverse modes, each a uniform 1-D chain in `s` whose
/// decaying solution is geometric. Eliminating the chains leaves the
/// rank-structured boundary term `D(λ) = Σ γ(E_n - λ) w_n w_nᵀ` on each end
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiatingEnds {
    pub h_s: f64,
    pub modes: Vec<TransverseMode>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Schur complement of a semi-infinite chain of linear elements of length
/// `h` for `-φ'' + μ φ`, `μ ≥ 0`.
pub fn dtn_gamma(mu: f64, h: f64) -> f64 {
    let a = 1.0 / h;
    let b = mu * h / 6.0;
    a + 2.0 * b + (b - a) * decay_ratio(a, b)
}

fn decay_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let t = 2.0 * (a + 2.0 * b) / (a - b);
    2.0 / (t + t.signum() * (t * t - 4.0).max(0.0).sqrt())
}

/// `dγ/dμ`.
pub fn dtn_gamma_derivative(mu: f64, h: f64) -> f64 {
    let a = 1.0 / h;
    let b = mu * h / 6.0;
    if (a - b).abs() <= 1e-9 * a {
        let dm = 1e-6 * (1.0 + mu.abs());
        return (dtn_gamma(mu + dm, h) - dtn_gamma(mu - dm, h)) / (2.0 * dm);
    }
    let rho = decay_ratio(a, b);
    let t = 2.0 * (a + 2.0 * b) / (a - b);
    let drho_dt = rho / (2.0 * rho - t);
    let dt_db = 6.0 * a / (a - b).powi(2);
    (h / 6.0) * (2.0 + rho + (b - a) * drho_dt * dt_db)
}

impl RadiatingEnds {
    pub(super) fn new(grid: &Grid, iota: BoundaryType, dof_map: &[Option<usize>]) -> Result<Self> {
        let free: Vec<usize> = (0..=grid.n_u)
            .filter(|&j| !(iota.dirichlet_at_zero() && j == 0) && !(iota.dirichlet_at_width() && j == grid.n_u))
            .collect();
        let p = free.len();
        let hu = grid.h_u();
        let mut ku = vec![vec![0.0; p]; p];
        let mut mu = vec![vec![0.0; p]; p];
        let pos = |j: usize| free.iter().position(|&f| f == j);
        for e in 0..grid.n_u {
            let ends = [pos(e), pos(e + 1)];
            for a in 0..2 {
                let Some(ra) = ends[a] else { continue };
                for b in 0..2 {
                    let Some(rb) = ends[b] else { continue };
                    let sign = if a == b { 1.0 } else { -1.0 };
                    ku[ra][rb] += sign / hu;
                    mu[ra][rb] += if a == b { hu / 3.0 } else { hu / 6.0 };
                }
            }
        }
        let (energies, vectors) = dense_generalized(&ku, &mu)?;
        let modes = energies
            .into_iter()
            .zip(vectors)
            .map(|(energy, v)| {
                let weight = (0..p).map(|r| (0..p).map(|c| mu[r][c] * v[c]).sum()).collect();
                TransverseMode { energy, weight }
            })
            .collect();
        let column = |i: usize| -> Result<Vec<usize>> {
            free.iter()
                .map(|&j| dof_map[grid.node_index(i, j)].ok_or_else(|| Error::InvalidInput("end column eliminated".into())))
                .collect()
        };
        Ok(Self { h_s: grid.h_s(), modes, left: column(0)?, right: column(grid.n_s)? })
    }

    /// Bottom of the discrete continuum, `E_{1,h}`.
    pub fn threshold(&self) -> f64 {
        self.modes[0].energy
    }

    fn check(&self, lambda: f64) -> Result<()> {
        if lambda > self.threshold() {
            return Err(Error::InvalidInput(format!(
                "exterior map evaluated above the discrete threshold: {lambda} > {}",
                self.threshold()
            )));
        }
        Ok(())
    }

    /// Entries of `D(λ)` on both end columns.
    pub fn dtn_triplets(&self, lambda: f64) -> Result<Vec<(usize, usize, f64)>> {
        self.check(lambda)?;
        let p = self.left.len();
        let mut block = vec![vec![0.0; p]; p];
        for mode in &self.modes {
            let g = dtn_gamma((mode.energy - lambda).max(0.0), self.h_s);
            for r in 0..p {
                for c in 0..p {
                    block[r][c] += g * mode.weight[r] * mode.weight[c];
                }
            }
        }
        let mut out = Vec::with_capacity(2 * p * p);
        for dofs in [&self.left, &self.right] {
            for r in 0..p {
                for c in 0..p {
                    out.push((dofs[r], dofs[c], block[r][c]));
                }
            }
        }
        Ok(out)
    }

    /// `xᵀ D'(λ) x`, non-positive.
    pub fn dtn_derivative_form(&self, lambda: f64, x: &[f64]) -> Result<f64> {
        self.check(lambda)?;
        let mut acc = 0.0;
        for mode in &self.modes {
            let dg = dtn_gamma_derivative((mode.energy - lambda).max(0.0), self.h_s);
            for dofs in [&self.left, &self.right] {
                let c: f64 = dofs.iter().zip(&mode.weight).map(|(&d, w)| w * x[d]).sum();
                acc -= dg * c * c;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_vanishes_at_zero_and_grows() {
        assert_eq!(dtn_gamma(0.0, 0.1), 0.0);
        let mut last = 0.0;
        for mu in [0.1, 1.0, 10.0, 100.0, 600.0, 1000.0, 1e4] {
            let g = dtn_gamma(mu, 0.1);
            assert!(g > last);
            last = g;
        }
    }

    #[test]
    fn gamma_tends_to_continuum_dtn() {
        // On a fine chain the exterior map approaches √μ.
        assert_relative_eq!(dtn_gamma(4.0, 1e-4), 2.0, max_relative = 1e-6);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &(mu, h) in &[(0.5, 0.2), (3.0, 0.05), (80.0, 0.3), (1e3, 0.2)] {
            let dm = 1e-6 * mu;
            let fd = (dtn_gamma(mu + dm, h) - dtn_gamma(mu - dm, h)) / (2.0 * dm);
            assert_relative_eq!(dtn_gamma_derivative(mu, h), fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn chain_solution_is_annihilated() {
        // The geometric chain solution satisfies every interior row.
        let (mu, h) = (2.5, 0.3);
        let a = 1.0 / h;
        let b = mu * h / 6.0;
        let rho = decay_ratio(a, b);
        let row = (b - a) * 1.0 + 2.0 * (a + 2.0 * b) * rho + (b - a) * rho * rho;
        assert!(row.abs() < 1e-12 && rho.abs() < 1.0);
    }
}
