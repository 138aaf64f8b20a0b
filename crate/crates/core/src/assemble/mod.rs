//! Bilinear finite elements for the strip forms on `[-S, S] × [0, d]`.

mod radiating;
mod sparse;

use std::fmt;
use std::str::FromStr;

pub use radiating::{dtn_gamma, dtn_gamma_derivative, RadiatingEnds, TransverseMode};
pub use sparse::SparseSymMatrix;

use crate::curvegeom::Support;
use crate::{BoundaryType, CurvatureProfile, Error, FunctionTable, Result};

/// Uniform tensor grid on the truncated strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub half_length: f64,
    pub width: f64,
    pub n_s: usize,
    pub n_u: usize,
}

impl Grid {
    pub fn new(half_length: f64, width: f64, n_s: usize, n_u: usize) -> Result<Self> {
        if !(half_length > 0.0 && width > 0.0) || n_s < 4 || n_u < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs S, d > 0, n_s >= 4, n_u >= 2; got S={half_length}, d={width}, n_s={n_s}, n_u={n_u}"
            )));
        }
        Ok(Self { half_length, width, n_s, n_u })
    }

    pub fn h_s(&self) -> f64 {
        2.0 * self.half_length / self.n_s as f64
    }

    pub fn h_u(&self) -> f64 {
        self.width / self.n_u as f64
    }

    pub fn node_count(&self) -> usize {
        (self.n_s + 1) * (self.n_u + 1)
    }

    pub fn cell_count(&self) -> usize {
        self.n_s * self.n_u
    }

    /// s-major node numbering.
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        i * (self.n_u + 1) + j
    }

    pub fn s(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.h_s()
    }

    pub fn u(&self, j: usize) -> f64 {
        j as f64 * self.h_u()
    }

    /// Same domain, both cell counts doubled.
    pub fn refined(&self) -> Self {
        Self { n_s: 2 * self.n_s, n_u: 2 * self.n_u, ..*self }
    }
}

pub fn build_grid(half_length: f64, width: f64, n_s: usize, n_u: usize) -> Result<Grid> {
    Grid::new(half_length, width, n_s, n_u)
}

/// Artificial condition at `s = ±S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EndCondition {
    Dirichlet,
    Neumann,
    /// Exact discrete exterior: the straight half-strips beyond `±S` are
    /// eliminated through their Dirichlet-to-Neumann map, which makes the
    /// problem nonlinear in the eigenvalue (see `eigsolve::radiating_eigs`).
    Radiating,
}

impl fmt::Display for EndCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndCondition::Dirichlet => "dirichlet",
            EndCondition::Neumann => "neumann",
            EndCondition::Radiating => "radiating",
        })
    }
}

impl FromStr for EndCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" | "dirichlet-ends" => Ok(EndCondition::Dirichlet),
            "neumann" | "neumann-ends" => Ok(EndCondition::Neumann),
            "radiating" | "radiating-ends" => Ok(EndCondition::Radiating),
            other => Err(Error::InvalidInput(format!("unknown end condition '{other}'"))),
        }
    }
}

/// Stiffness/mass pair with its node-to-unknown map.
#[derive(Debug, Clone)]
pub struct FormAssembly {
    pub k: SparseSymMatrix,
    pub m: SparseSymMatrix,
    /// For every grid node, its unknown index or `None` if eliminated.
    pub dof_map: Vec<Option<usize>>,
    /// `None` for the one-dimensional Schrödinger problem.
    pub iota: Option<BoundaryType>,
    pub end_bc: EndCondition,
    pub grid: Option<Grid>,
    pub radiating: Option<RadiatingEnds>,
}

impl FormAssembly {
    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// Scatters an unknown vector onto all nodes (zeros where eliminated).
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        self.dof_map.iter().map(|d| d.map_or(0.0, |i| x[i])).collect()
    }
}

const KS1: [[f64; 2]; 2] = [[1.0, -1.0], [-1.0, 1.0]];
const MS1: [[f64; 2]; 2] = [[2.0 / 6.0, 1.0 / 6.0], [1.0 / 6.0, 2.0 / 6.0]];

fn node_is_free(grid: &Grid, iota: BoundaryType, end_bc: EndCondition, i: usize, j: usize) -> bool {
    if iota.dirichlet_at_zero() && j == 0 {
        return false;
    }
    if iota.dirichlet_at_width() && j == grid.n_u {
        return false;
    }
    !(end_bc == EndCondition::Dirichlet && (i == 0 || i == grid.n_s))
}

fn build_dof_map(node_count: usize, free: impl Fn(usize) -> bool) -> (Vec<Option<usize>>, usize) {
    let mut next = 0;
    let map = (0..node_count)
        .map(|n| {
            if free(n) {
                next += 1;
                Some(next - 1)
            } else {
                None
            }
        })
        .collect();
    (map, next)
}

/// Assembles `Q^ι` and the weighted mass on `grid`.
///
/// Coefficients are frozen at cell midpoints: `1/(1 - u k)` on the
/// `s`-derivatives, `1 - u k` on the `u`-derivatives and on the mass.
pub fn assemble_forms(
    profile: &CurvatureProfile,
    grid: &Grid,
    iota: BoundaryType,
    end_bc: EndCondition,
) -> Result<FormAssembly> {
    let thinness = grid.width * profile.meta().sup_kplus;
    if !(thinness < 1.0) {
        return Err(Error::HypothesisViolated(format!("d·sup k₊ = {thinness} >= 1")));
    }
    let (hs, hu) = (grid.h_s(), grid.h_u());
    let nu1 = grid.n_u + 1;
    let (dof_map, dim) = build_dof_map(grid.node_count(), |n| node_is_free(grid, iota, end_bc, n / nu1, n % nu1));

    let mut kt = Vec::with_capacity(grid.cell_count() * 16);
    let mut mt = Vec::with_capacity(grid.cell_count() * 16);
    for i in 0..grid.n_s {
        let km = profile.eval(grid.s(i) + 0.5 * hs);
        for j in 0..grid.n_u {
            let g = 1.0 - (grid.u(j) + 0.5 * hu) * km;
            let (a1, a2, w) = (1.0 / g, g, g);
            let nodes = [
                grid.node_index(i, j),
                grid.node_index(i, j + 1),
                grid.node_index(i + 1, j),
                grid.node_index(i + 1, j + 1),
            ];
            for (la, &na) in nodes.iter().enumerate() {
                let Some(ra) = dof_map[na] else { continue };
                let (pa, qa) = (la / 2, la % 2);
                for (lb, &nb) in nodes.iter().enumerate() {
                    let Some(rb) = dof_map[nb] else { continue };
                    let (pb, qb) = (lb / 2, lb % 2);
                    let kv = a1 * KS1[pa][pb] / hs * MS1[qa][qb] * hu + a2 * MS1[pa][pb] * hs * KS1[qa][qb] / hu;
                    let mv = w * MS1[pa][pb] * hs * MS1[qa][qb] * hu;
                    kt.push((ra, rb, kv));
                    mt.push((ra, rb, mv));
                }
            }
        }
    }

    let radiating = if end_bc == EndCondition::Radiating {
        match profile.meta().support {
            Support::Interval(a, b) if a >= -grid.half_length && b <= grid.half_length => {}
            Support::Empty => {}
            _ => {
                return Err(Error::InvalidInput(
                    "radiating ends need the curvature supported inside [-S, S]".into(),
                ))
            }
        }
        Some(RadiatingEnds::new(grid, iota, &dof_map)?)
    } else {
        None
    };

    Ok(FormAssembly {
        k: SparseSymMatrix::from_triplets(dim, kt),
        m: SparseSymMatrix::from_triplets(dim, mt),
        dof_map,
        iota: Some(iota),
        end_bc,
        grid: Some(*grid),
        radiating,
    })
}

/// Linear elements for `-φ'' + V φ` on `[-S, S]` with Dirichlet ends.
///
/// The potential is read as its piecewise-linear interpolant and frozen at
/// each element midpoint, so a constant potential shifts the spectrum
/// exactly.
pub fn assemble_1d_schrodinger(potential: &FunctionTable, half_length: f64, n_s: usize) -> Result<FormAssembly> {
    if n_s < 2 || !(half_length > 0.0) {
        return Err(Error::InvalidInput(format!("1-D grid needs n_s >= 2 and S > 0, got {n_s}, {half_length}")));
    }
    let h = 2.0 * half_length / n_s as f64;
    let (dof_map, dim) = build_dof_map(n_s + 1, |n| n != 0 && n != n_s);
    let mut kt = Vec::with_capacity(4 * n_s);
    let mut mt = Vec::with_capacity(4 * n_s);
    for e in 0..n_s {
        let s_mid = -half_length + (e as f64 + 0.5) * h;
        let v = potential.eval(s_mid);
        for a in 0..2 {
            let Some(ra) = dof_map[e + a] else { continue };
            for b in 0..2 {
                let Some(rb) = dof_map[e + b] else { continue };
                kt.push((ra, rb, KS1[a][b] / h + v * MS1[a][b] * h));
                mt.push((ra, rb, MS1[a][b] * h));
            }
        }
    }
    Ok(FormAssembly {
        k: SparseSymMatrix::from_triplets(dim, kt),
        m: SparseSymMatrix::from_triplets(dim, mt),
        dof_map,
        iota: None,
        end_bc: EndCondition::Dirichlet,
        grid: None,
        radiating: None,
    })
}
