use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Boundary condition on the two strip edges.
///
/// `DN` is Dirichlet on the reference curve (`u = 0`) and Neumann on the
/// opposite edge (`u = d`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryType {
    D,
    N,
    DN,
}

impl BoundaryType {
    pub const ALL: [BoundaryType; 3] = [BoundaryType::D, BoundaryType::N, BoundaryType::DN];

    pub fn dirichlet_at_zero(self) -> bool {
        matches!(self, BoundaryType::D | BoundaryType::DN)
    }

    pub fn dirichlet_at_width(self) -> bool {
        matches!(self, BoundaryType::D)
    }

    fn index_offset(self) -> f64 {
        match self {
            BoundaryType::D => 0.0,
            BoundaryType::N => 1.0,
            BoundaryType::DN => 0.5,
        }
    }
}

impl fmt::Display for BoundaryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryType::D => "D",
            BoundaryType::N => "N",
            BoundaryType::DN => "DN",
        })
    }
}

impl FromStr for BoundaryType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D" => Ok(BoundaryType::D),
            "N" => Ok(BoundaryType::N),
            "DN" => Ok(BoundaryType::DN),
            other => Err(Error::InvalidInput(format!("unknown boundary type '{other}'"))),
        }
    }
}

/// `n`-th eigenvalue of the cross-section Laplacian on `(0, d)`.
pub fn transverse_eigenvalue(iota: BoundaryType, n: u32, d: f64) -> f64 {
    assert!(n >= 1 && d > 0.0);
    let m = n as f64 - iota.index_offset();
    (PI / d).powi(2) * m * m
}

/// L²(0, d)-normalized transverse eigenfunction.
pub fn transverse_mode(iota: BoundaryType, n: u32, d: f64, u: f64) -> f64 {
    let root = transverse_eigenvalue(iota, n, d).sqrt();
    match iota {
        BoundaryType::D | BoundaryType::DN => (2.0 / d).sqrt() * (root * u).sin(),
        BoundaryType::N if n == 1 => (1.0 / d).sqrt(),
        BoundaryType::N => (2.0 / d).sqrt() * (root * u).cos(),
    }
}

/// `u`-derivative of [`transverse_mode`].
pub fn transverse_mode_derivative(iota: BoundaryType, n: u32, d: f64, u: f64) -> f64 {
    let root = transverse_eigenvalue(iota, n, d).sqrt();
    match iota {
        BoundaryType::D | BoundaryType::DN => (2.0 / d).sqrt() * root * (root * u).cos(),
        BoundaryType::N if n == 1 => 0.0,
        BoundaryType::N => -(2.0 / d).sqrt() * root * (root * u).sin(),
    }
}

/// Bottom of the essential spectrum of an asymptotically straight strip.
pub fn essential_threshold(iota: BoundaryType, d: f64) -> f64 {
    transverse_eigenvalue(iota, 1, d)
}

/// Mean transverse position `∫ u χ₁^{DN}(u)² du = d (1/2 + 2/π²)`.
pub fn mean_u_dn(d: f64) -> f64 {
    d * (0.5 + 2.0 / (PI * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn midpoint<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(transverse_eigenvalue(BoundaryType::D, 1, 1.0), PI * PI);
        assert_eq!(transverse_eigenvalue(BoundaryType::N, 1, 0.5), 0.0);
        assert_relative_eq!(transverse_eigenvalue(BoundaryType::DN, 2, 1.0), 9.0 * PI * PI / 4.0, max_relative = 1e-15);
        assert_eq!(essential_threshold(BoundaryType::N, 3.3), 0.0);
        assert_relative_eq!(essential_threshold(BoundaryType::DN, 2.0), PI * PI / 16.0, max_relative = 1e-15);
    }

    #[test]
    fn mode_examples() {
        assert_eq!(transverse_mode(BoundaryType::D, 1, 1.0, 0.0), 0.0);
        assert!(transverse_mode(BoundaryType::D, 1, 1.0, 1.0).abs() < 1e-15);
        assert_relative_eq!(transverse_mode(BoundaryType::DN, 1, 1.0, 1.0), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn modes_are_normalized() {
        for iota in BoundaryType::ALL {
            for n in 1..=3 {
                let norm = midpoint(0.0, 1.0, 200_000, |u| transverse_mode(iota, n, 1.0, u).powi(2));
                assert_relative_eq!(norm, 1.0, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn mean_u_matches_quadrature() {
        assert_relative_eq!(mean_u_dn(1.0), 0.5 + 2.0 / (PI * PI));
        assert_relative_eq!(mean_u_dn(2.0), 2.0 * mean_u_dn(1.0));
        let q = midpoint(0.0, 1.0, 200_000, |u| u * transverse_mode(BoundaryType::DN, 1, 1.0, u).powi(2));
        assert_relative_eq!(q, mean_u_dn(1.0), max_relative = 1e-10);
    }

    #[test]
    fn ordering_and_scaling() {
        for d in [0.3, 1.0, 2.5] {
            let n = transverse_eigenvalue(BoundaryType::N, 1, d);
            let dn = transverse_eigenvalue(BoundaryType::DN, 1, d);
            let dd = transverse_eigenvalue(BoundaryType::D, 1, d);
            assert!(n < dn && dn < dd);
            for iota in BoundaryType::ALL {
                for k in 1..5 {
                    assert!(transverse_eigenvalue(iota, k + 1, d) > transverse_eigenvalue(iota, k, d));
                    assert_relative_eq!(
                        transverse_eigenvalue(iota, k + 1, 2.0 * d) * 4.0,
                        transverse_eigenvalue(iota, k + 1, d),
                        max_relative = 1e-14
                    );
                }
            }
        }
    }
}
