//! Spectral laboratory for the Laplacian on curved planar strips.
//!
//! A strip of width `d` is built over a unit-speed reference curve whose
//! curvature `k(s)` is described symbolically by a [`CurvatureProfile`].
//! In the natural coordinates `(s, u)` the Laplacian becomes a quadratic
//! form with metric `diag((1 - u k)^2, 1)`, which is discretized with
//! bilinear elements and solved with a shift-invert Lanczos iteration.
//!
//! Besides the numerical spectrum the crate evaluates the closed-form
//! threshold bounds, the trial-function quotients they are derived from,
//! and independent minimizers used to cross-check them.
//!
//! Module map:
//!
//! - [`curvegeom`]: curvature profiles, curve reconstruction, strip map,
//!   non-overlap certification.
//! - [`analytic`]: transverse spectra, essential thresholds, threshold
//!   bounds, thin/mild asymptotics, bound-count widths.
//! - [`assemble`]: finite-element forms on the truncated strip.
//! - [`eigsolve`]: generalized symmetric eigensolvers and counting.
//! - [`varbound`]: trial quotients and their minimizers.
//! - [`verify`]: the acceptance checks shared by tests and the CLI.

pub mod analytic;
pub mod assemble;
pub mod curvegeom;
pub mod eigsolve;
pub mod export;
pub mod optimize;
pub mod quadrature;
pub mod table;
pub mod varbound;
pub mod verify;

mod error;

pub use analytic::{BoundReport, BoundaryType};
pub use assemble::{EndCondition, FormAssembly, Grid, SparseSymMatrix};
pub use curvegeom::{CurvatureProfile, CurveTrace, HypothesisReport};
pub use eigsolve::{SolverOptions, SpectralResult};
pub use error::{Error, Result};
pub use table::FunctionTable;
pub use varbound::TrialEvaluation;
