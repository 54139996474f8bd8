//! Cotangent finite-element discretization of the Laplace–Beltrami operator
//! and the generalized eigenproblem `K u = λ M u`.

mod assemble;
mod dense;
mod eigen;
mod skyline;
mod sparse;

use thiserror::Error;

pub use assemble::{assemble_mass, assemble_stiffness, normalized_tol, rayleigh_upper_bound_coords, NORMALIZED_TOL};
pub use dense::symmetric_eigen;
pub use eigen::{
    first_eigenpair, lowest_spectrum, EigenPair, SolverInfo, SolverOptions, Spectrum, SpectrumReport,
};
pub use skyline::{reverse_cuthill_mckee, SkylineCholesky};
pub use sparse::SparseSymMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("stiffness is {stiffness}x{stiffness} but mass is {mass}x{mass}")]
    DimensionMismatch { stiffness: usize, mass: usize },
    #[error("mass matrix must be diagonal (lumped)")]
    MassNotDiagonal,
    #[error("mass matrix entry {row} is not positive")]
    NonPositiveMass { row: usize },
    #[error("cannot compute {count} nonzero eigenpairs of a {dim}-dimensional problem")]
    InvalidCount { count: usize, dim: usize },
    #[error("spectral shift must be positive, got {0}")]
    InvalidShift(f64),
    #[error("shifted operator is not positive definite (pivot at row {row})")]
    NotPositiveDefinite { row: usize },
    #[error("eigensolver did not converge in {iterations} iterations (best residual {best_residual:e})")]
    NonConvergence { iterations: usize, best_residual: f64 },
    #[error("iteration subspace collapsed to {kept} vectors, {needed} needed")]
    SubspaceCollapsed { kept: usize, needed: usize },
    #[error("second zero eigenvalue ({lambda:e}): the mesh is disconnected")]
    Disconnected { lambda: f64 },
    #[error("mesh must have unit area and centroid at the origin (area {area}, centroid offset {centroid_offset:e})")]
    NotNormalized { area: f64, centroid_offset: f64 },
}
