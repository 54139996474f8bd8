//! Discrete curvature: symmetric-polynomial kernel for higher-order mean
//! curvatures, per-vertex normals and curvatures, and integral identities.

mod integrals;
mod symmetric;
mod vertex;

use thiserror::Error;

pub use integrals::{
    delta_position_residual, hk_values, hsiung_minkowski_residual, integrate, lp_norm, sup_norm,
};
pub use symmetric::{elem_sym_upto, CurvatureTuple, MaclaurinOutcome};
pub use vertex::{geometry_csv, tangential_projection, vertex_geometry, VertexGeometry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("curvature tuple must have at least one entry")]
    EmptyTuple,
    #[error("order {k} out of range (max {max})")]
    OrderOutOfRange { k: usize, max: usize },
    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("integrand is NaN at vertex {index}")]
    NotANumber { index: usize },
    #[error("norm exponent must be >= 1, got {0}")]
    InvalidExponent(f64),
}
