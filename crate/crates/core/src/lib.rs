//! Spectral-geometry toolkit for closed triangulated surfaces in 3-space.
//!
//! Computes the first nonzero Laplace–Beltrami eigenvalue, discrete mean and
//! Gauss curvature, higher-order mean curvatures, and a battery of
//! diagnostics measuring how far a surface is from the equality case of the
//! Reilly upper bound `λ₁ (∫H_{k-1})² ≤ n/V · ∫H_k²`, i.e. from a round
//! sphere.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, which is what the tooling uses.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curvature;
pub mod mesh;
pub mod pinching;
mod scalar;
pub mod spectral;
mod vec3;

pub use scalar::{binomial, Real};
pub use vec3::Vec3;

/// Surface dimension of every mesh handled here (surfaces in 3-space).
pub const SURFACE_DIM: usize = 2;

pub type Point = Vec3<f64>;
pub type Mesh = mesh::TriMesh<f64>;
pub type Measure = mesh::MeshMeasure<f64>;
pub type Geometry = curvature::VertexGeometry<f64>;
pub type Matrix = spectral::SparseSymMatrix<f64>;
pub type Eigen = spectral::EigenPair<f64>;
pub type Report = pinching::PinchingReport<f64>;

pub type Mesh32 = mesh::TriMesh<f32>;
pub type Matrix32 = spectral::SparseSymMatrix<f32>;
