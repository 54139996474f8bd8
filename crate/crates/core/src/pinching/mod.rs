//! Deficit of the Reilly-type upper bound on `λ₁` and the quantitative
//! diagnostics that measure how close a surface is to its model sphere.
//!
//! Every routine that takes a `mesh_normalized` expects unit area with the
//! center of mass at the origin (see [`crate::mesh::normalize`]).

mod deficit;
mod distance;
mod fields;
mod lemmas;
mod report;
mod theorems;

use serde::Serialize;
use thiserror::Error;

use crate::curvature::CurvatureError;
use crate::mesh::MeshError;
use crate::spectral::SpectralError;

pub use deficit::{
    minimal_constant, pinching_gate, pinching_predicate, reilly_deficit, sphere_model, ReillyDeficit, SphereModel,
    MIN_CONSTANT,
};
pub use distance::{
    annulus_epsilon, density_epsilon, fibonacci_sphere, hausdorff_to_sphere, point_triangle_distance, TriangleBvh,
};
pub use fields::{field_y, field_z, phi_fn, PhiValues, VectorField, ZField};
pub use lemmas::{lemma_suite, CheckStatus, LemmaCheck, LemmaSuite};
pub use report::{full_report, sweep_csv, sweep_csv_header, sweep_csv_row, PinchOptions, PinchingReport, SweepRow};
pub use theorems::{
    almost_einstein_analysis, grosjean_bound_check, map_f_distortion, EinsteinReport, GrosjeanReport,
};

/// Default relative slack separating discretization error from a violated
/// inequality.
pub const DEFAULT_TOL_DISC: f64 = 0.05;

/// Default number of Fibonacci samples on the model sphere.
pub const DEFAULT_SAMPLES: usize = 2000;

#[derive(Debug, Error)]
pub enum PinchError {
    #[error("mesh is not normalized: area {area}, center of mass offset {centroid_offset}")]
    NotNormalized { area: f64, centroid_offset: f64 },
    #[error("mesh center of mass {offset} away from the model center")]
    NotCentered { offset: f64 },
    #[error("eigenvalue must be positive, got {0}")]
    NonPositiveEigenvalue(f64),
    #[error("curvature order k = {0} unsupported on surfaces (1 or 2)")]
    InvalidOrder(usize),
    #[error("exponent p = {0} must be at least 1")]
    InvalidExponent(f64),
    #[error("vertex {vertex} lies at the origin (|X| = {norm})")]
    OriginOnSurface { vertex: usize, norm: f64 },
    #[error("integral of H_(k-1) vanishes")]
    ZeroCurvatureIntegral,
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("image of face {face} under the radial map is degenerate")]
    DegenerateImage { face: usize },
    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// A hypothesis of the underlying statement fails on this input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub hypothesis: String,
    /// First offending vertex, when the hypothesis is pointwise.
    pub vertex: Option<usize>,
    pub value: f64,
}

/// Result of a check whose hypotheses are data-dependent: either it was
/// evaluated or a hypothesis failed, which is reported rather than raised.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome<R> {
    Evaluated(R),
    HypothesisViolated(Violation),
}

impl<R> Outcome<R> {
    pub fn evaluated(&self) -> Option<&R> {
        match self {
            Outcome::Evaluated(r) => Some(r),
            Outcome::HypothesisViolated(_) => None,
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Outcome::HypothesisViolated(_))
    }

    pub fn unwrap_evaluated(self) -> R {
        match self {
            Outcome::Evaluated(r) => r,
            Outcome::HypothesisViolated(v) => panic!("hypothesis violated: {}", v.hypothesis),
        }
    }
}
