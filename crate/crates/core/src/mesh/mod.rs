//! Triangle meshes: representation and validation, test-surface generation,
//! OFF/OBJ I/O, area measure and unit-area normalization.

mod generate;
mod io;
mod measure;
mod trimesh;

use thiserror::Error;

pub use generate::{
    assoc_legendre, generate, icosphere, real_sph_harm, real_sph_harm_max, ShapeSpec, MAX_SUBDIV,
};
pub use io::{format_mesh, load_mesh, parse_mesh, save_mesh, MeshFormat};
pub use measure::{
    corner_areas, is_centered, is_normalized, measure, measure_with, normalize, AreaScheme, MeshMeasure, Normalized,
};
pub(crate) use measure::cot;
pub use trimesh::{TriMesh, DEGENERATE_AREA_RATIO};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("mesh has no faces")]
    Empty,
    #[error("face {face} references vertex {index}, but the mesh has {vertices} vertices")]
    IndexOutOfRange { face: usize, index: usize, vertices: usize },
    #[error("vertex {vertex} has a non-finite coordinate")]
    NonFinite { vertex: usize },
    #[error("vertex {vertex} is not used by any face")]
    UnreferencedVertex { vertex: usize },
    #[error("mesh is not closed: edge ({a}, {b}) has only one incident face")]
    OpenEdge { a: usize, b: usize },
    #[error("edge ({a}, {b}) is shared by {faces} faces (non-manifold)")]
    NonManifoldEdge { a: usize, b: usize, faces: usize },
    #[error("inconsistent orientation: directed edge ({a}, {b}) used by faces {} and {}", faces.0, faces.1)]
    Orientation { a: usize, b: usize, faces: (usize, usize) },
    #[error("mesh is not connected ({components} face components)")]
    Disconnected { components: usize },
    #[error("face {face} is degenerate (area below threshold)")]
    Degenerate { face: usize },
    #[error("invalid shape parameters: {0}")]
    InvalidShape(String),
}
