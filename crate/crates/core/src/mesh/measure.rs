use serde::Serialize;

use crate::mesh::TriMesh;
use crate::{Real, Vec3};

/// How the surface area is split among vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaScheme {
    /// Voronoi cells, with the half/quarter split on obtuse triangles.
    #[default]
    MixedVoronoi,
    /// One third of each incident triangle.
    Barycentric,
}

/// Total area, per-vertex area weights and the surface center of mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshMeasure<T> {
    pub total_area: T,
    pub vertex_weights: Vec<T>,
    pub centroid: Vec3<T>,
}

/// Cotangent of the angle between `u` and `v`.
#[inline]
pub(crate) fn cot<T: Real>(u: Vec3<T>, v: Vec3<T>) -> T {
    u.dot(v) / u.cross(v).norm()
}

/// Per-vertex area of each corner of triangle `f`.
pub fn corner_areas<T: Real>(mesh: &TriMesh<T>, f: usize, scheme: AreaScheme) -> [T; 3] {
    let [p0, p1, p2] = mesh.triangle(f);
    let area = mesh.face_area(f);
    match scheme {
        AreaScheme::Barycentric => {
            let third = area / T::lit(3.0);
            [third; 3]
        }
        AreaScheme::MixedVoronoi => {
            let e01 = p1 - p0;
            let e12 = p2 - p1;
            let e20 = p0 - p2;
            // angle tests: corner i is obtuse when the dot of its edges is negative
            let d0 = e01.dot(-e20);
            let d1 = e12.dot(-e01);
            let d2 = e20.dot(-e12);
            let zero = T::zero();
            let (half, quarter) = (area * T::half(), area * T::lit(0.25));
            if d0 < zero {
                [half, quarter, quarter]
            } else if d1 < zero {
                [quarter, half, quarter]
            } else if d2 < zero {
                [quarter, quarter, half]
            } else {
                let c0 = cot(e01, -e20);
                let c1 = cot(e12, -e01);
                let c2 = cot(e20, -e12);
                let eighth = T::lit(0.125);
                [
                    eighth * (e01.norm_squared() * c2 + e20.norm_squared() * c1),
                    eighth * (e12.norm_squared() * c0 + e01.norm_squared() * c2),
                    eighth * (e20.norm_squared() * c1 + e12.norm_squared() * c0),
                ]
            }
        }
    }
}

/// Area measure of the mesh with mixed-Voronoi vertex weights.
pub fn measure<T: Real>(mesh: &TriMesh<T>) -> MeshMeasure<T> {
    measure_with(mesh, AreaScheme::MixedVoronoi)
}

pub fn measure_with<T: Real>(mesh: &TriMesh<T>, scheme: AreaScheme) -> MeshMeasure<T> {
    let mut weights = vec![T::zero(); mesh.vertex_count()];
    let mut total = T::zero();
    let mut moment = Vec3::zero();
    let third = T::one() / T::lit(3.0);
    for (f, tri) in mesh.faces().iter().enumerate() {
        let area = mesh.face_area(f);
        let corners = corner_areas(mesh, f, scheme);
        for (k, &v) in tri.iter().enumerate() {
            weights[v] += corners[k];
        }
        let [a, b, c] = mesh.triangle(f);
        moment += (a + b + c) * (third * area);
        total += area;
    }
    MeshMeasure { total_area: total, vertex_weights: weights, centroid: moment / total }
}

/// Result of moving a mesh to unit area with its center of mass at the
/// origin: `normalized = scale * (original + shift)`.
#[derive(Debug, Clone)]
pub struct Normalized<T> {
    pub mesh: TriMesh<T>,
    pub scale: T,
    pub shift: Vec3<T>,
}

/// Translates the center of mass to the origin and rescales to unit area
/// (`scale = V^{-1/2}` for surfaces).
pub fn normalize<T: Real>(mesh: &TriMesh<T>) -> Normalized<T> {
    let m = measure(mesh);
    let shift = -m.centroid;
    let scale = T::one() / m.total_area.sqrt();
    let mut out = mesh.transformed(scale, shift);
    // One corrective pass absorbs the rounding of the first transform so the
    // result sits at the origin to working precision.
    let again = measure(&out);
    let fix_scale = T::one() / again.total_area.sqrt();
    out = out.transformed(fix_scale, -again.centroid);
    let total_shift = shift - again.centroid / scale;
    Normalized { mesh: out, scale: scale * fix_scale, shift: total_shift }
}

/// True when the mesh has unit area and its center of mass at the origin,
/// within `tol` (relative to the mesh size).
pub fn is_normalized<T: Real>(m: &MeshMeasure<T>, tol: T) -> bool {
    let size = m.total_area.sqrt();
    (m.total_area - T::one()).abs() <= tol && m.centroid.norm() <= tol * size
}

/// Center-of-mass check only, relative to the linear size of the mesh.
pub fn is_centered<T: Real>(m: &MeshMeasure<T>, tol: T) -> bool {
    m.centroid.norm() <= tol * m.total_area.sqrt()
}
