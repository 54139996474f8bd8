use crate::mesh::{corner_areas, cot, is_normalized, measure, AreaScheme, TriMesh};
use crate::spectral::{SparseSymMatrix, SpectralError};
use crate::{Real, SURFACE_DIM};

/// Cotangent stiffness matrix: `w_ij = -(cot α_ij + cot β_ij)/2` off the
/// diagonal and `-Σ_j w_ij` on it. Positive semidefinite with constants in
/// the kernel; it discretizes the positive Laplacian in weak form.
pub fn assemble_stiffness<T: Real>(mesh: &TriMesh<T>) -> SparseSymMatrix<T> {
    let mut trip = Vec::with_capacity(mesh.face_count() * 12);
    for (f, &tri) in mesh.faces().iter().enumerate() {
        let p = mesh.triangle(f);
        for corner in 0..3 {
            let (j, k) = ((corner + 1) % 3, (corner + 2) % 3);
            let w = cot(p[j] - p[corner], p[k] - p[corner]) * T::half();
            let (a, b) = (tri[j], tri[k]);
            trip.push((a, b, -w));
            trip.push((b, a, -w));
            trip.push((a, a, w));
            trip.push((b, b, w));
        }
    }
    SparseSymMatrix::from_triplets(mesh.vertex_count(), trip)
}

/// Diagonal (lumped) mass matrix from the chosen vertex-area scheme.
pub fn assemble_mass<T: Real>(mesh: &TriMesh<T>, scheme: AreaScheme) -> SparseSymMatrix<T> {
    let mut diag = vec![T::zero(); mesh.vertex_count()];
    for (f, tri) in mesh.faces().iter().enumerate() {
        let c = corner_areas(mesh, f, scheme);
        for k in 0..3 {
            diag[tri[k]] += c[k];
        }
    }
    SparseSymMatrix::from_diagonal(&diag)
}

/// Tolerance used to decide that a mesh is normalized (unit area, centered).
pub const NORMALIZED_TOL: f64 = 1e-8;

/// [`NORMALIZED_TOL`], widened to `100 ε` for scalars coarser than `f64`.
pub fn normalized_tol<T: Real>() -> T {
    T::lit(NORMALIZED_TOL).max(T::epsilon() * T::lit(100.0))
}

/// `n / ∫|X|²`: the Rayleigh quotient bound on `λ₁` obtained from the
/// coordinate functions, valid when they have mean zero.
pub fn rayleigh_upper_bound_coords<T: Real>(mesh: &TriMesh<T>) -> Result<T, SpectralError> {
    let m = measure(mesh);
    if !is_normalized(&m, normalized_tol()) {
        return Err(SpectralError::NotNormalized {
            area: m.total_area.to_f64_lossy(),
            centroid_offset: m.centroid.norm().to_f64_lossy(),
        });
    }
    let second_moment: T = mesh
        .positions()
        .iter()
        .zip(&m.vertex_weights)
        .map(|(x, &w)| w * x.norm_squared())
        .sum();
    Ok(T::from_count(SURFACE_DIM) / second_moment)
}
