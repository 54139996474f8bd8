//! Quadrature over the vertex area measure and the integral identities that
//! closed hypersurfaces satisfy.

use crate::curvature::{CurvatureError, VertexGeometry};
use crate::mesh::TriMesh;
use crate::spectral::SparseSymMatrix;
use crate::{Real, SURFACE_DIM};

/// `Σ f_i w_i`, the discrete `∫_M f`.
pub fn integrate<T: Real>(weights: &[T], f: &[T]) -> Result<T, CurvatureError> {
    if weights.len() != f.len() {
        return Err(CurvatureError::SizeMismatch { expected: weights.len(), got: f.len() });
    }
    if let Some(i) = f.iter().position(|v| v.is_nan()) {
        return Err(CurvatureError::NotANumber { index: i });
    }
    Ok(weights.iter().zip(f).map(|(&w, &v)| w * v).sum())
}

/// `(∫|f|^q)^{1/q}` under the raw area measure.
pub fn lp_norm<T: Real>(weights: &[T], f: &[T], q: T) -> Result<T, CurvatureError> {
    if !(q >= T::one()) {
        return Err(CurvatureError::InvalidExponent(q.to_f64_lossy()));
    }
    let powered: Vec<T> = f.iter().map(|v| v.abs().powf(q)).collect();
    Ok(integrate(weights, &powered)?.powf(T::one() / q))
}

/// `sup |f|` over vertices.
pub fn sup_norm<T: Real>(f: &[T]) -> T {
    f.iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

/// Per-vertex `H_k` values.
pub fn hk_values<T: Real>(geom: &[VertexGeometry<T>], k: usize) -> Result<Vec<T>, CurvatureError> {
    geom.iter().map(|g| g.hk(k)).collect()
}

/// `∫ (H_{k-1} - H_k ⟨X, ν⟩)`, which vanishes on smooth closed surfaces.
pub fn hsiung_minkowski_residual<T: Real>(
    mesh: &TriMesh<T>,
    geom: &[VertexGeometry<T>],
    k: usize,
) -> Result<T, CurvatureError> {
    if !(1..=SURFACE_DIM).contains(&k) {
        return Err(CurvatureError::OrderOutOfRange { k, max: SURFACE_DIM });
    }
    let mut acc = T::zero();
    for (x, g) in mesh.positions().iter().zip(geom) {
        acc += g.weight * (g.hk(k - 1)? - g.hk(k)? * x.dot(g.normal));
    }
    Ok(acc)
}

/// Mass-weighted L² norm of `½ Δ|X|² - (nH⟨ν, X⟩ - n)` with the positive
/// discrete Laplacian `Δ = M⁻¹K`.
pub fn delta_position_residual<T: Real>(
    mesh: &TriMesh<T>,
    geom: &[VertexGeometry<T>],
    stiffness: &SparseSymMatrix<T>,
    mass_diag: &[T],
) -> Result<T, CurvatureError> {
    let nv = mesh.vertex_count();
    if stiffness.dim() != nv || mass_diag.len() != nv || geom.len() != nv {
        return Err(CurvatureError::SizeMismatch { expected: nv, got: stiffness.dim().min(mass_diag.len()) });
    }
    let n = T::from_count(SURFACE_DIM);
    let sq: Vec<T> = mesh.positions().iter().map(|x| x.norm_squared()).collect();
    let k_sq = stiffness.mul_vec(&sq);
    let mut acc = T::zero();
    for i in 0..nv {
        let lhs = T::half() * k_sq[i] / mass_diag[i];
        let rhs = n * geom[i].mean * geom[i].normal.dot(mesh.positions()[i]) - n;
        let r = lhs - rhs;
        acc += mass_diag[i] * r * r;
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::vertex_geometry;
    use crate::mesh::{generate, measure, ShapeSpec};
    use std::f64::consts::PI;

    #[test]
    fn integrate_one_is_area() {
        let mesh = generate::<f64>(&ShapeSpec::Ellipsoid { a: 1.0, b: 2.0, c: 0.5 }, 2).unwrap();
        let m = measure(&mesh);
        let ones = vec![1.0; mesh.vertex_count()];
        assert!((integrate(&m.vertex_weights, &ones).unwrap() - m.total_area).abs() < 1e-12 * m.total_area);
    }

    #[test]
    fn integrated_mean_curvature_of_unit_sphere() {
        let mesh = generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, 4).unwrap();
        let geom = vertex_geometry(&mesh);
        let w: Vec<f64> = geom.iter().map(|g| g.weight).collect();
        let h = hk_values(&geom, 1).unwrap();
        assert!((integrate(&w, &h).unwrap() - 4.0 * PI).abs() < 0.01 * 4.0 * PI);
    }

    #[test]
    fn nan_and_size_errors() {
        let w = [1.0, 1.0, 1.0];
        assert!(matches!(integrate(&w, &[1.0, f64::NAN, 0.0]), Err(CurvatureError::NotANumber { index: 1 })));
        assert!(matches!(integrate(&w, &[1.0]), Err(CurvatureError::SizeMismatch { .. })));
        assert!(matches!(lp_norm(&w, &[1.0; 3], 0.5), Err(CurvatureError::InvalidExponent(_))));
    }

    #[test]
    fn lp_norm_of_constant_on_unit_area() {
        let w = [0.25f64; 4];
        for q in [1.0, 2.0, 3.5, 8.0] {
            assert!((lp_norm(&w, &[-1.3; 4], q).unwrap() - 1.3).abs() < 1e-14);
        }
        let f = [0.1f64, -2.0, 0.7, 1.1];
        let l2 = lp_norm(&w, &f, 2.0).unwrap();
        let direct = integrate(&w, &f.map(|v| v * v)).unwrap().sqrt();
        assert!((l2 - direct).abs() < 1e-12);
    }

    #[test]
    fn hsiung_minkowski_small_on_sphere() {
        let mesh = generate::<f64>(&ShapeSpec::Sphere { radius: 1.3 }, 4).unwrap();
        let geom = vertex_geometry(&mesh);
        let area = measure(&mesh).total_area;
        for k in 1..=2 {
            let r = hsiung_minkowski_residual(&mesh, &geom, k).unwrap();
            assert!(r.abs() <= 0.01 * area, "k={k}: {r}");
        }
        assert!(hsiung_minkowski_residual(&mesh, &geom, 3).is_err());
    }
}
