use serde::Serialize;

use crate::curvature::{hk_values, integrate, lp_norm, VertexGeometry};
use crate::mesh::{is_centered, is_normalized, measure, MeshMeasure, TriMesh};
use crate::pinching::PinchError;
use crate::spectral::normalized_tol;
use crate::{Real, Vec3, SURFACE_DIM};

/// Floor on the pinching constant so that bounds proportional to it stay
/// meaningful when the deficit is (discretely) positive.
pub const MIN_CONSTANT: f64 = 1e-12;

/// Comparison sphere `S(center, radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereModel<T> {
    pub center: Vec3<T>,
    pub radius: T,
}

impl<T: Real> SphereModel<T> {
    pub fn new(center: Vec3<T>, radius: T) -> Result<Self, PinchError> {
        if !(radius > T::zero()) || !center.is_finite() {
            return Err(PinchError::InvalidRadius(radius.to_f64_lossy()));
        }
        Ok(Self { center, radius })
    }
}

/// The two sides of `λ₁ (∫H_{k-1})² ≤ n ‖H_k‖²_{2p}` and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReillyDeficit<T> {
    pub k: usize,
    pub p: T,
    pub lambda1: T,
    pub int_hkm1: T,
    pub norm_hk2p: T,
    /// `λ₁ (∫H_{k-1})² − n ‖H_k‖²_{2p}`; zero exactly on round spheres.
    pub deficit: T,
}

pub(crate) fn check_order(k: usize) -> Result<(), PinchError> {
    if (1..=SURFACE_DIM).contains(&k) {
        Ok(())
    } else {
        Err(PinchError::InvalidOrder(k))
    }
}

pub(crate) fn check_lambda<T: Real>(lambda1: T) -> Result<(), PinchError> {
    if lambda1 > T::zero() && lambda1.is_finite() {
        Ok(())
    } else {
        Err(PinchError::NonPositiveEigenvalue(lambda1.to_f64_lossy()))
    }
}

pub(crate) fn check_normalized<T: Real>(mesh: &TriMesh<T>) -> Result<MeshMeasure<T>, PinchError> {
    let m = measure(mesh);
    if is_normalized(&m, normalized_tol::<T>()) {
        Ok(m)
    } else {
        Err(PinchError::NotNormalized {
            area: m.total_area.to_f64_lossy(),
            centroid_offset: m.centroid.norm().to_f64_lossy(),
        })
    }
}

pub(crate) fn weights<T: Real>(geom: &[VertexGeometry<T>]) -> Vec<T> {
    geom.iter().map(|g| g.weight).collect()
}

/// `∫ H_{k-1}` and `‖H_k‖_{2p}` under the vertex area measure.
pub(crate) fn curvature_integrals<T: Real>(
    geom: &[VertexGeometry<T>],
    k: usize,
    p: T,
) -> Result<(T, T), PinchError> {
    if !(p >= T::one()) {
        return Err(PinchError::InvalidExponent(p.to_f64_lossy()));
    }
    let w = weights(geom);
    let int_hkm1 = integrate(&w, &hk_values(geom, k - 1)?)?;
    let norm = lp_norm(&w, &hk_values(geom, k)?, T::two() * p)?;
    Ok((int_hkm1, norm))
}

/// Reilly deficit `D = λ₁ (∫H_{k-1})² − n ‖H_k‖²_{2p}` on a normalized mesh.
pub fn reilly_deficit<T: Real>(
    mesh_normalized: &TriMesh<T>,
    geom: &[VertexGeometry<T>],
    k: usize,
    p: T,
    lambda1: T,
) -> Result<ReillyDeficit<T>, PinchError> {
    check_order(k)?;
    check_lambda(lambda1)?;
    check_normalized(mesh_normalized)?;
    let (int_hkm1, norm_hk2p) = curvature_integrals(geom, k, p)?;
    let n = T::from_count(SURFACE_DIM);
    let deficit = lambda1 * int_hkm1 * int_hkm1 - n * norm_hk2p * norm_hk2p;
    Ok(ReillyDeficit { k, p, lambda1, int_hkm1, norm_hk2p, deficit })
}

/// Smallest admissible pinching constant `C = max(ε_C, −D)`.
pub fn minimal_constant<T: Real>(deficit: T) -> T {
    (-deficit).max(T::lit(MIN_CONSTANT))
}

/// Pinching condition `D > −C`.
pub fn pinching_predicate<T: Real>(deficit: T, c: T) -> bool {
    deficit > -c
}

/// Smallness requirement `C < (n/2) ‖H_k‖²_{2p}` on the pinching constant.
pub fn pinching_gate<T: Real>(c: T, norm_hk2p: T) -> bool {
    c < T::from_count(SURFACE_DIM) * T::half() * norm_hk2p * norm_hk2p
}

/// Sphere centered at the (origin) center of mass with radius `√(n/λ₁)`.
pub fn sphere_model<T: Real>(mesh_normalized: &TriMesh<T>, lambda1: T) -> Result<SphereModel<T>, PinchError> {
    check_lambda(lambda1)?;
    let m = measure(mesh_normalized);
    if !is_centered(&m, normalized_tol::<T>()) {
        return Err(PinchError::NotCentered { offset: m.centroid.norm().to_f64_lossy() });
    }
    SphereModel::new(Vec3::zero(), (T::from_count(SURFACE_DIM) / lambda1).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::vertex_geometry;
    use crate::mesh::{generate, normalize, ShapeSpec};

    #[test]
    fn predicate_and_gate() {
        assert!(pinching_predicate(0.0, 1e-3));
        assert!(!pinching_predicate(-2.0, 1.0));
        assert!(pinching_gate(0.9, 1.0));
        assert!(!pinching_gate(1.0, 1.0));
        assert_eq!(minimal_constant(0.3), MIN_CONSTANT);
        assert_eq!(minimal_constant(-0.3), 0.3);
    }

    #[test]
    fn sphere_deficit_with_analytic_eigenvalue() {
        let mesh = normalize(&generate::<f64>(&ShapeSpec::Sphere { radius: 3.0 }, 4).unwrap()).mesh;
        let geom = vertex_geometry(&mesh);
        let r = mesh.positions()[0].norm();
        let d = reilly_deficit(&mesh, &geom, 1, 2.0, 2.0 / (r * r)).unwrap();
        assert!(d.deficit.abs() <= 0.05 * 2.0 * d.norm_hk2p.powi(2));
    }

    #[test]
    fn preconditions() {
        let mesh = generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, 2).unwrap();
        let geom = vertex_geometry(&mesh);
        assert!(matches!(reilly_deficit(&mesh, &geom, 1, 2.0, 2.0), Err(PinchError::NotNormalized { .. })));
        let n = normalize(&mesh).mesh;
        assert!(matches!(reilly_deficit(&n, &geom, 3, 2.0, 2.0), Err(PinchError::InvalidOrder(3))));
        assert!(matches!(reilly_deficit(&n, &geom, 1, 0.5, 2.0), Err(PinchError::InvalidExponent(_))));
        assert!(matches!(sphere_model(&n, 0.0), Err(PinchError::NonPositiveEigenvalue(_))));
        let moved = n.translated(Vec3::new(0.1, 0.0, 0.0));
        assert!(matches!(sphere_model(&moved, 1.0), Err(PinchError::NotCentered { .. })));
    }

    #[test]
    fn model_radius_scaling() {
        let n = normalize(&generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, 2).unwrap()).mesh;
        let a = sphere_model(&n, 10.0).unwrap().radius;
        let b = sphere_model(&n, 20.0).unwrap().radius;
        assert!((a / b - 2f64.sqrt()).abs() < 1e-14);
    }
}
