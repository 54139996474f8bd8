use serde::Serialize;

use crate::curvature::VertexGeometry;
use crate::mesh::{measure, TriMesh};
use crate::pinching::deficit::{check_lambda, check_normalized, check_order, curvature_integrals};
use crate::pinching::{Outcome, PinchError, Violation};
use crate::{Real, Vec3, SURFACE_DIM};

const ORIGIN_TOL: f64 = 1e-9;

/// Per-vertex vector field with its squared L² norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorField<T> {
    pub values: Vec<Vec3<T>>,
    pub l2sq: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZField<T> {
    pub values: Vec<Vec3<T>>,
    pub l2sq: T,
    pub l1: T,
    /// `(n/λ₁)^{3/2} (∫H_{k-1})^{-2}`: the smooth estimate reads
    /// `‖Z‖₂² ≤ bound_factor · C`.
    pub bound_factor: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiValues<T> {
    pub values: Vec<T>,
    pub sup: T,
    pub l2: T,
    /// `‖φ^{1/2}‖₁`.
    pub sqrt_l1: T,
}

fn l2sq<T: Real>(geom: &[VertexGeometry<T>], v: &[Vec3<T>]) -> T {
    geom.iter().zip(v).map(|(g, y)| g.weight * y.norm_squared()).sum()
}

/// `Y = n H_k ν − λ₁ (∫H_{k-1}) X` on a normalized mesh.
pub fn field_y<T: Real>(
    mesh_normalized: &TriMesh<T>,
    geom: &[VertexGeometry<T>],
    k: usize,
    lambda1: T,
) -> Result<VectorField<T>, PinchError> {
    check_order(k)?;
    check_lambda(lambda1)?;
    check_normalized(mesh_normalized)?;
    let (int_hkm1, _) = curvature_integrals(geom, k, T::one())?;
    let n = T::from_count(SURFACE_DIM);
    let values = mesh_normalized
        .positions()
        .iter()
        .zip(geom)
        .map(|(&x, g)| Ok(g.normal * (n * g.hk(k)?) - x * (lambda1 * int_hkm1)))
        .collect::<Result<Vec<_>, PinchError>>()?;
    let l2sq = l2sq(geom, &values);
    Ok(VectorField { values, l2sq })
}

/// `Z = √(n/λ₁) |X|^{1/2} H_k / (∫H_{k-1}) ν − X / |X|^{1/2}` on a
/// normalized mesh. Needs `H_k > 0` at every vertex.
pub fn field_z<T: Real>(
    mesh_normalized: &TriMesh<T>,
    geom: &[VertexGeometry<T>],
    k: usize,
    lambda1: T,
) -> Result<Outcome<ZField<T>>, PinchError> {
    check_order(k)?;
    check_lambda(lambda1)?;
    check_normalized(mesh_normalized)?;
    let positions = mesh_normalized.positions();
    if let Some((i, x)) = positions.iter().enumerate().find(|(_, x)| x.norm() < T::lit(ORIGIN_TOL)) {
        return Err(PinchError::OriginOnSurface { vertex: i, norm: x.norm().to_f64_lossy() });
    }
    if let Some(v) = hk_violation(geom, k)? {
        return Ok(Outcome::HypothesisViolated(v));
    }
    let (int_hkm1, _) = curvature_integrals(geom, k, T::one())?;
    if int_hkm1 == T::zero() {
        return Err(PinchError::ZeroCurvatureIntegral);
    }
    let n_over_l = T::from_count(SURFACE_DIM) / lambda1;
    let r = n_over_l.sqrt();
    let values: Vec<Vec3<T>> = positions
        .iter()
        .zip(geom)
        .map(|(&x, g)| {
            let s = x.norm().sqrt();
            Ok(g.normal * (r * s * g.hk(k)? / int_hkm1) - x / s)
        })
        .collect::<Result<_, PinchError>>()?;
    let l1 = geom.iter().zip(&values).map(|(g, z)| g.weight * z.norm()).sum();
    Ok(Outcome::Evaluated(ZField {
        l2sq: l2sq(geom, &values),
        l1,
        bound_factor: n_over_l * r / (int_hkm1 * int_hkm1),
        values,
    }))
}

/// First vertex with `H_k ≤ 0`, if any.
pub(crate) fn hk_violation<T: Real>(geom: &[VertexGeometry<T>], k: usize) -> Result<Option<Violation>, PinchError> {
    for (i, g) in geom.iter().enumerate() {
        let h = g.hk(k)?;
        if !(h > T::zero()) {
            return Ok(Some(Violation {
                hypothesis: format!("H_{k} > 0"),
                vertex: Some(i),
                value: h.to_f64_lossy(),
            }));
        }
    }
    Ok(None)
}

/// `φ = |X| (|X| − √(n/λ₁))²` with its sup, L² and `‖φ^{1/2}‖₁` norms.
pub fn phi_fn<T: Real>(mesh: &TriMesh<T>, lambda1: T) -> Result<PhiValues<T>, PinchError> {
    check_lambda(lambda1)?;
    let r = (T::from_count(SURFACE_DIM) / lambda1).sqrt();
    let w = measure(mesh).vertex_weights;
    let values: Vec<T> = mesh
        .positions()
        .iter()
        .map(|x| {
            let d = x.norm() - r;
            x.norm() * d * d
        })
        .collect();
    let sup = values.iter().fold(T::zero(), |m, &v| m.max(v));
    let l2 = w.iter().zip(&values).map(|(&w, &v)| w * v * v).sum::<T>().sqrt();
    let sqrt_l1 = w.iter().zip(&values).map(|(&w, &v)| w * v.sqrt()).sum();
    Ok(PhiValues { values, sup, l2, sqrt_l1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::vertex_geometry;
    use crate::mesh::{generate, normalize, ShapeSpec};

    fn normalized(shape: ShapeSpec, s: u32) -> TriMesh<f64> {
        normalize(&generate::<f64>(&shape, s).unwrap()).mesh
    }

    #[test]
    fn fields_vanish_on_sphere_with_exact_eigenvalue() {
        let mesh = normalized(ShapeSpec::Sphere { radius: 1.0 }, 4);
        let geom = vertex_geometry(&mesh);
        let r = mesh.positions()[0].norm();
        let lambda = 2.0 / (r * r);
        for k in 1..=2 {
            let hk2: f64 = geom.iter().map(|g| g.weight * g.hk(k).unwrap().powi(2)).sum();
            let y = field_y(&mesh, &geom, k, lambda).unwrap();
            assert!(y.l2sq <= 1e-2 * 4.0 * hk2, "k={k}: {} vs {}", y.l2sq, hk2);
            let z = field_z(&mesh, &geom, k, lambda).unwrap().unwrap_evaluated();
            assert!(z.l2sq <= 1e-2);
        }
        let phi = phi_fn(&mesh, lambda).unwrap();
        assert!(phi.sup <= 1e-3 * r.powi(3));
        assert!(phi.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn z_requires_positive_curvature() {
        let torus = normalized(ShapeSpec::Torus { major: 2.0, minor: 0.5 }, 2);
        let geom = vertex_geometry(&torus);
        assert!(field_z(&torus, &geom, 2, 5.0).unwrap().is_violated());
        assert!(!field_z(&torus, &geom, 1, 5.0).unwrap().is_violated());
    }

    #[test]
    fn y_is_nonzero_on_ellipsoid() {
        let mesh = normalized(ShapeSpec::Ellipsoid { a: 1.0, b: 1.0, c: 1.5 }, 3);
        let geom = vertex_geometry(&mesh);
        assert!(field_y(&mesh, &geom, 1, 20.0).unwrap().l2sq > 0.0);
    }

    #[test]
    fn phi_holder_step() {
        let mesh = normalized(ShapeSpec::PerturbedSphere { l: 2, m: 1, delta: 0.2 }, 3);
        let phi = phi_fn(&mesh, 25.0).unwrap();
        assert!(phi.l2 <= phi.sup.powf(0.75) * phi.sqrt_l1.sqrt() * (1.0 + 1e-12));
    }
}
