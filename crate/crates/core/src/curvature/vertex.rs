use std::fmt::Write as _;

use serde::Serialize;

use crate::curvature::CurvatureError;
use crate::mesh::{cot, measure, TriMesh};
use crate::{Real, Vec3};

/// Discrete second-order geometry at one vertex.
///
/// Normal is outward. With the outward normal a round sphere of radius `R`
/// has `mean = 1/R` and `gauss = 1/R²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexGeometry<T> {
    pub normal: Vec3<T>,
    /// Mean curvature `H = (κ₁ + κ₂)/2`.
    pub mean: T,
    /// Gauss curvature `K = κ₁κ₂`, which is `H₂` for surfaces.
    pub gauss: T,
    pub kappa1: T,
    pub kappa2: T,
    /// Mixed-Voronoi area.
    pub weight: T,
}

impl<T: Real> VertexGeometry<T> {
    /// Normalized mean curvature `H_k` of a surface: `H₀ = 1`, `H₁ = H`,
    /// `H₂ = K`, `H₃ = 0`.
    pub fn hk(&self, k: usize) -> Result<T, CurvatureError> {
        match k {
            0 => Ok(T::one()),
            1 => Ok(self.mean),
            2 => Ok(self.gauss),
            3 => Ok(T::zero()),
            _ => Err(CurvatureError::OrderOutOfRange { k, max: 3 }),
        }
    }

    /// Scalar curvature `n(n-1)H₂`, i.e. `2K` for surfaces.
    pub fn scalar_curvature(&self) -> T {
        T::two() * self.gauss
    }
}

/// Per-vertex normal, mean and Gauss curvature.
///
/// Normals are angle-weighted face normals; the global sign is chosen so the
/// mesh encloses positive signed volume. `H` is half the length of the
/// cotangent mean-curvature normal over the mixed area, signed by its
/// alignment with the normal. `K` is the angle defect over the mixed area.
pub fn vertex_geometry<T: Real>(mesh: &TriMesh<T>) -> Vec<VertexGeometry<T>> {
    let nv = mesh.vertex_count();
    let weights = measure(mesh).vertex_weights;
    let mut normal_acc = vec![Vec3::zero(); nv];
    let mut angle_sum = vec![T::zero(); nv];
    let mut laplace = vec![Vec3::zero(); nv];

    for (f, &tri) in mesh.faces().iter().enumerate() {
        let p = mesh.triangle(f);
        let unit = mesh.face_area_vector(f).normalized();
        for corner in 0..3 {
            let (i, j, k) = (corner, (corner + 1) % 3, (corner + 2) % 3);
            let (u, v) = (p[j] - p[i], p[k] - p[i]);
            let angle = u.cross(v).norm().atan2(u.dot(v));
            normal_acc[tri[i]] += unit * angle;
            angle_sum[tri[i]] += angle;
            // the angle at corner i weights the opposite edge (j, k)
            let w = cot(u, v) * T::half();
            let d = p[j] - p[k];
            laplace[tri[j]] += d * w;
            laplace[tri[k]] -= d * w;
        }
    }

    let sign = if mesh.signed_volume() < T::zero() { -T::one() } else { T::one() };
    let two_pi = T::two() * T::PI();
    (0..nv)
        .map(|v| {
            let area = weights[v];
            let normal = (normal_acc[v] * sign).normalized();
            let hn = laplace[v] / (T::two() * area);
            let mut mean = hn.norm();
            if hn.dot(normal) < T::zero() {
                mean = -mean;
            }
            let gauss = (two_pi - angle_sum[v]) / area;
            let disc = (mean * mean - gauss).max(T::zero()).sqrt();
            VertexGeometry { normal, mean, gauss, kappa1: mean + disc, kappa2: mean - disc, weight: area }
        })
        .collect()
}

/// `X^T = X - ⟨X, ν⟩ν`, the tangential part of the position vector.
pub fn tangential_projection<T: Real>(mesh: &TriMesh<T>, geom: &[VertexGeometry<T>]) -> Vec<Vec3<T>> {
    mesh.positions()
        .iter()
        .zip(geom)
        .map(|(&x, g)| x - g.normal * x.dot(g.normal))
        .collect()
}

/// CSV dump: `vertex_id,nx,ny,nz,H,K,kappa1,kappa2,weight`.
pub fn geometry_csv<T: Real>(geom: &[VertexGeometry<T>]) -> String {
    let mut s = String::from("vertex_id,nx,ny,nz,H,K,kappa1,kappa2,weight\n");
    for (i, g) in geom.iter().enumerate() {
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{},{}",
            g.normal.x, g.normal.y, g.normal.z, g.mean, g.gauss, g.kappa1, g.kappa2, g.weight
        );
    }
    s
}
