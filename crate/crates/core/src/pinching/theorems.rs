use serde::Serialize;

use crate::curvature::VertexGeometry;
use crate::mesh::{measure, TriMesh};
use crate::pinching::deficit::check_lambda;
use crate::pinching::distance::{annulus_epsilon, density_epsilon};
use crate::pinching::{Outcome, PinchError, SphereModel, Violation};
use crate::{Real, Vec3, SURFACE_DIM};

const ORIGIN_TOL: f64 = 1e-9;
const DEGENERATE_IMAGE: f64 = 1e-12;

/// Distortion `θ* = max |s² − 1|` of the radial map
/// `F(x) = x₀ + r (x − x₀)/|x − x₀|` onto the model sphere, where `s` runs
/// over the singular values of the per-face linear map sending the flat
/// edge vectors to the chords between the images of the corners.
pub fn map_f_distortion<T: Real>(mesh: &TriMesh<T>, model: &SphereModel<T>) -> Result<T, PinchError> {
    let images: Vec<Vec3<T>> = mesh
        .positions()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let d = x - model.center;
            let norm = d.norm();
            if norm < T::lit(ORIGIN_TOL) {
                return Err(PinchError::OriginOnSurface { vertex: i, norm: norm.to_f64_lossy() });
            }
            Ok(model.center + d * (model.radius / norm))
        })
        .collect::<Result<_, _>>()?;

    let mut theta = T::zero();
    for (f, &[i0, i1, i2]) in mesh.faces().iter().enumerate() {
        let [p0, p1, p2] = mesh.triangle(f);
        let (e1, e2) = (p1 - p0, p2 - p0);
        let (f1, f2) = (images[i1] - images[i0], images[i2] - images[i0]);
        let e_area = e1.cross(e2).norm();
        if f1.cross(f2).norm() <= T::lit(DEGENERATE_IMAGE) * e_area {
            return Err(PinchError::DegenerateImage { face: f });
        }
        // e1, e2 in an orthonormal frame of the face: [[a, b], [0, d]]
        let a = e1.norm();
        let u = e1 / a;
        let b = e2.dot(u);
        let d = e_area / a;
        let c1 = f1 / a;
        let c2 = f2 / d - f1 * (b / (a * d));
        let (g11, g12, g22) = (c1.norm_squared(), c1.dot(c2), c2.norm_squared());
        let mean = (g11 + g22) * T::half();
        let rad = ((g11 - g22) * (g11 - g22) * T::lit(0.25) + g12 * g12).sqrt();
        let face_theta = (mean + rad - T::one()).abs().max((mean - rad - T::one()).abs());
        theta = theta.max(face_theta);
    }
    Ok(theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrosjeanReport<T> {
    /// `max Scal / (n − 1)`.
    pub bound: T,
    pub lambda1: T,
    /// `λ₁ / bound`; equals 1 only on round spheres.
    pub ratio: T,
    pub pass: bool,
}

/// Upper bound `λ₁ ≤ ‖Scal‖_∞ / (n − 1)` for surfaces of positive scalar
/// curvature, with `Scal = n(n−1) H₂ = 2K`.
pub fn grosjean_bound_check<T: Real>(
    geom: &[VertexGeometry<T>],
    lambda1: T,
    tol_disc: T,
) -> Result<Outcome<GrosjeanReport<T>>, PinchError> {
    check_lambda(lambda1)?;
    if let Some((i, g)) = geom.iter().enumerate().find(|(_, g)| !(g.scalar_curvature() > T::zero())) {
        return Ok(Outcome::HypothesisViolated(Violation {
            hypothesis: "Scal > 0".to_string(),
            vertex: Some(i),
            value: g.scalar_curvature().to_f64_lossy(),
        }));
    }
    let n = T::from_count(SURFACE_DIM);
    let max_scal = geom.iter().fold(T::neg_infinity(), |m, g| m.max(g.scalar_curvature()));
    let bound = max_scal / (n - T::one());
    Ok(Outcome::Evaluated(GrosjeanReport {
        bound,
        lambda1,
        ratio: lambda1 / bound,
        pass: lambda1 <= bound * (T::one() + tol_disc),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EinsteinReport<T> {
    /// Constant `k*` minimizing `max |K − k|`.
    pub k_star: T,
    /// `max |K − k*|`.
    pub epsilon: T,
    pub center: Vec3<T>,
    /// `√((n−1)/k*)`.
    pub target_radius: T,
    pub annulus_eps: T,
    pub density_eps: T,
    /// Hausdorff distance to the target sphere.
    pub hausdorff: T,
    pub lambda1: T,
    /// `n (k* − ε)/(n − 1)`, the lower end of the eigenvalue bracket.
    pub lower_bound: T,
    /// `n (k* + ε)/(n − 1)`.
    pub upper_bound: T,
    /// `λ₁ ≤ upper_bound · (1 + tol)`.
    pub upper_pass: bool,
    /// `λ₁ ≥ lower_bound · (1 − tol)`; reported only.
    pub lower_holds: bool,
}

/// Treats the surface as almost-Einstein (`Ric = K g` on surfaces): finds
/// the best constant `k*`, the sup deviation `ε`, the distance to the sphere
/// of radius `√((n−1)/k*)` about the center of mass, and the eigenvalue
/// bracket `n(k*∓ε)/(n−1)`.
pub fn almost_einstein_analysis<T: Real>(
    mesh: &TriMesh<T>,
    geom: &[VertexGeometry<T>],
    lambda1: T,
    samples: usize,
    tol_disc: T,
) -> Result<Outcome<EinsteinReport<T>>, PinchError> {
    check_lambda(lambda1)?;
    let (lo, hi) = geom
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), g| (lo.min(g.gauss), hi.max(g.gauss)));
    let k_star = (hi + lo) * T::half();
    let epsilon = (hi - lo) * T::half();
    if !(k_star > T::zero()) {
        return Ok(Outcome::HypothesisViolated(Violation {
            hypothesis: "k* > 0".to_string(),
            vertex: None,
            value: k_star.to_f64_lossy(),
        }));
    }
    let n = T::from_count(SURFACE_DIM);
    let center = measure(mesh).centroid;
    let target_radius = ((n - T::one()) / k_star).sqrt();
    let model = SphereModel::new(center, target_radius)?;
    let annulus_eps = annulus_epsilon(mesh, &model)?;
    let density_eps = density_epsilon(mesh, &model, samples)?;
    let lower_bound = n * (k_star - epsilon) / (n - T::one());
    let upper_bound = n * (k_star + epsilon) / (n - T::one());
    Ok(Outcome::Evaluated(EinsteinReport {
        k_star,
        epsilon,
        center,
        target_radius,
        annulus_eps,
        density_eps,
        hausdorff: annulus_eps.max(density_eps),
        lambda1,
        lower_bound,
        upper_bound,
        upper_pass: lambda1 <= upper_bound * (T::one() + tol_disc),
        lower_holds: lambda1 >= lower_bound * (T::one() - tol_disc),
    }))
}
