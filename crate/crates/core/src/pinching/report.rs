use std::collections::BTreeMap;

use serde::Serialize;

use crate::curvature::vertex_geometry;
use crate::mesh::{normalize, AreaScheme, TriMesh};
use crate::pinching::deficit::{check_order, reilly_deficit, sphere_model};
use crate::pinching::distance::{annulus_epsilon, density_epsilon};
use crate::pinching::lemmas::{lemma_suite, LemmaCheck};
use crate::pinching::theorems::{
    almost_einstein_analysis, grosjean_bound_check, map_f_distortion, EinsteinReport, GrosjeanReport,
};
use crate::pinching::{Outcome, PinchError, DEFAULT_SAMPLES, DEFAULT_TOL_DISC};
use crate::spectral::{assemble_mass, assemble_stiffness, first_eigenpair, SolverOptions};
use crate::{Real, SURFACE_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PinchOptions<T> {
    pub tol_disc: T,
    pub samples: usize,
    pub solver: SolverOptions<T>,
    pub einstein: bool,
}

impl<T: Real> Default for PinchOptions<T> {
    fn default() -> Self {
        Self {
            tol_disc: T::lit(DEFAULT_TOL_DISC),
            samples: DEFAULT_SAMPLES,
            solver: SolverOptions::default(),
            einstein: true,
        }
    }
}

/// Everything computed for one surface, after normalization to unit area
/// and centering. Serializes with a fixed key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PinchingReport<T> {
    pub mesh: Option<String>,
    pub vertices: usize,
    pub faces: usize,
    pub k: usize,
    pub p: T,
    pub lambda1: T,
    pub int_hkm1: T,
    pub norm_hk2p: T,
    pub deficit: T,
    pub constant: T,
    pub gate: bool,
    pub hk_positive: bool,
    pub model_radius: T,
    pub annulus_eps_star: T,
    pub density_eps_star: T,
    pub hausdorff: T,
    pub distortion_theta_star: T,
    pub lemma_checks: BTreeMap<String, LemmaCheck<T>>,
    pub grosjean: Outcome<GrosjeanReport<T>>,
    pub einstein: Option<Outcome<EinsteinReport<T>>>,
    pub tol_disc: T,
    pub samples: usize,
    pub notes: Vec<String>,
}

impl<T: Real> PinchingReport<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Normalizes the mesh, computes curvature and `λ₁`, then runs every check.
pub fn full_report<T: Real>(
    mesh: &TriMesh<T>,
    k: usize,
    p: T,
    options: &PinchOptions<T>,
) -> Result<PinchingReport<T>, PinchError> {
    check_order(k)?;
    if !(p >= T::one()) {
        return Err(PinchError::InvalidExponent(p.to_f64_lossy()));
    }
    if options.samples == 0 {
        return Err(PinchError::ZeroSamples);
    }
    let normalized = normalize(mesh).mesh;
    let geom = vertex_geometry(&normalized);
    let stiffness = assemble_stiffness(&normalized);
    let mass = assemble_mass(&normalized, AreaScheme::MixedVoronoi);
    let lambda1 = first_eigenpair(&stiffness, &mass, &options.solver)?.lambda;

    let rd = reilly_deficit(&normalized, &geom, k, p, lambda1)?;
    let model = sphere_model(&normalized, lambda1)?;
    let annulus = annulus_epsilon(&normalized, &model)?;
    let density = density_epsilon(&normalized, &model, options.samples)?;
    let theta = map_f_distortion(&normalized, &model)?;
    let suite = lemma_suite(&normalized, &geom, k, p, lambda1, options.tol_disc)?;
    let grosjean = grosjean_bound_check(&geom, lambda1, options.tol_disc)?;
    let einstein = if options.einstein {
        Some(almost_einstein_analysis(&normalized, &geom, lambda1, options.samples, options.tol_disc)?)
    } else {
        None
    };

    let mut notes = Vec::new();
    if p < T::two() {
        notes.push("p < 2 lies outside the range p >= 2 of the pinching statements".to_string());
    }
    if p * T::from_count(2 * k) >= T::from_count(SURFACE_DIM) {
        notes.push("p >= n/(2k): the pinching constants do not depend on the L^2p norm of H_k".to_string());
    }

    Ok(PinchingReport {
        mesh: mesh.name().map(str::to_string),
        vertices: mesh.vertex_count(),
        faces: mesh.face_count(),
        k,
        p,
        lambda1,
        int_hkm1: rd.int_hkm1,
        norm_hk2p: rd.norm_hk2p,
        deficit: rd.deficit,
        constant: suite.constant,
        gate: suite.gate,
        hk_positive: suite.hk_positive,
        model_radius: model.radius,
        annulus_eps_star: annulus,
        density_eps_star: density,
        hausdorff: annulus.max(density),
        distortion_theta_star: theta,
        lemma_checks: suite.checks,
        grosjean,
        einstein,
        tol_disc: options.tol_disc,
        samples: options.samples,
        notes,
    })
}

/// Column header of the family-sweep CSV.
pub fn sweep_csv_header() -> &'static str {
    "shape,t,subdiv,deficit,eps_annulus,eps_density,hausdorff,theta_star,lambda1"
}

/// One family-sweep row; `t` and `subdiv` are left empty when unknown.
pub fn sweep_csv_row<T: Real>(shape: &str, t: Option<f64>, subdiv: Option<u32>, r: &PinchingReport<T>) -> String {
    let t = t.map(|t| t.to_string()).unwrap_or_default();
    let subdiv = subdiv.map(|s| s.to_string()).unwrap_or_default();
    format!(
        "{shape},{t},{subdiv},{:e},{:e},{:e},{:e},{:e},{:e}",
        r.deficit.to_f64_lossy(),
        r.annulus_eps_star.to_f64_lossy(),
        r.density_eps_star.to_f64_lossy(),
        r.hausdorff.to_f64_lossy(),
        r.distortion_theta_star.to_f64_lossy(),
        r.lambda1.to_f64_lossy(),
    )
}

/// `(shape, t, subdiv, report)` of one sweep member.
pub type SweepRow<T> = (String, Option<f64>, Option<u32>, PinchingReport<T>);

/// Header plus one line per row.
pub fn sweep_csv<T: Real>(rows: &[SweepRow<T>]) -> String {
    let mut out = String::from(sweep_csv_header());
    out.push('\n');
    for (shape, t, s, r) in rows {
        out.push_str(&sweep_csv_row(shape, *t, *s, r));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate, ShapeSpec};

    #[test]
    fn sphere_report() {
        let mesh = generate::<f64>(&ShapeSpec::Sphere { radius: 2.0 }, 3).unwrap();
        let r = full_report(&mesh, 1, 2.0, &PinchOptions::default()).unwrap();
        assert!(r.deficit.abs() <= 0.05 * 2.0 * r.norm_hk2p.powi(2));
        assert!(r.lemma_checks.values().all(|c| c.pass));
        assert!(r.distortion_theta_star < 0.05);
        assert!(r.hk_positive);
        let json = r.to_json();
        assert!(json.find("\"k\"").unwrap() < json.find("\"lambda1\"").unwrap());
    }

    #[test]
    fn torus_report_flags_violations() {
        let mesh = generate::<f64>(&ShapeSpec::Torus { major: 2.0, minor: 0.5 }, 2).unwrap();
        let r = full_report(&mesh, 2, 2.0, &PinchOptions::default()).unwrap();
        assert!(!r.hk_positive);
        assert!(r.grosjean.is_violated());
        assert!(r.einstein.unwrap().is_violated());
    }

    #[test]
    fn csv_rows() {
        let mesh = generate::<f64>(&ShapeSpec::Ellipsoid { a: 1.0, b: 1.0, c: 1.1 }, 2).unwrap();
        let r = full_report(&mesh, 1, 2.0, &PinchOptions::default()).unwrap();
        let csv = sweep_csv(&[("ellipsoid".to_string(), Some(0.1), Some(2), r)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 9);
    }
}
