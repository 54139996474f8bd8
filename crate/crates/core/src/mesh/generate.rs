//! Test-surface families: icosphere-based spheres, ellipsoids and radially
//! perturbed spheres, plus a structured torus.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::mesh::{MeshError, TriMesh};
use crate::{Real, Vec3};

/// Largest subdivision level accepted by [`generate`] (about 650k faces).
pub const MAX_SUBDIV: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ShapeSpec {
    Sphere { radius: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// Radial bump `r(u) = 1 + delta * Y_l^m(u)` with a real spherical harmonic.
    PerturbedSphere { l: u32, m: u32, delta: f64 },
    Torus { major: f64, minor: f64 },
}

impl ShapeSpec {
    pub fn validate(&self) -> Result<(), MeshError> {
        let bad = |msg: String| Err(MeshError::InvalidShape(msg));
        match *self {
            ShapeSpec::Sphere { radius } if !(radius > 0.0 && radius.is_finite()) => {
                bad(format!("sphere radius must be positive, got {radius}"))
            }
            ShapeSpec::Ellipsoid { a, b, c }
                if !([a, b, c].iter().all(|s| *s > 0.0 && s.is_finite())) =>
            {
                bad(format!("ellipsoid semi-axes must be positive, got ({a}, {b}, {c})"))
            }
            ShapeSpec::PerturbedSphere { l, m, delta } => {
                if m > l {
                    return bad(format!("need 0 <= m <= l, got l={l}, m={m}"));
                }
                if !delta.is_finite() {
                    return bad("perturbation amplitude must be finite".into());
                }
                let peak = delta.abs() * real_sph_harm_max(l, m);
                if peak >= 1.0 {
                    return bad(format!(
                        "|delta| * max|Y_{l}^{m}| = {peak:.4} must stay below 1 for a positive radius"
                    ));
                }
                Ok(())
            }
            ShapeSpec::Torus { major, minor } if !(minor > 0.0 && major > minor && major.is_finite()) => {
                bad(format!("torus needs major > minor > 0, got major={major}, minor={minor}"))
            }
            _ => Ok(()),
        }
    }

    pub fn is_genus_zero(&self) -> bool {
        !matches!(self, ShapeSpec::Torus { .. })
    }

    /// Short tag used in mesh names and sweep tables.
    pub fn tag(&self) -> &'static str {
        match self {
            ShapeSpec::Sphere { .. } => "sphere",
            ShapeSpec::Ellipsoid { .. } => "ellipsoid",
            ShapeSpec::PerturbedSphere { .. } => "perturbed",
            ShapeSpec::Torus { .. } => "torus",
        }
    }
}

/// Builds a mesh of the requested surface.
pub fn generate<T: Real>(shape: &ShapeSpec, subdiv: u32) -> Result<TriMesh<T>, MeshError> {
    shape.validate()?;
    if subdiv > MAX_SUBDIV {
        return Err(MeshError::InvalidShape(format!("subdiv {subdiv} exceeds limit {MAX_SUBDIV}")));
    }
    let (points, faces) = match *shape {
        ShapeSpec::Torus { major, minor } => torus_grid(major, minor, subdiv),
        _ => {
            let (unit, faces) = icosphere(subdiv);
            let points = unit.iter().map(|&u| map_from_unit_sphere(shape, u)).collect();
            (points, faces)
        }
    };
    let positions = points
        .into_iter()
        .map(|[x, y, z]| Vec3::new(T::lit(x), T::lit(y), T::lit(z)))
        .collect();
    Ok(TriMesh::new(positions, faces)?.with_name(format!("{}-s{subdiv}", shape.tag())))
}

fn map_from_unit_sphere(shape: &ShapeSpec, u: [f64; 3]) -> [f64; 3] {
    match *shape {
        ShapeSpec::Sphere { radius } => [radius * u[0], radius * u[1], radius * u[2]],
        ShapeSpec::Ellipsoid { a, b, c } => [a * u[0], b * u[1], c * u[2]],
        ShapeSpec::PerturbedSphere { l, m, delta } => {
            let r = 1.0 + delta * real_sph_harm(l, m, u);
            [r * u[0], r * u[1], r * u[2]]
        }
        ShapeSpec::Torus { .. } => unreachable!("torus is not built from the icosphere"),
    }
}

/// Damped umbrella sweeps applied after each subdivision level.
const RELAX_SWEEPS: usize = 4;

/// Unit icosahedron with vertices on the z axis, loop-subdivided `levels`
/// times with new vertices projected back to the unit sphere. After each
/// level a few tangential smoothing sweeps even out the vertex density
/// across the coarse edges.
pub fn icosphere(levels: u32) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let mut pts = Vec::with_capacity(12);
    pts.push([0.0, 0.0, 1.0]);
    let (z0, s) = (1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt());
    for k in 0..5 {
        let t = 2.0 * PI * k as f64 / 5.0;
        pts.push([s * t.cos(), s * t.sin(), z0]);
    }
    for k in 0..5 {
        let t = 2.0 * PI * (k as f64 + 0.5) / 5.0;
        pts.push([s * t.cos(), s * t.sin(), -z0]);
    }
    pts.push([0.0, 0.0, -1.0]);

    let mut faces = Vec::with_capacity(20);
    for k in 0..5 {
        let (u0, u1) = (1 + k, 1 + (k + 1) % 5);
        let (l0, l1) = (6 + k, 6 + (k + 1) % 5);
        faces.push([0, u0, u1]);
        faces.push([u0, l0, u1]);
        faces.push([u1, l0, l1]);
        faces.push([11, l1, l0]);
    }
    for f in &mut faces {
        if !outward(&pts, *f) {
            f.swap(1, 2);
        }
    }

    for _ in 0..levels {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3 / 2);
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let mut mid = |i: usize, j: usize| -> usize {
                let key = (i.min(j), i.max(j));
                *midpoint.entry(key).or_insert_with(|| {
                    let (p, q) = (pts[i], pts[j]);
                    let m = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                    let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                    pts.push([m[0] / n, m[1] / n, m[2] / n]);
                    pts.len() - 1
                })
            };
            let ab = mid(a, b);
            let bc = mid(b, c);
            let ca = mid(c, a);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
        relax_on_sphere(&mut pts, &faces, RELAX_SWEEPS);
    }
    (pts, faces)
}

fn relax_on_sphere(pts: &mut [[f64; 3]], faces: &[[usize; 3]], sweeps: usize) {
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::with_capacity(6); pts.len()];
    for &[a, b, c] in faces {
        // each directed edge appears once on a closed oriented mesh
        nbrs[a].push(b);
        nbrs[b].push(c);
        nbrs[c].push(a);
    }
    let mut next = pts.to_vec();
    for _ in 0..sweeps {
        for (i, out) in next.iter_mut().enumerate() {
            let mut avg = [0.0; 3];
            for &j in &nbrs[i] {
                for (acc, v) in avg.iter_mut().zip(pts[j]) {
                    *acc += v;
                }
            }
            let inv = 0.5 / nbrs[i].len() as f64;
            let q = [0, 1, 2].map(|c| 0.5 * pts[i][c] + inv * avg[c]);
            let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            *out = q.map(|v| v / n);
        }
        pts.copy_from_slice(&next);
    }
}

fn outward(pts: &[[f64; 3]], [a, b, c]: [usize; 3]) -> bool {
    let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
    let e1 = [pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]];
    let e2 = [pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]];
    let n = [e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]];
    n[0] * (pa[0] + pb[0] + pc[0]) + n[1] * (pa[1] + pb[1] + pc[1]) + n[2] * (pa[2] + pb[2] + pc[2]) > 0.0
}

/// Structured torus grid: `4 * 2^subdiv` segments around the tube and a
/// proportional number around the main circle.
fn torus_grid(major: f64, minor: f64, subdiv: u32) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let nv = 4usize << subdiv;
    let nu = ((nv as f64 * major / minor).round() as usize).max(3);
    let mut pts = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * PI * i as f64 / nu as f64;
        for j in 0..nv {
            let v = 2.0 * PI * j as f64 / nv as f64;
            let rho = major + minor * v.cos();
            pts.push([rho * u.cos(), rho * u.sin(), minor * v.sin()]);
        }
    }
    let idx = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (p00, p10, p11, p01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([p00, p10, p11]);
            faces.push([p00, p11, p01]);
        }
    }
    (pts, faces)
}

/// Real spherical harmonic `Y_l^m` (orthonormal on the unit sphere, `m >= 0`
/// cosine family) evaluated at a unit vector.
pub fn real_sph_harm(l: u32, m: u32, u: [f64; 3]) -> f64 {
    let cos_theta = u[2].clamp(-1.0, 1.0);
    let phi = u[1].atan2(u[0]);
    let norm = sph_harm_norm(l, m);
    let azimuthal = if m == 0 { 1.0 } else { (m as f64 * phi).cos() };
    norm * assoc_legendre(l, m, cos_theta) * azimuthal
}

fn sph_harm_norm(l: u32, m: u32) -> f64 {
    // (l-m)!/(l+m)! as a running product
    let mut ratio = 1.0;
    for i in (l - m + 1)..=(l + m) {
        ratio /= i as f64;
    }
    let base = ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt();
    if m == 0 {
        base
    } else {
        base * 2f64.sqrt()
    }
}

/// Associated Legendre function `P_l^m(x)` without the Condon-Shortley phase.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    assert!(m <= l, "assoc_legendre needs m <= l");
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        pll = ((2 * ll - 1) as f64 * x * pmmp1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `max |Y_l^m|` over the sphere, from a dense polar-angle scan (the
/// azimuthal factor peaks at 1).
pub fn real_sph_harm_max(l: u32, m: u32) -> f64 {
    const SAMPLES: usize = 4001;
    let norm = sph_harm_norm(l, m);
    (0..SAMPLES)
        .map(|i| {
            let theta = PI * i as f64 / (SAMPLES - 1) as f64;
            (norm * assoc_legendre(l, m, theta.cos())).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let m = generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, 0).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (12, 20));
        for p in m.positions() {
            assert!((p.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn subdivision_counts_follow_vertex_edge_recurrence() {
        let (mut v, mut e, mut f) = (12usize, 30usize, 20usize);
        for s in 0..=4 {
            let m = generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, s).unwrap();
            assert_eq!((m.vertex_count(), m.face_count(), m.edge_count()), (v, f, e));
            assert_eq!(m.euler_characteristic(), 2);
            v += e;
            e = 2 * e + 3 * f;
            f *= 4;
        }
        let m = generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, 4).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (2562, 5120));
    }

    #[test]
    fn torus_is_genus_one() {
        for s in 0..3 {
            let m = generate::<f64>(&ShapeSpec::Torus { major: 2.0, minor: 0.5 }, s).unwrap();
            assert_eq!(m.euler_characteristic(), 0);
            assert!(m.signed_volume() > 0.0);
        }
    }

    #[test]
    fn generated_meshes_enclose_positive_volume() {
        let shapes = [
            ShapeSpec::Sphere { radius: 2.0 },
            ShapeSpec::Ellipsoid { a: 1.0, b: 0.7, c: 1.5 },
            ShapeSpec::PerturbedSphere { l: 3, m: 2, delta: 0.1 },
        ];
        for s in shapes {
            let m = generate::<f64>(&s, 2).unwrap();
            assert!(m.signed_volume() > 0.0, "{s:?}");
            assert_eq!(m.euler_characteristic(), 2);
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        for s in [
            ShapeSpec::Sphere { radius: 0.0 },
            ShapeSpec::Ellipsoid { a: 1.0, b: -1.0, c: 1.0 },
            ShapeSpec::PerturbedSphere { l: 1, m: 2, delta: 0.1 },
            ShapeSpec::PerturbedSphere { l: 2, m: 0, delta: 2.0 },
            ShapeSpec::Torus { major: 0.5, minor: 0.5 },
        ] {
            assert!(generate::<f64>(&s, 1).is_err(), "{s:?}");
        }
        assert!(generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, MAX_SUBDIV + 1).is_err());
    }

    #[test]
    fn spherical_harmonics_are_orthonormal() {
        // midpoint product rule in (theta, phi)
        let (nt, np) = (200, 400);
        let mut pts = Vec::with_capacity(nt * np);
        for i in 0..nt {
            let t = PI * (i as f64 + 0.5) / nt as f64;
            for j in 0..np {
                let p = 2.0 * PI * (j as f64 + 0.5) / np as f64;
                pts.push(([t.sin() * p.cos(), t.sin() * p.sin(), t.cos()], t.sin() * (PI / nt as f64) * (2.0 * PI / np as f64)));
            }
        }
        let pairs = [((2, 0), (2, 0)), ((3, 1), (3, 1)), ((2, 0), (3, 1)), ((1, 1), (1, 0))];
        for ((l1, m1), (l2, m2)) in pairs {
            let s: f64 = pts.iter().map(|&(u, w)| real_sph_harm(l1, m1, u) * real_sph_harm(l2, m2, u) * w).sum();
            let want = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!((s - want).abs() < 1e-4, "<Y{l1}{m1},Y{l2}{m2}> = {s}");
        }
    }

    #[test]
    fn y20_peak() {
        let want = (5.0 / (4.0 * PI)).sqrt();
        assert!((real_sph_harm_max(2, 0) - want).abs() < 1e-12);
    }
}
