//! Distances between a mesh and a model sphere.

use rayon::prelude::*;

use crate::mesh::{measure, TriMesh};
use crate::pinching::{PinchError, SphereModel};
use crate::spectral::normalized_tol;
use crate::{Real, Vec3};

const LEAF_SIZE: usize = 4;

/// `max_v ||X_v − x₀| − r|`: the smallest ε for which every vertex lies in
/// the closed annulus of radii `r ± ε`. Fails when the mesh center of mass
/// is not at the model center.
pub fn annulus_epsilon<T: Real>(mesh: &TriMesh<T>, model: &SphereModel<T>) -> Result<T, PinchError> {
    let m = measure(mesh);
    let offset = (m.centroid - model.center).norm();
    if offset > normalized_tol::<T>() * m.total_area.sqrt() {
        return Err(PinchError::NotCentered { offset: offset.to_f64_lossy() });
    }
    Ok(mesh
        .positions()
        .iter()
        .map(|&x| ((x - model.center).norm() - model.radius).abs())
        .fold(T::zero(), T::max))
}

/// `count` near-uniform points on the sphere from the golden-angle spiral.
pub fn fibonacci_sphere<T: Real>(count: usize, center: Vec3<T>, radius: T) -> Vec<Vec3<T>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            center + Vec3::from_f64(rho * phi.cos(), rho * phi.sin(), z) * radius
        })
        .collect()
}

/// Largest distance from a sample of the model sphere to the mesh: every
/// ball `B(x, ε*)` centered on a sample meets the mesh.
pub fn density_epsilon<T: Real>(mesh: &TriMesh<T>, model: &SphereModel<T>, samples: usize) -> Result<T, PinchError> {
    if samples == 0 {
        return Err(PinchError::ZeroSamples);
    }
    let bvh = TriangleBvh::build(mesh);
    let points = fibonacci_sphere(samples, model.center, model.radius);
    Ok(points.par_iter().map(|&p| bvh.distance(p)).reduce(T::zero, T::max))
}

/// Hausdorff distance between the mesh and the model sphere: the larger of
/// the annulus and density epsilons.
pub fn hausdorff_to_sphere<T: Real>(mesh: &TriMesh<T>, model: &SphereModel<T>, samples: usize) -> Result<T, PinchError> {
    Ok(annulus_epsilon(mesh, model)?.max(density_epsilon(mesh, model, samples)?))
}

fn closest_on_triangle<T: Real>(p: Vec3<T>, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Vec3<T> {
    let zero = T::zero();
    let (ab, ac, ap) = (b - a, c - a, p - a);
    let (d1, d2) = (ab.dot(ap), ac.dot(ap));
    if d1 <= zero && d2 <= zero {
        return a;
    }
    let bp = p - b;
    let (d3, d4) = (ab.dot(bp), ac.dot(bp));
    if d3 >= zero && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= zero && d1 >= zero && d3 <= zero {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let (d5, d6) = (ab.dot(cp), ac.dot(cp));
    if d6 >= zero && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= zero && d2 >= zero && d6 <= zero {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= zero && d4 - d3 >= zero && d5 - d6 >= zero {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = T::one() / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

/// Exact Euclidean distance from `p` to the closed triangle `abc`.
pub fn point_triangle_distance<T: Real>(p: Vec3<T>, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    (p - closest_on_triangle(p, a, b, c)).norm()
}

#[derive(Debug, Clone)]
struct Node<T> {
    lo: Vec3<T>,
    hi: Vec3<T>,
    /// Leaf: offset into `order`; inner: index of the left child (right
    /// child follows its subtree).
    start: usize,
    count: usize,
    right: usize,
}

/// Axis-aligned bounding-volume hierarchy over the faces of a mesh for
/// nearest-distance queries.
#[derive(Debug, Clone)]
pub struct TriangleBvh<T> {
    tris: Vec<[Vec3<T>; 3]>,
    order: Vec<usize>,
    nodes: Vec<Node<T>>,
}

impl<T: Real> TriangleBvh<T> {
    pub fn build(mesh: &TriMesh<T>) -> Self {
        let tris: Vec<[Vec3<T>; 3]> = (0..mesh.face_count()).map(|f| mesh.triangle(f)).collect();
        let third = T::one() / T::lit(3.0);
        let centers: Vec<Vec3<T>> = tris.iter().map(|t| (t[0] + t[1] + t[2]) * third).collect();
        let mut order: Vec<usize> = (0..tris.len()).collect();
        let mut nodes = Vec::with_capacity(2 * tris.len() / LEAF_SIZE + 1);
        if !tris.is_empty() {
            Self::split(&tris, &centers, &mut order, 0, &mut nodes);
        }
        Self { tris, order, nodes }
    }

    fn split(
        tris: &[[Vec3<T>; 3]],
        centers: &[Vec3<T>],
        order: &mut [usize],
        offset: usize,
        nodes: &mut Vec<Node<T>>,
    ) -> usize {
        let first = tris[order[0]][0];
        let (mut lo, mut hi) = (first, first);
        let (mut clo, mut chi) = (centers[order[0]], centers[order[0]]);
        for &t in order.iter() {
            for &v in &tris[t] {
                lo = lo.component_min(v);
                hi = hi.component_max(v);
            }
            clo = clo.component_min(centers[t]);
            chi = chi.component_max(centers[t]);
        }
        let id = nodes.len();
        nodes.push(Node { lo, hi, start: offset, count: order.len(), right: 0 });
        if order.len() <= LEAF_SIZE {
            return id;
        }
        let ext = chi - clo;
        let axis = if ext.x >= ext.y && ext.x >= ext.z {
            0
        } else if ext.y >= ext.z {
            1
        } else {
            2
        };
        let mid = order.len() / 2;
        order.select_nth_unstable_by(mid, |&a, &b| {
            centers[a][axis].partial_cmp(&centers[b][axis]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        let (left, right) = order.split_at_mut(mid);
        Self::split(tris, centers, left, offset, nodes);
        let r = Self::split(tris, centers, right, offset + mid, nodes);
        nodes[id].count = 0;
        nodes[id].right = r;
        id
    }

    fn box_distance_squared(node: &Node<T>, p: Vec3<T>) -> T {
        let zero = T::zero();
        let d = Vec3::new(
            (node.lo.x - p.x).max(zero).max(p.x - node.hi.x),
            (node.lo.y - p.y).max(zero).max(p.y - node.hi.y),
            (node.lo.z - p.z).max(zero).max(p.z - node.hi.z),
        );
        d.norm_squared()
    }

    /// Distance from `p` to the nearest face.
    pub fn distance(&self, p: Vec3<T>) -> T {
        let mut best = T::infinity();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let Some(node) = self.nodes.get(id) else { continue };
            if Self::box_distance_squared(node, p) >= best {
                continue;
            }
            if node.count > 0 {
                for &t in &self.order[node.start..node.start + node.count] {
                    let [a, b, c] = self.tris[t];
                    best = best.min((p - closest_on_triangle(p, a, b, c)).norm_squared());
                }
            } else {
                let (l, r) = (id + 1, node.right);
                let (dl, dr) = (
                    Self::box_distance_squared(&self.nodes[l], p),
                    Self::box_distance_squared(&self.nodes[r], p),
                );
                // visit the nearer child first
                if dl <= dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        best.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate, normalize, ShapeSpec};

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    #[test]
    fn triangle_distance_regions() {
        let (a, b, c) = (v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0));
        assert!((point_triangle_distance(v(0.2, 0.2, 0.5), a, b, c) - 0.5).abs() < 1e-15);
        assert!((point_triangle_distance(v(-1.0, -1.0, 0.0), a, b, c) - 2f64.sqrt()).abs() < 1e-15);
        assert!((point_triangle_distance(v(0.5, -2.0, 0.0), a, b, c) - 2.0).abs() < 1e-15);
        assert!((point_triangle_distance(v(1.0, 1.0, 0.0), a, b, c) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((point_triangle_distance(v(3.0, 0.0, 4.0), a, b, c) - 20f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bvh_matches_linear_scan() {
        let mesh = generate::<f64>(&ShapeSpec::PerturbedSphere { l: 3, m: 2, delta: 0.2 }, 3).unwrap();
        let bvh = TriangleBvh::build(&mesh);
        for p in fibonacci_sphere(200, v(0.1, -0.2, 0.0), 1.7) {
            let brute = (0..mesh.face_count())
                .map(|f| {
                    let [a, b, c] = mesh.triangle(f);
                    point_triangle_distance(p, a, b, c)
                })
                .fold(f64::INFINITY, f64::min);
            assert!((bvh.distance(p) - brute).abs() < 1e-14);
        }
    }

    #[test]
    fn fibonacci_points_on_sphere() {
        let pts = fibonacci_sphere(500, v(1.0, 2.0, 3.0), 0.5);
        assert_eq!(pts.len(), 500);
        assert!(pts.iter().all(|p| ((*p - v(1.0, 2.0, 3.0)).norm() - 0.5).abs() < 1e-14));
        let mean = pts.iter().fold(Vec3::zero(), |acc, p| acc + *p) / 500.0;
        assert!((mean - v(1.0, 2.0, 3.0)).norm() < 1e-3);
    }

    #[test]
    fn sphere_is_close_to_itself() {
        let mesh = normalize(&generate::<f64>(&ShapeSpec::Sphere { radius: 1.0 }, 4).unwrap()).mesh;
        let r = mesh.positions()[0].norm();
        let model = SphereModel::new(Vec3::zero(), r).unwrap();
        let a = annulus_epsilon(&mesh, &model).unwrap();
        let d = density_epsilon(&mesh, &model, 2000).unwrap();
        assert!(a <= 0.01 * r && d <= 0.02 * r);
        assert_eq!(hausdorff_to_sphere(&mesh, &model, 2000).unwrap(), a.max(d));
        assert!(matches!(density_epsilon(&mesh, &model, 0), Err(PinchError::ZeroSamples)));
        let moved = mesh.translated(v(0.05, 0.0, 0.0));
        assert!(matches!(annulus_epsilon(&moved, &model), Err(PinchError::NotCentered { .. })));
    }
}
