use std::collections::HashMap;

use crate::mesh::MeshError;
use crate::{Real, Vec3};

/// Closed, consistently oriented, connected triangle surface in 3-space.
///
/// Faces are index triples, counterclockwise when seen from outside. Every
/// constructor validates the invariants, so a `TriMesh` value is always a
/// valid closed surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh<T> {
    positions: Vec<Vec3<T>>,
    faces: Vec<[usize; 3]>,
    name: Option<String>,
}

/// Relative area threshold below which a triangle counts as degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-12;

impl<T: Real> TriMesh<T> {
    pub fn new(positions: Vec<Vec3<T>>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        validate(&positions, &faces)?;
        Ok(Self { positions, faces, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn positions(&self) -> &[Vec3<T>] {
        &self.positions
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Every edge of a closed triangle mesh is shared by two faces.
    pub fn edge_count(&self) -> usize {
        3 * self.faces.len() / 2
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn triangle(&self, f: usize) -> [Vec3<T>; 3] {
        let [a, b, c] = self.faces[f];
        [self.positions[a], self.positions[b], self.positions[c]]
    }

    pub fn face_area(&self, f: usize) -> T {
        let [a, b, c] = self.triangle(f);
        (b - a).cross(c - a).norm() * T::half()
    }

    /// Unnormalized face normal (twice the area vector).
    pub fn face_area_vector(&self, f: usize) -> Vec3<T> {
        let [a, b, c] = self.triangle(f);
        (b - a).cross(c - a)
    }

    /// Signed enclosed volume; positive when faces wind counterclockwise
    /// seen from outside.
    pub fn signed_volume(&self) -> T {
        let six = T::lit(6.0);
        self.faces
            .iter()
            .map(|&[a, b, c]| {
                let (pa, pb, pc) = (self.positions[a], self.positions[b], self.positions[c]);
                pa.dot(pb.cross(pc)) / six
            })
            .sum()
    }

    /// Applies `x -> scale * (x + shift)` to every vertex. Connectivity is
    /// untouched, so validity is preserved for any `scale > 0`.
    pub fn transformed(&self, scale: T, shift: Vec3<T>) -> Self {
        Self {
            positions: self.positions.iter().map(|&p| (p + shift) * scale).collect(),
            faces: self.faces.clone(),
            name: self.name.clone(),
        }
    }

    pub fn scaled(&self, scale: T) -> Self {
        self.transformed(scale, Vec3::zero())
    }

    pub fn translated(&self, shift: Vec3<T>) -> Self {
        self.transformed(T::one(), shift)
    }

    /// Returns the mesh with positions replaced, keeping connectivity.
    pub fn with_positions(&self, positions: Vec<Vec3<T>>) -> Result<Self, MeshError> {
        let mut out = Self::new(positions, self.faces.clone())?;
        out.name = self.name.clone();
        Ok(out)
    }

    /// Vertex-to-vertex adjacency, each list sorted ascending.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &[a, b, c] in &self.faces {
            for (i, j) in [(a, b), (b, c), (c, a)] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Converts to another scalar type (validation is re-run).
    pub fn cast<U: Real>(&self) -> Result<TriMesh<U>, MeshError> {
        let positions = self
            .positions
            .iter()
            .map(|p| Vec3::new(U::lit(p.x.to_f64_lossy()), U::lit(p.y.to_f64_lossy()), U::lit(p.z.to_f64_lossy())))
            .collect();
        let mut out = TriMesh::new(positions, self.faces.clone())?;
        out.name = self.name.clone();
        Ok(out)
    }
}

fn validate<T: Real>(positions: &[Vec3<T>], faces: &[[usize; 3]]) -> Result<(), MeshError> {
    let nv = positions.len();
    if faces.is_empty() {
        return Err(MeshError::Empty);
    }
    for (f, tri) in faces.iter().enumerate() {
        for &v in tri {
            if v >= nv {
                return Err(MeshError::IndexOutOfRange { face: f, index: v, vertices: nv });
            }
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(MeshError::Degenerate { face: f });
        }
    }
    if let Some(v) = positions.iter().position(|p| !p.is_finite()) {
        return Err(MeshError::NonFinite { vertex: v });
    }

    let mut used = vec![false; nv];
    for tri in faces {
        for &v in tri {
            used[v] = true;
        }
    }
    if let Some(v) = used.iter().position(|u| !u) {
        return Err(MeshError::UnreferencedVertex { vertex: v });
    }

    // directed edge -> face using it
    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3);
    for (f, &[a, b, c]) in faces.iter().enumerate() {
        for e in [(a, b), (b, c), (c, a)] {
            if let Some(&other) = directed.get(&e) {
                // The same directed edge in two faces is either a flipped
                // neighbour or a non-manifold fan.
                let undirected_uses = faces_on_edge(faces, e.0, e.1);
                if undirected_uses > 2 {
                    return Err(MeshError::NonManifoldEdge { a: e.0, b: e.1, faces: undirected_uses });
                }
                return Err(MeshError::Orientation { a: e.0, b: e.1, faces: (other, f) });
            }
            directed.insert(e, f);
        }
    }
    let mut edges: Vec<(usize, usize)> = directed.keys().copied().collect();
    edges.sort_unstable();
    for &(a, b) in &edges {
        if !directed.contains_key(&(b, a)) {
            return Err(MeshError::OpenEdge { a, b });
        }
    }

    // face adjacency components via union-find on shared edges
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (&(a, b), &f) in &directed {
        if a < b {
            let g = directed[&(b, a)];
            let (ra, rb) = (find(&mut parent, f), find(&mut parent, g));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let components = (0..faces.len()).filter(|&f| find(&mut parent, f) == f).count();
    if components > 1 {
        return Err(MeshError::Disconnected { components });
    }

    let areas: Vec<T> = faces
        .iter()
        .map(|&[a, b, c]| (positions[b] - positions[a]).cross(positions[c] - positions[a]).norm() * T::half())
        .collect();
    let mean = areas.iter().copied().sum::<T>() / T::from_count(areas.len());
    let threshold = mean * T::lit(DEGENERATE_AREA_RATIO);
    if let Some(f) = areas.iter().position(|&a| !(a > threshold)) {
        return Err(MeshError::Degenerate { face: f });
    }
    Ok(())
}

fn faces_on_edge(faces: &[[usize; 3]], a: usize, b: usize) -> usize {
    faces
        .iter()
        .filter(|tri| tri.contains(&a) && tri.contains(&b))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> (Vec<Vec3<f64>>, Vec<[usize; 3]>) {
        let p = vec![
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ];
        let f = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
        (p, f)
    }

    #[test]
    fn tetrahedron_is_valid() {
        let (p, f) = tetra();
        let m = TriMesh::new(p, f).unwrap();
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn missing_face_is_open() {
        let (p, mut f) = tetra();
        f.pop();
        assert!(matches!(TriMesh::new(p, f), Err(MeshError::OpenEdge { .. })));
    }

    #[test]
    fn flipped_face_is_orientation_error() {
        let (p, mut f) = tetra();
        f[3] = [1, 2, 3];
        assert!(matches!(TriMesh::new(p, f), Err(MeshError::Orientation { .. })));
    }

    #[test]
    fn two_tetrahedra_are_disconnected() {
        let (mut p, mut f) = tetra();
        let (p2, f2) = tetra();
        p.extend(p2.iter().map(|&q| q + Vec3::new(5.0, 0.0, 0.0)));
        f.extend(f2.iter().map(|t| [t[0] + 4, t[1] + 4, t[2] + 4]));
        assert!(matches!(TriMesh::new(p, f), Err(MeshError::Disconnected { components: 2 })));
    }

    #[test]
    fn collapsed_face_is_degenerate() {
        let (mut p, f) = tetra();
        p[3] = (p[1] + p[2]) * 0.5;
        // faces through 1,2,3 now have zero area
        assert!(matches!(TriMesh::new(p, f), Err(MeshError::Degenerate { .. })));
    }

    #[test]
    fn bad_index_rejected() {
        let (p, mut f) = tetra();
        f[0] = [0, 1, 9];
        assert!(matches!(TriMesh::new(p, f), Err(MeshError::IndexOutOfRange { .. })));
    }

    #[test]
    fn unused_vertex_rejected() {
        let (mut p, f) = tetra();
        p.push(Vec3::zero());
        assert!(matches!(TriMesh::new(p, f), Err(MeshError::UnreferencedVertex { vertex: 4 })));
    }
}
