use approx::assert_relative_eq;
use nalgebra::{DMatrix, SymmetricEigen};

use pinchlab::curvature::vertex_geometry;
use pinchlab::mesh::{format_mesh, generate, load_mesh, parse_mesh, save_mesh, AreaScheme, MeshFormat, ShapeSpec};
use pinchlab::pinching::{fibonacci_sphere, full_report, hausdorff_to_sphere, PinchOptions, SphereModel};
use pinchlab::spectral::{assemble_mass, assemble_stiffness, lowest_spectrum, SolverOptions};
use pinchlab::{Mesh, Mesh32, Point, Vec3};

fn dense_spectrum(mesh: &Mesh) -> Vec<f64> {
    let k = assemble_stiffness(mesh).to_dense();
    let m = assemble_mass(mesh, AreaScheme::MixedVoronoi).diagonal();
    let n = m.len();
    let a = DMatrix::from_fn(n, n, |i, j| k[i][j] / (m[i] * m[j]).sqrt());
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn sparse_solver_matches_dense_oracle() {
    for shape in [
        ShapeSpec::Sphere { radius: 1.0 },
        ShapeSpec::Ellipsoid { a: 1.0, b: 0.8, c: 1.4 },
        ShapeSpec::Torus { major: 2.0, minor: 0.7 },
    ] {
        let mesh = generate::<f64>(&shape, 1).unwrap();
        let dense = dense_spectrum(&mesh);
        assert!(dense[0].abs() < 1e-10);
        let s = lowest_spectrum(
            &assemble_stiffness(&mesh),
            &assemble_mass(&mesh, AreaScheme::MixedVoronoi),
            6,
            &SolverOptions::default().with_tol(1e-10),
        )
        .unwrap();
        for (pair, &exact) in s.pairs.iter().zip(&dense[1..]) {
            assert_relative_eq!(pair.lambda, exact, max_relative = 1e-8);
        }
    }
}

#[test]
fn spheroid_splits_triple_eigenvalue_two_plus_one() {
    let mesh = generate::<f64>(&ShapeSpec::Ellipsoid { a: 1.0, b: 1.0, c: 1.2 }, 3).unwrap();
    let s = lowest_spectrum(
        &assemble_stiffness(&mesh),
        &assemble_mass(&mesh, AreaScheme::MixedVoronoi),
        3,
        &SolverOptions::default(),
    )
    .unwrap();
    let l: Vec<f64> = s.pairs.iter().map(|p| p.lambda).collect();
    let gaps = [(l[1] - l[0]) / l[1], (l[2] - l[1]) / l[2]];
    let (pair_gap, split_gap) = if gaps[0] < gaps[1] { (gaps[0], gaps[1]) } else { (gaps[1], gaps[0]) };
    assert!(pair_gap < 1e-6, "{l:?}");
    assert!(split_gap > 0.02, "{l:?}");
}

#[test]
fn spheroid_pole_curvature() {
    // x² + y² + z²/4 = 1: both principal curvatures at (0, 0, 2) equal c/a² = 2
    let mut prev = f64::INFINITY;
    for s in [3, 4, 5] {
        let mesh = generate::<f64>(&ShapeSpec::Ellipsoid { a: 1.0, b: 1.0, c: 2.0 }, s).unwrap();
        assert!((mesh.positions()[0] - Point::new(0.0, 0.0, 2.0)).norm() < 1e-12);
        let g = vertex_geometry(&mesh)[0];
        let err = (g.mean - 2.0).abs().max((g.gauss - 4.0).abs() / 2.0);
        assert!(err < 0.05, "subdiv {s}: H {} K {}", g.mean, g.gauss);
        assert!(err < prev);
        prev = err;
        assert_relative_eq!(g.normal.z, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn hausdorff_matches_point_cloud_brute_force() {
    let mesh = generate::<f64>(&ShapeSpec::Ellipsoid { a: 1.0, b: 0.9, c: 1.25 }, 3).unwrap();
    let model = SphereModel::new(Vec3::zero(), 1.05).unwrap();
    let fast = hausdorff_to_sphere(&mesh, &model, 4000).unwrap();

    let mut surface = Vec::new();
    let m = 6;
    for f in 0..mesh.face_count() {
        let [a, b, c] = mesh.triangle(f);
        for i in 0..=m {
            for j in 0..=(m - i) {
                let (u, v) = (i as f64 / m as f64, j as f64 / m as f64);
                surface.push(a + (b - a) * u + (c - a) * v);
            }
        }
    }
    let sphere = fibonacci_sphere(20_000, Vec3::zero(), 1.05);
    let one_way = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|p| to.iter().map(|q| (*p - *q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    let brute = one_way(&surface, &sphere).max(one_way(&sphere, &surface));
    assert_relative_eq!(fast, brute, max_relative = 0.05);
}

#[test]
fn single_precision_pipeline() {
    let mesh: Mesh32 = generate(&ShapeSpec::Sphere { radius: 1.0 }, 3).unwrap();
    let s = lowest_spectrum(
        &assemble_stiffness(&mesh),
        &assemble_mass(&mesh, AreaScheme::MixedVoronoi),
        3,
        &SolverOptions::default().with_tol(1e-4),
    )
    .unwrap();
    for p in &s.pairs {
        assert!((p.lambda - 2.0).abs() < 0.03, "{}", p.lambda);
    }
    let r = full_report(&mesh, 1, 2.0, &PinchOptions { solver: SolverOptions::default().with_tol(1e-3), ..Default::default() })
        .unwrap();
    assert!(r.deficit.abs() <= 0.05 * 2.0 * r.norm_hk2p * r.norm_hk2p);
}

#[test]
fn mesh_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = generate::<f64>(&ShapeSpec::PerturbedSphere { l: 3, m: 2, delta: 0.1 }, 2).unwrap();
    for (name, format) in [("m.off", MeshFormat::Off), ("m.obj", MeshFormat::Obj)] {
        let path = dir.path().join(name);
        save_mesh(&mesh, &path, format).unwrap();
        let back: Mesh = load_mesh(&path, format).unwrap();
        assert_eq!(back.faces(), mesh.faces());
        for (p, q) in back.positions().iter().zip(mesh.positions()) {
            assert_eq!(p, q);
        }
        assert_eq!(back.name(), Some("m"));
        let reparsed: Mesh = parse_mesh(&format_mesh(&back, format), format).unwrap();
        assert_eq!(reparsed.positions(), back.positions());
    }
}
