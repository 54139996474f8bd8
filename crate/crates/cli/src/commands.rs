use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use pinchlab::curvature::{delta_position_residual, geometry_csv, hsiung_minkowski_residual, vertex_geometry};
use pinchlab::mesh::{
    format_mesh, generate, load_mesh, normalize, save_mesh, AreaScheme, MeshFormat, ShapeSpec, MAX_SUBDIV,
};
use pinchlab::pinching::{
    full_report, reilly_deficit, sweep_csv, PinchOptions, SweepRow, DEFAULT_SAMPLES, DEFAULT_TOL_DISC,
};
use pinchlab::spectral::{assemble_mass, assemble_stiffness, first_eigenpair, lowest_spectrum, SolverOptions};
use pinchlab::{Mesh, Report};

use crate::args::{
    Command, ConvergenceArgs, Family, Format, GenArgs, GeometryArgs, MatrixArgs, PinchArgs, ShapeArgs, ShapeKind,
    SolverArgs, SpectrumArgs,
};
use crate::output::{gnuplot_script, write_output, PlotSpec, Stamp};
use crate::CliError;

const DEFAULT_SUBDIV: u32 = 4;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Pinch(a) => cmd_pinch(&a),
        Command::Convergence(a) => cmd_convergence(&a),
        Command::Geometry(a) => cmd_geometry(&a),
        Command::Matrix(a) => cmd_matrix(&a),
    }
}

fn shape_spec(a: &ShapeArgs, kind: ShapeKind) -> ShapeSpec {
    match kind {
        ShapeKind::Sphere => ShapeSpec::Sphere { radius: a.radius.unwrap_or(1.0) },
        ShapeKind::Ellipsoid => ShapeSpec::Ellipsoid {
            a: a.a.unwrap_or(1.0),
            b: a.b.unwrap_or(1.0),
            c: a.c.unwrap_or(1.0),
        },
        ShapeKind::Perturbed => ShapeSpec::PerturbedSphere {
            l: a.l.unwrap_or(2),
            m: a.m.unwrap_or(0),
            delta: a.delta.unwrap_or(0.1),
        },
        ShapeKind::Torus => ShapeSpec::Torus { major: a.major.unwrap_or(2.0), minor: a.minor.unwrap_or(0.5) },
    }
}

fn shape_json(spec: &ShapeSpec) -> serde_json::Value {
    match *spec {
        ShapeSpec::Sphere { radius } => json!({ "shape": "sphere", "radius": radius }),
        ShapeSpec::Ellipsoid { a, b, c } => json!({ "shape": "ellipsoid", "a": a, "b": b, "c": c }),
        ShapeSpec::PerturbedSphere { l, m, delta } => json!({ "shape": "perturbed", "l": l, "m": m, "delta": delta }),
        ShapeSpec::Torus { major, minor } => json!({ "shape": "torus", "major": major, "minor": minor }),
    }
}

fn shape_name(spec: &ShapeSpec) -> &'static str {
    match spec {
        ShapeSpec::Sphere { .. } => "sphere",
        ShapeSpec::Ellipsoid { .. } => "ellipsoid",
        ShapeSpec::PerturbedSphere { .. } => "perturbed",
        ShapeSpec::Torus { .. } => "torus",
    }
}

fn check_subdiv(s: u32) -> Result<u32, CliError> {
    if s > MAX_SUBDIV {
        return Err(CliError::Input(format!("subdiv {s} exceeds the limit {MAX_SUBDIV}")));
    }
    Ok(s)
}

fn check_positive(name: &str, v: f64) -> Result<f64, CliError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Input(format!("--{name} must be positive, got {v}")));
    }
    Ok(v)
}

fn check_order(k: usize) -> Result<usize, CliError> {
    if !(1..=2).contains(&k) {
        return Err(CliError::Input(format!("--k must be 1 or 2 on surfaces, got {k}")));
    }
    Ok(k)
}

enum Source {
    Shape(ShapeSpec, u32),
    File(PathBuf),
}

impl Source {
    fn resolve(shape: &ShapeArgs, input: Option<&PathBuf>, subdiv: Option<u32>) -> Result<Self, CliError> {
        match (input, shape.shape) {
            (Some(path), _) => Ok(Source::File(path.clone())),
            (None, Some(kind)) => {
                let spec = shape_spec(shape, kind);
                spec.validate()?;
                Ok(Source::Shape(spec, check_subdiv(subdiv.unwrap_or(DEFAULT_SUBDIV))?))
            }
            (None, None) => Err(CliError::Usage("either --shape or --input is required".to_string())),
        }
    }

    fn load(&self) -> Result<Mesh, CliError> {
        match self {
            Source::Shape(spec, s) => Ok(generate(spec, *s)?.with_name(shape_name(spec))),
            Source::File(path) => {
                let format = MeshFormat::from_path(path)
                    .ok_or_else(|| CliError::Input(format!("{}: unknown mesh extension (use .off or .obj)", path.display())))?;
                Ok(load_mesh(path, format)?)
            }
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Source::Shape(spec, s) => {
                let mut v = shape_json(spec);
                v["subdiv"] = json!(s);
                v
            }
            Source::File(path) => json!({ "input": path.display().to_string() }),
        }
    }
}

fn solver_options(a: &SolverArgs) -> Result<SolverOptions<f64>, CliError> {
    let mut opts = SolverOptions::default();
    if let Some(t) = a.tol {
        opts.tol = check_positive("tol", t)?;
    }
    if let Some(s) = a.seed {
        opts.seed = s;
    }
    opts.max_iter = a.max_iter;
    Ok(opts)
}

fn solver_json(o: &SolverOptions<f64>) -> serde_json::Value {
    json!({ "tol": o.tol, "seed": o.seed, "max_iter": o.max_iter })
}

fn cmd_gen(a: &GenArgs) -> Result<(), CliError> {
    let kind = a.shape.shape.ok_or_else(|| CliError::Usage("gen needs --shape".to_string()))?;
    let source = Source::resolve(&a.shape, None, a.subdiv)?;
    let mesh = source.load()?;
    let summary = format!(
        "shape {} vertices {} faces {} edges {} euler {}",
        shape_name(&shape_spec(&a.shape, kind)),
        mesh.vertex_count(),
        mesh.face_count(),
        mesh.edge_count(),
        mesh.euler_characteristic()
    );
    match &a.common.output {
        Some(path) => {
            let format = MeshFormat::from_path(path).unwrap_or(MeshFormat::Off);
            save_mesh(&mesh, path, format)?;
            println!("{summary}");
        }
        None => {
            write_output(None, &format_mesh(&mesh, MeshFormat::Off))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<(), CliError> {
    let source = Source::resolve(&a.shape, a.input.as_ref(), a.subdiv)?;
    let opts = solver_options(&a.solver)?;
    let count = a.count.unwrap_or(1);
    let format = a.format.unwrap_or(Format::Json);
    let stamp = Stamp {
        command: "spectrum",
        config: json!({ "mesh": source.json(), "count": count, "solver": solver_json(&opts) }),
        seed: Some(opts.seed),
    };
    let mesh = source.load()?;
    let stiffness = assemble_stiffness(&mesh);
    let mass = assemble_mass(&mesh, AreaScheme::MixedVoronoi);
    let spectrum = lowest_spectrum(&stiffness, &mass, count, &opts)?;
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                vertices: usize,
                faces: usize,
                #[serde(flatten)]
                spectrum: &'a pinchlab::spectral::SpectrumReport<f64>,
            }
            stamp.json(&Out { vertices: mesh.vertex_count(), faces: mesh.face_count(), spectrum: &spectrum.report() })
        }
        Format::Csv => {
            let mut body = String::from("index,lambda,residual\n");
            for (i, p) in spectrum.pairs.iter().enumerate() {
                body.push_str(&format!("{},{:e},{:e}\n", i + 1, p.lambda, p.residual));
            }
            stamp.csv(&body)
        }
    };
    write_output(a.common.output.as_deref(), &text)
}

fn parse_t_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--t: '{t}' is not a number")))
        })
        .collect()
}

fn family_member(family: Family, shape: &ShapeArgs, t: f64) -> ShapeSpec {
    match family {
        Family::Ellipsoid => ShapeSpec::Ellipsoid {
            a: shape.a.unwrap_or(1.0),
            b: shape.b.unwrap_or(1.0),
            c: shape.c.unwrap_or(1.0) * (1.0 + t),
        },
        Family::Perturbed => ShapeSpec::PerturbedSphere { l: shape.l.unwrap_or(2), m: shape.m.unwrap_or(0), delta: t },
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Ellipsoid => "ellipsoid",
        Family::Perturbed => "perturbed",
    }
}

#[derive(Serialize)]
struct MemberJson<'a> {
    t: f64,
    report: &'a Report,
}

fn cmd_pinch(a: &PinchArgs) -> Result<(), CliError> {
    let k = check_order(a.k.unwrap_or(1))?;
    let p = a.p.unwrap_or(2.0);
    if !(p >= 1.0 && p.is_finite()) {
        return Err(CliError::Input(format!("--p must be at least 1, got {p}")));
    }
    let opts = PinchOptions {
        tol_disc: check_positive("tol-disc", a.tol_disc.unwrap_or(DEFAULT_TOL_DISC))?,
        samples: a.samples.unwrap_or(DEFAULT_SAMPLES),
        solver: solver_options(&a.solver)?,
        einstein: true,
    };
    if opts.samples == 0 {
        return Err(CliError::Input("--samples must be positive".to_string()));
    }
    let common = json!({
        "k": k,
        "p": p,
        "tol_disc": opts.tol_disc,
        "samples": opts.samples,
        "solver": solver_json(&opts.solver),
    });

    if let Some(family) = a.family {
        let ts = parse_t_list(a.t.as_deref().ok_or_else(|| CliError::Usage("--family needs --t".to_string()))?)?;
        let subdiv = check_subdiv(a.subdiv.unwrap_or(DEFAULT_SUBDIV))?;
        let specs: Vec<ShapeSpec> = ts.iter().map(|&t| family_member(family, &a.shape, t)).collect();
        for s in &specs {
            s.validate()?;
        }
        let mut config = common;
        config["family"] = json!(family_name(family));
        config["t"] = json!(ts);
        config["subdiv"] = json!(subdiv);
        config["members"] = json!(specs.iter().map(shape_json).collect::<Vec<_>>());
        let stamp = Stamp { command: "pinch", config, seed: Some(opts.solver.seed) };
        let members = specs
            .par_iter()
            .zip(ts.par_iter())
            .map(|(spec, &t)| {
                let mesh = generate::<f64>(spec, subdiv)?.with_name(family_name(family));
                let report = full_report(&mesh, k, p, &opts)?;
                Ok((family_name(family).to_string(), Some(t), Some(subdiv), report))
            })
            .collect::<Result<Vec<SweepRow<f64>>, CliError>>()?;
        let text = match a.format.unwrap_or(Format::Csv) {
            Format::Csv => stamp.csv(&sweep_csv(&members)),
            Format::Json => stamp.json(
                &members
                    .iter()
                    .map(|(_, t, _, report)| MemberJson { t: t.unwrap_or_default(), report })
                    .collect::<Vec<_>>(),
            ),
        };
        write_output(a.common.output.as_deref(), &text)?;
        return emit_plot(
            a.plot.as_deref(),
            a.common.output.as_deref(),
            &PlotSpec {
                title: "pinching diagnostics along the family",
                x_column: 2,
                x_label: "t",
                y_columns: &[5, 6, 7, 8],
                log_y: false,
            },
        );
    }

    if a.t.is_some() {
        return Err(CliError::Usage("--t needs --family".to_string()));
    }
    let source = Source::resolve(&a.shape, a.input.as_ref(), a.subdiv)?;
    let mut config = common;
    config["mesh"] = source.json();
    let stamp = Stamp { command: "pinch", config, seed: Some(opts.solver.seed) };
    let mesh = source.load()?;
    let report = full_report(&mesh, k, p, &opts)?;
    let (shape, subdiv) = match &source {
        Source::Shape(spec, s) => (shape_name(spec).to_string(), Some(*s)),
        Source::File(path) => (
            path.file_stem().and_then(|s| s.to_str()).unwrap_or("mesh").to_string(),
            None,
        ),
    };
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => stamp.json(&report),
        Format::Csv => stamp.csv(&sweep_csv(&[(shape, None, subdiv, report)])),
    };
    write_output(a.common.output.as_deref(), &text)?;
    emit_plot(
        a.plot.as_deref(),
        a.common.output.as_deref(),
        &PlotSpec { title: "pinching diagnostics", x_column: 2, x_label: "t", y_columns: &[5, 6, 7, 8], log_y: false },
    )
}

fn emit_plot(plot: Option<&Path>, data: Option<&Path>, spec: &PlotSpec) -> Result<(), CliError> {
    let Some(plot) = plot else { return Ok(()) };
    let data = data.ok_or_else(|| CliError::Usage("--plot needs -o/--output for the data file".to_string()))?;
    write_output(Some(plot), &gnuplot_script(data, spec))
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("--subdiv: expected N or A..B, got '{s}'"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((check_subdiv(lo)?, check_subdiv(hi)?))
}

struct Level {
    subdiv: u32,
    vertices: usize,
    lambda1: f64,
    hm: f64,
    identity: f64,
    deficit: f64,
}

fn cmd_convergence(a: &ConvergenceArgs) -> Result<(), CliError> {
    let kind = a.shape.shape.ok_or_else(|| CliError::Usage("convergence needs --shape".to_string()))?;
    let spec = shape_spec(&a.shape, kind);
    spec.validate()?;
    let (lo, hi) = parse_range(a.subdiv.as_deref().unwrap_or("2..5"))?;
    let k = check_order(a.k.unwrap_or(1))?;
    let p = a.p.unwrap_or(2.0);
    if !(p >= 1.0 && p.is_finite()) {
        return Err(CliError::Input(format!("--p must be at least 1, got {p}")));
    }
    let opts = solver_options(&a.solver)?;
    let mut config = shape_json(&spec);
    config["subdiv"] = json!([lo, hi]);
    config["k"] = json!(k);
    config["p"] = json!(p);
    config["solver"] = solver_json(&opts);
    let stamp = Stamp { command: "convergence", config, seed: Some(opts.seed) };

    let levels = (lo..=hi)
        .map(|s| {
            let mesh = normalize(&generate::<f64>(&spec, s)?).mesh;
            let geom = vertex_geometry(&mesh);
            let stiffness = assemble_stiffness(&mesh);
            let mass = assemble_mass(&mesh, AreaScheme::MixedVoronoi);
            let lambda1 = first_eigenpair(&stiffness, &mass, &opts)?.lambda;
            Ok(Level {
                subdiv: s,
                vertices: mesh.vertex_count(),
                lambda1,
                hm: hsiung_minkowski_residual(&mesh, &geom, k)?.abs(),
                identity: delta_position_residual(&mesh, &geom, &stiffness, &mass.diagonal())?,
                deficit: reilly_deficit(&mesh, &geom, k, p, lambda1)?.deficit,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    // unit-area sphere: r² = 1/(4π), λ₁ = 2/r²
    let (reference, kind_note) = match spec {
        ShapeSpec::Sphere { .. } => (Some(8.0 * PI), "exact"),
        _ if levels.len() >= 2 => {
            let (f, c) = (levels[levels.len() - 1].lambda1, levels[levels.len() - 2].lambda1);
            (Some((4.0 * f - c) / 3.0), "richardson")
        }
        _ => (None, "none"),
    };

    let mut body = format!("# lambda1 reference: {kind_note}\n");
    body.push_str(
        "subdiv,vertices,lambda1,lambda1_error,hm_residual,identity_residual,deficit,lambda1_ratio,hm_ratio,identity_ratio\n",
    );
    let ratio = |prev: f64, cur: f64| if cur > 0.0 { format!("{:e}", prev / cur) } else { String::new() };
    let err = |l: &Level| reference.map(|r| (l.lambda1 - r).abs() / r);
    for (i, l) in levels.iter().enumerate() {
        let e = err(l);
        let (lr, hr, ir) = match i.checked_sub(1).map(|j| &levels[j]) {
            Some(prev) => (
                match (err(prev), e) {
                    (Some(pe), Some(ce)) => ratio(pe, ce),
                    _ => String::new(),
                },
                ratio(prev.hm, l.hm),
                ratio(prev.identity, l.identity),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        body.push_str(&format!(
            "{},{},{:e},{},{:e},{:e},{:e},{lr},{hr},{ir}\n",
            l.subdiv,
            l.vertices,
            l.lambda1,
            e.map(|e| format!("{e:e}")).unwrap_or_default(),
            l.hm,
            l.identity,
            l.deficit,
        ));
    }
    write_output(a.common.output.as_deref(), &stamp.csv(&body))?;
    emit_plot(
        a.plot.as_deref(),
        a.common.output.as_deref(),
        &PlotSpec { title: "refinement study", x_column: 1, x_label: "subdivision level", y_columns: &[4, 5, 6], log_y: true },
    )
}

fn cmd_geometry(a: &GeometryArgs) -> Result<(), CliError> {
    let mesh = Source::resolve(&a.shape, a.input.as_ref(), a.subdiv)?.load()?;
    write_output(a.common.output.as_deref(), &geometry_csv(&vertex_geometry(&mesh)))
}

fn cmd_matrix(a: &MatrixArgs) -> Result<(), CliError> {
    let prefix = a
        .common
        .output
        .as_ref()
        .ok_or_else(|| CliError::Usage("matrix needs -o/--output as a file prefix".to_string()))?;
    let mesh = Source::resolve(&a.shape, a.input.as_ref(), a.subdiv)?.load()?;
    let with_suffix = |s: &str| {
        let mut p = prefix.clone().into_os_string();
        p.push(s);
        PathBuf::from(p)
    };
    write_output(Some(&with_suffix(".stiffness.mtx")), &assemble_stiffness(&mesh).to_matrix_market())?;
    write_output(
        Some(&with_suffix(".mass.mtx")),
        &assemble_mass(&mesh, AreaScheme::MixedVoronoi).to_matrix_market(),
    )
}
