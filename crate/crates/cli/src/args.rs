use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pinchlab", version, about = "First Laplace eigenvalue, higher mean curvatures and pinching diagnostics of closed surface meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a test surface and write it as OFF or OBJ.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Gen(GenArgs),
    /// Lowest nonzero eigenvalues of the cotangent Laplacian.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Reilly deficit, lemma checks and sphere-closeness diagnostics.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Pinch(PinchArgs),
    /// Refinement study over a range of subdivision levels.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Convergence(ConvergenceArgs),
    /// Per-vertex curvature table as CSV.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Geometry(GeometryArgs),
    /// Stiffness and mass matrices in MatrixMarket format.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Matrix(MatrixArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeKind {
    Sphere,
    Ellipsoid,
    #[value(alias = "perturbed-sphere")]
    Perturbed,
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ellipsoid,
    Perturbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[arg(long, value_enum)]
    pub shape: Option<ShapeKind>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub major: Option<f64>,
    #[arg(long)]
    pub minor: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// `key = value` file with defaults for any long flag.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(short = 'o', long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Relative residual tolerance of the eigensolver.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, hide = true)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long)]
    pub subdiv: Option<u32>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Mesh file (OFF or OBJ) used instead of a generated shape.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<u32>,
    /// Number of nonzero eigenvalues.
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PinchArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<u32>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Relative slack allowed in every inequality check.
    #[arg(long)]
    pub tol_disc: Option<f64>,
    /// Fibonacci samples on the model sphere.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Comma-separated family parameters.
    #[arg(long, value_name = "LIST")]
    pub t: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write a gnuplot script plotting the CSV output.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// A single level or an inclusive range `A..B`.
    #[arg(long, value_name = "A..B")]
    pub subdiv: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<u32>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub subdiv: Option<u32>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Expands `--config FILE` into `--key=value` tokens placed right after the
/// subcommand, so later command-line flags override them.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, crate::CliError> {
    let Some(sub) = argv.iter().skip(1).position(|a| !a.starts_with('-')).map(|i| i + 1) else {
        return Ok(argv);
    };
    let mut path = None;
    let mut iter = argv[sub + 1..].iter();
    while let Some(a) = iter.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            path = iter.next().cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| crate::CliError::Input(format!("{path}: {e}")))?;
    let tokens = config_tokens(&text)?;
    let mut out = argv[..=sub].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&argv[sub + 1..]);
    Ok(out)
}

pub fn config_tokens(text: &str) -> Result<Vec<String>, crate::CliError> {
    let mut tokens = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(crate::CliError::Usage(format!("config line {}: expected `key = value`", no + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() || key.starts_with('-') {
            return Err(crate::CliError::Usage(format!("config line {}: expected `key = value`", no + 1)));
        }
        if key == "config" {
            return Err(crate::CliError::Usage(format!("config line {}: nested config files are not supported", no + 1)));
        }
        tokens.push(format!("--{}={}", key.replace('_', "-"), value));
    }
    Ok(tokens)
}
