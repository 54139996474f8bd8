mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use pinchlab::curvature::CurvatureError;
use pinchlab::mesh::MeshError;
use pinchlab::pinching::PinchError;
use pinchlab::spectral::SpectralError;

use crate::args::{expand_config, Cli};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }
}

impl From<MeshError> for CliError {
    fn from(e: MeshError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CurvatureError> for CliError {
    fn from(e: CurvatureError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NonConvergence { .. } | SpectralError::SubspaceCollapsed { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PinchError> for CliError {
    fn from(e: PinchError) -> Self {
        match e {
            PinchError::Spectral(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
