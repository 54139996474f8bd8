use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved run configuration; its canonical JSON is hashed into every report.
pub struct Stamp {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
}

impl Stamp {
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&serde_json::json!({
            "command": self.command,
            "config": self.config,
            "version": VERSION,
        }))
        .expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn json<R: Serialize>(&self, result: &R) -> String {
        #[derive(Serialize)]
        struct Envelope<'a, R> {
            tool: &'static str,
            version: &'static str,
            command: &'static str,
            config_hash: String,
            seed: Option<u64>,
            config: &'a Value,
            result: &'a R,
        }
        let env = Envelope {
            tool: "pinchlab",
            version: VERSION,
            command: self.command,
            config_hash: self.hash(),
            seed: self.seed,
            config: &self.config,
            result,
        };
        let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
        s.push('\n');
        s
    }

    /// Prefixes CSV text with a `#` provenance line.
    pub fn csv(&self, body: &str) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".to_string());
        format!(
            "# pinchlab {VERSION} command={} config_hash={} seed={seed}\n{body}",
            self.command,
            self.hash()
        )
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}

pub struct PlotSpec<'a> {
    pub title: &'a str,
    pub x_column: usize,
    pub x_label: &'a str,
    pub y_columns: &'a [usize],
    pub log_y: bool,
}

/// Gnuplot script plotting columns of a comma-separated file with a header row.
pub fn gnuplot_script(csv: &Path, spec: &PlotSpec) -> String {
    let data = csv.display().to_string().replace('"', "\\\"");
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set datafile commentschars \"#\"\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set title \"{}\"\n", spec.title));
    s.push_str(&format!("set xlabel \"{}\"\n", spec.x_label));
    if spec.log_y {
        s.push_str("set logscale y\n");
    }
    s.push_str("set grid\n");
    let series: Vec<String> = spec
        .y_columns
        .iter()
        .map(|c| format!("\"{data}\" using {}:{c} with linespoints", spec.x_column))
        .collect();
    s.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
    s.push_str("pause -1\n");
    s
}
