//! Configuration, experiment runner and sweep orchestration for the `carlo`
//! command-line tool.

pub mod config;
pub mod error;
pub mod experiment;
pub mod manifest;
pub mod output;
pub mod presets;
pub mod svg;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{parse_config, parse_config_for, Mode, RunConfig};
pub use error::{CliError, CliResult, ErrorKind};
pub use experiment::{run_experiment, RunOptions};
pub use manifest::RunManifest;

/// Where a configuration comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    File(PathBuf),
    Preset(String),
}

impl Source {
    /// Default run-directory name.
    pub fn name(&self) -> String {
        match self {
            Source::File(p) => p.file_stem().map_or("run".into(), |s| s.to_string_lossy().into_owned()),
            Source::Preset(n) => n.clone(),
        }
    }
}

/// Reads and validates a configuration. A preset is a template: asking for
/// a different mode replaces its own. A file's `mode`, if present, must
/// match the requested one.
pub fn load_config(source: &Source, mode: Option<Mode>) -> CliResult<RunConfig> {
    match source {
        Source::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_config_for(&text, mode)?)
        }
        Source::Preset(name) => {
            let preset = presets::find(name).ok_or_else(|| {
                let names: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
                CliError::validation(format!("unknown preset `{name}`; available: {}", names.join(", ")))
            })?;
            let text = match mode {
                Some(_) => {
                    let mut table: toml::Table = preset.text.parse().expect("presets are valid TOML");
                    table.remove("mode");
                    toml::to_string(&table).expect("tables always serialise")
                }
                None => preset.text.to_string(),
            };
            Ok(parse_config_for(&text, mode)?)
        }
    }
}

/// `--out` if given, else `<root>/<name>`.
pub fn output_dir(out: Option<&Path>, root: &Path, name: &str) -> PathBuf {
    out.map_or_else(|| root.join(name), Path::to_path_buf)
}
