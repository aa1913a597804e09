//! Command-line front end for `varheat-core`.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::commands::Rendered;
use crate::config::{ConfigError, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] varheat_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{failed} of {total} criteria failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Command-line settings that take precedence over the configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub truncation: Option<usize>,
    pub count: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn flag_error(flag: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { key: Some(flag.to_string()), line: None, message: message.into() }
}

impl Overrides {
    /// `--count` sets the number of eigenvalues and, for eigenfunctions,
    /// the modes `1..=count`.
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), ConfigError> {
        if let Some(n) = self.truncation {
            cfg.truncations = vec![n];
            cfg.check_series().map_err(|(_, msg)| flag_error("--N", msg))?;
        }
        if let Some(c) = self.count {
            if c == 0 {
                return Err(flag_error("--count", "at least 1"));
            }
            cfg.count = c;
            cfg.modes = (1..=c).collect();
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        Ok(())
    }
}

pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, ConfigError> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    overrides.apply(&mut cfg)?;
    Ok(cfg)
}

/// Data to `output` (or stdout), the figure beside it as `.svg`, notes to stderr.
pub fn emit(rendered: &Rendered, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            std::fs::write(path, &rendered.data)?;
            if let Some(svg) = &rendered.svg {
                std::fs::write(path.with_extension("svg"), svg)?;
            }
        }
        None => io::stdout().lock().write_all(rendered.data.as_bytes())?,
    }
    let mut err = io::stderr().lock();
    for n in &rendered.notes {
        writeln!(err, "{n}")?;
    }
    Ok(())
}
