use std::fs;
use std::path::{Path, PathBuf};

use hardylab_core::{LabError, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_GRID_SIZE: usize = 1 << 14;
pub const MIN_GRID_SIZE: usize = 256;

/// Settings read from `--config`; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid_size: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    /// Function specs: registry names or CSV paths.
    pub functions: Vec<String>,
    pub g: Option<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub delta: Option<f64>,
    pub strategy: Option<String>,
    pub schedule: Option<Vec<usize>>,
    pub stage: Option<usize>,
    pub bound: Option<f64>,
    pub orders: Option<Vec<usize>>,
    pub eps_schedule: Option<Vec<f64>>,
    pub width_schedule: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| LabError::Format(format!("config {}: {e}", path.display())))
    }

    /// Overlays flag values; empty or absent flags keep the file's values.
    pub fn merged(mut self, flags: RunConfig) -> Result<Self> {
        macro_rules! take {
            ($($f:ident),*) => { $( if flags.$f.is_some() { self.$f = flags.$f; } )* };
        }
        take!(grid_size, tol, out, g, a, b, delta, strategy, schedule, stage, bound, orders, eps_schedule, width_schedule);
        if !flags.functions.is_empty() {
            self.functions = flags.functions;
        }
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if let Some(n) = self.grid_size {
            if n < MIN_GRID_SIZE || !n.is_power_of_two() {
                return Err(LabError::InvalidGrid(n, MIN_GRID_SIZE));
            }
        }
        for (name, v) in [("tol", self.tol), ("delta", self.delta), ("bound", self.bound)] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(LabError::BadParameter(format!("{name} must be positive, got {x}")));
                }
            }
        }
        Ok(())
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size.unwrap_or(DEFAULT_GRID_SIZE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig = serde_json::from_str(r#"{"grid_size": 1024, "tol": 0.1, "functions": ["z"]}"#).unwrap();
        let flags = RunConfig { tol: Some(0.01), ..RunConfig::default() };
        let merged = file.merged(flags).unwrap();
        assert_eq!(merged.grid_size(), 1024);
        assert_eq!(merged.tol, Some(0.01));
        assert_eq!(merged.functions, vec!["z".to_string()]);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad = RunConfig { grid_size: Some(100), ..RunConfig::default() };
        assert!(matches!(RunConfig::default().merged(bad), Err(LabError::InvalidGrid(100, 256))));
        let bad = RunConfig { tol: Some(-1.0), ..RunConfig::default() };
        assert!(RunConfig::default().merged(bad).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"nope": 1}"#).is_err());
        assert_eq!(RunConfig::default().grid_size(), DEFAULT_GRID_SIZE);
    }
}
