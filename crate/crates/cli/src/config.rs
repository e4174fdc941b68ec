use crate::error::{CliError, CliResult};
use serde::Deserialize;
use std::path::Path;

/// Resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub r_max: f64,
    pub n: usize,
    /// Level count; `None` lets `invert` take every row of the dataset.
    pub levels: Option<usize>,
    /// Bound states are sought below `q(r_max) - margin`.
    pub margin: f64,
    pub magnitude_cap: f64,
    /// Digits after the decimal point in CSV output.
    pub precision: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r_max: 20.0,
            n: 4001,
            levels: None,
            margin: 5.0,
            magnitude_cap: 1e8,
            precision: 12,
        }
    }
}

/// Optional keys of a JSON config file.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub r_max: Option<f64>,
    pub n: Option<usize>,
    #[serde(rename = "J")]
    pub levels: Option<usize>,
    pub margin: Option<f64>,
    pub magnitude_cap: Option<f64>,
    pub precision: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }
}

impl RunConfig {
    /// Defaults, then the file, then the flags.
    pub fn resolve(file: Option<&ConfigFile>, flags: &ConfigFile) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        for layer in file.into_iter().chain(std::iter::once(flags)) {
            if let Some(v) = layer.r_max {
                cfg.r_max = v;
            }
            if let Some(v) = layer.n {
                cfg.n = v;
            }
            if let Some(v) = layer.levels {
                cfg.levels = Some(v);
            }
            if let Some(v) = layer.margin {
                cfg.margin = v;
            }
            if let Some(v) = layer.magnitude_cap {
                cfg.magnitude_cap = v;
            }
            if let Some(v) = layer.precision {
                cfg.precision = v;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return Err(CliError::usage(format!("r_max must be positive, got {}", self.r_max)));
        }
        if self.n < 2 {
            return Err(CliError::usage(format!("n must be at least 2, got {}", self.n)));
        }
        if self.levels == Some(0) {
            return Err(CliError::usage("J must be at least 1"));
        }
        if !(self.margin.is_finite() && self.margin >= 0.0) {
            return Err(CliError::usage(format!("margin must be nonnegative, got {}", self.margin)));
        }
        if !(self.magnitude_cap > 1.0) {
            return Err(CliError::usage(format!("magnitude cap must exceed 1, got {}", self.magnitude_cap)));
        }
        if self.precision > 17 {
            return Err(CliError::usage(format!("precision above 17 digits is meaningless, got {}", self.precision)));
        }
        Ok(())
    }

    pub fn require_levels(&self) -> CliResult<usize> {
        self.levels.ok_or_else(|| CliError::usage("--J is required"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ConfigFile {
            r_max: Some(30.0),
            n: Some(2001),
            precision: Some(8),
            ..Default::default()
        };
        let flags = ConfigFile {
            n: Some(1001),
            levels: Some(4),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(&file), &flags).unwrap();
        assert_eq!(cfg.r_max, 30.0);
        assert_eq!(cfg.n, 1001);
        assert_eq!(cfg.levels, Some(4));
        assert_eq!(cfg.precision, 8);
        assert_eq!(cfg.margin, 5.0);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = |f: ConfigFile| RunConfig::resolve(None, &f).unwrap_err().exit_code();
        assert_eq!(bad(ConfigFile { levels: Some(0), ..Default::default() }), 2);
        assert_eq!(bad(ConfigFile { n: Some(1), ..Default::default() }), 2);
        assert_eq!(bad(ConfigFile { r_max: Some(-1.0), ..Default::default() }), 2);
    }

    #[test]
    fn parses_json_keys() {
        let f: ConfigFile = serde_json::from_str(r#"{"r_max": 25, "J": 3, "magnitude_cap": 1e6}"#).unwrap();
        assert_eq!(f.levels, Some(3));
        assert_eq!(f.magnitude_cap, Some(1e6));
        assert!(serde_json::from_str::<ConfigFile>(r#"{"rmax": 25}"#).is_err());
    }
}
