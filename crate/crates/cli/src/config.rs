use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad override `{0}`: {1}")]
    Override(String, String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub x_step: f64,
    pub t_step: f64,
    pub x_radius: f64,
    pub t_radius: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { x_step: 0.02, t_step: 0.02, x_radius: 6.5, t_radius: 1.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Identities that hold exactly up to rounding.
    pub equality: f64,
    /// Identities between discretized quantities.
    pub quadrature: f64,
    pub winding_residual: f64,
    /// Mismatch of the Taylor map homomorphism on the grid.
    pub taylor_fit: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { equality: 1e-10, quadrature: 1e-6, winding_residual: 0.05, taylor_fit: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub k_values: Vec<u32>,
    pub max_jet_order: usize,
    pub grid: GridConfig,
    pub tolerances: ToleranceConfig,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            k_values: vec![1, 2, 3],
            max_jet_order: 4,
            grid: GridConfig::default(),
            tolerances: ToleranceConfig::default(),
            trials: 20,
            seed: 7,
        }
    }
}

impl SuiteConfig {
    /// Reads the file, applies `key=value` overrides on dotted paths, then
    /// validates.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.display().to_string(), source })?;
        let parsed: SuiteConfig = serde_json::from_str(&text)?;
        let mut value = serde_json::to_value(parsed)?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let config: SuiteConfig = serde_json::from_value(value)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return bad("k_values must be a nonempty list of positive integers");
        }
        let g = &self.grid;
        if ![g.x_step, g.t_step, g.x_radius, g.t_radius].iter().all(|v| v.is_finite() && *v > 0.0) {
            return bad("grid steps and radii must be positive");
        }
        let t = &self.tolerances;
        if ![t.equality, t.quadrature, t.winding_residual, t.taylor_fit].iter().all(|v| v.is_finite() && *v > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.max_jet_order > 8 {
            return bad("max_jet_order is at most 8");
        }
        Ok(())
    }
}

fn apply_override(root: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let err = |m: &str| ConfigError::Override(spec.to_string(), m.to_string());
    let (key, raw) = spec.split_once('=').ok_or_else(|| err("expected key=value"))?;
    let mut node = root;
    for part in key.split('.') {
        node = node.get_mut(part).ok_or_else(|| err("unknown field"))?;
    }
    *node = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_overrides() {
        let mut v = serde_json::to_value(SuiteConfig::default()).unwrap();
        apply_override(&mut v, "grid.x_step=0.05").unwrap();
        apply_override(&mut v, "k_values=[2,4]").unwrap();
        let c: SuiteConfig = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(c.grid.x_step, 0.05);
        assert_eq!(c.k_values, vec![2, 4]);
        assert!(apply_override(&mut v, "grid.nope=1").is_err());
        assert!(apply_override(&mut v, "trials").is_err());
    }

    #[test]
    fn validation() {
        let mut c = SuiteConfig::default();
        assert!(c.validate().is_ok());
        c.trials = 0;
        assert!(c.validate().is_err());
        let c = SuiteConfig { k_values: vec![0], ..Default::default() };
        assert!(c.validate().is_err());
    }
}
