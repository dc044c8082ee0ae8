//! Probe scenarios as loaded from `--config` files and flags.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use symlap::counterexamples::ExampleOptions;
use symlap::{Error, KernelConvention, ProbeQuantity, QuadratureConfig, Result};

pub const MIN_K_SPAN: i32 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Example id, or `sector-union:` followed by sector JSON.
    pub example: String,
    pub convention: KernelConvention,
    pub quantity: ProbeQuantity,
    /// Probe ray angle in radians.
    pub direction: f64,
    pub k_min: i32,
    pub k_max: i32,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub example_options: ExampleOptions,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        ScenarioConfig {
            example: "flower".into(),
            convention: KernelConvention::default(),
            quantity: ProbeQuantity::HessEntry(1, 2),
            direction: std::f64::consts::FRAC_PI_4,
            k_min: 2,
            k_max: 12,
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            example_options: ExampleOptions::default(),
            csv: None,
            json: None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: ScenarioConfig = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max - self.k_min < MIN_K_SPAN {
            return Err(Error::Config(format!(
                "k_max - k_min must be at least {MIN_K_SPAN}, got {}..{}",
                self.k_min, self.k_max
            )));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !self.direction.is_finite() {
            return Err(Error::Config("direction must be finite".into()));
        }
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig { rel_tol: self.rel_tol, abs_tol: self.abs_tol, ..QuadratureConfig::default() }
    }
}
