//! Run configuration (JSON). Lengths in meters, densities per m², thresholds
//! in dB.

use std::path::{Path, PathBuf};

use blockage_core::montecarlo::{Execution, Scenario};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Analyze,
    Simulate,
    Compare,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Mu,
    Lambda,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Mu => "mu",
            SweepVariable::Lambda => "lambda",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

fn default_distances() -> Vec<f64> {
    vec![50.0, 100.0, 200.0, 400.0]
}

fn default_links() -> Vec<f64> {
    vec![50.0, 100.0, 200.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    pub scenario: Scenario,
    pub t_grid_db: Vec<f64>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    /// Distances at which the simulated nearest-visible CCDF is reported.
    #[serde(default = "default_distances")]
    pub distance_grid_m: Vec<f64>,
    /// Link lengths for the simulated blockage-count statistics.
    #[serde(default = "default_links")]
    pub link_lengths_m: Vec<f64>,
    #[serde(default)]
    pub execution: Execution,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn check_grid(field: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(CliError::config(field, "must not be empty"));
    }
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(CliError::config(
            field,
            format!("values must be finite, got {x}"),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::config(field, "must be strictly increasing"));
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config("config", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e))
    }

    pub fn mode(&self) -> Result<Mode> {
        self.mode
            .ok_or_else(|| CliError::config("mode", "missing; set it in the config or pass --mode"))
    }

    pub fn output_dir(&self) -> Result<&Path> {
        self.output.as_deref().ok_or_else(|| {
            CliError::config("output", "missing; set it in the config or pass --out")
        })
    }

    /// Checks the fields the selected mode needs, beyond what parsing
    /// enforces.
    pub fn validate(&self) -> Result<()> {
        let mode = self.mode()?;
        self.output_dir()?;
        check_grid("t_grid_db", &self.t_grid_db)?;
        self.scenario.validate()?;
        match mode {
            Mode::Analyze | Mode::Compare => {
                if !(self.scenario.mu > 0.0) {
                    return Err(CliError::config(
                        "scenario.mu",
                        "analysis needs a positive density",
                    ));
                }
            }
            Mode::Simulate => {
                check_grid("distance_grid_m", &self.distance_grid_m)?;
                check_grid("link_lengths_m", &self.link_lengths_m)?;
                if self.link_lengths_m[0] <= 0.0 {
                    return Err(CliError::config(
                        "link_lengths_m",
                        "lengths must be positive",
                    ));
                }
            }
            Mode::Sweep => {
                let sweep = self
                    .sweep
                    .as_ref()
                    .ok_or_else(|| CliError::config("sweep", "required in sweep mode"))?;
                check_grid("sweep.grid", &sweep.grid)?;
                let ok = match sweep.variable {
                    SweepVariable::Mu => sweep.grid[0] > 0.0,
                    SweepVariable::Lambda => sweep.grid[0] >= 0.0,
                };
                if !ok {
                    return Err(CliError::config(
                        "sweep.grid",
                        "densities must be positive (lambda may be 0)",
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "mode": "analyze",
        "scenario": {
            "blockage": {"lambda": 4.4e-4, "length": {"kind": "constant", "value": 15.0},
                         "width": {"kind": "constant", "value": 15.0}},
            "mu": 3.85e-5, "alpha": 4.0, "window": {"radius": 1142.6}, "trials": 100
        },
        "t_grid_db": [-5, 0, 5],
        "output": "out"
    }"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = RunConfig::from_json(MINIMAL).unwrap();
        c.validate().unwrap();
        assert_eq!(c.mode, Some(Mode::Analyze));
        assert_eq!(c.execution, Execution::Parallel);
        assert_eq!(c.distance_grid_m, default_distances());
    }

    #[test]
    fn errors_name_the_field() {
        let bad = MINIMAL.replace("[-5, 0, 5]", "[0, 0]");
        let e = RunConfig::from_json(&bad).unwrap().validate().unwrap_err();
        assert!(e.to_string().contains("t_grid_db"), "{e}");

        let bad = MINIMAL.replace("\"alpha\": 4.0", "\"alpha\": 2.0");
        let e = RunConfig::from_json(&bad).unwrap().validate().unwrap_err();
        assert!(e.to_string().contains("alpha") && e.exit_code() == 1, "{e}");

        let bad = MINIMAL.replace("\"mode\": \"analyze\"", "\"mode\": \"sweep\"");
        let e = RunConfig::from_json(&bad).unwrap().validate().unwrap_err();
        assert!(e.to_string().contains("sweep"), "{e}");

        let bad = MINIMAL.replace("\"output\"", "\"outptu\"");
        let e = RunConfig::from_json(&bad).unwrap_err();
        assert!(e.to_string().contains("outptu"), "{e}");
    }
}
