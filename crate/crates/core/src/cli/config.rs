use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::palm_kinematics::{PalmParams, DEFAULT_LINK_LENGTH};
use crate::performance::SweepSettings;
use crate::screw::DEFAULT_EXCLUSION;

/// Sweep configuration, as read from `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub link_length_mm: f64,
    pub twist_rad: f64,
    pub samples: usize,
    pub input_stiffness: f64,
    pub epsilon_frac: f64,
    pub output_path: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            link_length_mm: DEFAULT_LINK_LENGTH,
            twist_rad: 2.0 * PI / 3.0,
            samples: 500,
            input_stiffness: 1.0,
            epsilon_frac: DEFAULT_EXCLUSION,
            output_path: PathBuf::from("sweep.csv"),
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("link_length_mm", self.link_length_mm),
            ("twist_rad", self.twist_rad),
            ("input_stiffness", self.input_stiffness),
            ("epsilon_frac", self.epsilon_frac),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        if self.samples < 2 {
            return Err(CliError::Usage(format!("samples must be at least 2, got {}", self.samples)));
        }
        if self.output_path.as_os_str().is_empty() {
            return Err(CliError::Usage("output_path must not be empty".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<PalmParams, CliError> {
        PalmParams::new(self.link_length_mm, self.twist_rad).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn settings(&self) -> SweepSettings {
        SweepSettings { samples: self.samples, input_stiffness: self.input_stiffness, epsilon_frac: self.epsilon_frac }
    }
}
