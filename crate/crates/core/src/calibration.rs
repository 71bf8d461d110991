//! Calibration tables: every empirically-grounded constant the models need,
//! loadable from a TOML file. A complete default calibration is embedded in
//! the binary.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::PiecewiseLinear;
use crate::distsys::{DbLatencyModel, VmInflation};
use crate::error::{Error, Result};
use crate::storage::{CacheConfig, DegradationCurve};

pub const DEFAULT_CALIBRATION_TOML: &str = include_str!("../assets/default_calibration.toml");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PositionFactor {
    pub location: String,
    pub factor: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcousticsCalibration {
    pub spl_distance_lab: PiecewiseLinear,
    pub spl_distance_open_water: PiecewiseLinear,
    pub angle_table: PiecewiseLinear,
    pub resonance: crate::acoustics::ResonanceProfile,
    pub position_factors: Vec<PositionFactor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StorageCalibration {
    pub degradation_lab: DegradationCurve,
    pub degradation_open_water: DegradationCurve,
    #[serde(default)]
    pub degradation_read: Option<DegradationCurve>,
    pub pes_curve: PiecewiseLinear,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Calibration {
    pub acoustics: AcousticsCalibration,
    pub storage: StorageCalibration,
    pub cache: CacheConfig,
    pub db_latency: DbLatencyModel,
    pub vm_inflation: VmInflation,
}

/// Which measured degradation curve a scenario uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CurveVariant {
    #[default]
    Lab,
    OpenWater,
}

impl Calibration {
    pub fn from_toml(content: &str) -> Result<Self> {
        let calibration: Calibration =
            toml::from_str(content).map_err(|e| Error::config(format!("calibration: {e}")))?;
        calibration.validate()?;
        Ok(calibration)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml(&content)
    }

    /// The calibration embedded in the binary.
    pub fn embedded_default() -> Self {
        Self::from_toml(DEFAULT_CALIBRATION_TOML).expect("embedded calibration is valid")
    }

    pub fn validate(&self) -> Result<()> {
        self.acoustics.resonance.validate()?;
        if self.acoustics.position_factors.is_empty() {
            return Err(Error::config(
                "calibration needs at least one position factor",
            ));
        }
        for pf in &self.acoustics.position_factors {
            if !(pf.factor > 0.0 && pf.factor <= 1.0) {
                return Err(Error::config(format!(
                    "position factor for {} must lie in (0, 1]",
                    pf.location
                )));
            }
        }
        self.cache.validate()?;
        self.db_latency.validate()?;
        self.vm_inflation.validate()?;
        Ok(())
    }

    pub fn position_factor(&self, location: &str) -> Result<f64> {
        self.acoustics
            .position_factors
            .iter()
            .find(|pf| pf.location == location)
            .map(|pf| pf.factor)
            .ok_or_else(|| Error::config(format!("unknown injection position '{location}'")))
    }

    pub fn degradation(&self, variant: CurveVariant) -> &DegradationCurve {
        match variant {
            CurveVariant::Lab => &self.storage.degradation_lab,
            CurveVariant::OpenWater => &self.storage.degradation_open_water,
        }
    }

    pub fn spl_distance(&self, variant: CurveVariant) -> &PiecewiseLinear {
        match variant {
            CurveVariant::Lab => &self.acoustics.spl_distance_lab,
            CurveVariant::OpenWater => &self.acoustics.spl_distance_open_water,
        }
    }
}
