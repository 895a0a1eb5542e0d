//! TOML family specification files.
//!
//! ```toml
//! # a_i in [lower[i], upper[i]]; index i multiplies s^i (ascending powers).
//! lower = [1.99, 1.99, 0.999]
//! upper = [2.01, 2.01, 1.001]
//! seed = 42          # optional, Monte Carlo seed
//! samples = 1000     # optional, Monte Carlo sample count
//!
//! [sector]
//! p = 1
//! q = 2
//!
//! [tolerances]       # optional
//! angle = 1e-9
//! magnitude = 1e-12
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sector::Tolerances;
use crate::types::{validate_family, validate_sector, IntervalFamily, SectorSpec, ValidationError};

const HEADER: &str = "\
# Interval polynomial family: coefficient a_i ranges over [lower[i], upper[i]].
# Coefficients are in ascending powers: index i multiplies s^i.
";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorEntry {
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpecFile {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub sector: SectorEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceEntry>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed spec file: {0}")]
    Parse(String),

    #[error("field `{field}`: {source}")]
    Invalid {
        field: String,
        source: ValidationError,
    },

    #[error("field `tolerances.{field}`: must be finite and non-negative (got {value})")]
    Tolerance { field: &'static str, value: f64 },
}

/// A spec file after validation.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSpec {
    pub family: IntervalFamily,
    pub sector: SectorSpec,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

impl FamilySpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Canonical text form; [`FamilySpecFile::parse`] inverts it exactly.
    pub fn to_canonical_string(&self) -> String {
        let body = toml::to_string(self).expect("spec file fields are TOML-representable");
        format!("{HEADER}{body}")
    }

    pub fn validate(&self) -> Result<LoadedSpec, SpecError> {
        let sector = validate_sector(self.sector.p, self.sector.q).map_err(|source| SpecError::Invalid {
            field: "sector".into(),
            source,
        })?;
        let family = validate_family(&self.lower, &self.upper).map_err(|source| SpecError::Invalid {
            field: family_field(&source),
            source,
        })?;

        let mut tolerances = Tolerances::default();
        if let Some(t) = self.tolerances {
            if let Some(angle) = t.angle {
                tolerances.angle = checked_tolerance("angle", angle)?;
            }
            if let Some(magnitude) = t.magnitude {
                tolerances.magnitude = checked_tolerance("magnitude", magnitude)?;
            }
        }
        Ok(LoadedSpec {
            family,
            sector,
            tolerances,
            seed: self.seed,
            samples: self.samples,
        })
    }
}

impl From<&LoadedSpec> for FamilySpecFile {
    /// Spec file for a validated family (in its normalized orientation).
    fn from(spec: &LoadedSpec) -> Self {
        FamilySpecFile {
            lower: spec.family.lower().to_vec(),
            upper: spec.family.upper().to_vec(),
            seed: spec.seed,
            samples: spec.samples,
            sector: SectorEntry {
                p: spec.sector.p().into(),
                q: spec.sector.q().into(),
            },
            tolerances: Some(ToleranceEntry {
                angle: Some(spec.tolerances.angle),
                magnitude: Some(spec.tolerances.magnitude),
            }),
        }
    }
}

fn checked_tolerance(field: &'static str, value: f64) -> Result<f64, SpecError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(SpecError::Tolerance { field, value })
    }
}

fn family_field(err: &ValidationError) -> String {
    match err {
        ValidationError::EmptyInterval { index, .. }
        | ValidationError::DegreeDrop { index, .. }
        | ValidationError::NonFinite { index } => format!("lower[{index}]/upper[{index}]"),
        _ => "lower/upper".into(),
    }
}

pub fn load(path: &Path) -> Result<LoadedSpec, SpecError> {
    FamilySpecFile::read(path)?.validate()
}
