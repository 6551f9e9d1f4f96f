use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aperture::ScenarioLabel;
use crate::frontend::Band;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    /// System Loss relative to the fully digital reference, dB.
    #[serde(rename = "SL_rel_db")]
    SystemLossDb,
    /// Steering Efficiency, fraction.
    #[serde(rename = "SE")]
    SteeringEfficiency,
    /// Radiated over consumed power, fraction.
    #[serde(rename = "power_efficiency")]
    PowerEfficiency,
}

impl MetricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricKind::SystemLossDb => "SL_rel_db",
            MetricKind::SteeringEfficiency => "SE",
            MetricKind::PowerEfficiency => "power_efficiency",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One result row with the coordinates it was computed at.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub architecture: String,
    pub scenario: Option<ScenarioLabel>,
    pub band: Band,
    pub p_t_w: f64,
    pub n_t: usize,
    pub metric: MetricKind,
    pub value: f64,
    pub n_realizations: usize,
    pub excluded: usize,
    pub seed: u64,
}
