use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Band {
    /// Sub-6 GHz, 3.5 GHz design frequency.
    #[serde(rename = "FR1")]
    Fr1,
    /// mmWave, 28 GHz design frequency.
    #[serde(rename = "FR2")]
    Fr2,
}

impl Band {
    pub fn as_str(&self) -> &'static str {
        match self {
            Band::Fr1 => "FR1",
            Band::Fr2 => "FR2",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Band {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "FR1" => Ok(Band::Fr1),
            "FR2" => Ok(Band::Fr2),
            other => Err(Error::InvalidArgument(format!("unknown band `{other}`"))),
        }
    }
}

pub fn db_to_power(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// RF hardware parameters. Losses are positive dB attenuations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfParams {
    /// Static consumption of one RF chain, W.
    pub p_rf_chain: f64,
    /// Power-added efficiency of the power amplifiers.
    pub eta_pae: f64,
    /// Insertion loss per phase shifter, dB.
    pub ps_loss_db: f64,
    /// Phase-shifter resolution, bits.
    pub phase_bits: u32,
    /// Static consumption of one intermediate amplifier, W.
    pub p_ima_fixed: f64,
    /// Efficiency of the intermediate amplifiers.
    pub eta_ima: f64,
    /// Excess loss of one 1:2 divider stage beyond the ideal split, dB.
    pub divider_excess_db: f64,
    /// Insertion loss of one Rotman-lens stack, dB.
    pub lens_il_db: f64,
    /// Insertion loss of the beam-selection switch, dB.
    pub switch_il_db: f64,
    /// Small-signal gain of the power amplifiers, dB. Sets the drive level
    /// the hybrid networks must deliver.
    pub pa_gain_db: f64,
    pub band: Band,
}

impl Default for RfParams {
    fn default() -> Self {
        Self::preset(Band::Fr1)
    }
}

impl RfParams {
    pub fn preset(band: Band) -> Self {
        match band {
            Band::Fr1 => Self {
                p_rf_chain: 2.08,
                eta_pae: 0.5,
                ps_loss_db: 1.0,
                phase_bits: 2,
                p_ima_fixed: 0.1,
                eta_ima: 0.25,
                divider_excess_db: 0.3,
                lens_il_db: 2.0,
                switch_il_db: 0.5,
                pa_gain_db: 20.0,
                band,
            },
            Band::Fr2 => Self {
                p_rf_chain: 2.6,
                eta_pae: 0.5,
                ps_loss_db: 2.0,
                phase_bits: 2,
                p_ima_fixed: 0.2,
                eta_ima: 0.25,
                divider_excess_db: 0.6,
                lens_il_db: 3.0,
                switch_il_db: 1.5,
                pa_gain_db: 20.0,
                band,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(what.to_string()));
        if !(self.eta_pae > 0.0 && self.eta_pae <= 1.0) {
            return bad("eta_pae must lie in (0, 1]");
        }
        if !(self.eta_ima > 0.0 && self.eta_ima <= 1.0) {
            return bad("eta_ima must lie in (0, 1]");
        }
        if self.phase_bits == 0 || self.phase_bits > 16 {
            return bad("phase_bits must lie in 1..=16");
        }
        for (name, v) in [
            ("ps_loss_db", self.ps_loss_db),
            ("divider_excess_db", self.divider_excess_db),
            ("lens_il_db", self.lens_il_db),
            ("switch_il_db", self.switch_il_db),
            ("p_rf_chain", self.p_rf_chain),
            ("p_ima_fixed", self.p_ima_fixed),
            ("pa_gain_db", self.pa_gain_db),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return bad(&format!("{name} must be a finite non-negative number"));
            }
        }
        Ok(())
    }

    /// Amplitude transmission `γ_ps` of one phase shifter.
    pub fn ps_amplitude(&self) -> f64 {
        db_to_amplitude(-self.ps_loss_db)
    }

    pub fn switch_amplitude(&self) -> f64 {
        db_to_amplitude(-self.switch_il_db)
    }

    pub fn lens_amplitude(&self) -> f64 {
        db_to_amplitude(-self.lens_il_db)
    }

    pub fn phase_levels(&self) -> usize {
        1usize << self.phase_bits
    }
}
