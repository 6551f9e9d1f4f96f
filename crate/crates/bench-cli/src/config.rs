//! Run configuration: a TOML file whose every key is optional.
//!
//! Validation happens during deserialization so that every rejected value
//! is reported with its line and column.

use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::str::FromStr;

use mmimo_core::aperture::{ElementPattern, ScenarioLabel};
use mmimo_core::frontend::{Band, GeometryParams, LensDesign, RfParams, TaraLayout, Variant};
use mmimo_core::precoder::{SolverConfig, SubsetSearch};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Sysloss,
    Steereff,
    Power,
    Components,
}

impl Experiment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Sysloss => "sysloss",
            Experiment::Steereff => "steereff",
            Experiment::Power => "power",
            Experiment::Components => "components",
        }
    }
}

/// Finite, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Positive(f64);

impl TryFrom<f64> for Positive {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, String> {
        if v > 0.0 && v.is_finite() {
            Ok(Positive(v))
        } else {
            Err(format!("expected a finite positive number, got {v}"))
        }
    }
}

impl From<Positive> for f64 {
    fn from(p: Positive) -> f64 {
        p.0
    }
}

/// Finite and at least zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NonNegative(f64);

impl TryFrom<f64> for NonNegative {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, String> {
        if v >= 0.0 && v.is_finite() {
            Ok(NonNegative(v))
        } else {
            Err(format!("expected a finite non-negative number, got {v}"))
        }
    }
}

impl From<NonNegative> for f64 {
    fn from(p: NonNegative) -> f64 {
        p.0
    }
}

/// In (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Fraction(f64);

impl TryFrom<f64> for Fraction {
    type Error = String;
    fn try_from(v: f64) -> Result<Self, String> {
        if v > 0.0 && v <= 1.0 {
            Ok(Fraction(v))
        } else {
            Err(format!("expected a value in (0, 1], got {v}"))
        }
    }
}

impl From<Fraction> for f64 {
    fn from(p: Fraction) -> f64 {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PhaseBits(u32);

impl TryFrom<u32> for PhaseBits {
    type Error = String;
    fn try_from(v: u32) -> Result<Self, String> {
        if (1..=16).contains(&v) {
            Ok(PhaseBits(v))
        } else {
            Err(format!("phase_bits must be between 1 and 16, got {v}"))
        }
    }
}

impl From<PhaseBits> for u32 {
    fn from(p: PhaseBits) -> u32 {
        p.0
    }
}

/// Antenna count of a square array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct SquareCount(usize);

impl TryFrom<usize> for SquareCount {
    type Error = String;
    fn try_from(v: usize) -> Result<Self, String> {
        let side = (v as f64).sqrt().round() as usize;
        if v > 0 && side * side == v {
            Ok(SquareCount(v))
        } else {
            Err(format!("antenna count {v} is not a square number"))
        }
    }
}

impl From<SquareCount> for usize {
    fn from(p: SquareCount) -> usize {
        p.0
    }
}

/// The file as written. Absent keys take defaults when resolved.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<Experiment>,
    seed: Option<u64>,
    n_realizations: Option<NonZeroUsize>,
    out: Option<PathBuf>,
    band: Option<Band>,
    p_t: Option<Positive>,
    n_t: Option<SquareCount>,
    n_rf: Option<NonZeroUsize>,
    spacing: Option<Positive>,
    evm_target: Option<NonNegative>,
    architectures: Option<Vec<Variant>>,
    scenarios: Option<Vec<ScenarioLabel>>,
    // RF overrides on top of the band preset
    p_rf_chain: Option<NonNegative>,
    eta_pae: Option<Fraction>,
    ps_loss_db: Option<NonNegative>,
    phase_bits: Option<PhaseBits>,
    p_ima_fixed: Option<NonNegative>,
    eta_ima: Option<Fraction>,
    divider_excess_db: Option<NonNegative>,
    lens_il_db: Option<NonNegative>,
    switch_il_db: Option<NonNegative>,
    pa_gain_db: Option<NonNegative>,
    steering: Option<RawSteering>,
    solver: Option<RawSolver>,
    antenna: Option<RawAntenna>,
    tara: Option<RawTara>,
    lens: Option<RawLens>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSteering {
    azimuth_deg: Option<f64>,
    elevation_deg: Option<f64>,
    p_t_grid: Option<Vec<Positive>>,
    n_t_grid: Option<Vec<SquareCount>>,
    bands: Option<Vec<Band>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    max_iters: Option<NonZeroUsize>,
    tol: Option<NonNegative>,
    restarts: Option<usize>,
    perturb_fraction: Option<Fraction>,
    subset_search: Option<SubsetSearch>,
    exhaustive_limit: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAntenna {
    pattern: Option<ElementPattern>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTara {
    focal_ratio: Option<Positive>,
    feed_square_side: Option<Positive>,
    edge_taper_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLens {
    n_beams: Option<NonZeroUsize>,
    theta_max_deg: Option<Positive>,
}

/// Steering-efficiency sweep settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringConfig {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub p_t_grid: Vec<f64>,
    pub n_t_grid: Vec<usize>,
    pub bands: Vec<Band>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub n_realizations: usize,
    pub out: PathBuf,
    pub band: Band,
    pub rf: RfParams,
    pub p_t: f64,
    pub n_t: usize,
    pub n_rf: usize,
    pub spacing: f64,
    pub evm_target: f64,
    pub architectures: Vec<Variant>,
    pub scenarios: Vec<ScenarioLabel>,
    pub steering: SteeringConfig,
    /// Search settings; its `seed` follows the run seed.
    pub solver: SolverConfig,
    pub geometry: GeometryParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RawConfig::default().resolve()
    }
}

impl RunConfig {
    /// RF parameters for `band`: the configured values for the main band,
    /// the plain preset for any other.
    pub fn rf_for(&self, band: Band) -> RfParams {
        if band == self.band {
            self.rf
        } else {
            RfParams::preset(band)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.solver.seed = seed;
        self
    }

    /// The effective configuration as TOML, every key spelled out.
    pub fn echo(&self) -> String {
        let rf = &self.rf;
        let s = &self.solver;
        let raw = RawConfig {
            experiment: self.experiment,
            seed: Some(self.seed),
            n_realizations: NonZeroUsize::new(self.n_realizations),
            out: Some(self.out.clone()),
            band: Some(self.band),
            p_t: Some(Positive(self.p_t)),
            n_t: Some(SquareCount(self.n_t)),
            n_rf: NonZeroUsize::new(self.n_rf),
            spacing: Some(Positive(self.spacing)),
            evm_target: Some(NonNegative(self.evm_target)),
            architectures: Some(self.architectures.clone()),
            scenarios: Some(self.scenarios.clone()),
            p_rf_chain: Some(NonNegative(rf.p_rf_chain)),
            eta_pae: Some(Fraction(rf.eta_pae)),
            ps_loss_db: Some(NonNegative(rf.ps_loss_db)),
            phase_bits: Some(PhaseBits(rf.phase_bits)),
            p_ima_fixed: Some(NonNegative(rf.p_ima_fixed)),
            eta_ima: Some(Fraction(rf.eta_ima)),
            divider_excess_db: Some(NonNegative(rf.divider_excess_db)),
            lens_il_db: Some(NonNegative(rf.lens_il_db)),
            switch_il_db: Some(NonNegative(rf.switch_il_db)),
            pa_gain_db: Some(NonNegative(rf.pa_gain_db)),
            steering: Some(RawSteering {
                azimuth_deg: Some(self.steering.azimuth_deg),
                elevation_deg: Some(self.steering.elevation_deg),
                p_t_grid: Some(self.steering.p_t_grid.iter().map(|&p| Positive(p)).collect()),
                n_t_grid: Some(self.steering.n_t_grid.iter().map(|&n| SquareCount(n)).collect()),
                bands: Some(self.steering.bands.clone()),
            }),
            solver: Some(RawSolver {
                max_iters: NonZeroUsize::new(s.max_iters),
                tol: Some(NonNegative(s.tol)),
                restarts: Some(s.restarts),
                perturb_fraction: Some(Fraction(s.perturb_fraction)),
                subset_search: Some(s.subset_search),
                exhaustive_limit: Some(s.exhaustive_limit),
            }),
            antenna: Some(RawAntenna { pattern: Some(self.geometry.pattern) }),
            tara: Some(RawTara {
                focal_ratio: Some(Positive(self.geometry.tara.focal_ratio)),
                feed_square_side: Some(Positive(self.geometry.tara.feed_square_side)),
                edge_taper_db: Some(self.geometry.tara.edge_taper_db),
            }),
            lens: Some(RawLens {
                n_beams: NonZeroUsize::new(self.geometry.lens.n_beams),
                theta_max_deg: Some(Positive(self.geometry.lens.theta_max.to_degrees())),
            }),
        };
        toml::to_string(&raw).expect("config serializes")
    }
}

impl RawConfig {
    fn resolve(self) -> RunConfig {
        let band = self.band.unwrap_or(Band::Fr1);
        let mut rf = RfParams::preset(band);
        macro_rules! over {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { rf.$field = v.into(); })*
            };
        }
        over!(p_rf_chain, eta_pae, ps_loss_db, phase_bits, p_ima_fixed, eta_ima, divider_excess_db, lens_il_db, switch_il_db, pa_gain_db);

        let seed = self.seed.unwrap_or(42);
        let st = self.steering.unwrap_or_default();
        let sv = self.solver.unwrap_or_default();
        let base = SolverConfig::default();
        let tara = self.tara.unwrap_or_default();
        let lens = self.lens.unwrap_or_default();
        let tara_default = TaraLayout::default();
        let lens_default = LensDesign::default();
        RunConfig {
            experiment: self.experiment,
            seed,
            n_realizations: self.n_realizations.map_or(200, NonZeroUsize::get),
            out: self.out.unwrap_or_else(|| PathBuf::from("results")),
            band,
            rf,
            p_t: self.p_t.map_or(20.0, f64::from),
            n_t: self.n_t.map_or(64, usize::from),
            n_rf: self.n_rf.map_or(4, NonZeroUsize::get),
            spacing: self.spacing.map_or(0.5, f64::from),
            evm_target: self.evm_target.map_or(0.0, f64::from),
            architectures: self.architectures.unwrap_or_else(|| Variant::ALL.to_vec()),
            scenarios: self.scenarios.unwrap_or_else(|| ScenarioLabel::ALL.to_vec()),
            steering: SteeringConfig {
                azimuth_deg: st.azimuth_deg.unwrap_or(10.0),
                elevation_deg: st.elevation_deg.unwrap_or(0.0),
                p_t_grid: st.p_t_grid.map_or_else(
                    || vec![0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
                    |g| g.into_iter().map(f64::from).collect(),
                ),
                n_t_grid: st
                    .n_t_grid
                    .map_or_else(|| vec![16, 64, 256], |g| g.into_iter().map(usize::from).collect()),
                bands: st.bands.unwrap_or_else(|| vec![Band::Fr1, Band::Fr2]),
            },
            solver: SolverConfig {
                max_iters: sv.max_iters.map_or(base.max_iters, NonZeroUsize::get),
                tol: sv.tol.map_or(base.tol, f64::from),
                restarts: sv.restarts.unwrap_or(base.restarts),
                perturb_fraction: sv.perturb_fraction.map_or(base.perturb_fraction, f64::from),
                seed,
                subset_search: sv.subset_search.unwrap_or(base.subset_search),
                exhaustive_limit: sv.exhaustive_limit.unwrap_or(base.exhaustive_limit),
            },
            geometry: GeometryParams {
                pattern: self.antenna.and_then(|a| a.pattern).unwrap_or_default(),
                tara: TaraLayout {
                    focal_ratio: tara.focal_ratio.map_or(tara_default.focal_ratio, f64::from),
                    feed_square_side: tara.feed_square_side.map_or(tara_default.feed_square_side, f64::from),
                    edge_taper_db: tara.edge_taper_db.unwrap_or(tara_default.edge_taper_db),
                },
                lens: LensDesign {
                    n_beams: lens.n_beams.map_or(lens_default.n_beams, NonZeroUsize::get),
                    theta_max: lens.theta_max_deg.map_or(lens_default.theta_max, |d| f64::from(d).to_radians()),
                },
            },
        }
    }
}

/// Parses and resolves a configuration file's text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = raw.resolve();
    if cfg.architectures.is_empty() {
        return Err(CliError::Config("`architectures` must not be empty".into()));
    }
    if cfg.n_rf > cfg.n_t {
        return Err(CliError::Config(format!("n_rf = {} exceeds n_t = {}", cfg.n_rf, cfg.n_t)));
    }
    Ok(cfg)
}

impl FromStr for RunConfig {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        parse_config(s)
    }
}
