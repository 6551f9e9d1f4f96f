use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::geometry::{ArrayGeometry, Direction, ElementPattern};
use super::radiation::steering_vector;
use crate::error::{Error, Result};
use crate::linalg::{vector_norm_sq, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioLabel {
    #[serde(rename = "UMa-LOS")]
    UmaLos,
    #[serde(rename = "UMa-NLOS")]
    UmaNlos,
    #[serde(rename = "RMa-LOS")]
    RmaLos,
    #[serde(rename = "RMa-NLOS")]
    RmaNlos,
}

impl ScenarioLabel {
    pub const ALL: [ScenarioLabel; 4] =
        [ScenarioLabel::UmaLos, ScenarioLabel::UmaNlos, ScenarioLabel::RmaLos, ScenarioLabel::RmaNlos];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioLabel::UmaLos => "UMa-LOS",
            ScenarioLabel::UmaNlos => "UMa-NLOS",
            ScenarioLabel::RmaLos => "RMa-LOS",
            ScenarioLabel::RmaNlos => "RMa-NLOS",
        }
    }

    pub fn is_los(&self) -> bool {
        matches!(self, ScenarioLabel::UmaLos | ScenarioLabel::RmaLos)
    }
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario label `{s}`")))
    }
}

/// Angular drop region for users, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub azimuth: (f64, f64),
    pub elevation: (f64, f64),
}

impl Default for Sector {
    fn default() -> Self {
        Self {
            azimuth: (-60f64.to_radians(), 60f64.to_radians()),
            elevation: (-15f64.to_radians(), 15f64.to_radians()),
        }
    }
}

impl Sector {
    pub fn contains(&self, d: &Direction) -> bool {
        (self.azimuth.0..=self.azimuth.1).contains(&d.azimuth)
            && (self.elevation.0..=self.elevation.1).contains(&d.elevation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelScenario {
    pub label: ScenarioLabel,
    /// Rician K-factor in dB; `-inf` for pure scattering.
    pub rician_k_db: f64,
    pub cluster_count: usize,
    /// Standard deviation of cluster azimuth offsets, radians.
    pub azimuth_spread: f64,
    /// Standard deviation of cluster elevation offsets, radians.
    pub elevation_spread: f64,
    pub sector: Sector,
}

impl ChannelScenario {
    pub fn preset(label: ScenarioLabel) -> Self {
        let (k_db, clusters, az_deg, el_deg) = match label {
            ScenarioLabel::UmaLos => (9.0, 10, 10.0, 5.0),
            ScenarioLabel::UmaNlos => (f64::NEG_INFINITY, 10, 10.0, 5.0),
            ScenarioLabel::RmaLos => (12.0, 6, 5.0, 2.0),
            ScenarioLabel::RmaNlos => (f64::NEG_INFINITY, 6, 5.0, 2.0),
        };
        Self {
            label,
            rician_k_db: k_db,
            cluster_count: clusters,
            azimuth_spread: f64::to_radians(az_deg),
            elevation_spread: f64::to_radians(el_deg),
            sector: Sector::default(),
        }
    }

    /// Weights `(κ/(κ+1), 1/(κ+1))` of the specular and scattered parts.
    pub fn power_split(&self) -> (f64, f64) {
        if self.rician_k_db == f64::INFINITY {
            (1.0, 0.0)
        } else if self.rician_k_db == f64::NEG_INFINITY {
            (0.0, 1.0)
        } else {
            let k = 10f64.powf(self.rician_k_db / 10.0);
            (k / (k + 1.0), 1.0 / (k + 1.0))
        }
    }
}

/// One downlink channel draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `K×N_t`, rows normalized to unit average per-element gain.
    pub h: CMatrix,
    pub user_directions: Vec<Direction>,
    pub scenario: ChannelScenario,
    /// `(seed, realization index)` when drawn through [`generate_channel_at`].
    pub seed_coords: Option<(u64, u64)>,
}

/// Independent stream per `(seed, index)` so realizations can be generated in
/// any order or in parallel.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn draw_users<R: Rng + ?Sized>(scenario: &ChannelScenario, k: usize, rng: &mut R) -> Result<Vec<Direction>> {
    if k == 0 {
        return Err(Error::InvalidArgument("at least one user is required".into()));
    }
    let s = &scenario.sector;
    Ok((0..k)
        .map(|_| {
            let az = rng.random_range(s.azimuth.0..=s.azimuth.1);
            let el = rng.random_range(s.elevation.0..=s.elevation.1);
            Direction::clamped(az, el)
        })
        .collect())
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Clustered Rician channel.
///
/// Row `k` is `√(κ/(κ+1))·a(d_k)ᴴ + √(1/(κ+1))·(1/√C)·Σ_c g_c·a(d_k+δ_c)ᴴ`,
/// then scaled so that its expected squared norm given the drawn angles is
/// `N_t`. Large-scale pathloss is not modelled.
pub fn generate_channel<R: Rng + ?Sized>(
    scenario: &ChannelScenario,
    geom: &ArrayGeometry,
    pattern: &ElementPattern,
    k: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let users = draw_users(scenario, k, rng)?;
    let n = geom.len();
    let (w_los, w_nlos) = scenario.power_split();
    let clusters = scenario.cluster_count.max(1);
    let mut h = CMatrix::zeros(k, n);
    for (row, dir) in users.iter().enumerate() {
        let mut acc = nalgebra::DVector::<Complex64>::zeros(n);
        let mut expected_power = 0.0;
        if w_los > 0.0 {
            let a = steering_vector(geom, pattern, dir);
            expected_power += w_los * vector_norm_sq(&a);
            acc += a.conjugate() * Complex64::new(w_los.sqrt(), 0.0);
        }
        if w_nlos > 0.0 {
            let scale = (w_nlos / clusters as f64).sqrt();
            for _ in 0..clusters {
                let da: f64 = StandardNormal.sample(rng);
                let de: f64 = StandardNormal.sample(rng);
                let d = Direction::clamped(
                    dir.azimuth + da * scenario.azimuth_spread,
                    dir.elevation + de * scenario.elevation_spread,
                );
                let g = complex_gaussian(rng);
                let a = steering_vector(geom, pattern, &d);
                expected_power += w_nlos / clusters as f64 * vector_norm_sq(&a);
                acc += a.conjugate() * (g * scale);
            }
        }
        let norm = if expected_power > 0.0 { (n as f64 / expected_power).sqrt() } else { 0.0 };
        for (col, v) in acc.iter().enumerate() {
            h[(row, col)] = v * norm;
        }
    }
    Ok(ChannelRealization { h, user_directions: users, scenario: scenario.clone(), seed_coords: None })
}

/// Realization `index` of the ensemble seeded by `seed`.
pub fn generate_channel_at(
    scenario: &ChannelScenario,
    geom: &ArrayGeometry,
    pattern: &ElementPattern,
    k: usize,
    seed: u64,
    index: u64,
) -> Result<ChannelRealization> {
    let mut rng = realization_rng(seed, index);
    let mut ch = generate_channel(scenario, geom, pattern, k, &mut rng)?;
    ch.seed_coords = Some((seed, index));
    Ok(ch)
}
