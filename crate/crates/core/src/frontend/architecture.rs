use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::illumination::{
    captured_fraction, full_illumination_feeds, illumination_matrix, separate_illumination_feeds, Illumination,
    TaraLayout,
};
use super::params::RfParams;
use super::quantize::phase_alphabet;
use super::rotman::{rotman_beam_matrix, LensDesign};
use crate::aperture::{ArrayGeometry, ElementPattern};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "FD")]
    Fd,
    #[serde(rename = "HADB-FC")]
    HadbFc,
    #[serde(rename = "HADB-PC")]
    HadbPc,
    #[serde(rename = "TARA-FI")]
    TaraFi,
    #[serde(rename = "TARA-SI")]
    TaraSi,
    #[serde(rename = "RL")]
    Rl,
}

impl Variant {
    /// Catalogue order, also the row order of every report.
    pub const ALL: [Variant; 6] =
        [Variant::Fd, Variant::HadbFc, Variant::HadbPc, Variant::TaraFi, Variant::TaraSi, Variant::Rl];

    pub fn label(&self) -> &'static str {
        match self {
            Variant::Fd => "FD",
            Variant::HadbFc => "HADB-FC",
            Variant::HadbPc => "HADB-PC",
            Variant::TaraFi => "TARA-FI",
            Variant::TaraSi => "TARA-SI",
            Variant::Rl => "RL",
        }
    }

    pub fn is_tara(&self) -> bool {
        matches!(self, Variant::TaraFi | Variant::TaraSi)
    }

    pub fn is_hybrid(&self) -> bool {
        matches!(self, Variant::HadbFc | Variant::HadbPc)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .iter()
            .copied()
            .find(|v| v.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown architecture label `{s}`")))
    }
}

/// Geometry of the fixed hardware: illuminator layout and lens beam grid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeometryParams {
    pub pattern: ElementPattern,
    pub tara: TaraLayout,
    pub lens: LensDesign,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FixedTransfer {
    None,
    Illumination(Illumination),
    /// `N_t × N_b` beam matrix of the lens network.
    Lens(CMatrix),
}

/// Immutable description of one front-end.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchitectureSpec {
    pub variant: Variant,
    pub n_t: usize,
    /// RF chains, equal to the number of served users.
    pub n_rf: usize,
    pub geometry: ArrayGeometry,
    pub pattern: ElementPattern,
    pub rf: RfParams,
    pub fixed: FixedTransfer,
    /// Element → RF chain for the subarray variants (PC, SI).
    pub chain_of_element: Option<Vec<usize>>,
}

/// Tunable analog configuration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnalogState {
    /// Phase-grid indices. Layout: `m·K + k` for FC, one per antenna for PC
    /// and TARA, empty otherwise.
    pub phases: Vec<usize>,
    /// Selected beamports, one per RF chain (RL only).
    pub beam_selection: Vec<usize>,
}

impl ArchitectureSpec {
    pub fn phase_bits(&self) -> u32 {
        self.rf.phase_bits
    }

    pub fn phase_levels(&self) -> usize {
        self.rf.phase_levels()
    }

    /// Number of tunable phase shifters.
    pub fn phase_count(&self) -> usize {
        match self.variant {
            Variant::Fd | Variant::Rl => 0,
            Variant::HadbFc => self.n_t * self.n_rf,
            Variant::HadbPc | Variant::TaraFi | Variant::TaraSi => self.n_t,
        }
    }

    /// Columns of the analog transfer matrix.
    pub fn input_width(&self) -> usize {
        match self.variant {
            Variant::Fd => self.n_t,
            _ => self.n_rf,
        }
    }

    /// Active RF chains drawing static power.
    pub fn chain_count(&self) -> usize {
        match self.variant {
            Variant::Fd => self.n_t,
            _ => self.n_rf,
        }
    }

    pub fn lens(&self) -> Option<&CMatrix> {
        match &self.fixed {
            FixedTransfer::Lens(l) => Some(l),
            _ => None,
        }
    }

    pub fn illumination(&self) -> Option<&Illumination> {
        match &self.fixed {
            FixedTransfer::Illumination(i) => Some(i),
            _ => None,
        }
    }

    pub fn n_beams(&self) -> usize {
        self.lens().map_or(0, |l| l.ncols())
    }

    /// Mean captured fraction over all feeds; `None` for non-TARA variants.
    pub fn mean_spillover(&self) -> Option<f64> {
        self.illumination().map(|i| i.spillover.iter().sum::<f64>() / i.spillover.len() as f64)
    }

    /// Neutral state: all phases at index 0, the first `n_rf` beamports.
    pub fn default_state(&self) -> AnalogState {
        AnalogState {
            phases: vec![0; self.phase_count()],
            beam_selection: if self.variant == Variant::Rl { (0..self.n_rf).collect() } else { Vec::new() },
        }
    }

    pub fn validate_state(&self, state: &AnalogState) -> Result<()> {
        if state.phases.len() != self.phase_count() {
            return Err(Error::StateLayout(format!(
                "{} expects {} phase indices, got {}",
                self.variant,
                self.phase_count(),
                state.phases.len()
            )));
        }
        let levels = self.phase_levels();
        if let Some(bad) = state.phases.iter().find(|&&p| p >= levels) {
            return Err(Error::StateLayout(format!("phase index {bad} outside 0..{levels}")));
        }
        if self.variant == Variant::Rl {
            if state.beam_selection.len() != self.n_rf {
                return Err(Error::StateLayout(format!(
                    "RL expects {} selected beamports, got {}",
                    self.n_rf,
                    state.beam_selection.len()
                )));
            }
            let nb = self.n_beams();
            for (i, b) in state.beam_selection.iter().enumerate() {
                if *b >= nb {
                    return Err(Error::StateLayout(format!("beamport {b} outside 0..{nb}")));
                }
                if state.beam_selection[..i].contains(b) {
                    return Err(Error::StateLayout(format!("beamport {b} selected twice")));
                }
            }
        } else if !state.beam_selection.is_empty() {
            return Err(Error::StateLayout(format!("{} has no beam selection", self.variant)));
        }
        Ok(())
    }
}

/// Rectangular tiling of the array into `n_tiles` equal subarrays.
///
/// Picks the factorization `a·b = n_tiles` (a tiles along y, b along z) whose
/// tiles are closest to square. Falls back to contiguous index blocks when no
/// rectangular tiling exists.
pub fn tile_partition(geom: &ArrayGeometry, n_tiles: usize) -> Result<(Vec<usize>, bool)> {
    let n = geom.len();
    if n_tiles == 0 || n % n_tiles != 0 {
        return Err(Error::InvalidArgument(format!("{n} elements cannot be split into {n_tiles} equal subarrays")));
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for a in 1..=n_tiles {
        if n_tiles % a != 0 {
            continue;
        }
        let b = n_tiles / a;
        if geom.nx % a != 0 || geom.ny % b != 0 {
            continue;
        }
        let ty = (geom.nx / a) as f64;
        let tz = (geom.ny / b) as f64;
        let skew = (ty / tz).ln().abs();
        if best.is_none_or(|(_, _, s)| skew < s) {
            best = Some((a, b, skew));
        }
    }
    match best {
        Some((a, b, _)) => {
            let ty = geom.nx / a;
            let tz = geom.ny / b;
            let mut map = vec![0; n];
            for iy in 0..geom.nx {
                for iz in 0..geom.ny {
                    map[geom.index(iy, iz)] = (iy / ty) * b + iz / tz;
                }
            }
            Ok((map, true))
        }
        None => {
            let size = n / n_tiles;
            Ok(((0..n).map(|m| m / size).collect(), false))
        }
    }
}

fn arch_err(variant: Variant, reason: impl Into<String>) -> Error {
    Error::Architecture { variant: variant.label().into(), reason: reason.into() }
}

/// Builds the fixed hardware of `variant` around `geom` with `n_rf` chains.
pub fn build_architecture(
    variant: Variant,
    geom: &ArrayGeometry,
    n_rf: usize,
    rf: RfParams,
    params: &GeometryParams,
) -> Result<ArchitectureSpec> {
    rf.validate()?;
    let n_t = geom.len();
    if n_rf == 0 || n_rf > n_t {
        return Err(arch_err(variant, format!("need 1..={n_t} RF chains, got {n_rf}")));
    }
    let mut spec = ArchitectureSpec {
        variant,
        n_t,
        n_rf,
        geometry: geom.clone(),
        pattern: params.pattern,
        rf,
        fixed: FixedTransfer::None,
        chain_of_element: None,
    };
    match variant {
        Variant::Fd | Variant::HadbFc => {}
        Variant::HadbPc => {
            if n_t % n_rf != 0 {
                return Err(arch_err(variant, format!("{n_t} antennas are not divisible by {n_rf} chains")));
            }
            let (map, _) = tile_partition(geom, n_rf)?;
            spec.chain_of_element = Some(map);
        }
        Variant::TaraFi => {
            let feeds = full_illumination_feeds(geom, n_rf, &params.tara);
            let g = illumination_matrix(&feeds, geom, None)?;
            let spillover = captured_fraction(&g);
            spec.fixed = FixedTransfer::Illumination(Illumination { g, feeds, spillover });
        }
        Variant::TaraSi => {
            if n_t % n_rf != 0 {
                return Err(arch_err(variant, format!("{n_t} antennas are not divisible by {n_rf} feeds")));
            }
            let (map, rectangular) = tile_partition(geom, n_rf)?;
            if !rectangular {
                return Err(arch_err(variant, "array admits no rectangular subarray tiling"));
            }
            let feeds = separate_illumination_feeds(geom, &map, n_rf, &params.tara);
            let g = illumination_matrix(&feeds, geom, Some(&map))?;
            let spillover = captured_fraction(&g);
            spec.fixed = FixedTransfer::Illumination(Illumination { g, feeds, spillover });
            spec.chain_of_element = Some(map);
        }
        Variant::Rl => {
            let lens = &params.lens;
            if lens.n_beams * lens.n_beams < n_rf {
                return Err(arch_err(
                    variant,
                    format!("{} beamports cannot serve {n_rf} chains", lens.n_beams * lens.n_beams),
                ));
            }
            if geom.nx != geom.ny {
                return Err(arch_err(variant, "lens stacks need a square array"));
            }
            let l = rotman_beam_matrix(geom.nx, lens.n_beams, geom, rf.lens_il_db, lens.theta_max)?;
            spec.fixed = FixedTransfer::Lens(l);
        }
    }
    Ok(spec)
}

/// Captured-power fraction of feed `k` of a transmit/reflect array.
pub fn spillover_efficiency(spec: &ArchitectureSpec, k: usize) -> Result<f64> {
    let ill = spec.illumination().ok_or_else(|| Error::Unsupported {
        variant: spec.variant.label().into(),
        reason: "spillover is only defined for illuminated arrays".into(),
    })?;
    ill.spillover
        .get(k)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("feed index {k} out of range")))
}

/// Analog transfer matrix `A` (antennas × chains) for `state`.
///
/// FD: identity. FC: `γ_ps·e^{jφ_mk}/√N_t`. PC: `γ_ps·e^{jφ_m}/√(N_t/K)` on
/// the chain's subarray. TARA: `γ_ps·diag(e^{jφ})·G`. RL: switch loss times
/// the selected lens columns.
pub fn analog_transfer(spec: &ArchitectureSpec, state: &AnalogState) -> Result<CMatrix> {
    spec.validate_state(state)?;
    let n = spec.n_t;
    let k = spec.n_rf;
    let gamma = spec.rf.ps_amplitude();
    let alphabet = phase_alphabet(spec.phase_bits());
    Ok(match spec.variant {
        Variant::Fd => CMatrix::identity(n, n),
        Variant::HadbFc => {
            let s = gamma / (n as f64).sqrt();
            CMatrix::from_fn(n, k, |m, c| alphabet[state.phases[m * k + c]] * s)
        }
        Variant::HadbPc => {
            let map = spec.chain_of_element.as_ref().expect("PC spec carries its partition");
            let s = gamma / ((n / k) as f64).sqrt();
            CMatrix::from_fn(n, k, |m, c| {
                if map[m] == c {
                    alphabet[state.phases[m]] * s
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
        Variant::TaraFi | Variant::TaraSi => {
            let g = &spec.illumination().expect("TARA spec carries its illumination").g;
            CMatrix::from_fn(n, k, |m, c| alphabet[state.phases[m]] * gamma * g[(m, c)])
        }
        Variant::Rl => {
            let l = spec.lens().expect("RL spec carries its beam matrix");
            let sw = spec.rf.switch_amplitude();
            CMatrix::from_fn(n, k, |m, c| l[(m, state.beam_selection[c])] * sw)
        }
    })
}
