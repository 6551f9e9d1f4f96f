use rayon::prelude::*;

use super::record::{MetricKind, MetricRecord};
use crate::aperture::{build_ura, directivity_with, steering_vector, ArrayGeometry, Direction, ElementPattern, Sector, SphereQuadrature};
use crate::error::{Error, Result};
use crate::frontend::{
    analog_transfer, build_architecture, combining_efficiency, consumed_power, ArchitectureSpec, Band, GeometryParams,
    PowerBreakdown, RfParams, Variant,
};
use crate::linalg::{CMatrix, CVector};
use crate::precoder::{optimize_steering, SolverConfig};

/// Lossless beamformer with arbitrary amplitude and phase per antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealReference {
    /// Maximum-ratio excitation toward the user.
    pub w: CVector,
    pub directivity: f64,
}

pub fn ideal_reference(geom: &ArrayGeometry, pattern: &ElementPattern, dir: &Direction) -> Result<IdealReference> {
    let quad = SphereQuadrature::for_elements(geom.len());
    ideal_with(geom, pattern, dir, &quad)
}

fn ideal_with(
    geom: &ArrayGeometry,
    pattern: &ElementPattern,
    dir: &Direction,
    quad: &SphereQuadrature,
) -> Result<IdealReference> {
    let w = steering_vector(geom, pattern, dir);
    let directivity = directivity_with(geom, pattern, &w, dir, quad)?;
    Ok(IdealReference { w, directivity })
}

/// What is being steered.
#[derive(Debug, Clone, Copy)]
pub enum SteeringSubject<'a> {
    /// The lossless reference itself, consuming exactly what it radiates.
    Ideal { geometry: &'a ArrayGeometry, pattern: ElementPattern },
    Architecture(&'a ArchitectureSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringOutcome {
    pub se: f64,
    pub directivity: f64,
    pub ideal_directivity: f64,
    /// `None` for the ideal reference.
    pub power: Option<PowerBreakdown>,
}

/// Directivity ratio toward `dir` and the FC combiner efficiency.
fn steer(spec: &ArchitectureSpec, dir: &Direction, quad: &SphereQuadrature, solver: &SolverConfig) -> Result<(f64, f64, f64)> {
    let ideal = ideal_with(&spec.geometry, &spec.pattern, dir, quad)?;
    let (state, b) = optimize_steering(spec, &ideal.w, solver)?;
    let a = match spec.variant {
        Variant::Fd => CMatrix::identity(spec.n_t, spec.n_t),
        _ => analog_transfer(spec, &state)?,
    };
    let w = &a * &b;
    let d = directivity_with(&spec.geometry, &spec.pattern, &w, dir, quad)?;
    let b_mat = CMatrix::from_column_slice(b.len(), 1, b.as_slice());
    let eta_c = combining_efficiency(spec, &a, &b_mat);
    Ok((d, ideal.directivity, eta_c))
}

fn outcome(spec: &ArchitectureSpec, p_t: f64, d: f64, d_ideal: f64, eta_c: f64) -> Result<SteeringOutcome> {
    let power = consumed_power(spec, p_t, eta_c.max(f64::MIN_POSITIVE))?;
    Ok(SteeringOutcome {
        se: p_t / power.p_total * (d / d_ideal),
        directivity: d,
        ideal_directivity: d_ideal,
        power: Some(power),
    })
}

/// Steering Efficiency toward a single line-of-sight user:
/// `(p_t / P_consumed) · (D_arch / D_ideal)`.
pub fn steering_efficiency(
    subject: SteeringSubject<'_>,
    dir: &Direction,
    p_t: f64,
    solver: &SolverConfig,
) -> Result<SteeringOutcome> {
    if !(p_t > 0.0) || !p_t.is_finite() {
        return Err(Error::NonPositivePower(p_t));
    }
    match subject {
        SteeringSubject::Ideal { geometry, pattern } => {
            let ideal = ideal_reference(geometry, &pattern, dir)?;
            Ok(SteeringOutcome {
                se: (p_t / p_t) * (ideal.directivity / ideal.directivity),
                directivity: ideal.directivity,
                ideal_directivity: ideal.directivity,
                power: None,
            })
        }
        SteeringSubject::Architecture(spec) => {
            let quad = SphereQuadrature::for_elements(spec.n_t);
            let (d, d_ideal, eta_c) = steer(spec, dir, &quad, solver)?;
            outcome(spec, p_t, d, d_ideal, eta_c)
        }
    }
}

/// Mean Steering Efficiency over several user directions.
pub fn steering_efficiency_over(
    spec: &ArchitectureSpec,
    dirs: &[Direction],
    p_t: f64,
    solver: &SolverConfig,
) -> Result<f64> {
    if dirs.is_empty() {
        return Err(Error::InvalidArgument("no directions to average over".into()));
    }
    let quad = SphereQuadrature::for_elements(spec.n_t);
    let values = dirs
        .par_iter()
        .map(|d| {
            let (dd, di, eta) = steer(spec, d, &quad, solver)?;
            Ok(outcome(spec, p_t, dd, di, eta)?.se)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `n_az × n_el` grid of directions spanning a sector, cell centered.
pub fn sector_directions(sector: &Sector, n_az: usize, n_el: usize) -> Result<Vec<Direction>> {
    let mut out = Vec::with_capacity(n_az * n_el);
    for i in 0..n_az {
        let az = sector.azimuth.0 + (sector.azimuth.1 - sector.azimuth.0) * (i as f64 + 0.5) / n_az as f64;
        for j in 0..n_el {
            let el = sector.elevation.0 + (sector.elevation.1 - sector.elevation.0) * (j as f64 + 0.5) / n_el as f64;
            out.push(Direction::new(az, el)?);
        }
    }
    Ok(out)
}

/// Grid of an SE sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Radiated power in watts at the setup's antenna count.
    TransmitPower(Vec<f64>),
    /// Square-array antenna counts at the setup's transmit power.
    Antennas(Vec<usize>),
}

/// Fixed coordinates of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSetup {
    pub n_t: usize,
    pub n_rf: usize,
    pub p_t: f64,
    pub spacing: f64,
    pub geometry: GeometryParams,
    pub direction: Direction,
}

fn square_side(n_t: usize) -> Result<usize> {
    let side = (n_t as f64).sqrt().round() as usize;
    if side * side != n_t || side == 0 {
        return Err(Error::InvalidGeometry(format!("{n_t} antennas do not form a square array")));
    }
    Ok(side)
}

/// One SE record per (architecture, grid point) for the given band.
///
/// The analog configuration does not depend on `p_t`, so a power sweep
/// optimizes each architecture once.
pub fn se_sweep(
    variants: &[Variant],
    setup: &SweepSetup,
    sweep: &Sweep,
    rf: RfParams,
    solver: &SolverConfig,
) -> Result<Vec<MetricRecord>> {
    let band: Band = rf.band;
    let (grid_nt, grid_pt): (Vec<usize>, Vec<f64>) = match sweep {
        Sweep::TransmitPower(p) => (vec![setup.n_t], p.clone()),
        Sweep::Antennas(n) => (n.clone(), vec![setup.p_t]),
    };
    if grid_nt.is_empty() || grid_pt.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    let mut jobs = Vec::new();
    for &n_t in &grid_nt {
        let side = square_side(n_t)?;
        let geom = build_ura(side, side, setup.spacing)?;
        for &v in variants {
            jobs.push((v, geom.clone()));
        }
    }
    let per_job = jobs
        .par_iter()
        .map(|(v, geom)| {
            let spec = build_architecture(*v, geom, setup.n_rf, rf, &setup.geometry)?;
            let quad = SphereQuadrature::for_elements(spec.n_t);
            let (d, d_ideal, eta) = steer(&spec, &setup.direction, &quad, solver)?;
            grid_pt
                .iter()
                .map(|&p| {
                    let o = outcome(&spec, p, d, d_ideal, eta)?;
                    Ok(MetricRecord {
                        architecture: v.label().to_string(),
                        scenario: None,
                        band,
                        p_t_w: p,
                        n_t: spec.n_t,
                        metric: MetricKind::SteeringEfficiency,
                        value: o.se,
                        n_realizations: 1,
                        excluded: 0,
                        seed: solver.seed,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_job.into_iter().flatten().collect())
}
