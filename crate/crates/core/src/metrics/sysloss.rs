use rayon::prelude::*;

use super::record::{MetricKind, MetricRecord};
use crate::aperture::{generate_channel_at, ChannelScenario};
use crate::error::{Error, Result};
use crate::frontend::{build_architecture, ArchitectureSpec, GeometryParams, Variant};
use crate::precoder::{solve, SolverConfig};

/// System Loss records plus the raw per-realization receive powers.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemLossOutcome {
    /// One record per spec, in input order.
    pub records: Vec<MetricRecord>,
    /// `K·g²` of the fully digital reference per realization, `None` when
    /// its channel was rank deficient.
    pub reference_rx: Vec<Option<f64>>,
    /// `K·g²` per spec (input order) and realization, `None` if infeasible.
    pub rx: Vec<Vec<Option<f64>>>,
}

/// Ensemble-averaged receive power of every spec relative to the fully
/// digital front-end on the same channels, in dB.
///
/// Powers are averaged in the linear domain over the realizations where
/// both the spec and the reference are feasible; the rest are counted in
/// `excluded`. The reference is always evaluated, whether or not it is in
/// `specs`.
pub fn system_loss(
    specs: &[ArchitectureSpec],
    scenario: &ChannelScenario,
    p_t: f64,
    n_realizations: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<SystemLossOutcome> {
    if n_realizations == 0 {
        return Err(Error::InvalidArgument("at least one realization is required".into()));
    }
    let Some(first) = specs.first() else {
        return Err(Error::InvalidArgument("no architectures to evaluate".into()));
    };
    let k = first.n_rf;
    if specs.iter().any(|s| s.n_rf != k || s.geometry != first.geometry || s.pattern != first.pattern) {
        return Err(Error::InvalidArgument("all specs must share geometry, pattern and user count".into()));
    }
    let reference = build_architecture(
        Variant::Fd,
        &first.geometry,
        k,
        first.rf,
        &GeometryParams { pattern: first.pattern, ..GeometryParams::default() },
    )?;

    let rows: Vec<(Option<f64>, Vec<Option<f64>>)> = (0..n_realizations)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let ch = generate_channel_at(scenario, &first.geometry, &first.pattern, k, seed, i as u64)?;
            let rx = |spec: &ArchitectureSpec| -> Result<Option<f64>> {
                let sol = solve(spec, &ch.h, p_t, 0.0, solver)?;
                Ok(sol.feasible.then(|| sol.rx_useful()))
            };
            let fd = rx(&reference)?;
            let others = specs
                .iter()
                .map(|s| if s.variant == Variant::Fd { Ok(fd) } else { rx(s) })
                .collect::<Result<Vec<_>>>()?;
            Ok((fd, others))
        })
        .collect::<Result<_>>()?;

    let reference_rx: Vec<Option<f64>> = rows.iter().map(|r| r.0).collect();
    let rx: Vec<Vec<Option<f64>>> = (0..specs.len()).map(|s| rows.iter().map(|r| r.1[s]).collect()).collect();

    let records = specs
        .iter()
        .zip(&rx)
        .map(|(spec, powers)| {
            let (mut num, mut den, mut used) = (0.0, 0.0, 0usize);
            for (p, f) in powers.iter().zip(&reference_rx) {
                if let (Some(p), Some(f)) = (p, f) {
                    num += p;
                    den += f;
                    used += 1;
                }
            }
            let value = if spec.variant == Variant::Fd && used > 0 {
                0.0
            } else if used > 0 && num > 0.0 {
                10.0 * (num / den).log10()
            } else {
                f64::NEG_INFINITY
            };
            MetricRecord {
                architecture: spec.variant.label().to_string(),
                scenario: Some(scenario.label),
                band: spec.rf.band,
                p_t_w: p_t,
                n_t: spec.n_t,
                metric: MetricKind::SystemLossDb,
                value,
                n_realizations,
                excluded: n_realizations - used,
                seed,
            }
        })
        .collect();
    Ok(SystemLossOutcome { records, reference_rx, rx })
}
