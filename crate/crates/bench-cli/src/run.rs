use mmimo_core::aperture::{build_ura, ArrayGeometry, ChannelScenario, Direction};
use mmimo_core::frontend::{build_architecture, count_components, ArchitectureSpec, RfParams, Variant};
use mmimo_core::metrics::{se_sweep, steering_efficiency, system_loss, SteeringSubject, Sweep, SweepSetup};

use crate::config::{Experiment, RunConfig};
use crate::error::CliError;
use crate::output::{row_order, Row};

/// Largest tolerated share of infeasible realizations per record.
pub const MAX_EXCLUSION_RATE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Sorted report rows.
    pub rows: Vec<Row>,
    /// Set when some record excluded more than [`MAX_EXCLUSION_RATE`] of
    /// its realizations.
    pub exclusion_failure: Option<String>,
}

fn square_geometry(n_t: usize, spacing: f64) -> Result<ArrayGeometry, CliError> {
    let side = (n_t as f64).sqrt().round() as usize;
    Ok(build_ura(side, side, spacing)?)
}

fn specs(cfg: &RunConfig, geom: &ArrayGeometry, rf: RfParams) -> Result<Vec<ArchitectureSpec>, CliError> {
    cfg.architectures
        .iter()
        .map(|&v| build_architecture(v, geom, cfg.n_rf, rf, &cfg.geometry).map_err(CliError::from))
        .collect()
}

fn direction(cfg: &RunConfig) -> Result<Direction, CliError> {
    Direction::from_degrees(cfg.steering.azimuth_deg, cfg.steering.elevation_deg)
        .map_err(|e| CliError::Config(format!("steering direction: {e}")))
}

/// Runs one experiment and returns its rows in report order.
pub fn run_experiment(cfg: &RunConfig, experiment: Experiment) -> Result<RunOutcome, CliError> {
    let tag = experiment.as_str();
    let mut rows = Vec::new();
    let mut exclusion_failure = None;
    let row = |architecture: Variant, metric: &str, value: f64| Row {
        experiment: tag,
        architecture,
        scenario: None,
        band: cfg.band,
        p_t_w: cfg.p_t,
        n_t: cfg.n_t,
        metric: metric.to_string(),
        value,
        n_realizations: 1,
        excluded: 0,
        seed: cfg.seed,
    };

    match experiment {
        Experiment::Sysloss => {
            let geom = square_geometry(cfg.n_t, cfg.spacing)?;
            let specs = specs(cfg, &geom, cfg.rf)?;
            for &label in &cfg.scenarios {
                let scenario = ChannelScenario::preset(label);
                let outcome = system_loss(&specs, &scenario, cfg.p_t, cfg.n_realizations, cfg.seed, &cfg.solver)?;
                for (spec, rec) in specs.iter().zip(outcome.records) {
                    let rate = rec.excluded as f64 / rec.n_realizations as f64;
                    if rate > MAX_EXCLUSION_RATE && exclusion_failure.is_none() {
                        exclusion_failure = Some(format!(
                            "{} in {} excluded {} of {} realizations",
                            spec.variant, label, rec.excluded, rec.n_realizations
                        ));
                    }
                    rows.push(Row {
                        scenario: Some(label),
                        metric: rec.metric.as_str().to_string(),
                        value: rec.value,
                        n_realizations: rec.n_realizations,
                        excluded: rec.excluded,
                        ..row(spec.variant, "", 0.0)
                    });
                }
            }
        }
        Experiment::Steereff => {
            let setup = SweepSetup {
                n_t: cfg.n_t,
                n_rf: cfg.n_rf,
                p_t: cfg.p_t,
                spacing: cfg.spacing,
                geometry: cfg.geometry,
                direction: direction(cfg)?,
            };
            let sweeps = [
                Sweep::TransmitPower(cfg.steering.p_t_grid.clone()),
                Sweep::Antennas(cfg.steering.n_t_grid.clone()),
            ];
            for &band in &cfg.steering.bands {
                for sweep in &sweeps {
                    for rec in se_sweep(&cfg.architectures, &setup, sweep, cfg.rf_for(band), &cfg.solver)? {
                        let variant: Variant = rec.architecture.parse()?;
                        rows.push(Row {
                            band: rec.band,
                            p_t_w: rec.p_t_w,
                            n_t: rec.n_t,
                            metric: rec.metric.as_str().to_string(),
                            value: rec.value,
                            ..row(variant, "", 0.0)
                        });
                    }
                }
            }
            // the two sweeps share their crossing point
            rows.sort_by(row_order);
            rows.dedup_by(|a, b| row_order(a, b).is_eq());
        }
        Experiment::Power => {
            let geom = square_geometry(cfg.n_t, cfg.spacing)?;
            let dir = direction(cfg)?;
            for spec in specs(cfg, &geom, cfg.rf)? {
                for &p_t in &cfg.steering.p_t_grid {
                    let o = steering_efficiency(SteeringSubject::Architecture(&spec), &dir, p_t, &cfg.solver)?;
                    let p = o.power.expect("architectures report their ledger");
                    for (metric, value) in [
                        ("power_efficiency", p.efficiency()),
                        ("p_total_w", p.p_total),
                        ("p_pa_out_w", p.p_pa_out),
                        ("p_pa_dc_w", p.p_pa_dc),
                        ("p_rf_chains_w", p.p_rf_chains),
                        ("p_ima_w", p.p_ima),
                    ] {
                        rows.push(Row { p_t_w: p_t, ..row(spec.variant, metric, value) });
                    }
                }
            }
        }
        Experiment::Components => {
            let geom = square_geometry(cfg.n_t, cfg.spacing)?;
            for spec in specs(cfg, &geom, cfg.rf)? {
                let c = count_components(&spec);
                for (metric, value) in [
                    ("lines", c.lines),
                    ("phase_shifters", c.phase_shifters),
                    ("dividers", c.dividers),
                    ("combiners", c.combiners),
                    ("imas", c.imas),
                    ("switches", c.switches),
                ] {
                    rows.push(row(spec.variant, metric, value as f64));
                }
            }
        }
    }
    rows.sort_by(row_order);
    Ok(RunOutcome { rows, exclusion_failure })
}
