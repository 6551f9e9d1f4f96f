use std::cmp::Ordering;
use std::io::Write;

use mmimo_core::aperture::ScenarioLabel;
use mmimo_core::frontend::{Band, Variant};

/// One CSV line. Field order is the column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: &'static str,
    pub architecture: Variant,
    pub scenario: Option<ScenarioLabel>,
    pub band: Band,
    pub p_t_w: f64,
    pub n_t: usize,
    pub metric: String,
    pub value: f64,
    pub n_realizations: usize,
    pub excluded: usize,
    pub seed: u64,
}

pub const HEADER: [&str; 11] = [
    "experiment",
    "architecture",
    "scenario",
    "band",
    "p_t_w",
    "n_t",
    "metric",
    "value",
    "n_realizations",
    "excluded",
    "seed",
];

/// Report order: architecture (catalogue order), scenario, then the sweep
/// coordinates and the metric name.
pub fn row_order(a: &Row, b: &Row) -> Ordering {
    a.architecture
        .cmp(&b.architecture)
        .then(a.scenario.cmp(&b.scenario))
        .then(a.band.cmp(&b.band))
        .then(a.p_t_w.total_cmp(&b.p_t_w))
        .then(a.n_t.cmp(&b.n_t))
        .then(a.metric.cmp(&b.metric))
}

pub fn write_csv<W: Write>(rows: &[Row], sink: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.to_string(),
            r.architecture.label().to_string(),
            r.scenario.map(|s| s.as_str().to_string()).unwrap_or_default(),
            r.band.as_str().to_string(),
            r.p_t_w.to_string(),
            r.n_t.to_string(),
            r.metric.clone(),
            r.value.to_string(),
            r.n_realizations.to_string(),
            r.excluded.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
