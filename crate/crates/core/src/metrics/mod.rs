//! The two ensemble experiments: relative System Loss over channel draws and
//! Steering Efficiency sweeps, plus the ideal beamformer they are measured
//! against.

mod record;
mod steering;
mod sysloss;

pub use record::{MetricKind, MetricRecord};
pub use steering::{
    ideal_reference, se_sweep, sector_directions, steering_efficiency, steering_efficiency_over, IdealReference,
    SteeringOutcome, SteeringSubject, Sweep, SweepSetup,
};
pub use sysloss::{system_loss, SystemLossOutcome};
