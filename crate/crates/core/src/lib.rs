//! Massive-MIMO transmitter front-end comparison toolkit.
//!
//! The crate models five beamforming front-ends (fully digital, fully and
//! partially connected hybrid, transmit/reflect arrays with full or separate
//! illumination, and a Rotman-lens network) as parameterized analog transfer
//! matrices. A constrained zero-forcing precoder tunes each network per
//! channel realization, and two metrics compare them: the relative System
//! Loss over channel ensembles and the Steering Efficiency of a single-user
//! line-of-sight link.
//!
//! Modules:
//!
//! - [`aperture`]: array geometry, element patterns, radiation and the
//!   clustered stochastic channel.
//! - [`frontend`]: architecture catalogue, quantizer, illumination and lens
//!   matrices, power ledger and component counts.
//! - [`precoder`]: zero-forcing, the analog coordinate-descent search and the
//!   digital stage.
//! - [`metrics`]: System Loss ensembles and Steering Efficiency sweeps.

pub mod aperture;
pub mod error;
pub mod frontend;
pub mod linalg;
pub mod metrics;
pub mod precoder;

pub use error::{Error, Result};
