//! Front-end architecture models.
//!
//! Each variant reduces to an analog transfer matrix `A` (antennas × RF
//! chains) that depends on a discrete [`AnalogState`], plus the fixed
//! hardware that shapes it: the illumination matrix of a transmit/reflect
//! array or the beam matrix of a stacked Rotman-lens network. The power
//! ledger and component counts live here as well.

mod architecture;
mod components;
mod illumination;
mod params;
mod power;
mod quantize;
mod rotman;

pub use architecture::{
    analog_transfer, build_architecture, spillover_efficiency, tile_partition, AnalogState, ArchitectureSpec, FixedTransfer,
    GeometryParams, Variant,
};
pub use components::{count_components, ComponentCount};
pub use illumination::{
    edge_taper_db, full_illumination_feeds, illumination_matrix, separate_illumination_feeds,
    captured_fraction, solve_feed_exponent, Feed, Illumination, TaraLayout,
};
pub use params::{db_to_amplitude, db_to_power, Band, RfParams};
pub use power::{combining_efficiency, consumed_power, wilkinson_combine, PowerBreakdown};
pub use quantize::{phase_alphabet, quantize_phase, QuantizedPhase};
pub use rotman::{beam_sines, lens_1d, rotman_beam_matrix, LensDesign};
