//! Antenna aperture: planar array geometry, element patterns, far-field
//! radiation and a clustered Rician channel generator.
//!
//! Coordinates are in wavelengths. Arrays lie in the y–z plane with
//! boresight along +x; azimuth is measured in the x–y plane from +x and
//! elevation from that plane toward +z.

mod channel;
mod geometry;
mod quadrature;
mod radiation;

pub use channel::{
    draw_users, generate_channel, generate_channel_at, realization_rng, ChannelRealization,
    ChannelScenario, ScenarioLabel, Sector,
};
pub use geometry::{build_ura, ArrayGeometry, Direction, ElementPattern};
pub use quadrature::{gauss_legendre, SphereQuadrature};
pub use radiation::{directivity_with, directivity, radiated_power, radiation_intensity, steering_vector};
