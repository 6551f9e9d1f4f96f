//! Constrained zero-forcing through a front-end.
//!
//! The analog state is chosen per channel realization to minimize the
//! transmit power `J = ‖A·(H·A)⁻¹‖²_F` that unit-gain zero-forcing needs;
//! the digital stage then inverts the effective channel `H·A`. At a fixed
//! power budget `p_t` every user receives gain `g² = p_t / J`, so a smaller
//! `J` means more useful power at the receivers.

mod search;
mod solve;
mod zf;

pub use search::{optimize_analog, optimize_steering, search_trace, SearchTrace, SolverConfig, SubsetSearch};
pub use solve::{solve, PrecoderSolution};
pub use zf::{objective_j, zf_weights};
