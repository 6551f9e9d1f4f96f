use serde::{Deserialize, Serialize};

use super::architecture::{ArchitectureSpec, Variant};

/// Hardware inventory of the analog network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ComponentCount {
    pub lines: usize,
    pub phase_shifters: usize,
    pub dividers: usize,
    pub combiners: usize,
    pub imas: usize,
    pub switches: usize,
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Binary divider stages between one RF chain and its antennas.
pub(crate) fn divider_levels(spec: &ArchitectureSpec) -> usize {
    match spec.variant {
        Variant::HadbFc => ceil_log2(spec.n_t),
        Variant::HadbPc => ceil_log2(spec.n_t / spec.n_rf),
        _ => 0,
    }
}

pub fn count_components(spec: &ArchitectureSpec) -> ComponentCount {
    let n = spec.n_t;
    let k = spec.n_rf;
    match spec.variant {
        Variant::Fd => ComponentCount { lines: n, ..Default::default() },
        Variant::HadbFc => ComponentCount {
            lines: n * k,
            phase_shifters: n * k,
            dividers: k * (n - 1),
            combiners: n,
            imas: k * divider_levels(spec),
            switches: 0,
        },
        Variant::HadbPc => ComponentCount {
            lines: n,
            phase_shifters: n,
            dividers: k * (n / k - 1),
            combiners: 0,
            imas: k * divider_levels(spec),
            switches: 0,
        },
        Variant::TaraFi | Variant::TaraSi => ComponentCount { lines: k, phase_shifters: n, ..Default::default() },
        Variant::Rl => ComponentCount { lines: k, switches: 1, ..Default::default() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aperture::build_ura;
    use crate::frontend::{build_architecture, GeometryParams, RfParams};

    fn counts(v: Variant, side: usize) -> ComponentCount {
        let g = build_ura(side, side, 0.5).unwrap();
        count_components(&build_architecture(v, &g, 4, RfParams::default(), &GeometryParams::default()).unwrap())
    }

    #[test]
    fn fully_connected_network_at_256_antennas() {
        let c = counts(Variant::HadbFc, 16);
        assert_eq!(c.lines, 1024);
        assert_eq!(c.phase_shifters, 1024);
        assert_eq!(c.dividers, 4 * 255);
        assert_eq!(c.combiners, 256);
        assert_eq!(c.imas, 32);
    }

    #[test]
    fn partially_connected_needs_no_combiners() {
        let c = counts(Variant::HadbPc, 8);
        assert_eq!(c.combiners, 0);
        assert_eq!(c.lines, 64);
    }

    #[test]
    fn illuminated_arrays_need_no_intermediate_amplifiers() {
        for side in [4, 8, 16] {
            assert_eq!(counts(Variant::TaraFi, side).imas, 0);
            assert_eq!(counts(Variant::TaraSi, side).imas, 0);
        }
    }

    #[test]
    fn lens_network_has_one_switch_and_no_phase_shifters() {
        let c = counts(Variant::Rl, 8);
        assert_eq!(c.switches, 1);
        assert_eq!(c.phase_shifters, 0);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(17), 5);
    }
}
