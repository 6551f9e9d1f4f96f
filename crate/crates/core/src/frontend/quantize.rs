use std::f64::consts::PI;

use num_complex::Complex64;

/// Index into the uniform grid `{2πi/2ᵇ}` and the grid phase itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizedPhase {
    pub index: usize,
    pub value: f64,
}

/// Nearest point of the `bits`-bit uniform phase grid, wrap-around aware.
/// An input exactly between two grid points resolves to the lower index.
pub fn quantize_phase(phi: f64, bits: u32) -> QuantizedPhase {
    assert!(bits >= 1, "phase quantizer needs at least one bit");
    let levels = 1usize << bits;
    let step = 2.0 * PI / levels as f64;
    let x = phi.rem_euclid(2.0 * PI) / step;
    let lower = x.floor();
    let frac = x - lower;
    let mut index = if frac > 0.5 { lower as usize + 1 } else { lower as usize };
    index %= levels;
    QuantizedPhase { index, value: index as f64 * step }
}

/// Unit phasors of the `bits`-bit grid.
pub fn phase_alphabet(bits: u32) -> Vec<Complex64> {
    let levels = 1usize << bits;
    (0..levels).map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / levels as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn nearest_grid_points() {
        assert_relative_eq!(quantize_phase(0.3 * PI, 2).value, PI / 2.0);
        assert_relative_eq!(quantize_phase(PI, 2).value, PI);
        let q = quantize_phase(1.9 * PI, 2);
        assert_eq!(q.index, 0);
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn ties_go_to_lower_index() {
        assert_eq!(quantize_phase(PI / 4.0, 2).index, 0);
        assert_eq!(quantize_phase(PI / 2.0, 1).index, 0);
    }

    fn wrapped_distance(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    }

    proptest! {
        #[test]
        fn idempotent_and_error_bounded(phi in -20.0f64..20.0, bits in 1u32..6) {
            let q = quantize_phase(phi, bits);
            let qq = quantize_phase(q.value, bits);
            prop_assert_eq!(q.index, qq.index);
            let bound = PI / (1u32 << bits) as f64;
            prop_assert!(wrapped_distance(phi, q.value) <= bound + 1e-12);
        }
    }
}
