use std::sync::OnceLock;

use mmimo_core::aperture::{build_ura, Direction};
use mmimo_core::frontend::{
    analog_transfer, build_architecture, consumed_power, quantize_phase, wilkinson_combine, AnalogState,
    ArchitectureSpec, GeometryParams, RfParams, Variant,
};
use mmimo_core::linalg::CMatrix;
use mmimo_core::metrics::{steering_efficiency, SteeringSubject};
use mmimo_core::precoder::{solve, SolverConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn specs() -> &'static [ArchitectureSpec] {
    static SPECS: OnceLock<Vec<ArchitectureSpec>> = OnceLock::new();
    SPECS.get_or_init(|| {
        let g = build_ura(4, 4, 0.5).unwrap();
        Variant::ALL
            .iter()
            .map(|&v| build_architecture(v, &g, 2, RfParams::default(), &GeometryParams::default()).unwrap())
            .collect()
    })
}

fn spec_of(v: Variant) -> &'static ArchitectureSpec {
    specs().iter().find(|s| s.variant == v).unwrap()
}

fn channel(values: &[(f64, f64)], k: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(k, n, |r, c| {
        let (re, im) = values[r * n + c];
        Complex64::new(re, im)
    })
}

fn random_state(spec: &ArchitectureSpec, seeds: &[usize]) -> AnalogState {
    let levels = spec.phase_levels();
    let phases = (0..spec.phase_count()).map(|i| seeds[i % seeds.len()].wrapping_mul(i + 1) % levels).collect();
    let beam_selection = if spec.variant == Variant::Rl {
        let nb = spec.n_beams();
        let first = seeds[0] % nb;
        vec![first, (first + 1 + seeds[1 % seeds.len()] % (nb - 1)) % nb]
    } else {
        Vec::new()
    };
    AnalogState { phases, beam_selection }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn analog_networks_are_passive(seeds in prop::collection::vec(0usize..1000, 1..8)) {
        for spec in specs().iter().filter(|s| s.variant != Variant::Fd) {
            let a = analog_transfer(spec, &random_state(spec, &seeds)).unwrap();
            for col in a.column_iter() {
                let p: f64 = col.iter().map(|z| z.norm_sqr()).sum();
                prop_assert!(p <= 1.0 + 1e-12, "{} column power {p}", spec.variant);
            }
        }
    }

    #[test]
    fn fully_digital_is_never_beaten(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32)) {
        let h = channel(&values, 2, 16);
        let cfg = SolverConfig { restarts: 0, ..SolverConfig::default() };
        let fd = solve(spec_of(Variant::Fd), &h, 1.0, 0.0, &cfg).unwrap();
        prop_assume!(fd.feasible);
        for spec in specs().iter().filter(|s| s.variant != Variant::Fd) {
            let sol = solve(spec, &h, 1.0, 0.0, &cfg).unwrap();
            if sol.feasible {
                prop_assert!(sol.g_squared <= fd.g_squared * (1.0 + 1e-9), "{} beat FD", spec.variant);
            }
        }
    }

    #[test]
    fn steering_efficiency_is_a_fraction(az in -60.0f64..60.0, el in -15.0f64..15.0, p_t in 0.01f64..1000.0) {
        let dir = Direction::from_degrees(az, el).unwrap();
        let cfg = SolverConfig::default();
        for spec in specs() {
            let se = steering_efficiency(SteeringSubject::Architecture(spec), &dir, p_t, &cfg).unwrap().se;
            prop_assert!(se > 0.0 && se <= 1.0, "{} SE {se}", spec.variant);
        }
    }

    #[test]
    fn consumption_grows_with_radiated_power(p in 0.01f64..500.0, factor in 1.001f64..10.0, eta in 0.05f64..1.0) {
        for spec in specs() {
            let lo = consumed_power(spec, p, eta).unwrap();
            let hi = consumed_power(spec, p * factor, eta).unwrap();
            prop_assert!(hi.p_total > lo.p_total);
            prop_assert!(lo.p_total >= lo.p_radiated);
            prop_assert!(lo.efficiency() < hi.efficiency() + 1e-12);
        }
    }

    #[test]
    fn quantizer_is_idempotent_and_bounded(phi in -20.0f64..20.0, bits in 1u32..8) {
        let q = quantize_phase(phi, bits);
        prop_assert_eq!(quantize_phase(q.value, bits).index, q.index);
        let wrapped = (phi - q.value).rem_euclid(2.0 * std::f64::consts::PI);
        let err = wrapped.min(2.0 * std::f64::consts::PI - wrapped);
        prop_assert!(err <= std::f64::consts::PI / f64::from(1u32 << bits) + 1e-12);
    }

    #[test]
    fn combiner_dissipation_is_nonnegative(
        inputs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..9),
    ) {
        let u: Vec<Complex64> = inputs.iter().map(|&(r, i)| Complex64::new(r, i)).collect();
        let (out, lost) = wilkinson_combine(&u).unwrap();
        let incoming: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!(lost >= 0.0);
        prop_assert!((out.norm_sqr() + lost - incoming).abs() <= 1e-9 * incoming.max(1.0));
    }

    #[test]
    fn gain_scales_linearly_with_power(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32), p in 0.1f64..100.0) {
        let h = channel(&values, 2, 16);
        let cfg = SolverConfig { restarts: 0, ..SolverConfig::default() };
        let spec = spec_of(Variant::HadbPc);
        let one = solve(spec, &h, 1.0, 0.0, &cfg).unwrap();
        let many = solve(spec, &h, p, 0.0, &cfg).unwrap();
        prop_assume!(one.feasible);
        prop_assert_eq!(&one.state, &many.state);
        prop_assert!((many.g_squared / one.g_squared - p).abs() <= 1e-9 * p);
    }
}
