//! Coordinate descent and subset search against brute-force enumeration.

use mmimo_core::aperture::build_ura;
use mmimo_core::frontend::{
    build_architecture, ArchitectureSpec, FixedTransfer, GeometryParams, RfParams, Variant,
};
use mmimo_core::linalg::CMatrix;
use mmimo_core::precoder::{objective_j, search_trace, solve, SolverConfig, SubsetSearch};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) / 2f64.sqrt()
    })
}

/// Minimum J over every 2-bit phase assignment of a 4-antenna, 2-chain FC
/// network, built from first principles.
fn fc_exhaustive_j(h: &CMatrix, gamma: f64) -> f64 {
    let (n, k) = (4usize, 2usize);
    let levels = 4usize;
    let mut best = f64::INFINITY;
    for code in 0..levels.pow((n * k) as u32) {
        let mut c = code;
        let a = CMatrix::from_fn(n, k, |_, _| Complex64::new(0.0, 0.0));
        let mut a = a;
        for m in 0..n {
            for col in 0..k {
                let idx = c % levels;
                c /= levels;
                let phi = 2.0 * std::f64::consts::PI * idx as f64 / levels as f64;
                a[(m, col)] = Complex64::from_polar(gamma / (n as f64).sqrt(), phi);
            }
        }
        best = best.min(objective_j(h, &a));
    }
    best
}

#[test]
fn fc_descent_within_five_percent_of_enumeration() {
    let geom = build_ura(2, 2, 0.5).unwrap();
    let rf = RfParams::default();
    let spec = build_architecture(Variant::HadbFc, &geom, 2, rf, &GeometryParams::default()).unwrap();
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut found, mut optimal, mut within) = (0.0, 0.0, 0usize);
    for _ in 0..100 {
        let h = gaussian(&mut rng, 2, 4);
        let j_opt = fc_exhaustive_j(&h, rf.ps_amplitude());
        let sol = solve(&spec, &h, 1.0, 0.0, &cfg).unwrap();
        assert!(sol.feasible);
        // g² = p_t / J
        let ratio = sol.g_squared * j_opt;
        assert!(ratio <= 1.0 + 1e-9, "search beat exhaustive enumeration: {ratio}");
        found += sol.g_squared;
        optimal += 1.0 / j_opt;
        within += usize::from(ratio >= 0.95);
    }
    assert!(found / optimal >= 0.95, "ensemble g² ratio {}", found / optimal);
    assert!(within >= 90, "only {within} of 100 instances within 5%");
}

/// RL with an arbitrary six-beam network on four antennas.
fn rl_toy(rng: &mut ChaCha8Rng) -> ArchitectureSpec {
    let geom = build_ura(2, 2, 0.5).unwrap();
    let mut spec = build_architecture(Variant::Fd, &geom, 2, RfParams::default(), &GeometryParams::default()).unwrap();
    spec.variant = Variant::Rl;
    spec.fixed = FixedTransfer::Lens(gaussian(rng, 4, 6) * Complex64::new(0.3, 0.0));
    spec
}

fn rl_exhaustive(spec: &ArchitectureSpec, h: &CMatrix) -> (f64, Vec<usize>) {
    let FixedTransfer::Lens(l) = &spec.fixed else { unreachable!() };
    let sw = spec.rf.switch_amplitude();
    let mut best = (f64::INFINITY, vec![]);
    for a in 0..6 {
        for b in a + 1..6 {
            let sel = CMatrix::from_fn(4, 2, |m, c| l[(m, if c == 0 { a } else { b })] * sw);
            let j = objective_j(h, &sel);
            if j < best.0 {
                best = (j, vec![a, b]);
            }
        }
    }
    best
}

#[test]
fn rl_subset_search_matches_exhaustive_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut greedy_hits = 0;
    let trials = 200;
    for _ in 0..trials {
        let spec = rl_toy(&mut rng);
        let h = gaussian(&mut rng, 2, 4);
        let (j_opt, best) = rl_exhaustive(&spec, &h);
        for strategy in [SubsetSearch::Auto, SubsetSearch::Exhaustive, SubsetSearch::GreedySwap] {
            let cfg = SolverConfig { subset_search: strategy, ..SolverConfig::default() };
            let trace = search_trace(&spec, &h, &cfg).unwrap();
            let mut got = trace.state.beam_selection.clone();
            got.sort_unstable();
            if strategy == SubsetSearch::GreedySwap {
                assert!(trace.objective >= j_opt * (1.0 - 1e-12));
                greedy_hits += usize::from(got == best);
            } else {
                assert_eq!(got, best, "{strategy:?}");
                assert!((trace.objective - j_opt).abs() <= 1e-9 * j_opt);
            }
        }
    }
    eprintln!("greedy-swap found the optimum on {greedy_hits} of {trials}");
    assert!(greedy_hits * 100 >= trials * 95, "{greedy_hits} of {trials}");
}

#[test]
fn descent_history_never_increases() {
    let geom = build_ura(8, 8, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for v in [Variant::HadbFc, Variant::HadbPc, Variant::TaraFi, Variant::TaraSi] {
        let spec = build_architecture(v, &geom, 4, RfParams::default(), &GeometryParams::default()).unwrap();
        let h = gaussian(&mut rng, 4, 64);
        let trace = search_trace(&spec, &h, &SolverConfig::default()).unwrap();
        for w in trace.history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "{v}: {:?}", trace.history);
        }
        assert!((trace.objective - objective_j(&h, &mmimo_core::frontend::analog_transfer(&spec, &trace.state).unwrap())).abs() <= 1e-8 * trace.objective);
    }
}

#[test]
fn tara_single_user_los_phases_track_conjugate_field() {
    use mmimo_core::aperture::{steering_vector, Direction};
    use mmimo_core::frontend::quantize_phase;
    let geom = build_ura(8, 8, 0.5).unwrap();
    let gp = GeometryParams::default();
    let spec = build_architecture(Variant::TaraFi, &geom, 1, RfParams::default(), &gp).unwrap();
    let dir = Direction::from_degrees(20.0, 5.0).unwrap();
    let h = CMatrix::from_fn(1, 64, |_, m| steering_vector(&geom, &gp.pattern, &dir)[m].conj());
    let trace = search_trace(&spec, &h, &SolverConfig::default()).unwrap();
    let g = &spec.illumination().unwrap().g;
    let step = std::f64::consts::PI / 2.0;
    let close = (0..64)
        .filter(|&m| {
            let ideal = -(h[(0, m)] * g[(m, 0)]).arg();
            let got = quantize_phase(0.0, 2).value + step * trace.state.phases[m] as f64;
            let d = (got - ideal).rem_euclid(2.0 * std::f64::consts::PI);
            d.min(2.0 * std::f64::consts::PI - d) <= step + 1e-9
        })
        .count();
    assert!(close as f64 >= 0.95 * 64.0, "{close} of 64 within one step");
}

#[test]
fn gain_doubles_with_power_and_state_is_unchanged() {
    let geom = build_ura(8, 8, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = build_architecture(Variant::HadbPc, &geom, 4, RfParams::default(), &GeometryParams::default()).unwrap();
    let h = gaussian(&mut rng, 4, 64);
    let cfg = SolverConfig::default();
    let a = solve(&spec, &h, 10.0, 0.0, &cfg).unwrap();
    let b = solve(&spec, &h, 20.0, 0.0, &cfg).unwrap();
    assert_eq!(a.state, b.state);
    assert!((b.g_squared / a.g_squared - 2.0).abs() < 1e-12);
    assert!((&b.b - &a.b * Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-9 * b.b.norm());
}

#[test]
fn exact_zero_forcing_residual() {
    let geom = build_ura(8, 8, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for v in Variant::ALL {
        let spec = build_architecture(v, &geom, 4, RfParams::default(), &GeometryParams::default()).unwrap();
        let h = gaussian(&mut rng, 4, 64);
        let sol = solve(&spec, &h, 20.0, 0.0, &SolverConfig::default()).unwrap();
        assert!(sol.feasible);
        let g = sol.g_squared.sqrt();
        let t = &h * &sol.a * &sol.b;
        let resid = (&t - CMatrix::identity(4, 4) * Complex64::new(g, 0.0)).norm() / (g * 2.0);
        assert!(resid < 1e-8, "{v}: {resid}");
        assert!((sol.g_squared - 20.0 / sol.objective_j).abs() <= 1e-9 * sol.g_squared);
    }
}

#[test]
fn regularized_path_meets_evm_target() {
    let geom = build_ura(8, 8, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let spec = build_architecture(Variant::HadbFc, &geom, 4, RfParams::default(), &GeometryParams::default()).unwrap();
    let h = gaussian(&mut rng, 4, 64);
    let cfg = SolverConfig::default();
    let zf = solve(&spec, &h, 20.0, 0.0, &cfg).unwrap();
    for target in [0.05, 0.1, 0.2] {
        let sol = solve(&spec, &h, 20.0, target, &cfg).unwrap();
        assert!((sol.evm - target).abs() <= 0.01 * target, "target {target}: {}", sol.evm);
        // trading distortion buys useful gain
        assert!(sol.g_squared >= zf.g_squared * (1.0 - 1e-9));
        let radiated = (&sol.a * &sol.b).norm_squared();
        assert!((radiated - 20.0).abs() < 1e-9 * 20.0);
    }
}

#[test]
fn identity_channel_gain() {
    let geom = build_ura(2, 2, 0.5).unwrap();
    let spec = build_architecture(Variant::Fd, &geom, 4, RfParams::default(), &GeometryParams::default()).unwrap();
    let sol = solve(&spec, &CMatrix::identity(4, 4), 20.0, 0.0, &SolverConfig::default()).unwrap();
    assert!((sol.g_squared - 5.0).abs() < 1e-12);
    assert_eq!(sol.evm, 0.0);
}

#[test]
fn fd_is_never_beaten() {
    let geom = build_ura(8, 8, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let specs: Vec<_> = Variant::ALL
        .iter()
        .map(|&v| build_architecture(v, &geom, 4, RfParams::default(), &GeometryParams::default()).unwrap())
        .collect();
    for _ in 0..5 {
        let h = gaussian(&mut rng, 4, 64);
        let j_fd = objective_j(&h, &CMatrix::identity(64, 64));
        for spec in &specs {
            let sol = solve(spec, &h, 1.0, 0.0, &SolverConfig::default()).unwrap();
            assert!(sol.objective_j >= j_fd * (1.0 - 1e-9), "{}", spec.variant);
        }
    }
    let _ = rng.random::<u8>();
}
