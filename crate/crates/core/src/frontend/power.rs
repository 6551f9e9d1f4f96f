use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::architecture::{ArchitectureSpec, Variant};
use super::components::{count_components, divider_levels};
use super::params::{db_to_power, RfParams};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_sq, CMatrix};

/// Consumed-power ledger for one operating point, W.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    pub p_radiated: f64,
    /// RF output of all power amplifiers.
    pub p_pa_out: f64,
    pub p_pa_dc: f64,
    pub p_rf_chains: f64,
    pub p_ima: f64,
    pub p_total: f64,
}

impl PowerBreakdown {
    pub fn efficiency(&self) -> f64 {
        self.p_radiated / self.p_total
    }
}

/// Matched K:1 combiner: output `Σu/√K`, the rest is dissipated in the
/// isolation resistors.
pub fn wilkinson_combine(inputs: &[Complex64]) -> Result<(Complex64, f64)> {
    if inputs.len() < 2 {
        return Err(Error::InvalidArgument("a combiner needs at least two inputs".into()));
    }
    let k = inputs.len() as f64;
    let sum: Complex64 = inputs.iter().sum();
    let out = sum / k.sqrt();
    let incoming: f64 = inputs.iter().map(|z| z.norm_sqr()).sum();
    let dissipated = (incoming - out.norm_sqr()).max(0.0);
    Ok((out, dissipated))
}

/// Average power delivered by the per-antenna combiners of a fully connected
/// network over the power entering them, for unit-power independent symbols
/// driven through the digital precoder `b`. One for every other variant.
pub fn combining_efficiency(spec: &ArchitectureSpec, a: &CMatrix, b: &CMatrix) -> f64 {
    if spec.variant != Variant::HadbFc {
        return 1.0;
    }
    let k = spec.n_rf as f64;
    let combined = frobenius_sq(&(a * b));
    let mut branches = 0.0;
    for c in 0..a.ncols() {
        let col: f64 = a.column(c).iter().map(|z| z.norm_sqr()).sum();
        let chain: f64 = b.row(c).iter().map(|z| z.norm_sqr()).sum();
        branches += col * chain;
    }
    let incoming = k * branches;
    if incoming > 0.0 {
        (combined / incoming).clamp(0.0, 1.0)
    } else {
        1.0
    }
}

/// Power the PAs must deliver to radiate `p_t`, per PA placement.
fn pa_output(spec: &ArchitectureSpec, p_t: f64) -> f64 {
    let rf = &spec.rf;
    match spec.variant {
        Variant::Fd | Variant::HadbFc | Variant::HadbPc => p_t,
        Variant::TaraFi | Variant::TaraSi => {
            let eta_sp = spec.mean_spillover().unwrap_or(1.0);
            p_t / (eta_sp * rf.ps_amplitude().powi(2))
        }
        Variant::Rl => p_t / (rf.switch_amplitude().powi(2) * rf.lens_amplitude().powi(4)),
    }
}

/// Signal power the intermediate amplifiers of a hybrid network add to make
/// up divider excess, phase-shifter loss and combiner waste.
fn ima_makeup(spec: &ArchitectureSpec, rf: &RfParams, p_pa_out: f64, combining_efficiency: f64) -> f64 {
    let levels = divider_levels(spec) as f64;
    let network = rf.ps_amplitude().powi(2) * db_to_power(-rf.divider_excess_db * levels) * combining_efficiency;
    let drive = p_pa_out / db_to_power(rf.pa_gain_db);
    drive * (1.0 / network - 1.0)
}

/// Total consumption to radiate `p_t`.
///
/// `combining_efficiency` comes from the active precoder state and only
/// matters for the fully connected network.
pub fn consumed_power(spec: &ArchitectureSpec, p_t: f64, combining_efficiency: f64) -> Result<PowerBreakdown> {
    if !(p_t > 0.0) || !p_t.is_finite() {
        return Err(Error::NonPositivePower(p_t));
    }
    if !(combining_efficiency > 0.0 && combining_efficiency <= 1.0) {
        return Err(Error::InvalidArgument(format!("combining efficiency {combining_efficiency} outside (0, 1]")));
    }
    let rf = &spec.rf;
    let p_pa_out = pa_output(spec, p_t);
    let p_pa_dc = p_pa_out / rf.eta_pae;
    let p_rf_chains = spec.chain_count() as f64 * rf.p_rf_chain;
    let p_ima = if spec.variant.is_hybrid() {
        let counts = count_components(spec);
        counts.imas as f64 * rf.p_ima_fixed + ima_makeup(spec, rf, p_pa_out, combining_efficiency) / rf.eta_ima
    } else {
        0.0
    };
    Ok(PowerBreakdown {
        p_radiated: p_t,
        p_pa_out,
        p_pa_dc,
        p_rf_chains,
        p_ima,
        p_total: p_pa_dc + p_rf_chains + p_ima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aperture::build_ura;
    use crate::frontend::{build_architecture, FixedTransfer, GeometryParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(v: Variant) -> ArchitectureSpec {
        let g = build_ura(8, 8, 0.5).unwrap();
        build_architecture(v, &g, 4, RfParams::default(), &GeometryParams::default()).unwrap()
    }

    #[test]
    fn coherent_pair_combines_losslessly() {
        let (out, diss) = wilkinson_combine(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_relative_eq!(out.norm_sqr(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(diss, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn antiphase_pair_is_fully_dissipated() {
        let (out, diss) = wilkinson_combine(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_relative_eq!(out.norm_sqr(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(diss, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn single_active_input_of_four() {
        let z = c(0.0, 0.0);
        let (out, diss) = wilkinson_combine(&[c(1.0, 0.0), z, z, z]).unwrap();
        // |Σu|²/K vs Σ|u|²
        assert_relative_eq!(out.norm_sqr(), 0.25, epsilon = 1e-15);
        assert_relative_eq!(diss, 0.75, epsilon = 1e-15);
        assert!(wilkinson_combine(&[c(1.0, 0.0)]).is_err());
    }

    proptest! {
        #[test]
        fn dissipation_is_nonnegative_and_zero_only_for_equal_inputs(
            parts in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..6)
        ) {
            let u: Vec<Complex64> = parts.iter().map(|(r, i)| c(*r, *i)).collect();
            let (_, diss) = wilkinson_combine(&u).unwrap();
            prop_assert!(diss >= 0.0);
            let spread: f64 = u.iter().map(|z| (z - u[0]).norm_sqr()).sum();
            // Σ|u|² − |Σu|²/K = Σ|u − ū|²; zero exactly when all inputs agree.
            let mean: Complex64 = u.iter().sum::<Complex64>() / u.len() as f64;
            let var: f64 = u.iter().map(|z| (z - mean).norm_sqr()).sum();
            prop_assert!((diss - var).abs() < 1e-9 * (1.0 + var));
            if spread > 1e-6 { prop_assert!(diss > 0.0); }
        }

        #[test]
        fn ledger_adds_up_and_grows_with_power(p in 0.01f64..500.0, v in 0usize..6) {
            let s = spec(Variant::ALL[v]);
            let a = consumed_power(&s, p, 0.5).unwrap();
            let b = consumed_power(&s, p * 1.01, 0.5).unwrap();
            prop_assert!((a.p_total - (a.p_pa_dc + a.p_rf_chains + a.p_ima)).abs() < 1e-12 * a.p_total);
            prop_assert!(a.p_radiated <= s.rf.eta_pae * a.p_pa_dc * (1.0 + 1e-12));
            prop_assert!(b.p_total > a.p_total);
        }
    }

    #[test]
    fn fully_digital_reference_point() {
        let p = consumed_power(&spec(Variant::Fd), 20.0, 1.0).unwrap();
        assert_relative_eq!(p.p_total, 173.12, epsilon = 1e-9);
        assert_relative_eq!(p.efficiency(), 20.0 / 173.12, epsilon = 1e-12);
    }

    #[test]
    fn lossless_tara_limit() {
        let mut s = spec(Variant::TaraFi);
        s.rf.ps_loss_db = 0.0;
        if let FixedTransfer::Illumination(ill) = &mut s.fixed {
            ill.spillover = vec![1.0; 4];
        }
        let p = consumed_power(&s, 20.0, 1.0).unwrap();
        assert_relative_eq!(p.p_total, 48.32, epsilon = 1e-9);
    }

    #[test]
    fn combiner_waste_costs_ima_power() {
        let s = spec(Variant::HadbFc);
        let full = consumed_power(&s, 20.0, 1.0).unwrap();
        let half = consumed_power(&s, 20.0, 0.5).unwrap();
        assert!(half.p_ima > full.p_ima);
    }

    #[test]
    fn rejects_nonpositive_power() {
        assert_eq!(consumed_power(&spec(Variant::Fd), 0.0, 1.0), Err(Error::NonPositivePower(0.0)));
        assert!(consumed_power(&spec(Variant::Fd), -1.0, 1.0).is_err());
    }

}
