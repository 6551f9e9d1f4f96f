use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::db_to_amplitude;
use crate::aperture::ArrayGeometry;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Beam layout of one planar lens; two stacked lens sets give the 2-D grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensDesign {
    /// Beamports per lens.
    pub n_beams: usize,
    /// Outermost beam angle, radians.
    pub theta_max: f64,
}

impl Default for LensDesign {
    fn default() -> Self {
        Self { n_beams: 5, theta_max: 45f64.to_radians() }
    }
}

/// Beam pointing sines, uniform over `[−sin θ_max, sin θ_max]`.
pub fn beam_sines(n_beams: usize, theta_max: f64) -> Vec<f64> {
    if n_beams == 1 {
        return vec![0.0];
    }
    let s = theta_max.sin();
    (0..n_beams).map(|b| s * (2.0 * b as f64 / (n_beams - 1) as f64 - 1.0)).collect()
}

/// `n_ports × n_beams` transfer of one lens: column `b` is a true-time-delay
/// phase front toward `θ_b` across ports at pitch `spacing`, with amplitude
/// `10^(−il/20)/√n_ports`.
pub fn lens_1d(n_ports: usize, n_beams: usize, spacing: f64, theta_max: f64, il_db: f64) -> CMatrix {
    let amp = db_to_amplitude(-il_db) / (n_ports as f64).sqrt();
    let center = (n_ports as f64 - 1.0) / 2.0;
    let sines = beam_sines(n_beams, theta_max);
    CMatrix::from_fn(n_ports, n_beams, |m, b| {
        Complex64::from_polar(amp, 2.0 * PI * (m as f64 - center) * spacing * sines[b])
    })
}

/// Two stacked lens sets (azimuth and elevation) feeding an `n_ports ×
/// n_ports` array: `L = L_az ⊗ L_el`, `N_t × n_beams²`. Column
/// `b_az·n_beams + b_el` steers to `(sin θ_az, sin θ_el)` in the array's
/// y/z direction cosines; both stack losses apply.
pub fn rotman_beam_matrix(
    n_ports: usize,
    n_beams: usize,
    geom: &ArrayGeometry,
    lens_il_db: f64,
    theta_max: f64,
) -> Result<CMatrix> {
    if n_ports == 0 || n_beams == 0 {
        return Err(Error::InvalidArgument("lens needs at least one port and one beam".into()));
    }
    if geom.nx != n_ports || geom.ny != n_ports {
        return Err(Error::InvalidArgument(format!(
            "a {n_ports}-port lens stack cannot feed a {}x{} array",
            geom.nx, geom.ny
        )));
    }
    let az = lens_1d(n_ports, n_beams, geom.spacing, theta_max, lens_il_db);
    let el = lens_1d(n_ports, n_beams, geom.spacing, theta_max, lens_il_db);
    Ok(az.kronecker(&el))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aperture::build_ura;
    use approx::assert_relative_eq;

    #[test]
    fn center_beam_has_constant_phase() {
        let g = build_ura(8, 8, 0.5).unwrap();
        let l = rotman_beam_matrix(8, 5, &g, 2.0, 45f64.to_radians()).unwrap();
        assert_eq!(l.shape(), (64, 25));
        let center = l.column(12);
        for z in center.iter() {
            assert_relative_eq!(z.arg(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn column_power_carries_both_stack_losses() {
        let g = build_ura(8, 8, 0.5).unwrap();
        let il = 2.0;
        let l = rotman_beam_matrix(8, 5, &g, il, 45f64.to_radians()).unwrap();
        for c in l.column_iter() {
            let p: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            assert_relative_eq!(p, 10f64.powf(-2.0 * il / 10.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn beam_crosstalk_matches_dirichlet_kernel() {
        // Oracle: normalized overlap of two N-port linear phase fronts is
        // |sin(Nx)/(N sin x)| with x = π·d·(s_b − s_b').
        let n = 8;
        let d = 0.5;
        let tm = 45f64.to_radians();
        let l = lens_1d(n, 5, d, tm, 0.0);
        let s = beam_sines(5, tm);
        for b in 0..5 {
            for c in 0..5 {
                let got = l.column(b).dotc(&l.column(c)).norm();
                let x = PI * d * (s[b] - s[c]);
                let expected = if x.abs() < 1e-15 { 1.0 } else { ((n as f64 * x).sin() / (n as f64 * x.sin())).abs() };
                assert_relative_eq!(got, expected, epsilon = 1e-12);
            }
        }
        // Frozen table for the adjacent-beam overlap of the reference 5-beam grid.
        let adjacent = l.column(0).dotc(&l.column(1)).norm();
        assert_relative_eq!(adjacent, 0.228_521_4, epsilon = 1e-6);
    }

    #[test]
    fn mismatched_geometry_is_rejected() {
        let g = build_ura(4, 8, 0.5).unwrap();
        assert!(rotman_beam_matrix(8, 5, &g, 2.0, 0.7).is_err());
    }
}
