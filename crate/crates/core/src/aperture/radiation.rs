use std::f64::consts::PI;

use num_complex::Complex64;

use super::geometry::{ArrayGeometry, Direction, ElementPattern};
use super::quadrature::SphereQuadrature;
use crate::error::{Error, Result};
use crate::linalg::{vector_norm_sq, CVector};

fn dot(p: &[f64; 3], u: &[f64; 3]) -> f64 {
    p[0] * u[0] + p[1] * u[1] + p[2] * u[2]
}

/// Entry `m` is `√G(u)·exp(+j2π⟨p_m, u⟩)`; all elements face +x.
pub fn steering_vector(geom: &ArrayGeometry, pattern: &ElementPattern, dir: &Direction) -> CVector {
    steering_from_unit(geom, pattern, &dir.unit_vector())
}

pub(crate) fn steering_from_unit(geom: &ArrayGeometry, pattern: &ElementPattern, u: &[f64; 3]) -> CVector {
    let amp = pattern.gain(u[0]).sqrt();
    CVector::from_iterator(
        geom.len(),
        geom.element_positions.iter().map(|p| Complex64::from_polar(amp, 2.0 * PI * dot(p, u))),
    )
}

/// `|aᴴw|²` toward the unit vector `u`.
fn array_response_sq(geom: &ArrayGeometry, pattern: &ElementPattern, w: &CVector, u: &[f64; 3]) -> f64 {
    let g = pattern.gain(u[0]);
    if g == 0.0 {
        return 0.0;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, wm) in geom.element_positions.iter().zip(w.iter()) {
        acc += wm * Complex64::from_polar(1.0, -2.0 * PI * dot(p, u));
    }
    g * acc.norm_sqr()
}

fn check_excitation(geom: &ArrayGeometry, w: &CVector) -> Result<()> {
    if w.len() != geom.len() {
        return Err(Error::InvalidArgument(format!(
            "excitation has {} entries, array has {} elements",
            w.len(),
            geom.len()
        )));
    }
    if vector_norm_sq(w) == 0.0 {
        return Err(Error::ZeroExcitation);
    }
    Ok(())
}

/// Radiation intensity `U = |aᴴw|²/(4π)` in W/sr for excitation `w` in √W.
pub fn radiation_intensity(geom: &ArrayGeometry, pattern: &ElementPattern, w: &CVector, dir: &Direction) -> Result<f64> {
    check_excitation(geom, w)?;
    Ok(array_response_sq(geom, pattern, w, &dir.unit_vector()) / (4.0 * PI))
}

/// `∮U dΩ` by the given quadrature.
pub fn radiated_power(geom: &ArrayGeometry, pattern: &ElementPattern, w: &CVector, quad: &SphereQuadrature) -> Result<f64> {
    check_excitation(geom, w)?;
    let p = quad.integrate(|u| array_response_sq(geom, pattern, w, &u)) / (4.0 * PI);
    if p.is_finite() && p > 0.0 {
        Ok(p)
    } else {
        Err(Error::Quadrature)
    }
}

/// `D = 4π·U(dir) / ∮U dΩ` with the default quadrature order for the array.
pub fn directivity(geom: &ArrayGeometry, pattern: &ElementPattern, w: &CVector, dir: &Direction) -> Result<f64> {
    let quad = SphereQuadrature::for_elements(geom.len());
    directivity_with(geom, pattern, w, dir, &quad)
}

pub fn directivity_with(
    geom: &ArrayGeometry,
    pattern: &ElementPattern,
    w: &CVector,
    dir: &Direction,
    quad: &SphereQuadrature,
) -> Result<f64> {
    let u = radiation_intensity(geom, pattern, w, dir)?;
    let total = radiated_power(geom, pattern, w, quad)?;
    let d = 4.0 * PI * u / total;
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::Quadrature)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aperture::build_ura;
    use approx::assert_relative_eq;

    #[test]
    fn boresight_isotropic_steering_is_all_ones() {
        let g = build_ura(4, 4, 0.5).unwrap();
        let a = steering_vector(&g, &ElementPattern::Isotropic, &Direction::boresight());
        for z in a.iter() {
            assert_relative_eq!(z.re, 1.0, epsilon = 1e-12);
            assert_relative_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn endfire_pair_is_in_antiphase() {
        let g = build_ura(2, 1, 0.5).unwrap();
        let d = Direction::from_degrees(90.0, 0.0).unwrap();
        let a = steering_vector(&g, &ElementPattern::Isotropic, &d);
        let ratio = a[1] / a[0];
        assert_relative_eq!(ratio.re, -1.0, epsilon = 1e-12);
        assert_relative_eq!(ratio.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn self_inner_product_sums_element_gains() {
        let g = build_ura(8, 8, 0.5).unwrap();
        let pattern = ElementPattern::CosinePower { q: 1.0 };
        let d = Direction::from_degrees(10.0, 0.0).unwrap();
        let a = steering_vector(&g, &pattern, &d);
        let ip = a.dotc(&a);
        // Oracle: 64 elements, each with gain 4·cos(10°).
        let expected = 64.0 * 4.0 * 10f64.to_radians().cos();
        assert_relative_eq!(ip.re, expected, max_relative = 1e-12);
        assert_relative_eq!(ip.im, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn single_isotropic_element_radiates_uniformly() {
        let g = build_ura(1, 1, 0.5).unwrap();
        let w = CVector::from_element(1, Complex64::new(1.0, 0.0));
        for (az, el) in [(0.0, 0.0), (123.0, 40.0), (-170.0, -80.0)] {
            let d = Direction::from_degrees(az, el).unwrap();
            let u = radiation_intensity(&g, &ElementPattern::Isotropic, &w, &d).unwrap();
            assert_relative_eq!(u, 1.0 / (4.0 * PI), epsilon = 1e-15);
            assert_relative_eq!(directivity(&g, &ElementPattern::Isotropic, &w, &d).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn antiphase_pair_nulls_broadside() {
        let g = build_ura(2, 1, 0.5).unwrap();
        let w = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let u = radiation_intensity(&g, &ElementPattern::Isotropic, &w, &Direction::boresight()).unwrap();
        assert!(u < 1e-30);
    }

    #[test]
    fn zero_excitation_is_rejected() {
        let g = build_ura(2, 1, 0.5).unwrap();
        let w = CVector::zeros(2);
        assert_eq!(
            radiation_intensity(&g, &ElementPattern::Isotropic, &w, &Direction::boresight()),
            Err(Error::ZeroExcitation)
        );
    }
}
