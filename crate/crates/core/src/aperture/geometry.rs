use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A far-field direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    /// Radians in (−π, π].
    pub azimuth: f64,
    /// Radians in [−π/2, π/2].
    pub elevation: f64,
}

impl Direction {
    /// Wraps the azimuth into (−π, π]; rejects elevations outside
    /// [−π/2, π/2] and non-finite angles.
    pub fn new(azimuth: f64, elevation: f64) -> Result<Self> {
        if !azimuth.is_finite() || !elevation.is_finite() {
            return Err(Error::InvalidDirection(format!("non-finite angles ({azimuth}, {elevation})")));
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&elevation) {
            return Err(Error::InvalidDirection(format!("elevation {elevation} rad outside [-pi/2, pi/2]")));
        }
        Ok(Self { azimuth: wrap_azimuth(azimuth), elevation })
    }

    pub fn from_degrees(azimuth: f64, elevation: f64) -> Result<Self> {
        Self::new(azimuth.to_radians(), elevation.to_radians())
    }

    pub fn boresight() -> Self {
        Self { azimuth: 0.0, elevation: 0.0 }
    }

    /// Builds a direction from perturbed angles, wrapping azimuth and
    /// clamping elevation to the poles.
    pub(crate) fn clamped(azimuth: f64, elevation: f64) -> Self {
        Self { azimuth: wrap_azimuth(azimuth), elevation: elevation.clamp(-FRAC_PI_2, FRAC_PI_2) }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (se, ce) = self.elevation.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [ce * ca, ce * sa, se]
    }
}

fn wrap_azimuth(az: f64) -> f64 {
    let mut a = az.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Planar array in the y–z plane, centered on the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    /// Element positions in wavelengths, index `iy * ny + iz`.
    pub element_positions: Vec<[f64; 3]>,
    /// Elements along y (horizontal).
    pub nx: usize,
    /// Elements along z (vertical).
    pub ny: usize,
    /// Pitch in wavelengths.
    pub spacing: f64,
}

impl ArrayGeometry {
    pub fn len(&self) -> usize {
        self.element_positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.element_positions.is_empty()
    }

    /// Full side length of the aperture along y, counting one pitch per element.
    pub fn width(&self) -> f64 {
        self.nx as f64 * self.spacing
    }

    pub fn height(&self) -> f64 {
        self.ny as f64 * self.spacing
    }

    pub fn index(&self, iy: usize, iz: usize) -> usize {
        iy * self.ny + iz
    }
}

/// Uniform rectangular array with `nx` columns along y and `ny` rows along z.
pub fn build_ura(nx: usize, ny: usize, spacing: f64) -> Result<ArrayGeometry> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidGeometry(format!("element counts must be positive, got {nx}x{ny}")));
    }
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::InvalidGeometry(format!("spacing must be positive, got {spacing}")));
    }
    let y0 = (nx as f64 - 1.0) / 2.0;
    let z0 = (ny as f64 - 1.0) / 2.0;
    let mut element_positions = Vec::with_capacity(nx * ny);
    for iy in 0..nx {
        for iz in 0..ny {
            element_positions.push([0.0, (iy as f64 - y0) * spacing, (iz as f64 - z0) * spacing]);
        }
    }
    Ok(ArrayGeometry { element_positions, nx, ny, spacing })
}

/// Power gain pattern of a single radiator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementPattern {
    Isotropic,
    /// `2(q+1)·cosᑫθ` in front of the element, zero behind.
    CosinePower { q: f64 },
}

impl Default for ElementPattern {
    fn default() -> Self {
        ElementPattern::CosinePower { q: 1.0 }
    }
}

impl ElementPattern {
    /// Gain as a function of the cosine of the angle off the element axis.
    pub fn gain(&self, cos_theta: f64) -> f64 {
        match *self {
            ElementPattern::Isotropic => 1.0,
            ElementPattern::CosinePower { q } => {
                if cos_theta > 0.0 {
                    2.0 * (q + 1.0) * cos_theta.powf(q)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn is_isotropic(&self) -> bool {
        matches!(self, ElementPattern::Isotropic)
    }
}
