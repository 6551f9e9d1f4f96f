use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::aperture::{ArrayGeometry, ElementPattern};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Placement rules for transmit/reflect-array illuminators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaraLayout {
    /// Focal distance over illuminated aperture width.
    pub focal_ratio: f64,
    /// Side of the square on which full-illumination feeds sit, wavelengths.
    pub feed_square_side: f64,
    /// Illumination at the aperture edge relative to its center, dB.
    pub edge_taper_db: f64,
}

impl Default for TaraLayout {
    fn default() -> Self {
        Self { focal_ratio: 1.0, feed_square_side: 0.6, edge_taper_db: -10.0 }
    }
}

/// One illuminator: position, unit boresight and power pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feed {
    pub position: [f64; 3],
    pub axis: [f64; 3],
    pub pattern: ElementPattern,
}

impl Feed {
    /// Feed at `position` pointing at `target`.
    pub fn aimed(position: [f64; 3], target: [f64; 3], pattern: ElementPattern) -> Self {
        let d = sub(&target, &position);
        let n = norm(&d);
        Self { position, axis: [d[0] / n, d[1] / n, d[2] / n], pattern }
    }
}

/// Illumination matrix of a transmit/reflect array and its per-feed
/// spillover efficiencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Illumination {
    /// `N_t × n_feeds`.
    pub g: CMatrix,
    pub feeds: Vec<Feed>,
    pub spillover: Vec<f64>,
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Free-space coupling from each feed into each array element.
///
/// `|G_mk|² = G_feed(ψ)·A_cell·cosψ′ / (4π·d²)`: the share of the feed's
/// radiated power intercepted by the element's projected unit cell
/// (`A_cell = spacing²`). Phase is the path delay `exp(−j2πd)`. With
/// `support`, element `m` only couples to feed `support[m]`.
pub fn illumination_matrix(feeds: &[Feed], geom: &ArrayGeometry, support: Option<&[usize]>) -> Result<CMatrix> {
    if let Some(s) = support {
        if s.len() != geom.len() {
            return Err(Error::Illumination("support map length differs from element count".into()));
        }
    }
    let cell = geom.spacing * geom.spacing;
    let mut g = CMatrix::zeros(geom.len(), feeds.len());
    for (k, feed) in feeds.iter().enumerate() {
        if feed.position[0] <= 0.0 {
            return Err(Error::Illumination(format!("feed {k} is not in front of the array plane")));
        }
        for (m, p) in geom.element_positions.iter().enumerate() {
            if let Some(s) = support {
                if s[m] != k {
                    continue;
                }
            }
            let d = sub(p, &feed.position);
            let dist = norm(&d);
            if dist < 1e-9 {
                return Err(Error::Illumination(format!("feed {k} coincides with element {m}")));
            }
            let cos_feed = dot(&d, &feed.axis) / dist;
            let cos_elem = d[0].abs() / dist;
            let power = feed.pattern.gain(cos_feed) * cell * cos_elem / (4.0 * PI * dist * dist);
            g[(m, k)] = Complex64::from_polar(power.sqrt(), -2.0 * PI * dist);
        }
    }
    Ok(g)
}

/// Column power of `G`: the fraction of each feed's power captured by the
/// array (the complement of spillover).
pub fn captured_fraction(g: &CMatrix) -> Vec<f64> {
    g.column_iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect()
}

/// Edge-to-center illumination ratio in dB for an on-axis `cosᑫ` feed at
/// `focal` above the center of an aperture of half-width `half_width`.
pub fn edge_taper_db(q: f64, focal: f64, half_width: f64) -> f64 {
    let edge = (focal * focal + half_width * half_width).sqrt();
    let c = focal / edge;
    // feed pattern, spreading loss, element obliquity
    10.0 * (c.powf(q) * c * c * c).log10()
}

/// Smallest `cosᑫ` exponent whose edge taper reaches `target_db`.
pub fn solve_feed_exponent(focal: f64, half_width: f64, target_db: f64) -> f64 {
    if edge_taper_db(0.0, focal, half_width) <= target_db {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while edge_taper_db(hi, focal, half_width) > target_db {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if edge_taper_db(mid, focal, half_width) > target_db {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Full illumination: `n_feeds` illuminators on a ring through the corners
/// of a `feed_square_side` square, at focal distance `focal_ratio·D` and all
/// aimed at the aperture center.
pub fn full_illumination_feeds(geom: &ArrayGeometry, n_feeds: usize, layout: &TaraLayout) -> Vec<Feed> {
    let aperture = geom.width().max(geom.height());
    let focal = layout.focal_ratio * aperture;
    let q = solve_feed_exponent(focal, aperture / 2.0, layout.edge_taper_db);
    let radius = if n_feeds > 1 { layout.feed_square_side / 2f64.sqrt() } else { 0.0 };
    (0..n_feeds)
        .map(|k| {
            let ang = PI / 4.0 + 2.0 * PI * k as f64 / n_feeds as f64;
            let pos = [focal, radius * ang.cos(), radius * ang.sin()];
            Feed::aimed(pos, [0.0, 0.0, 0.0], ElementPattern::CosinePower { q })
        })
        .collect()
}

/// Separate illumination: one feed per tile, centered above it at focal
/// distance `focal_ratio·tile width`.
pub fn separate_illumination_feeds(geom: &ArrayGeometry, tiles: &[usize], n_tiles: usize, layout: &TaraLayout) -> Vec<Feed> {
    (0..n_tiles)
        .map(|k| {
            let members: Vec<&[f64; 3]> =
                geom.element_positions.iter().zip(tiles).filter(|(_, t)| **t == k).map(|(p, _)| p).collect();
            let n = members.len() as f64;
            let cy = members.iter().map(|p| p[1]).sum::<f64>() / n;
            let cz = members.iter().map(|p| p[2]).sum::<f64>() / n;
            let extent = |f: fn(&[f64; 3]) -> f64| {
                let lo = members.iter().map(|p| f(p)).fold(f64::INFINITY, f64::min);
                let hi = members.iter().map(|p| f(p)).fold(f64::NEG_INFINITY, f64::max);
                hi - lo + geom.spacing
            };
            let width = extent(|p| p[1]).max(extent(|p| p[2]));
            let focal = layout.focal_ratio * width;
            let q = solve_feed_exponent(focal, width / 2.0, layout.edge_taper_db);
            Feed::aimed([focal, cy, cz], [0.0, cy, cz], ElementPattern::CosinePower { q })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aperture::build_ura;
    use approx::assert_relative_eq;

    #[test]
    fn boresight_element_phase_is_path_delay() {
        let g = build_ura(1, 1, 0.5).unwrap();
        let f = 3.3;
        let feed = Feed::aimed([f, 0.0, 0.0], [0.0; 3], ElementPattern::CosinePower { q: 4.0 });
        let m = illumination_matrix(&[feed], &g, None).unwrap();
        let expected = (-2.0 * PI * f).rem_euclid(2.0 * PI);
        assert_relative_eq!(m[(0, 0)].arg().rem_euclid(2.0 * PI), expected, epsilon = 1e-9);
    }

    #[test]
    fn doubling_distance_halves_boresight_amplitude() {
        let g = build_ura(1, 1, 0.5).unwrap();
        let p = ElementPattern::CosinePower { q: 6.0 };
        let near = illumination_matrix(&[Feed::aimed([2.0, 0.0, 0.0], [0.0; 3], p)], &g, None).unwrap();
        let far = illumination_matrix(&[Feed::aimed([4.0, 0.0, 0.0], [0.0; 3], p)], &g, None).unwrap();
        assert_relative_eq!(far[(0, 0)].norm() / near[(0, 0)].norm(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn coincident_or_rear_feed_is_rejected() {
        let g = build_ura(2, 2, 0.5).unwrap();
        let rear = Feed::aimed([-1.0, 0.0, 0.0], [0.0; 3], ElementPattern::Isotropic);
        assert!(illumination_matrix(&[rear], &g, None).is_err());
        let on_plane = Feed { position: [0.0, 0.25, 0.25], axis: [-1.0, 0.0, 0.0], pattern: ElementPattern::Isotropic };
        assert!(illumination_matrix(&[on_plane], &g, None).is_err());
    }

    #[test]
    fn exponent_hits_target_taper() {
        let q = solve_feed_exponent(4.0, 2.0, -10.0);
        assert_relative_eq!(edge_taper_db(q, 4.0, 2.0), -10.0, epsilon = 1e-9);
        assert!(q > 0.0);
    }
}
