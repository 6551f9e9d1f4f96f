use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss-Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Deterministic product rule over the unit sphere.
///
/// Gauss-Legendre in `μ = sin(elevation)` times Gauss-Legendre in azimuth on
/// the front (|az| < π/2) and back half-spaces separately, so the kink of
/// front-hemisphere element patterns at the array plane falls on a panel
/// boundary.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    /// Unit direction vectors.
    pub points: Vec<[f64; 3]>,
    /// Solid-angle weights, summing to 4π.
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    /// `n_mu` nodes in sin(elevation), `n_half` azimuth nodes per half-space.
    pub fn new(n_mu: usize, n_half: usize) -> Self {
        let (mu, wmu) = gauss_legendre(n_mu);
        let (t, wt) = gauss_legendre(n_half);
        let mut points = Vec::with_capacity(n_mu * n_half * 2);
        let mut weights = Vec::with_capacity(n_mu * n_half * 2);
        for (m, wm) in mu.iter().zip(&wmu) {
            let ce = (1.0 - m * m).max(0.0).sqrt();
            for center in [0.0, PI] {
                for (ti, wti) in t.iter().zip(&wt) {
                    let az = center + FRAC_PI_2 * ti;
                    points.push([ce * az.cos(), ce * az.sin(), *m]);
                    weights.push(wm * wti * FRAC_PI_2);
                }
            }
        }
        Self { points, weights }
    }

    /// Default order for an `n_elements` aperture: `2·√N + 32` nodes in
    /// elevation and as many per azimuth half-space.
    pub fn for_elements(n_elements: usize) -> Self {
        let n = 2 * (n_elements as f64).sqrt().ceil() as usize + 32;
        Self::new(n, n)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: FnMut([f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }
}
