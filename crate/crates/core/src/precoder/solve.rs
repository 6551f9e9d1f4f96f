use num_complex::Complex64;

use super::search::{optimize_analog, SolverConfig};
use crate::error::{Error, Result};
use crate::frontend::{analog_transfer, combining_efficiency, AnalogState, ArchitectureSpec};
use crate::linalg::{checked_inverse, frobenius_sq, CMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSolution {
    pub state: AnalogState,
    /// Analog transfer for `state`.
    pub a: CMatrix,
    /// Digital precoder, chains × users, scaled so `‖A·B‖²_F = p_t`.
    pub b: CMatrix,
    /// Useful per-user gain power `|tr(H·A·B)/K|²`.
    pub g_squared: f64,
    pub evm: f64,
    /// Combiner efficiency of the fully connected network, 1 otherwise.
    pub combining_efficiency: f64,
    pub objective_j: f64,
    /// Total received power `‖H·A·B‖²_F`, interference included.
    pub rx_total: f64,
    pub feasible: bool,
}

impl PrecoderSolution {
    /// Aggregate useful receive power `K·g²`.
    pub fn rx_useful(&self) -> f64 {
        self.b.ncols() as f64 * self.g_squared
    }
}

/// `(gain, evm)` of the effective transfer `T = H·A·B`.
fn distortion(t: &CMatrix) -> (Complex64, f64) {
    let k = t.nrows();
    let g = t.trace() / k as f64;
    let mut residual = t.clone();
    for i in 0..k {
        residual[(i, i)] -= g;
    }
    let evm = if g.norm_sqr() > 0.0 {
        (frobenius_sq(&residual) / (k as f64 * g.norm_sqr())).sqrt()
    } else {
        f64::INFINITY
    };
    (g, evm)
}

/// Regularized inverse `(MᴴM + λ·AᴴA)⁻¹Mᴴ` with `M = H·A`, scaled to `p_t`.
fn regularized(m: &CMatrix, a: &CMatrix, gram: &CMatrix, lambda: f64, p_t: f64) -> Option<CMatrix> {
    let lhs = m.adjoint() * m + gram * Complex64::new(lambda, 0.0);
    let b = checked_inverse(&lhs)? * m.adjoint();
    let power = frobenius_sq(&(a * &b));
    (power > 0.0).then(|| b * Complex64::new((p_t / power).sqrt(), 0.0))
}

/// Analog optimization followed by the digital stage.
///
/// `evm_target = 0` gives exact zero-forcing with `g² = p_t/J`. A positive
/// target trades residual interference for gain through a regularized
/// inverse whose weight is bisected until the EVM meets the target within 1%.
pub fn solve(
    spec: &ArchitectureSpec,
    h: &CMatrix,
    p_t: f64,
    evm_target: f64,
    cfg: &SolverConfig,
) -> Result<PrecoderSolution> {
    if !(p_t > 0.0) || !p_t.is_finite() {
        return Err(Error::NonPositivePower(p_t));
    }
    if !(evm_target >= 0.0) || !evm_target.is_finite() {
        return Err(Error::InvalidArgument(format!("EVM target {evm_target} must be finite and non-negative")));
    }
    let state = optimize_analog(spec, h, cfg)?;
    let a = analog_transfer(spec, &state)?;
    let m = h * &a;
    let k = h.nrows();
    let j = super::zf::objective_j(h, &a);

    let infeasible = |state: AnalogState, a: CMatrix| PrecoderSolution {
        b: CMatrix::zeros(a.ncols(), k),
        state,
        a,
        g_squared: 0.0,
        evm: f64::INFINITY,
        combining_efficiency: 1.0,
        objective_j: f64::INFINITY,
        rx_total: 0.0,
        feasible: false,
    };
    if !j.is_finite() {
        return Ok(infeasible(state, a));
    }

    let b = if evm_target == 0.0 {
        let right_inverse = if m.nrows() == m.ncols() {
            checked_inverse(&m)
        } else {
            checked_inverse(&(&m * m.adjoint())).map(|g| m.adjoint() * g)
        };
        match right_inverse {
            Some(x) => x * Complex64::new((p_t / j).sqrt(), 0.0),
            None => return Ok(infeasible(state, a)),
        }
    } else {
        let gram = a.adjoint() * &a;
        let evm_at = |lambda: f64| {
            regularized(&m, &a, &gram, lambda, p_t).map(|b| {
                let (_, evm) = distortion(&(&m * &b));
                (b, evm)
            })
        };
        // EVM grows with λ; bracket the target on a log scale
        let scale = frobenius_sq(&m) / gram.trace().re.max(f64::MIN_POSITIVE);
        let mut lo = 0.0;
        let mut hi = scale * 1e-6;
        let mut best = evm_at(hi);
        while let Some((_, evm)) = &best {
            if *evm >= evm_target || hi > scale * 1e9 {
                break;
            }
            lo = hi;
            hi *= 4.0;
            best = evm_at(hi);
        }
        let Some((mut b, mut evm)) = best else {
            return Ok(infeasible(state, a));
        };
        if evm >= evm_target {
            for _ in 0..200 {
                if (evm - evm_target).abs() <= 0.01 * evm_target {
                    break;
                }
                let mid = if lo == 0.0 { hi / 2.0 } else { (lo * hi).sqrt() };
                match evm_at(mid) {
                    Some((bm, em)) => {
                        if em > evm_target {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                        b = bm;
                        evm = em;
                    }
                    None => break,
                }
            }
        }
        let _ = evm;
        b
    };

    let t = &m * &b;
    let (g, evm) = distortion(&t);
    Ok(PrecoderSolution {
        combining_efficiency: combining_efficiency(spec, &a, &b),
        g_squared: g.norm_sqr(),
        evm: if evm_target == 0.0 { 0.0 } else { evm },
        objective_j: j,
        rx_total: frobenius_sq(&t),
        feasible: true,
        state,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aperture::build_ura;
    use crate::frontend::{build_architecture, GeometryParams, RfParams, Variant};
    use approx::assert_relative_eq;

    #[test]
    fn identity_channel_fd() {
        let g = build_ura(2, 1, 0.5).unwrap();
        let spec = build_architecture(Variant::Fd, &g, 2, RfParams::default(), &GeometryParams::default()).unwrap();
        let h = CMatrix::identity(2, 2);
        let sol = solve(&spec, &h, 20.0, 0.0, &SolverConfig::default()).unwrap();
        assert_relative_eq!(sol.g_squared, 10.0, epsilon = 1e-12);
        assert_eq!(sol.evm, 0.0);
    }
}
