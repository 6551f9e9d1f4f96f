use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, condition_number, frobenius_sq, CMatrix, SINGULAR_CONDITION};

/// Minimum-norm zero-forcing `W = Hᴴ(HHᴴ)⁻¹`, so that `HW = I_K`.
pub fn zf_weights(h: &CMatrix) -> Result<CMatrix> {
    let gram = h * h.adjoint();
    let condition = condition_number(&gram);
    if condition > SINGULAR_CONDITION || !condition.is_finite() {
        return Err(Error::RankDeficient { condition });
    }
    let inv = gram.try_inverse().ok_or(Error::RankDeficient { condition })?;
    Ok(h.adjoint() * inv)
}

/// Transmit power of unit-gain zero-forcing through `A`: `‖A·(H·A)⁺‖²_F`.
///
/// For a square effective channel this is `‖A·(H·A)⁻¹‖²_F`; a wider one (the
/// fully digital case) uses the right pseudo-inverse. Singular effective
/// channels cost `+∞`.
pub fn objective_j(h: &CMatrix, a: &CMatrix) -> f64 {
    let m = h * a;
    let (k, n) = m.shape();
    if n < k {
        return f64::INFINITY;
    }
    let right_inverse = if n == k {
        checked_inverse(&m)
    } else {
        checked_inverse(&(&m * m.adjoint())).map(|g| m.adjoint() * g)
    };
    match right_inverse {
        Some(x) => {
            let j = frobenius_sq(&(a * x));
            if j.is_finite() {
                j
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}
