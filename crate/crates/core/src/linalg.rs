//! Small dense complex linear-algebra helpers shared by the precoder and the
//! metrics. Matrices are column-major [`nalgebra::DMatrix`] of [`Complex64`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Condition number above which a matrix is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

pub fn frobenius_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

pub fn vector_norm_sq(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return f64::INFINITY;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of a square matrix, `None` when it is numerically singular.
pub fn checked_inverse(m: &CMatrix) -> Option<CMatrix> {
    if !m.is_square() {
        return None;
    }
    if condition_number(m) > SINGULAR_CONDITION {
        return None;
    }
    m.clone().try_inverse()
}

/// Gauss-Jordan workspace for the many tiny K×K solves of the analog search.
///
/// `trace_form` returns `tr(Xᴴ·G·X)` with `X = M⁻¹`, i.e. `‖A·M⁻¹‖²_F` when
/// `G = AᴴA`, without allocating.
#[derive(Debug, Clone)]
pub struct SmallSolver {
    n: usize,
    aug: Vec<Complex64>,
    inv: Vec<Complex64>,
}

impl SmallSolver {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            aug: vec![Complex64::new(0.0, 0.0); n * n],
            inv: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// Inverts the row-major `n×n` matrix `m` into the internal buffer.
    /// Returns false when a pivot collapses relative to the matrix scale.
    fn invert(&mut self, m: &[Complex64]) -> bool {
        let n = self.n;
        self.aug.copy_from_slice(m);
        for (i, v) in self.inv.iter_mut().enumerate() {
            *v = if i / n == i % n { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        let scale = m.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return false;
        }
        let tiny = scale * 1e-13;
        for col in 0..n {
            let mut piv = col;
            let mut best = self.aug[col * n + col].norm();
            for r in col + 1..n {
                let v = self.aug[r * n + col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= tiny {
                return false;
            }
            if piv != col {
                for c in 0..n {
                    self.aug.swap(piv * n + c, col * n + c);
                    self.inv.swap(piv * n + c, col * n + c);
                }
            }
            let p = self.aug[col * n + col].inv();
            for c in 0..n {
                self.aug[col * n + c] *= p;
                self.inv[col * n + c] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = self.aug[r * n + col];
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    let a = self.aug[col * n + c];
                    let b = self.inv[col * n + c];
                    self.aug[r * n + c] -= f * a;
                    self.inv[r * n + c] -= f * b;
                }
            }
        }
        true
    }

    /// `tr(Xᴴ G X)` for `X = M⁻¹`; both inputs row-major `n×n`.
    /// `+∞` when `M` is singular.
    pub fn trace_form(&mut self, m: &[Complex64], gram: &[Complex64]) -> f64 {
        if !self.invert(m) {
            return f64::INFINITY;
        }
        let n = self.n;
        let x = &self.inv;
        let mut total = 0.0;
        for k in 0..n {
            // column k of X
            for i in 0..n {
                let xi = x[i * n + k].conj();
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += gram[i * n + j] * x[j * n + k];
                }
                total += (xi * acc).re;
            }
        }
        // Guard against an almost-singular pivot sequence that survived the
        // relative threshold but blew the result up.
        if total.is_finite() && total >= 0.0 {
            total
        } else {
            f64::INFINITY
        }
    }
}

impl SmallSolver {
    /// `p·G⁻¹·pᴴ` for a row `p` of length `n` and row-major `G`, with a tiny
    /// ridge so rank-deficient Gram matrices still give a finite answer.
    pub fn inverse_quadratic(&mut self, gram: &[Complex64], p: &[Complex64]) -> f64 {
        let n = self.n;
        let trace: f64 = (0..n).map(|i| gram[i * n + i].re).sum();
        if trace <= 0.0 || !trace.is_finite() {
            return 0.0;
        }
        let ridge = 1e-12 * trace / n as f64;
        let mut reg = gram.to_vec();
        for i in 0..n {
            reg[i * n + i] += Complex64::new(ridge, 0.0);
        }
        if !self.invert(&reg) {
            return 0.0;
        }
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                total += p[i] * self.inv[i * n + j] * p[j].conj();
            }
        }
        total.re.max(0.0)
    }
}

/// Row-major copy of a square `DMatrix`, the layout [`SmallSolver`] expects.
pub fn to_row_major(m: &CMatrix) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trace_form_matches_direct_formula() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.2, -0.1), c(-0.3, 0.4), c(0.9, 0.0)]);
        let a = CMatrix::from_row_slice(3, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5), c(-1.0, 0.0), c(0.2, 0.0), c(0.0, -0.3)]);
        let gram = a.adjoint() * &a;
        let direct = frobenius_sq(&(&a * m.clone().try_inverse().unwrap()));
        let mut s = SmallSolver::new(2);
        let got = s.trace_form(&to_row_major(&m), &to_row_major(&gram));
        assert!((got - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn singular_matrix_gives_infinite_cost() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let gram = CMatrix::identity(2, 2);
        let mut s = SmallSolver::new(2);
        assert!(s.trace_form(&to_row_major(&m), &to_row_major(&gram)).is_infinite());
        assert!(checked_inverse(&m).is_none());
    }
}
