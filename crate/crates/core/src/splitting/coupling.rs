use num_complex::Complex;
use num_traits::Float;

use crate::error::{PauliError, Result};
use crate::scalar::Real;

/// Row-major 2x2 complex matrix.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

/// `exp(dt M)` for the off-diagonal spin generator
/// `M = [[0, d1], [d2, 0]]`, `d1 = (i b1 + b2) / 2`, `d2 = (i b1 - b2) / 2`.
///
/// `M^2 = d1 d2 I = -rho^2 I` with `rho = |(b1, b2)| / 2`, so the exponential
/// is `cos(rho dt) I + sin(rho dt) / rho * M`.
pub fn coupling_matrix_closed_form<T: Real>(b1: T, b2: T, dt: T) -> Result<Mat2<T>> {
    if !b1.is_finite() || !b2.is_finite() || !dt.is_finite() {
        return Err(PauliError::InvalidArgument(format!(
            "coupling inputs must be finite (b1={b1}, b2={b2}, dt={dt})"
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let half = T::lit(0.5);
    let rho = half * b1.hypot(b2);
    if rho == T::zero() {
        return Ok([[one, zero], [zero, one]]);
    }
    let d1 = Complex::new(half * b2, half * b1);
    let d2 = Complex::new(-half * b2, half * b1);
    let (s, c) = Float::sin_cos(rho * dt);
    let diag = Complex::new(c, T::zero());
    let k = s / rho;
    Ok([[diag, d1 * k], [d2 * k, diag]])
}
