//! Scalar abstraction shared by every numerical kernel in the crate.
//!
//! All solver code is written against [`Real`], which is implemented for
//! `f32` and `f64`. Convenience aliases for the `f64` instantiation live at
//! the crate root.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + FftNum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(i·theta)`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = Float::sin_cos(theta);
    Complex::new(c, s)
}

/// Deterministic pairwise (cascade) summation.
///
/// The reduction tree depends only on the slice length, so results are
/// bit-identical regardless of how the caller produced the terms.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = T::zero();
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(x)` over a slice without materialising the terms twice.
pub fn pairwise_sum_map<S, T: Real>(values: &[S], f: impl Fn(&S) -> T + Copy) -> T {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        let mut acc = T::zero();
        for v in values {
            acc += f(v);
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum_map(&values[..mid], f) + pairwise_sum_map(&values[mid..], f)
}

/// Sum of squared moduli, pairwise-reduced.
pub fn sum_norm_sqr<T: Real>(values: &[Complex<T>]) -> T {
    pairwise_sum_map(values, |z| z.norm_sqr())
}

/// Largest modulus in a slice (0 for an empty slice).
pub fn max_abs<T: Real>(values: &[Complex<T>]) -> T {
    values
        .iter()
        .fold(T::zero(), |m, z| Float::max(m, z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn cis_is_unimodular() {
        for k in 0..50 {
            let z = cis(0.37 * k as f64);
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
    }
}
