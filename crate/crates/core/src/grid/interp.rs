//! Trigonometric interpolation of spectral data at arbitrary points.
//!
//! The interpolant is `sum_k w_hat[k] prod_l e_l(k_l, x_l)` with
//! `e_l(k, x) = exp(i 2 pi k x / L_l)` on the symmetric wavenumber set. For an
//! even axis the Nyquist slot uses `cos(pi N_l x / L_l)`, i.e. the coefficient
//! is split evenly between `+N_l/2` and `-N_l/2`; the interpolant of real grid
//! data is then real.
//!
//! Evaluation is a direct mode sum. An [`InterpolationPlan`] caches the
//! per-axis factors for a fixed point set so repeated evaluations (one per
//! time step in the advection step) only pay for the contraction.

use num_complex::Complex;
use num_traits::Float;
use rayon::prelude::*;

use super::{Grid, Representation, SpectralField};
use crate::error::{PauliError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct InterpolationPlan<T: Real> {
    counts: [usize; 3],
    n_points: usize,
    stride: usize,
    factors_re: Vec<T>,
    factors_im: Vec<T>,
}

impl<T: Real> InterpolationPlan<T> {
    /// Precomputes axis factors for `points`. Coordinates are wrapped into the
    /// box first.
    pub fn new(grid: &Grid<T>, points: &[[T; 3]]) -> Result<Self> {
        let counts = grid.counts();
        let lengths = grid.lengths();
        let stride = counts.iter().sum::<usize>();
        let mut factors_re = vec![T::zero(); points.len() * stride];
        let mut factors_im = vec![T::zero(); points.len() * stride];
        for (p, x) in points.iter().enumerate() {
            if x.iter().any(|c| !c.is_finite()) {
                return Err(PauliError::InvalidArgument(format!(
                    "interpolation point {:?} is not finite",
                    x.map(|c| c.to_f64_lossy())
                )));
            }
            let mut offset = p * stride;
            for axis in 0..3 {
                let len = lengths[axis];
                let xw = x[axis] - len * Float::floor(x[axis] / len);
                for m in 0..counts[axis] {
                    let (re, im) = if grid.is_nyquist(axis, m) {
                        let n = T::from_usize_lossy(counts[axis]);
                        (Float::cos(T::PI() * n * xw / len), T::zero())
                    } else {
                        let (s, c) = Float::sin_cos(grid.angular_frequency(axis, m) * xw);
                        (c, s)
                    };
                    factors_re[offset + m] = re;
                    factors_im[offset + m] = im;
                }
                offset += counts[axis];
            }
        }
        Ok(Self {
            counts,
            n_points: points.len(),
            stride,
            factors_re,
            factors_im,
        })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    /// Evaluates several coefficient arrays at the planned points in one pass.
    pub fn evaluate(&self, coeffs: &[&[Complex<T>]]) -> Result<Vec<Vec<Complex<T>>>> {
        let n_modes: usize = self.counts.iter().product();
        if let Some(bad) = coeffs.iter().find(|c| c.len() != n_modes) {
            return Err(PauliError::InvalidArgument(format!(
                "coefficient array has {} entries, plan expects {}",
                bad.len(),
                n_modes
            )));
        }
        let ncomp = coeffs.len();
        let split: Vec<(Vec<T>, Vec<T>)> = coeffs
            .iter()
            .map(|c| (c.iter().map(|z| z.re).collect(), c.iter().map(|z| z.im).collect()))
            .collect();

        let zero = Complex::new(T::zero(), T::zero());
        let mut flat = vec![zero; self.n_points * ncomp];
        if ncomp == 0 {
            return Ok(Vec::new());
        }
        flat.par_chunks_mut(ncomp)
            .enumerate()
            .for_each(|(p, out)| self.contract_point(p, &split, out));

        let mut result = vec![Vec::with_capacity(self.n_points); ncomp];
        for chunk in flat.chunks(ncomp) {
            for (c, z) in chunk.iter().enumerate() {
                result[c].push(*z);
            }
        }
        Ok(result)
    }

    fn contract_point(&self, p: usize, coeffs: &[(Vec<T>, Vec<T>)], out: &mut [Complex<T>]) {
        let [n0, n1, n2] = self.counts;
        let base = p * self.stride;
        let e1r = &self.factors_re[base..base + n0];
        let e1i = &self.factors_im[base..base + n0];
        let e2r = &self.factors_re[base + n0..base + n0 + n1];
        let e2i = &self.factors_im[base + n0..base + n0 + n1];
        let e3r = &self.factors_re[base + n0 + n1..base + self.stride];
        let e3i = &self.factors_im[base + n0 + n1..base + self.stride];
        let zero = Complex::new(T::zero(), T::zero());
        for (c, (cr, ci)) in coeffs.iter().enumerate() {
            let mut acc3 = zero;
            for m3 in 0..n2 {
                let mut acc2 = zero;
                for m2 in 0..n1 {
                    let off = (m2 + n1 * m3) * n0;
                    let (sr, si) = cdot(e1r, e1i, &cr[off..off + n0], &ci[off..off + n0]);
                    acc2 += Complex::new(e2r[m2], e2i[m2]) * Complex::new(sr, si);
                }
                acc3 += Complex::new(e3r[m3], e3i[m3]) * acc2;
            }
            out[c] = acc3;
        }
    }
}

/// Complex dot product `sum a_i b_i` on split storage, four accumulator lanes.
#[inline]
fn cdot<T: Real>(ar: &[T], ai: &[T], br: &[T], bi: &[T]) -> (T, T) {
    let n = ar.len();
    let (ar, ai, br, bi) = (&ar[..n], &ai[..n], &br[..n], &bi[..n]);
    let mut sr = [T::zero(); 4];
    let mut si = [T::zero(); 4];
    let full = n / 4 * 4;
    let mut i = 0;
    while i < full {
        for l in 0..4 {
            let (xr, xi, yr, yi) = (ar[i + l], ai[i + l], br[i + l], bi[i + l]);
            sr[l] += xr * yr - xi * yi;
            si[l] += xr * yi + xi * yr;
        }
        i += 4;
    }
    let mut tr = (sr[0] + sr[1]) + (sr[2] + sr[3]);
    let mut ti = (si[0] + si[1]) + (si[2] + si[3]);
    for j in full..n {
        tr += ar[j] * br[j] - ai[j] * bi[j];
        ti += ar[j] * bi[j] + ai[j] * br[j];
    }
    (tr, ti)
}

/// Evaluates the trigonometric interpolant of spectral `field` at `points`.
pub fn trig_interpolate<T: Real>(
    field: &SpectralField<T>,
    points: &[[T; 3]],
    grid: &Grid<T>,
) -> Result<Vec<Complex<T>>> {
    field.check_grid(grid)?;
    field.expect(Representation::Spectral)?;
    let plan = InterpolationPlan::new(grid, points)?;
    Ok(plan.evaluate(&[field.data()])?.remove(0))
}
