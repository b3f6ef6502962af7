//! Spectral differentiation on the symmetric wavenumber set.
//!
//! First derivatives multiply slot `m` by `i 2 pi k / L`. The Nyquist slot of
//! an even axis is zeroed: its odd multiplier has no consistent sign, and
//! zeroing it keeps the discrete derivative skew-adjoint and real data real.

use num_complex::Complex;

use super::{Grid, Representation, SpectralField};
use crate::error::{PauliError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeKind {
    /// scalar -> 3-vector
    Gradient,
    /// 3-vector -> scalar
    Divergence,
    /// 3-vector -> 3-vector
    Curl,
}

/// Applies `i 2 pi k_axis / L_axis` (Nyquist zeroed) to spectral data in place.
pub(crate) fn apply_derivative_multiplier<T: Real>(
    grid: &Grid<T>,
    axis: usize,
    spectrum: &mut [Complex<T>],
) {
    let mult: Vec<Complex<T>> = (0..grid.counts()[axis])
        .map(|m| {
            if grid.is_nyquist(axis, m) {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::zero(), grid.angular_frequency(axis, m))
            }
        })
        .collect();
    for (idx, z) in spectrum.iter_mut().enumerate() {
        let m = grid.multi_index(idx)[axis];
        *z *= mult[m];
    }
}

fn to_spectral<T: Real>(field: &SpectralField<T>, grid: &Grid<T>) -> Result<Vec<Complex<T>>> {
    field.check_grid(grid)?;
    let mut data = field.data().to_vec();
    if field.representation() == Representation::Physical {
        grid.forward_in_place(&mut data)?;
    }
    Ok(data)
}

fn finish<T: Real>(
    mut spectrum: Vec<Complex<T>>,
    grid: &Grid<T>,
    repr: Representation,
) -> Result<SpectralField<T>> {
    if repr == Representation::Physical {
        grid.inverse_in_place(&mut spectrum)?;
    }
    SpectralField::new(grid.counts(), spectrum, repr)
}

/// Partial derivative along `axis`, returned in the input's representation.
pub fn partial<T: Real>(
    field: &SpectralField<T>,
    grid: &Grid<T>,
    axis: usize,
) -> Result<SpectralField<T>> {
    let mut spec = to_spectral(field, grid)?;
    apply_derivative_multiplier(grid, axis, &mut spec);
    finish(spec, grid, field.representation())
}

/// Dispatches on `kind`; `input` holds one scalar field for the gradient and
/// three components otherwise. Output keeps the representation of `input[0]`.
pub fn spectral_derivative<T: Real>(
    input: &[SpectralField<T>],
    grid: &Grid<T>,
    kind: DerivativeKind,
) -> Result<Vec<SpectralField<T>>> {
    let want = match kind {
        DerivativeKind::Gradient => 1,
        DerivativeKind::Divergence | DerivativeKind::Curl => 3,
    };
    if input.len() != want {
        return Err(PauliError::InvalidArgument(format!(
            "{kind:?} expects {want} component(s), got {}",
            input.len()
        )));
    }
    let repr = input[0].representation();
    if input.iter().any(|f| f.representation() != repr) {
        return Err(PauliError::InvalidArgument(
            "vector components must share a representation".into(),
        ));
    }
    match kind {
        DerivativeKind::Gradient => {
            let spec = to_spectral(&input[0], grid)?;
            (0..3)
                .map(|axis| {
                    let mut d = spec.clone();
                    apply_derivative_multiplier(grid, axis, &mut d);
                    finish(d, grid, repr)
                })
                .collect()
        }
        DerivativeKind::Divergence => {
            let mut total = vec![Complex::new(T::zero(), T::zero()); grid.len()];
            for (axis, comp) in input.iter().enumerate() {
                let mut d = to_spectral(comp, grid)?;
                apply_derivative_multiplier(grid, axis, &mut d);
                for (t, v) in total.iter_mut().zip(&d) {
                    *t += *v;
                }
            }
            Ok(vec![finish(total, grid, repr)?])
        }
        DerivativeKind::Curl => {
            let spec: Vec<Vec<Complex<T>>> = input
                .iter()
                .map(|c| to_spectral(c, grid))
                .collect::<Result<_>>()?;
            let d = |comp: usize, axis: usize| {
                let mut v = spec[comp].clone();
                apply_derivative_multiplier(grid, axis, &mut v);
                v
            };
            let sub = |a: Vec<Complex<T>>, b: Vec<Complex<T>>| {
                a.into_iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>()
            };
            let c1 = sub(d(2, 1), d(1, 2));
            let c2 = sub(d(0, 2), d(2, 0));
            let c3 = sub(d(1, 0), d(0, 1));
            [c1, c2, c3]
                .into_iter()
                .map(|c| finish(c, grid, repr))
                .collect()
        }
    }
}

pub fn gradient<T: Real>(field: &SpectralField<T>, grid: &Grid<T>) -> Result<[SpectralField<T>; 3]> {
    let v = spectral_derivative(std::slice::from_ref(field), grid, DerivativeKind::Gradient)?;
    Ok(into_array(v))
}

pub fn divergence<T: Real>(field: &[SpectralField<T>; 3], grid: &Grid<T>) -> Result<SpectralField<T>> {
    let mut v = spectral_derivative(field, grid, DerivativeKind::Divergence)?;
    Ok(v.remove(0))
}

pub fn curl<T: Real>(field: &[SpectralField<T>; 3], grid: &Grid<T>) -> Result<[SpectralField<T>; 3]> {
    Ok(into_array(spectral_derivative(
        field,
        grid,
        DerivativeKind::Curl,
    )?))
}

fn into_array<T: Real>(v: Vec<SpectralField<T>>) -> [SpectralField<T>; 3] {
    let mut it = v.into_iter();
    [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
}
