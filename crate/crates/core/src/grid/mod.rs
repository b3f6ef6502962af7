//! Periodic box geometry and the discrete Fourier transform conventions used
//! throughout the solver.
//!
//! Data on the grid is stored with the first axis fastest:
//! `index = j1 + N1 * (j2 + N2 * j3)`. Spectral coefficients use the same
//! layout, with array slot `m` on axis `l` holding wavenumber
//! `m` for `m < ceil(N_l / 2)` and `m - N_l` otherwise, i.e. the symmetric set
//! `{-floor(N_l/2), ..., ceil(N_l/2) - 1}`.
//!
//! The forward transform carries the `1 / (N1 N2 N3)` factor:
//!
//! ```text
//! w_hat[k] = 1/(N1 N2 N3) * sum_j w[j] * exp(-2 pi i sum_l j_l k_l / N_l)
//! ```

mod interp;
mod spectral;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{PauliError, Result};
use crate::scalar::Real;

pub use interp::{trig_interpolate, InterpolationPlan};
pub use spectral::{curl, divergence, gradient, partial, spectral_derivative, DerivativeKind};
pub(crate) use spectral::apply_derivative_multiplier;

/// Whether a [`SpectralField`] holds point values or Fourier coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

impl Representation {
    pub(crate) fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Spectral => "spectral",
        }
    }
}

/// Uniform periodic grid on `[0, L1) x [0, L2) x [0, L3)`.
#[derive(Clone)]
pub struct Grid<T: Real> {
    lengths: [T; 3],
    counts: [usize; 3],
    spacings: [T; 3],
    forward: [Arc<dyn Fft<T>>; 3],
    inverse: [Arc<dyn Fft<T>>; 3],
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("lengths", &self.lengths)
            .field("counts", &self.counts)
            .field("spacings", &self.spacings)
            .finish()
    }
}

impl<T: Real> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.lengths == other.lengths && self.counts == other.counts
    }
}

impl<T: Real> Grid<T> {
    /// Builds the grid and plans the per-axis FFTs.
    pub fn new(lengths: [T; 3], counts: [usize; 3]) -> Result<Self> {
        for axis in 0..3 {
            if !(lengths[axis] > T::zero()) || !lengths[axis].is_finite() {
                return Err(PauliError::InvalidArgument(format!(
                    "axis {}: box length must be positive and finite, got {}",
                    axis + 1,
                    lengths[axis]
                )));
            }
            if counts[axis] < 2 {
                return Err(PauliError::InvalidArgument(format!(
                    "axis {}: need at least 2 grid points, got {}",
                    axis + 1,
                    counts[axis]
                )));
            }
        }
        let spacings = [0, 1, 2].map(|l| lengths[l] / T::from_usize_lossy(counts[l]));
        let mut planner = FftPlanner::new();
        let forward = [0, 1, 2].map(|l| planner.plan_fft(counts[l], FftDirection::Forward));
        let inverse = [0, 1, 2].map(|l| planner.plan_fft(counts[l], FftDirection::Inverse));
        Ok(Self {
            lengths,
            counts,
            spacings,
            forward,
            inverse,
        })
    }

    pub fn lengths(&self) -> [T; 3] {
        self.lengths
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn spacings(&self) -> [T; 3] {
        self.spacings
    }

    /// Total number of grid points `N1 N2 N3`.
    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Euclidean length of the spacing vector, `|dx|`.
    pub fn grid_size(&self) -> T {
        self.spacings
            .iter()
            .fold(T::zero(), |acc, &d| acc + d * d)
            .sqrt()
    }

    /// Quadrature weight `dx1 dx2 dx3`.
    pub fn cell_volume(&self) -> T {
        self.spacings[0] * self.spacings[1] * self.spacings[2]
    }

    pub fn volume(&self) -> T {
        self.lengths[0] * self.lengths[1] * self.lengths[2]
    }

    #[inline]
    pub fn index(&self, j: [usize; 3]) -> usize {
        j[0] + self.counts[0] * (j[1] + self.counts[1] * j[2])
    }

    #[inline]
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let n0 = self.counts[0];
        let n1 = self.counts[1];
        [idx % n0, (idx / n0) % n1, idx / (n0 * n1)]
    }

    /// Coordinates of grid point `j`: `x_l = j_l L_l / N_l`.
    #[inline]
    pub fn point(&self, j: [usize; 3]) -> [T; 3] {
        [0, 1, 2].map(|l| {
            T::from_usize_lossy(j[l]) * self.lengths[l] / T::from_usize_lossy(self.counts[l])
        })
    }

    /// All grid points in storage order.
    pub fn points(&self) -> Vec<[T; 3]> {
        (0..self.len()).map(|i| self.point(self.multi_index(i))).collect()
    }

    /// Signed wavenumber stored at array slot `m` of `axis`.
    #[inline]
    pub fn wavenumber(&self, axis: usize, m: usize) -> i64 {
        let n = self.counts[axis];
        if m < n.div_ceil(2) {
            m as i64
        } else {
            m as i64 - n as i64
        }
    }

    pub fn wavenumbers(&self, axis: usize) -> Vec<i64> {
        (0..self.counts[axis]).map(|m| self.wavenumber(axis, m)).collect()
    }

    /// `true` for the unpaired mode `k = -N/2` of an even-length axis.
    #[inline]
    pub fn is_nyquist(&self, axis: usize, m: usize) -> bool {
        let n = self.counts[axis];
        n % 2 == 0 && m == n / 2
    }

    /// Angular frequency `2 pi k / L` of array slot `m`.
    #[inline]
    pub fn angular_frequency(&self, axis: usize, m: usize) -> T {
        T::TAU() * T::lit(self.wavenumber(axis, m) as f64) / self.lengths[axis]
    }

    /// `sum_l (2 pi k_l / L_l)^2` for every spectral slot, in storage order.
    pub fn squared_frequencies(&self) -> Vec<T> {
        let freq: [Vec<T>; 3] = [0, 1, 2].map(|l| {
            (0..self.counts[l])
                .map(|m| {
                    let w = self.angular_frequency(l, m);
                    w * w
                })
                .collect()
        });
        let mut out = Vec::with_capacity(self.len());
        for m3 in 0..self.counts[2] {
            for m2 in 0..self.counts[1] {
                for m1 in 0..self.counts[0] {
                    out.push(freq[0][m1] + freq[1][m2] + freq[2][m3]);
                }
            }
        }
        out
    }

    /// In-place forward transform with the `1/(N1 N2 N3)` normalisation.
    pub fn forward_in_place(&self, data: &mut [Complex<T>]) -> Result<()> {
        self.check_len(data.len())?;
        for axis in 0..3 {
            self.transform_axis(data, axis, &self.forward[axis]);
        }
        let scale = T::one() / T::from_usize_lossy(self.len());
        for z in data.iter_mut() {
            *z = *z * scale;
        }
        Ok(())
    }

    /// In-place inverse of [`Grid::forward_in_place`] (unnormalised synthesis).
    pub fn inverse_in_place(&self, data: &mut [Complex<T>]) -> Result<()> {
        self.check_len(data.len())?;
        for axis in 0..3 {
            self.transform_axis(data, axis, &self.inverse[axis]);
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(PauliError::InvalidArgument(format!(
                "buffer holds {} values but the grid has {} points",
                len,
                self.len()
            )));
        }
        Ok(())
    }

    fn transform_axis(&self, data: &mut [Complex<T>], axis: usize, fft: &Arc<dyn Fft<T>>) {
        let [n0, n1, n2] = self.counts;
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
        if axis == 0 {
            fft.process_with_scratch(data, &mut scratch);
            return;
        }
        let (n, stride, outer) = if axis == 1 {
            (n1, n0, n2)
        } else {
            (n2, n0 * n1, 1)
        };
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        // axis 1 lines start at j1 + j3*n0*n1, axis 2 lines at j1 + j2*n0
        for o in 0..outer {
            for i in 0..stride {
                let base = if axis == 1 { i + o * n0 * n1 } else { i };
                for (m, z) in line.iter_mut().enumerate() {
                    *z = data[base + m * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (m, z) in line.iter().enumerate() {
                    data[base + m * stride] = *z;
                }
            }
        }
    }
}

/// A complex scalar field on a [`Grid`], tagged with its representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T: Real> {
    dims: [usize; 3],
    data: Vec<Complex<T>>,
    repr: Representation,
}

impl<T: Real> SpectralField<T> {
    pub fn new(dims: [usize; 3], data: Vec<Complex<T>>, repr: Representation) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(PauliError::InvalidArgument(format!(
                "field with dims {:?} needs {} values, got {}",
                dims,
                expected,
                data.len()
            )));
        }
        Ok(Self { dims, data, repr })
    }

    pub fn zeros(grid: &Grid<T>, repr: Representation) -> Self {
        Self {
            dims: grid.counts(),
            data: vec![Complex::new(T::zero(), T::zero()); grid.len()],
            repr,
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &Grid<T>, f: impl Fn([T; 3]) -> Complex<T>) -> Self {
        let data = (0..grid.len())
            .map(|i| f(grid.point(grid.multi_index(i))))
            .collect();
        Self {
            dims: grid.counts(),
            data,
            repr: Representation::Physical,
        }
    }

    pub fn from_real(grid: &Grid<T>, values: &[T]) -> Result<Self> {
        let data = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        Self::new(grid.counts(), data, Representation::Physical)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex<T>> {
        self.data
    }

    pub(crate) fn check_grid(&self, grid: &Grid<T>) -> Result<()> {
        if self.dims != grid.counts() {
            return Err(PauliError::ShapeMismatch {
                expected: grid.counts(),
                got: self.dims,
            });
        }
        Ok(())
    }

    pub(crate) fn expect(&self, repr: Representation) -> Result<()> {
        if self.repr != repr {
            return Err(PauliError::Representation {
                expected: repr.name(),
            });
        }
        Ok(())
    }
}

/// Forward DFT of a physical field; see the module docs for the convention.
pub fn forward_dft<T: Real>(field: &SpectralField<T>, grid: &Grid<T>) -> Result<SpectralField<T>> {
    field.check_grid(grid)?;
    field.expect(Representation::Physical)?;
    let mut out = field.clone();
    grid.forward_in_place(&mut out.data)?;
    out.repr = Representation::Spectral;
    Ok(out)
}

/// Exact inverse of [`forward_dft`].
pub fn inverse_dft<T: Real>(field: &SpectralField<T>, grid: &Grid<T>) -> Result<SpectralField<T>> {
    field.check_grid(grid)?;
    field.expect(Representation::Spectral)?;
    let mut out = field.clone();
    grid.inverse_in_place(&mut out.data)?;
    out.repr = Representation::Physical;
    Ok(out)
}
