//! The discrete 2-spinor, initial-condition presets, and the norms used by
//! the stability and convergence analysis.

use num_complex::Complex;
use num_traits::Float;

use crate::error::{PauliError, Result};
use crate::grid::{Grid, Representation};
use crate::scalar::{sum_norm_sqr, Real};

/// Names accepted by [`SpinorField::from_preset`].
pub const INITIAL_PRESETS: [&str; 2] = ["gaussian-pair", "spin-up"];

/// Spinor `(u1, u2)` sampled on a grid. Both components always share the
/// grid shape and the representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField<T: Real> {
    dims: [usize; 3],
    components: [Vec<Complex<T>>; 2],
    repr: Representation,
}

impl<T: Real> SpinorField<T> {
    pub fn new(
        dims: [usize; 3],
        u1: Vec<Complex<T>>,
        u2: Vec<Complex<T>>,
        repr: Representation,
    ) -> Result<Self> {
        let n: usize = dims.iter().product();
        if u1.len() != n || u2.len() != n {
            return Err(PauliError::InvalidArgument(format!(
                "spinor components hold {} and {} values, dims {:?} need {}",
                u1.len(),
                u2.len(),
                dims,
                n
            )));
        }
        Ok(Self {
            dims,
            components: [u1, u2],
            repr,
        })
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        let z = vec![Complex::new(T::zero(), T::zero()); grid.len()];
        Self {
            dims: grid.counts(),
            components: [z.clone(), z],
            repr: Representation::Physical,
        }
    }

    /// Samples `f(x) = (u1, u2)` at every grid point.
    pub fn from_fn(grid: &Grid<T>, mut f: impl FnMut([T; 3]) -> [Complex<T>; 2]) -> Self {
        let mut u1 = Vec::with_capacity(grid.len());
        let mut u2 = Vec::with_capacity(grid.len());
        for j in 0..grid.len() {
            let [a, b] = f(grid.point(grid.multi_index(j)));
            u1.push(a);
            u2.push(b);
        }
        Self {
            dims: grid.counts(),
            components: [u1, u2],
            repr: Representation::Physical,
        }
    }

    pub fn from_preset(name: &str, grid: &Grid<T>) -> Result<Self> {
        match name {
            "gaussian-pair" => Ok(initial_state_gaussian_pair(grid)),
            "spin-up" => Ok(initial_state_spin_up(grid)),
            other => Err(PauliError::InvalidArgument(format!(
                "unknown preset \"{other}\" (expected one of {INITIAL_PRESETS:?})"
            ))),
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn component(&self, i: usize) -> &[Complex<T>] {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.components[i]
    }

    pub fn components_mut(&mut self) -> (&mut [Complex<T>], &mut [Complex<T>]) {
        let [a, b] = &mut self.components;
        (a, b)
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
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

    /// Converts to spectral coefficients (no-op if already spectral).
    pub fn into_spectral(mut self, grid: &Grid<T>) -> Result<Self> {
        self.check_grid(grid)?;
        if self.repr == Representation::Physical {
            for c in &mut self.components {
                grid.forward_in_place(c)?;
            }
            self.repr = Representation::Spectral;
        }
        Ok(self)
    }

    /// Converts to point values (no-op if already physical).
    pub fn into_physical(mut self, grid: &Grid<T>) -> Result<Self> {
        self.check_grid(grid)?;
        if self.repr == Representation::Spectral {
            for c in &mut self.components {
                grid.inverse_in_place(c)?;
            }
            self.repr = Representation::Physical;
        }
        Ok(self)
    }

    /// Multiplies both components by `c`.
    pub fn scaled(mut self, c: Complex<T>) -> Self {
        for z in self.components.iter_mut().flatten() {
            *z *= c;
        }
        self
    }

    /// `a * x + b * y`; both operands must share shape and representation.
    pub fn linear_combination(a: Complex<T>, x: &Self, b: Complex<T>, y: &Self) -> Result<Self> {
        if x.dims != y.dims {
            return Err(PauliError::ShapeMismatch {
                expected: x.dims,
                got: y.dims,
            });
        }
        y.expect(x.repr)?;
        let comb = |p: &[Complex<T>], q: &[Complex<T>]| {
            p.iter().zip(q).map(|(u, v)| a * u + b * v).collect::<Vec<_>>()
        };
        Ok(Self {
            dims: x.dims,
            components: [
                comb(&x.components[0], &y.components[0]),
                comb(&x.components[1], &y.components[1]),
            ],
            repr: x.repr,
        })
    }

    /// Both components flattened `[u1..., u2...]`.
    pub fn stacked(&self) -> Vec<Complex<T>> {
        let mut v = self.components[0].clone();
        v.extend_from_slice(&self.components[1]);
        v
    }

    pub fn from_stacked(dims: [usize; 3], stacked: &[Complex<T>], repr: Representation) -> Result<Self> {
        let n: usize = dims.iter().product();
        if stacked.len() != 2 * n {
            return Err(PauliError::InvalidArgument(format!(
                "stacked spinor has {} entries, expected {}",
                stacked.len(),
                2 * n
            )));
        }
        Self::new(dims, stacked[..n].to_vec(), stacked[n..].to_vec(), repr)
    }
}

fn gaussian<T: Real>(x: [T; 3], centre: [f64; 3]) -> Complex<T> {
    let r2 = (0..3).fold(T::zero(), |acc, l| {
        let d = x[l] - T::lit(centre[l]);
        acc + d * d
    });
    Complex::new(Float::exp(-r2), T::zero())
}

/// Spin-up Gaussian at `(4.5, 4.5, 5)`, spin-down Gaussian at `(5.5, 5.5, 5)`.
pub fn initial_state_gaussian_pair<T: Real>(grid: &Grid<T>) -> SpinorField<T> {
    SpinorField::from_fn(grid, |x| {
        [gaussian(x, [4.5, 4.5, 5.0]), gaussian(x, [5.5, 5.5, 5.0])]
    })
}

/// Pure spin-up Gaussian at `(4.5, 4.5, 5)`; `u2 = 0`.
pub fn initial_state_spin_up<T: Real>(grid: &Grid<T>) -> SpinorField<T> {
    SpinorField::from_fn(grid, |x| {
        [gaussian(x, [4.5, 4.5, 5.0]), Complex::new(T::zero(), T::zero())]
    })
}

/// Discrete l2 norms `(||U1||, ||U2||)` with quadrature weight
/// `prod_l L_l / N_l`. Spectral input is handled through Parseval.
pub fn component_l2<T: Real>(state: &SpinorField<T>, grid: &Grid<T>) -> Result<(T, T)> {
    state.check_grid(grid)?;
    let weight = match state.representation() {
        Representation::Physical => grid.cell_volume(),
        Representation::Spectral => grid.cell_volume() * T::from_usize_lossy(grid.len()),
    };
    let n1 = (weight * sum_norm_sqr(state.component(0))).sqrt();
    let n2 = (weight * sum_norm_sqr(state.component(1))).sqrt();
    Ok((n1, n2))
}

/// `||U||_alpha = ||U1|| + ||U2||`.
pub fn alpha_norm<T: Real>(state: &SpinorField<T>, grid: &Grid<T>) -> Result<T> {
    let (a, b) = component_l2(state, grid)?;
    Ok(a + b)
}
