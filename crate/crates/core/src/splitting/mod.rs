//! Four-term exponential splitting for the scaled Pauli equation.
//!
//! One Lie step applies, in order, the potential phase (physical space), the
//! free kinetic propagator (Fourier space), semi-Lagrangian advection along
//! `dz/dt = -A(z)` with trigonometric interpolation, and the pointwise 2x2
//! spin-coupling propagator. Fields are time-independent, so every sub-step
//! operator is precomputed once in [`Propagators`].

mod characteristics;
mod coupling;
mod evolve;
mod propagators;
mod steps;

use crate::error::{PauliError, Result};
use crate::scalar::Real;

pub use characteristics::{departure_points, trace_characteristics};
pub use coupling::{coupling_matrix_closed_form, Mat2};
pub use evolve::{evolve, EvolutionSink, NullSink, Solver, SeriesCollector};
pub use propagators::{
    precompute_propagators, precompute_strang_propagators, Propagators, StrangPropagators,
};
pub use steps::{
    advection_step, coupling_step, kinetic_step, lie_step, potential_step, strang_step,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplittingOrder {
    /// First order: `e^{dt D} e^{dt C} e^{dt A} e^{dt B}`.
    Lie,
    /// Second order palindrome with the coupling step in the middle.
    Strang,
}

impl std::str::FromStr for SplittingOrder {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" => Ok(SplittingOrder::Lie),
            "strang" => Ok(SplittingOrder::Strang),
            other => Err(PauliError::InvalidArgument(format!(
                "unknown splitting order \"{other}\" (expected \"lie\" or \"strang\")"
            ))),
        }
    }
}

/// Default number of RK4 substeps per time step for the characteristics.
pub const DEFAULT_CHARACTERISTIC_SUBSTEPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T: Real> {
    pub epsilon: T,
    pub dt: T,
    pub t_final: T,
    pub order: SplittingOrder,
    pub characteristic_substeps: usize,
    pub snapshot_stride: usize,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(epsilon: T, dt: T, t_final: T, order: SplittingOrder) -> Result<Self> {
        let cfg = Self {
            epsilon,
            dt,
            t_final,
            order,
            characteristic_substeps: DEFAULT_CHARACTERISTIC_SUBSTEPS,
            snapshot_stride: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_substeps(mut self, substeps: usize) -> Result<Self> {
        self.characteristic_substeps = substeps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_snapshot_stride(mut self, stride: usize) -> Result<Self> {
        self.snapshot_stride = stride;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(PauliError::InvalidArgument(msg));
        if !(self.epsilon > T::zero()) || !self.epsilon.is_finite() {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_final >= T::zero()) || !self.t_final.is_finite() {
            return bad(format!("t_final must be non-negative, got {}", self.t_final));
        }
        if self.characteristic_substeps == 0 {
            return bad("characteristic_substeps must be at least 1".into());
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be at least 1".into());
        }
        self.steps().map(|_| ())
    }

    /// `N = T / dt`, which must be an integer to within 1e-9 relative.
    pub fn steps(&self) -> Result<usize> {
        step_count(self.t_final, self.dt)
    }
}

pub(crate) fn step_count<T: Real>(t_final: T, dt: T) -> Result<usize> {
    let ratio = (t_final / dt).to_f64_lossy();
    let n = ratio.round();
    if (ratio - n).abs() > 1e-9 * n.max(1.0) {
        return Err(PauliError::InvalidArgument(format!(
            "t_final / dt = {ratio} is not an integer number of steps"
        )));
    }
    Ok(n as usize)
}
