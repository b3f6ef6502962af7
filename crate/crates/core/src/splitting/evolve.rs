use super::propagators::{
    precompute_propagators, precompute_strang_propagators, Propagators, StrangPropagators,
};
use super::steps::{lie_step, strang_step};
use super::{SolverConfig, SplittingOrder};
use crate::error::{PauliError, Result};
use crate::fields::{sample_fields, EMFields, FieldSamples};
use crate::grid::Grid;
use crate::observables::{series_record, SeriesRecord};
use crate::scalar::Real;
use crate::state::SpinorField;

/// Receives per-step diagnostics and periodic snapshots from [`evolve`].
pub trait EvolutionSink<T: Real> {
    /// Called after every step `n = 1..=N`.
    fn record(&mut self, _record: &SeriesRecord<T>, _state: &SpinorField<T>) -> Result<()> {
        Ok(())
    }

    /// Called for step 0 and every `snapshot_stride` steps after it.
    fn snapshot(&mut self, _step: usize, _time: T, _state: &SpinorField<T>) -> Result<()> {
        Ok(())
    }

    /// Diagnostics are skipped entirely when this returns `false`.
    fn wants_records(&self) -> bool {
        true
    }
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl<T: Real> EvolutionSink<T> for NullSink {
    fn wants_records(&self) -> bool {
        false
    }
}

/// Keeps the series in memory, and the snapshots too if asked.
#[derive(Debug, Clone)]
pub struct SeriesCollector<T: Real> {
    pub records: Vec<SeriesRecord<T>>,
    pub snapshots: Vec<(usize, T, SpinorField<T>)>,
    keep_snapshots: bool,
}

impl<T: Real> SeriesCollector<T> {
    pub fn new(keep_snapshots: bool) -> Self {
        Self {
            records: Vec::new(),
            snapshots: Vec::new(),
            keep_snapshots,
        }
    }
}

impl<T: Real> EvolutionSink<T> for SeriesCollector<T> {
    fn record(&mut self, record: &SeriesRecord<T>, _state: &SpinorField<T>) -> Result<()> {
        self.records.push(*record);
        Ok(())
    }

    fn snapshot(&mut self, step: usize, time: T, state: &SpinorField<T>) -> Result<()> {
        if self.keep_snapshots {
            self.snapshots.push((step, time, state.clone()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Stepper<T: Real> {
    Lie(Propagators<T>),
    Strang(StrangPropagators<T>),
}

/// Grid, field samples and precomputed propagators for one configuration.
#[derive(Debug, Clone)]
pub struct Solver<T: Real> {
    grid: Grid<T>,
    samples: FieldSamples<T>,
    config: SolverConfig<T>,
    stepper: Stepper<T>,
}

impl<T: Real> Solver<T> {
    pub fn new(fields: &EMFields<T>, grid: &Grid<T>, config: SolverConfig<T>) -> Result<Self> {
        config.validate()?;
        let samples = sample_fields(fields, grid)?;
        Self::with_samples(fields, samples, grid, config)
    }

    pub fn with_samples(
        fields: &EMFields<T>,
        samples: FieldSamples<T>,
        grid: &Grid<T>,
        config: SolverConfig<T>,
    ) -> Result<Self> {
        let stepper = match config.order {
            SplittingOrder::Lie => {
                Stepper::Lie(precompute_propagators(fields, &samples, grid, &config)?)
            }
            SplittingOrder::Strang => {
                Stepper::Strang(precompute_strang_propagators(fields, &samples, grid, &config)?)
            }
        };
        Ok(Self {
            grid: grid.clone(),
            samples,
            config,
            stepper,
        })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &FieldSamples<T> {
        &self.samples
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.config
    }

    /// The operators used by one step; for Strang these are the half-step
    /// flows with the full-step coupling.
    pub fn propagators(&self) -> &Propagators<T> {
        match &self.stepper {
            Stepper::Lie(p) => p,
            Stepper::Strang(p) => p.inner(),
        }
    }

    /// Advances a physical state by one `dt`.
    pub fn step(&self, state: SpinorField<T>) -> Result<SpinorField<T>> {
        let state = state.into_physical(&self.grid)?;
        match &self.stepper {
            Stepper::Lie(p) => lie_step(state, p, &self.grid),
            Stepper::Strang(p) => strang_step(state, p, &self.grid),
        }
    }

    /// Runs `N = T / dt` steps, reporting to `sink`.
    pub fn run(
        &self,
        state0: SpinorField<T>,
        sink: &mut dyn EvolutionSink<T>,
    ) -> Result<SpinorField<T>> {
        let steps = self.config.steps()?;
        let mut state = state0.into_physical(&self.grid)?;
        sink.snapshot(0, T::zero(), &state)?;
        for n in 1..=steps {
            state = self.step(state)?;
            if !state.is_finite() {
                return Err(PauliError::Divergence { step: n });
            }
            let time = T::from_usize_lossy(n) * self.config.dt;
            if sink.wants_records() {
                let rec = series_record(&state, &self.samples, &self.grid, self.config.epsilon, time)?;
                sink.record(&rec, &state)?;
            }
            if n % self.config.snapshot_stride == 0 {
                sink.snapshot(n, time, &state)?;
            }
        }
        Ok(state)
    }
}

/// Builds a [`Solver`] and runs it from `state0`; returns `U^N`.
pub fn evolve<T: Real>(
    state0: SpinorField<T>,
    fields: &EMFields<T>,
    grid: &Grid<T>,
    config: &SolverConfig<T>,
    sink: &mut dyn EvolutionSink<T>,
) -> Result<SpinorField<T>> {
    Solver::new(fields, grid, *config)?.run(state0, sink)
}
