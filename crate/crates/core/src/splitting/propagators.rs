use num_complex::Complex;

use super::characteristics::departure_points;
use super::coupling::{coupling_matrix_closed_form, Mat2};
use super::SolverConfig;
use crate::error::Result;
use crate::fields::{EMFields, FieldSamples};
use crate::grid::{Grid, InterpolationPlan};
use crate::scalar::{cis, Real};

/// Precomputed sub-step operators for time-independent fields.
///
/// The potential, kinetic and advection parts are built for `flow_dt`; the
/// coupling matrices for `coupling_dt`. For Lie splitting both equal `dt`.
#[derive(Debug, Clone)]
pub struct Propagators<T: Real> {
    pub(crate) flow_dt: T,
    pub(crate) coupling_dt: T,
    pub(crate) epsilon: T,
    /// `exp(dt B1)`, `exp(dt B2)` per grid point
    pub(crate) potential_phase: [Vec<Complex<T>>; 2],
    /// `exp(-i eps dt |k|^2 / 2)` per spectral slot
    pub(crate) kinetic_phase: Vec<Complex<T>>,
    pub(crate) coupling: Vec<Mat2<T>>,
    pub(crate) departure_points: Vec<[T; 3]>,
    pub(crate) interpolation: InterpolationPlan<T>,
    /// every departure point coincides with its grid point
    pub(crate) identity_transport: bool,
}

impl<T: Real> Propagators<T> {
    /// Builds all operators from analytic `fields` (for the characteristics)
    /// and their grid `samples`.
    pub fn build(
        fields: &EMFields<T>,
        samples: &FieldSamples<T>,
        grid: &Grid<T>,
        epsilon: T,
        flow_dt: T,
        coupling_dt: T,
        substeps: usize,
    ) -> Result<Self> {
        samples.check_grid(grid)?;
        let half = T::lit(0.5);
        let n = grid.len();

        let mut potential_phase = [Vec::with_capacity(n), Vec::with_capacity(n)];
        for j in 0..n {
            let scalar = half * samples.a_squared(j) + samples.phi[j];
            let spin = half * epsilon * samples.b[2][j];
            // exp(-(i dt / eps) (|A|^2/2 + phi -/+ eps B3 / 2))
            potential_phase[0].push(cis(-flow_dt / epsilon * (scalar - spin)));
            potential_phase[1].push(cis(-flow_dt / epsilon * (scalar + spin)));
        }

        let kinetic_phase = grid
            .squared_frequencies()
            .into_iter()
            .map(|k2| cis(-half * epsilon * flow_dt * k2))
            .collect();

        let coupling = (0..n)
            .map(|j| coupling_matrix_closed_form(samples.b[0][j], samples.b[1][j], coupling_dt))
            .collect::<Result<Vec<_>>>()?;

        let departure_points = departure_points(fields, grid, flow_dt, substeps)?;
        let identity_transport = departure_points == grid.points();
        let interpolation = InterpolationPlan::new(grid, &departure_points)?;

        Ok(Self {
            flow_dt,
            coupling_dt,
            epsilon,
            potential_phase,
            kinetic_phase,
            coupling,
            departure_points,
            interpolation,
            identity_transport,
        })
    }

    pub fn flow_dt(&self) -> T {
        self.flow_dt
    }

    pub fn coupling_dt(&self) -> T {
        self.coupling_dt
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn potential_phase(&self, component: usize) -> &[Complex<T>] {
        &self.potential_phase[component]
    }

    pub fn kinetic_phase(&self) -> &[Complex<T>] {
        &self.kinetic_phase
    }

    pub fn coupling_matrices(&self) -> &[Mat2<T>] {
        &self.coupling
    }

    pub fn departure_points(&self) -> &[[T; 3]] {
        &self.departure_points
    }

    /// max over points of `max |M^H M - I|`.
    pub fn coupling_unitarity_defect(&self) -> T {
        let mut worst = T::zero();
        for m in &self.coupling {
            for r in 0..2 {
                for c in 0..2 {
                    let dot = m[0][r].conj() * m[0][c] + m[1][r].conj() * m[1][c];
                    let want = if r == c { T::one() } else { T::zero() };
                    worst = worst.max((dot - Complex::new(want, T::zero())).norm());
                }
            }
        }
        worst
    }

    /// max over points and modes of `| |phase| - 1 |` for potential and
    /// kinetic phases.
    pub fn phase_modulus_defect(&self) -> T {
        self.potential_phase
            .iter()
            .flatten()
            .chain(&self.kinetic_phase)
            .fold(T::zero(), |w, z| w.max((z.norm() - T::one()).abs()))
    }
}

/// Half-step potential/kinetic/advection operators and full-step coupling,
/// as consumed by [`super::strang_step`].
#[derive(Debug, Clone)]
pub struct StrangPropagators<T: Real>(pub(crate) Propagators<T>);

impl<T: Real> StrangPropagators<T> {
    pub fn inner(&self) -> &Propagators<T> {
        &self.0
    }
}

/// Lie-step operators for `config.dt`.
pub fn precompute_propagators<T: Real>(
    fields: &EMFields<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    config: &SolverConfig<T>,
) -> Result<Propagators<T>> {
    Propagators::build(
        fields,
        samples,
        grid,
        config.epsilon,
        config.dt,
        config.dt,
        config.characteristic_substeps,
    )
}

/// Strang-step operators: `dt/2` flows around a full `dt` coupling step.
pub fn precompute_strang_propagators<T: Real>(
    fields: &EMFields<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    config: &SolverConfig<T>,
) -> Result<StrangPropagators<T>> {
    let half = config.dt * T::lit(0.5);
    Propagators::build(
        fields,
        samples,
        grid,
        config.epsilon,
        half,
        config.dt,
        config.characteristic_substeps,
    )
    .map(StrangPropagators)
}
