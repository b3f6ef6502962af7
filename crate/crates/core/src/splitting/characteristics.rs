
use super::SolverConfig;
use crate::error::{PauliError, Result};
use crate::fields::EMFields;
use crate::grid::Grid;
use crate::scalar::Real;

/// Departure points `z_j(t_n)` of the characteristics `dz/dt = -A(z)` that end
/// at the grid points at `t_{n+1} = t_n + dt`.
///
/// Integrated backwards with classical RK4 using `substeps` uniform steps. In
/// reversed time `tau = t_{n+1} - t` the equation reads `dz/dtau = A(z)`.
pub fn departure_points<T: Real>(
    fields: &EMFields<T>,
    grid: &Grid<T>,
    dt: T,
    substeps: usize,
) -> Result<Vec<[T; 3]>> {
    if substeps == 0 {
        return Err(PauliError::InvalidArgument(
            "characteristic_substeps must be at least 1".into(),
        ));
    }
    let h = dt / T::from_usize_lossy(substeps);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let axpy = |x: [T; 3], a: T, v: [T; 3]| [x[0] + a * v[0], x[1] + a * v[1], x[2] + a * v[2]];

    (0..grid.len())
        .map(|j| {
            let start = grid.point(grid.multi_index(j));
            let mut z = start;
            for _ in 0..substeps {
                let k1 = fields.vector_potential(z);
                let k2 = fields.vector_potential(axpy(z, half * h, k1));
                let k3 = fields.vector_potential(axpy(z, half * h, k2));
                let k4 = fields.vector_potential(axpy(z, h, k3));
                for l in 0..3 {
                    z[l] += h * sixth * (k1[l] + T::lit(2.0) * (k2[l] + k3[l]) + k4[l]);
                }
            }
            if z.iter().any(|c| !c.is_finite()) {
                return Err(PauliError::Integration {
                    point: start.map(|c| c.to_f64_lossy()),
                });
            }
            Ok(z)
        })
        .collect()
}

/// [`departure_points`] for the step size and substep count of `config`.
pub fn trace_characteristics<T: Real>(
    fields: &EMFields<T>,
    grid: &Grid<T>,
    config: &SolverConfig<T>,
) -> Result<Vec<[T; 3]>> {
    departure_points(fields, grid, config.dt, config.characteristic_substeps)
}
