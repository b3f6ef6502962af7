//! Brute-force reference solutions on small grids.
//!
//! The full discrete generator `G` (kinetic + potential + advection +
//! coupling, both spin components) is assembled as a dense matrix using the
//! same spectral derivatives as the splitting scheme, and `exp(tG)` is applied
//! directly. Differences to the split solution are then purely the time
//! discretisation plus interpolation.

mod expm;

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::Float;

use crate::error::{PauliError, Result};
use crate::fields::{sample_fields, EMFields, FieldSamples};
use crate::grid::{apply_derivative_multiplier, Grid, Representation};
use crate::observables::state_error;
use crate::scalar::Real;
use crate::splitting::{evolve, NullSink, SolverConfig, SplittingOrder};
use crate::state::SpinorField;

pub use expm::dense_expm;

/// Largest dense dimension `2 N1 N2 N3` the oracle accepts.
pub const DENSE_DIMENSION_LIMIT: usize = 4096;

/// Dense generator of the semi-discrete equation `dU/dt = G U`, acting on
/// stacked physical values `[u1; u2]`.
#[derive(Debug, Clone)]
pub struct DenseGenerator<T: Real> {
    matrix: DMatrix<Complex<T>>,
    dims: [usize; 3],
    epsilon: T,
}

impl<T: Real> DenseGenerator<T> {
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// `max |G + G^H|` over all entries.
    pub fn anti_hermitian_defect(&self) -> T {
        let n = self.dim();
        let g = &self.matrix;
        let mut worst = T::zero();
        for c in 0..n {
            for r in 0..=c {
                worst = Float::max(worst, (g[(r, c)] + g[(c, r)].conj()).norm());
            }
        }
        worst
    }
}

/// Assembles `G` for the given samples. Grids with `2 N1 N2 N3` above
/// [`DENSE_DIMENSION_LIMIT`] are refused.
pub fn assemble_generator<T: Real + RealField>(
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    epsilon: T,
) -> Result<DenseGenerator<T>> {
    samples.check_grid(grid)?;
    let n = grid.len();
    let dim = 2 * n;
    if dim > DENSE_DIMENSION_LIMIT {
        return Err(PauliError::DimensionGuard {
            dim,
            limit: DENSE_DIMENSION_LIMIT,
        });
    }
    if !(epsilon > T::zero()) {
        return Err(PauliError::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let half = T::lit(0.5);
    let k2 = grid.squared_frequencies();
    let kinetic = Complex::new(T::zero(), half * epsilon);
    let mut g = DMatrix::from_element(dim, dim, zero);

    // Column j of the flow block: (i eps / 2) Lap e_j + sum_l A_l * (d_l e_j).
    let mut unit = vec![zero; n];
    for j in 0..n {
        unit.iter_mut().for_each(|z| *z = zero);
        unit[j] = Complex::new(T::one(), T::zero());
        grid.forward_in_place(&mut unit)?;
        let mut col = unit.clone();
        for (z, w) in col.iter_mut().zip(&k2) {
            *z = *z * (-*w);
        }
        grid.inverse_in_place(&mut col)?;
        for z in col.iter_mut() {
            *z = kinetic * *z;
        }
        for axis in 0..3 {
            let mut d = unit.clone();
            apply_derivative_multiplier(grid, axis, &mut d);
            grid.inverse_in_place(&mut d)?;
            for ((z, v), a) in col.iter_mut().zip(&d).zip(&samples.a[axis]) {
                *z += *v * *a;
            }
        }
        for (i, z) in col.iter().enumerate() {
            g[(i, j)] = *z;
            g[(n + i, n + j)] = *z;
        }
    }

    for j in 0..n {
        let scalar = half * samples.a_squared(j) + samples.phi[j];
        let spin = half * epsilon * samples.b[2][j];
        // -(i / eps)(|A|^2/2 + phi -/+ eps B3 / 2)
        g[(j, j)] += Complex::new(T::zero(), -(scalar - spin) / epsilon);
        g[(n + j, n + j)] += Complex::new(T::zero(), -(scalar + spin) / epsilon);
        let (b1, b2) = (samples.b[0][j], samples.b[1][j]);
        g[(j, n + j)] = Complex::new(half * b2, half * b1);
        g[(n + j, j)] = Complex::new(-half * b2, half * b1);
    }

    Ok(DenseGenerator {
        matrix: g,
        dims: grid.counts(),
        epsilon,
    })
}

/// `exp(t G) U` for a state on the generator's grid. Accepts either
/// representation; the result is physical.
pub fn exact_evolve<T: Real + RealField>(
    state: &SpinorField<T>,
    generator: &DenseGenerator<T>,
    grid: &Grid<T>,
    t: T,
) -> Result<SpinorField<T>> {
    if state.dims() != generator.dims || grid.counts() != generator.dims {
        return Err(PauliError::ShapeMismatch {
            expected: generator.dims,
            got: state.dims(),
        });
    }
    let state = state.clone().into_physical(grid)?;
    let v = DVector::from_vec(state.stacked());
    let out = expm::expm_action(&generator.matrix, &v, t);
    SpinorField::from_stacked(generator.dims, out.as_slice(), Representation::Physical)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub dt: T,
    pub alpha_error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable<T> {
    pub rows: Vec<ConvergenceRow<T>>,
    /// least-squares slope of `log(error)` against `log(dt)`; `None` for
    /// fewer than two rows
    pub slope: Option<T>,
}

/// Least-squares slope of `log y` against `log x`. `None` with fewer than
/// two points or non-positive data.
pub fn fit_slope<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    if x.iter().chain(y).any(|v| !(*v > T::zero())) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.to_f64_lossy().ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.to_f64_lossy().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(T::lit(sxy / sxx))
}

/// Runs the splitting scheme for every `dt` and compares `U^N` with the
/// oracle solution at `t_final` in the alpha norm.
pub fn convergence_study<T: Real + RealField>(
    state0: &SpinorField<T>,
    fields: &EMFields<T>,
    grid: &Grid<T>,
    epsilon: T,
    dt_list: &[T],
    t_final: T,
    order: SplittingOrder,
) -> Result<ConvergenceTable<T>> {
    if dt_list.is_empty() {
        return Err(PauliError::InvalidArgument("dt list is empty".into()));
    }
    let configs = dt_list
        .iter()
        .map(|&dt| SolverConfig::new(epsilon, dt, t_final, order))
        .collect::<Result<Vec<_>>>()?;
    let samples = sample_fields(fields, grid)?;
    let generator = assemble_generator(&samples, grid, epsilon)?;
    let reference = exact_evolve(state0, &generator, grid, t_final)?;
    let mut rows = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let approx = evolve(state0.clone(), fields, grid, cfg, &mut NullSink)?;
        let err = state_error(&approx, &reference, grid)?;
        rows.push(ConvergenceRow {
            dt: cfg.dt,
            alpha_error: err.alpha_diff,
        });
    }
    let dts: Vec<T> = rows.iter().map(|r| r.dt).collect();
    let errs: Vec<T> = rows.iter().map(|r| r.alpha_error).collect();
    Ok(ConvergenceTable {
        slope: fit_slope(&dts, &errs),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{kinetic_step, lie_step, precompute_propagators};
    use crate::state::{initial_state_gaussian_pair, initial_state_spin_up};

    fn grid(n: usize) -> Grid<f64> {
        Grid::new([10.0; 3], [n; 3]).unwrap()
    }

    fn stacked_norm(s: &SpinorField<f64>) -> f64 {
        s.stacked().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn max_diff(a: &SpinorField<f64>, b: &SpinorField<f64>) -> f64 {
        a.stacked()
            .iter()
            .zip(b.stacked())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_fields_give_kinetic_only_generator() {
        let g = grid(2);
        let s = sample_fields(&EMFields::zero(), &g).unwrap();
        let gen = assemble_generator(&s, &g, 0.5).unwrap();
        assert_eq!(gen.dim(), 16);
        assert!(gen.anti_hermitian_defect() < 1e-14);
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(gen.matrix()[(r, c + 8)], Complex::new(0.0, 0.0));
                assert_eq!(gen.matrix()[(r, c)], gen.matrix()[(r + 8, c + 8)]);
            }
        }
    }

    #[test]
    fn experiment2_generator_is_anti_hermitian() {
        let g = grid(6);
        let s = sample_fields(&EMFields::experiment2(), &g).unwrap();
        let gen = assemble_generator(&s, &g, 0.5).unwrap();
        assert!(gen.anti_hermitian_defect() <= 1e-10);
    }

    #[test]
    fn potential_diagonal_readback() {
        let g = grid(4);
        let eps = 0.5;
        let f = EMFields::custom(
            "probe",
            |_| [0.0; 3],
            |x| 0.3 + (std::f64::consts::PI * x[0] / 5.0).sin(),
            |x| [0.0, 0.0, (std::f64::consts::PI * x[1] / 5.0).cos()],
        );
        let s = sample_fields(&f, &g).unwrap();
        let gen = assemble_generator(&s, &g, eps).unwrap();
        let n = g.len();
        let lap_diag = -g.squared_frequencies().iter().sum::<f64>() / n as f64;
        for j in 0..n {
            let want = Complex::new(0.0, -(s.phi[j] - 0.5 * eps * s.b[2][j]) / eps)
                + Complex::new(0.0, 0.5 * eps * lap_diag);
            assert!((gen.matrix()[(j, j)] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn dimension_guard() {
        let g = grid(13);
        let s = sample_fields(&EMFields::zero(), &g).unwrap();
        let err = assemble_generator(&s, &g, 0.5).unwrap_err();
        assert_eq!(err, PauliError::DimensionGuard { dim: 4394, limit: 4096 });
    }

    #[test]
    fn exact_evolve_identity_semigroup_and_unitarity() {
        let g = grid(4);
        let s = sample_fields(&EMFields::experiment2(), &g).unwrap();
        let gen = assemble_generator(&s, &g, 0.5).unwrap();
        let u = initial_state_gaussian_pair(&g);
        assert_eq!(exact_evolve(&u, &gen, &g, 0.0).unwrap(), u);
        let whole = exact_evolve(&u, &gen, &g, 0.5).unwrap();
        let half = exact_evolve(&u, &gen, &g, 0.2).unwrap();
        let split = exact_evolve(&half, &gen, &g, 0.3).unwrap();
        assert!(max_diff(&whole, &split) < 1e-10);
        assert!((stacked_norm(&whole) - stacked_norm(&u)).abs() < 1e-10 * stacked_norm(&u));
    }

    #[test]
    fn taylor_action_agrees_with_dense_exponential() {
        let g = grid(2);
        let s = sample_fields(&EMFields::experiment2(), &g).unwrap();
        let gen = assemble_generator(&s, &g, 0.5).unwrap();
        let u = initial_state_spin_up(&g);
        let t = 0.4;
        let e = dense_expm(&(gen.matrix() * Complex::new(t, 0.0)));
        let want = e * DVector::from_vec(u.stacked());
        let got = exact_evolve(&u, &gen, &g, t).unwrap();
        let diff = (DVector::from_vec(got.stacked()) - want).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn zero_field_oracle_equals_kinetic_step() {
        let g = grid(6);
        let f = EMFields::zero();
        let s = sample_fields(&f, &g).unwrap();
        let gen = assemble_generator(&s, &g, 0.5).unwrap();
        let u = initial_state_gaussian_pair(&g);
        let cfg = SolverConfig::new(0.5, 0.3, 0.3, SplittingOrder::Lie).unwrap();
        let p = precompute_propagators(&f, &s, &g, &cfg).unwrap();
        let split = kinetic_step(u.clone(), &p, &g).unwrap().into_physical(&g).unwrap();
        let exact = exact_evolve(&u, &gen, &g, 0.3).unwrap();
        assert!(max_diff(&split, &exact) < 1e-11);
    }

    #[test]
    fn lie_local_error_is_second_order() {
        let g = grid(6);
        let f = EMFields::experiment2();
        let s = sample_fields(&f, &g).unwrap();
        let gen = assemble_generator(&s, &g, 0.5).unwrap();
        let u = initial_state_spin_up(&g);
        let local = |dt: f64| {
            let cfg = SolverConfig::new(0.5, dt, dt, SplittingOrder::Lie).unwrap();
            let p = precompute_propagators(&f, &s, &g, &cfg).unwrap();
            let one = lie_step(u.clone(), &p, &g).unwrap();
            let exact = exact_evolve(&u, &gen, &g, dt).unwrap();
            state_error(&one, &exact, &g).unwrap().alpha_diff
        };
        let errs: Vec<f64> = [0.04, 0.02, 0.01].iter().map(|&dt| local(dt)).collect();
        let c: Vec<f64> = errs.iter().zip([0.04, 0.02, 0.01]).map(|(e, dt)| e / (dt * dt)).collect();
        assert!(c[1] / c[0] > 0.7 && c[1] / c[0] < 1.3, "{c:?}");
        assert!(c[2] / c[1] > 0.7 && c[2] / c[1] < 1.3, "{c:?}");
    }

    #[test]
    fn single_dt_has_no_slope() {
        let g = grid(4);
        let t = convergence_study(
            &initial_state_spin_up(&g),
            &EMFields::experiment1(),
            &g,
            0.5,
            &[0.1],
            0.2,
            SplittingOrder::Lie,
        )
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(t.slope.is_none());
    }

    #[test]
    fn slope_fit_recovers_power_law() {
        let x = [0.1, 0.05, 0.025];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
        assert!((fit_slope(&x, &y).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_slope(&[0.1], &[1.0]).is_none());
        assert!(fit_slope(&[0.1, 0.2], &[0.0, 1.0]).is_none());
    }
}
