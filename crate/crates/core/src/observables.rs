//! Diagnostics: density, current, mass, energy, the discrete continuity
//! residual and state-difference metrics. All integrals use the grid
//! quadrature weight `prod_l L_l / N_l`; reductions are pairwise.

use num_complex::Complex;
use num_traits::Float;

use crate::error::{PauliError, Result};
use crate::fields::FieldSamples;
use crate::grid::{apply_derivative_multiplier, Grid, Representation};
use crate::scalar::{max_abs, pairwise_sum, pairwise_sum_map, sum_norm_sqr, Real};
use crate::state::{component_l2, SpinorField};

/// One row of the per-step time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRecord<T> {
    pub time: T,
    pub mass: T,
    pub l2_u1: T,
    pub l2_u2: T,
    pub alpha: T,
    pub energy: T,
}

/// Differences between two states, see [`state_error`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateError<T> {
    pub max_abs: T,
    pub rel: T,
    pub alpha_diff: T,
}

/// `n = |u1|^2 + |u2|^2` at every grid point.
pub fn density<T: Real>(state: &SpinorField<T>) -> Result<Vec<T>> {
    state.expect(Representation::Physical)?;
    Ok(state
        .component(0)
        .iter()
        .zip(state.component(1))
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect())
}

/// `int n dx = ||U1||^2 + ||U2||^2`.
pub fn total_mass<T: Real>(state: &SpinorField<T>, grid: &Grid<T>) -> Result<T> {
    state.check_grid(grid)?;
    state.expect(Representation::Physical)?;
    Ok(grid.cell_volume() * (sum_norm_sqr(state.component(0)) + sum_norm_sqr(state.component(1))))
}

/// Spectral gradient of one component: `[d1 u, d2 u, d3 u]` in physical space.
fn component_gradient<T: Real>(u: &[Complex<T>], grid: &Grid<T>) -> Result<[Vec<Complex<T>>; 3]> {
    let mut spec = u.to_vec();
    grid.forward_in_place(&mut spec)?;
    let mut out: [Vec<Complex<T>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (axis, slot) in out.iter_mut().enumerate() {
        let mut d = spec.clone();
        apply_derivative_multiplier(grid, axis, &mut d);
        grid.inverse_in_place(&mut d)?;
        *slot = d;
    }
    Ok(out)
}

fn real_derivative<T: Real>(f: &[T], grid: &Grid<T>, axis: usize) -> Result<Vec<T>> {
    let mut spec: Vec<Complex<T>> = f.iter().map(|&v| Complex::new(v, T::zero())).collect();
    grid.forward_in_place(&mut spec)?;
    apply_derivative_multiplier(grid, axis, &mut spec);
    grid.inverse_in_place(&mut spec)?;
    Ok(spec.into_iter().map(|z| z.re).collect())
}

/// Spin density `(2 Re(u1* u2), 2 Im(u1* u2), |u1|^2 - |u2|^2)`.
fn spin_density<T: Real>(state: &SpinorField<T>) -> [Vec<T>; 3] {
    let two = T::lit(2.0);
    let n = state.component(0).len();
    let mut s = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for (a, b) in state.component(0).iter().zip(state.component(1)) {
        let p = a.conj() * b;
        s[0].push(two * p.re);
        s[1].push(two * p.im);
        s[2].push(a.norm_sqr() - b.norm_sqr());
    }
    s
}

/// Current density `J = eps Im(u* grad u) - n A - (eps/2) curl S`, with `S`
/// the spin density. Derivatives are spectral.
pub fn current_density<T: Real>(
    state: &SpinorField<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    epsilon: T,
) -> Result<[Vec<T>; 3]> {
    state.check_grid(grid)?;
    samples.check_grid(grid)?;
    state.expect(Representation::Physical)?;
    let n = grid.len();
    let rho = density(state)?;
    let mut j: [Vec<T>; 3] = [0, 1, 2].map(|l| (0..n).map(|p| -rho[p] * samples.a[l][p]).collect());

    for c in 0..2 {
        let u = state.component(c);
        let grad = component_gradient(u, grid)?;
        for l in 0..3 {
            for p in 0..n {
                j[l][p] += epsilon * (u[p].conj() * grad[l][p]).im;
            }
        }
    }

    let s = spin_density(state);
    let half_eps = T::lit(0.5) * epsilon;
    // (curl S)_l = d_{l+1} S_{l+2} - d_{l+2} S_{l+1}
    for l in 0..3 {
        let (a, b) = ((l + 1) % 3, (l + 2) % 3);
        let d1 = real_derivative(&s[b], grid, a)?;
        let d2 = real_derivative(&s[a], grid, b)?;
        for p in 0..n {
            j[l][p] -= half_eps * (d1[p] - d2[p]);
        }
    }
    Ok(j)
}

/// `E = 1/2 sum_l int |(-i eps d_l - A_l) u|^2 + int phi n - (eps/2) int u* (sigma.B) u`.
pub fn total_energy<T: Real>(
    state: &SpinorField<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    epsilon: T,
) -> Result<T> {
    state.check_grid(grid)?;
    samples.check_grid(grid)?;
    state.expect(Representation::Physical)?;
    let n = grid.len();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut kinetic = Vec::with_capacity(2 * n);
    for c in 0..2 {
        let u = state.component(c);
        let grad = component_gradient(u, grid)?;
        for p in 0..n {
            let mut acc = T::zero();
            for l in 0..3 {
                // -i eps d_l u - A_l u
                let v = Complex::new(T::zero(), -epsilon) * grad[l][p] - u[p] * samples.a[l][p];
                acc += v.norm_sqr();
            }
            kinetic.push(acc);
        }
    }
    let u1 = state.component(0);
    let u2 = state.component(1);
    let local: Vec<T> = (0..n)
        .map(|p| {
            let b = [samples.b[0][p], samples.b[1][p], samples.b[2][p]];
            let dens = u1[p].norm_sqr() + u2[p].norm_sqr();
            let spin = b[2] * (u1[p].norm_sqr() - u2[p].norm_sqr())
                + two * (u1[p].conj() * Complex::new(b[0], -b[1]) * u2[p]).re;
            samples.phi[p] * dens - half * epsilon * spin
        })
        .collect();
    Ok(grid.cell_volume() * (half * pairwise_sum(&kinetic) + pairwise_sum(&local)))
}

/// Pointwise `(n^{n+1} - n^n)/dt + div J` with `J` taken from the averaged
/// state `(U^n + U^{n+1})/2`.
pub fn continuity_residual_field<T: Real>(
    before: &SpinorField<T>,
    after: &SpinorField<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    epsilon: T,
    dt: T,
) -> Result<Vec<T>> {
    if !(dt > T::zero()) {
        return Err(PauliError::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let half = Complex::new(T::lit(0.5), T::zero());
    let mid = SpinorField::linear_combination(half, before, half, after)?;
    let j = current_density(&mid, samples, grid, epsilon)?;
    let n0 = density(before)?;
    let n1 = density(after)?;
    let mut out: Vec<T> = n1.iter().zip(&n0).map(|(a, b)| (*a - *b) / dt).collect();
    for (l, jl) in j.iter().enumerate() {
        let d = real_derivative(jl, grid, l)?;
        for (o, v) in out.iter_mut().zip(d) {
            *o += v;
        }
    }
    Ok(out)
}

/// Discrete l2 norm of [`continuity_residual_field`].
pub fn continuity_residual<T: Real>(
    before: &SpinorField<T>,
    after: &SpinorField<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    epsilon: T,
    dt: T,
) -> Result<T> {
    let r = continuity_residual_field(before, after, samples, grid, epsilon, dt)?;
    Ok((grid.cell_volume() * pairwise_sum_map(&r, |v| *v * *v)).sqrt())
}

/// `max_abs = max |a - b|`, `rel = max_abs / max |b|`, `alpha_diff = ||a - b||_alpha`.
pub fn state_error<T: Real>(
    a: &SpinorField<T>,
    b: &SpinorField<T>,
    grid: &Grid<T>,
) -> Result<StateError<T>> {
    a.check_grid(grid)?;
    b.check_grid(grid)?;
    let a = a.clone().into_physical(grid)?;
    let b = b.clone().into_physical(grid)?;
    let one = Complex::new(T::one(), T::zero());
    let diff = SpinorField::linear_combination(one, &a, -one, &b)?;
    let max_abs_diff = Float::max(max_abs(diff.component(0)), max_abs(diff.component(1)));
    let scale = Float::max(max_abs(b.component(0)), max_abs(b.component(1)));
    let rel = if scale > T::zero() {
        max_abs_diff / scale
    } else if max_abs_diff == T::zero() {
        T::zero()
    } else {
        T::infinity()
    };
    let (d1, d2) = component_l2(&diff, grid)?;
    Ok(StateError {
        max_abs: max_abs_diff,
        rel,
        alpha_diff: d1 + d2,
    })
}

/// Builds the series row for `state` at `time`.
pub fn series_record<T: Real>(
    state: &SpinorField<T>,
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    epsilon: T,
    time: T,
) -> Result<SeriesRecord<T>> {
    let state = if state.representation() == Representation::Physical {
        std::borrow::Cow::Borrowed(state)
    } else {
        std::borrow::Cow::Owned(state.clone().into_physical(grid)?)
    };
    let (l2_u1, l2_u2) = component_l2(&state, grid)?;
    Ok(SeriesRecord {
        time,
        mass: total_mass(&state, grid)?,
        l2_u1,
        l2_u2,
        alpha: l2_u1 + l2_u2,
        energy: total_energy(&state, samples, grid, epsilon)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{sample_fields, EMFields};
    use crate::state::{initial_state_gaussian_pair, initial_state_spin_up};
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid<f64> {
        Grid::new([10.0; 3], [n; 3]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn density_and_mass_of_constant_state() {
        let g = grid(6);
        let s = SpinorField::from_fn(&g, |_| [c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(density(&s).unwrap().iter().all(|v| *v == 1.0));
        assert!((total_mass(&s, &g).unwrap() - 1000.0).abs() < 1e-10);
        let z = SpinorField::zeros(&g);
        assert!(density(&z).unwrap().iter().all(|v| *v == 0.0));
        assert_eq!(total_mass(&z, &g).unwrap(), 0.0);
    }

    #[test]
    fn spin_up_peak_density_is_one() {
        let g = grid(20);
        let s = initial_state_spin_up(&g);
        let j = g.index([9, 9, 10]);
        assert!((density(&s).unwrap()[j] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mass_equals_sum_of_squared_component_norms() {
        let g = grid(10);
        let s = initial_state_gaussian_pair(&g);
        let (a, b) = component_l2(&s, &g).unwrap();
        let m = total_mass(&s, &g).unwrap();
        assert!((m - (a * a + b * b)).abs() < 1e-13 * m);
    }

    #[test]
    fn gaussian_pair_mass_matches_refined_quadrature() {
        let coarse = grid(25);
        let fine = grid(50);
        let m25 = total_mass(&initial_state_gaussian_pair(&coarse), &coarse).unwrap();
        let m50 = total_mass(&initial_state_gaussian_pair(&fine), &fine).unwrap();
        assert!(((m25 - m50) / m50).abs() < 1e-6, "{m25} vs {m50}");
    }

    #[test]
    fn plane_wave_energy() {
        let g = grid(8);
        let f = sample_fields(&EMFields::zero(), &g).unwrap();
        let eps = 0.5;
        let k = 2.0 * PI / 10.0;
        let s = SpinorField::from_fn(&g, |x| [Complex::from_polar(1.0, k * x[0]), c(0.0, 0.0)]);
        let e = total_energy(&s, &f, &g, eps).unwrap();
        let want = 0.5 * eps * eps * k * k * 1000.0;
        assert!((e - want).abs() < 1e-10 * want, "{e} vs {want}");
        assert_eq!(total_energy(&SpinorField::zeros(&g), &f, &g, eps).unwrap(), 0.0);
    }

    #[test]
    fn energy_matches_direct_quadrature_of_the_analytic_integrand() {
        // Gaussian-pair state under experiment 2: derivatives of the Gaussians
        // are known in closed form, so the integrand is evaluated directly.
        let g = grid(24);
        let eps = 0.5;
        let fields = EMFields::experiment2();
        let f = sample_fields(&fields, &g).unwrap();
        let s = initial_state_gaussian_pair(&g);
        let got = total_energy(&s, &f, &g, eps).unwrap();

        let centres = [[4.5, 4.5, 5.0], [5.5, 5.5, 5.0]];
        let mut want = 0.0;
        for x in g.points() {
            let a = fields.vector_potential(x);
            let b = fields.magnetic_field(x);
            let mut u = [0.0; 2];
            for ci in 0..2 {
                let r2: f64 = (0..3).map(|l| (x[l] - centres[ci][l]).powi(2)).sum();
                u[ci] = (-r2).exp();
                for l in 0..3 {
                    let du = -2.0 * (x[l] - centres[ci][l]) * u[ci];
                    let v = c(-a[l] * u[ci], -eps * du);
                    want += 0.5 * v.norm_sqr();
                }
            }
            let spin = b[2] * (u[0] * u[0] - u[1] * u[1]) + 2.0 * b[0] * u[0] * u[1];
            want -= 0.5 * eps * spin;
        }
        want *= g.cell_volume();
        assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn observables_ignore_global_phase() {
        let g = grid(8);
        let f = sample_fields(&EMFields::experiment2(), &g).unwrap();
        let s = initial_state_gaussian_pair(&g);
        let r = s.clone().scaled(Complex::from_polar(1.0, 1.1));
        let (e0, e1) = (
            total_energy(&s, &f, &g, 0.5).unwrap(),
            total_energy(&r, &f, &g, 0.5).unwrap(),
        );
        assert!((e0 - e1).abs() < 1e-12 * e0.abs());
        let (d0, d1) = (density(&s).unwrap(), density(&r).unwrap());
        assert!(d0.iter().zip(&d1).all(|(a, b)| (a - b).abs() < 1e-15));
    }

    #[test]
    fn real_single_component_current_is_pure_spin_curl() {
        let g = grid(16);
        let f = sample_fields(&EMFields::zero(), &g).unwrap();
        let eps = 0.5;
        let s = initial_state_spin_up(&g);
        let j = current_density(&s, &f, &g, eps).unwrap();
        // S = (0, 0, |u1|^2); curl S = (d2 S3, -d1 S3, 0)
        let n = density(&s).unwrap();
        let d1 = real_derivative(&n, &g, 0).unwrap();
        let d2 = real_derivative(&n, &g, 1).unwrap();
        for p in 0..g.len() {
            assert!((j[0][p] + 0.5 * eps * d2[p]).abs() < 1e-14);
            assert!((j[1][p] - 0.5 * eps * d1[p]).abs() < 1e-14);
            assert!(j[2][p].abs() < 1e-14);
        }
        let z = current_density(&SpinorField::zeros(&g), &f, &g, eps).unwrap();
        assert!(z.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn plane_wave_current_is_eps_k_minus_a() {
        let g = grid(8);
        let a0 = [0.3, -0.2, 0.1];
        let f = sample_fields(&EMFields::uniform_vector_potential(a0), &g).unwrap();
        let eps = 0.5;
        let k = 2.0 * PI / 10.0;
        let s = SpinorField::from_fn(&g, |x| [Complex::from_polar(1.0, k * x[1]), c(0.0, 0.0)]);
        let j = current_density(&s, &f, &g, eps).unwrap();
        for p in 0..g.len() {
            assert!((j[0][p] + a0[0]).abs() < 1e-12);
            assert!((j[1][p] - (eps * k - a0[1])).abs() < 1e-12);
            assert!((j[2][p] + a0[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn state_error_definitions() {
        let g = grid(6);
        let s = initial_state_gaussian_pair(&g);
        let e = state_error(&s, &s, &g).unwrap();
        assert_eq!((e.max_abs, e.rel, e.alpha_diff), (0.0, 0.0, 0.0));

        let delta = 0.25;
        let mut t = s.clone();
        for z in t.component_mut(0) {
            *z += delta;
        }
        let e = state_error(&t, &s, &g).unwrap();
        assert!((e.max_abs - delta).abs() < 1e-15);
        let scale = max_abs(s.component(0)).max(max_abs(s.component(1)));
        assert!((e.rel - delta / scale).abs() < 1e-15);
        assert!((e.alpha_diff - delta * 1000f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn series_record_is_consistent() {
        let g = grid(8);
        let f = sample_fields(&EMFields::experiment1(), &g).unwrap();
        let s = initial_state_gaussian_pair(&g);
        let r = series_record(&s, &f, &g, 0.5, 0.25).unwrap();
        assert_eq!(r.time, 0.25);
        assert!((r.alpha - (r.l2_u1 + r.l2_u2)).abs() < 1e-13);
        assert!(r.mass >= 0.0);
        let spec = series_record(&s.clone().into_spectral(&g).unwrap(), &f, &g, 0.5, 0.25).unwrap();
        assert!((spec.energy - r.energy).abs() < 1e-12 * r.energy.abs());
    }
}
