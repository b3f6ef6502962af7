use num_complex::Complex;

use super::propagators::{Propagators, StrangPropagators};
use crate::error::Result;
use crate::grid::{Grid, Representation};
use crate::scalar::Real;
use crate::state::SpinorField;

/// Step (i): pointwise potential phases, in physical space.
pub fn potential_step<T: Real>(
    mut state: SpinorField<T>,
    prop: &Propagators<T>,
) -> Result<SpinorField<T>> {
    state.expect(Representation::Physical)?;
    for c in 0..2 {
        for (u, p) in state.component_mut(c).iter_mut().zip(&prop.potential_phase[c]) {
            *u *= *p;
        }
    }
    Ok(state)
}

/// Step (ii): free kinetic propagator applied mode by mode. The result is
/// left in spectral representation for the advection step.
pub fn kinetic_step<T: Real>(
    state: SpinorField<T>,
    prop: &Propagators<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    let mut state = state.into_spectral(grid)?;
    for c in 0..2 {
        for (u, p) in state.component_mut(c).iter_mut().zip(&prop.kinetic_phase) {
            *u *= *p;
        }
    }
    Ok(state)
}

/// Step (iii): semi-Lagrangian advection. The trigonometric interpolant of
/// the spectral input is evaluated at the precomputed departure points;
/// output is physical.
pub fn advection_step<T: Real>(
    state: SpinorField<T>,
    prop: &Propagators<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    let state = state.into_spectral(grid)?;
    if prop.identity_transport {
        return state.into_physical(grid);
    }
    let mut values = prop
        .interpolation
        .evaluate(&[state.component(0), state.component(1)])?;
    let u2 = values.pop().unwrap_or_default();
    let u1 = values.pop().unwrap_or_default();
    SpinorField::new(grid.counts(), u1, u2, Representation::Physical)
}

/// Step (iv): pointwise 2x2 spin coupling, in physical space.
pub fn coupling_step<T: Real>(
    mut state: SpinorField<T>,
    prop: &Propagators<T>,
) -> Result<SpinorField<T>> {
    state.expect(Representation::Physical)?;
    let (u1, u2) = state.components_mut();
    for ((a, b), m) in u1.iter_mut().zip(u2.iter_mut()).zip(&prop.coupling) {
        let (x, y): (Complex<T>, Complex<T>) = (*a, *b);
        *a = m[0][0] * x + m[0][1] * y;
        *b = m[1][0] * x + m[1][1] * y;
    }
    Ok(state)
}

/// One Lie step: potential, kinetic, advection, coupling.
pub fn lie_step<T: Real>(
    state: SpinorField<T>,
    prop: &Propagators<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    let s = potential_step(state, prop)?;
    let s = kinetic_step(s, prop, grid)?;
    let s = advection_step(s, prop, grid)?;
    coupling_step(s, prop)
}

/// One Strang step: the half-step flows in the order potential, kinetic,
/// advection, then the full coupling step, then the same half-steps reversed.
pub fn strang_step<T: Real>(
    state: SpinorField<T>,
    props: &StrangPropagators<T>,
    grid: &Grid<T>,
) -> Result<SpinorField<T>> {
    let p = &props.0;
    let s = potential_step(state, p)?;
    let s = kinetic_step(s, p, grid)?;
    let s = advection_step(s, p, grid)?;
    let s = coupling_step(s, p)?;
    let s = advection_step(s, p, grid)?;
    let s = kinetic_step(s, p, grid)?;
    let s = s.into_physical(grid)?;
    potential_step(s, p)
}
