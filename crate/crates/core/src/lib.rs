//! Time-splitting spectral solver for the scaled linear Pauli equation
//!
//! ```text
//! i eps d_t u = [ (1/2)(-i eps grad - A)^2 - (eps/2) sigma.B + phi ] u
//! ```
//!
//! for a 2-spinor `u = (u1, u2)` on a periodic box. The generator is split
//! into a potential part, the free kinetic part (exact in Fourier space),
//! transport along `A` (semi-Lagrangian with trigonometric interpolation) and
//! the pointwise spin coupling through `B1`, `B2`; these are composed as Lie
//! or Strang steps.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`). The `*64` / `*32`
//! aliases below name the common instantiations.
//!
//! ```
//! use pauli_core::{evolve, EMFields, Grid64, NullSink, SolverConfig, SplittingOrder, SpinorField};
//!
//! let grid = Grid64::new([10.0; 3], [8; 3]).unwrap();
//! let fields = EMFields::experiment1();
//! let cfg = SolverConfig::new(0.5, 0.1, 0.2, SplittingOrder::Lie).unwrap();
//! let u0 = SpinorField::from_preset("gaussian-pair", &grid).unwrap();
//! let u = evolve(u0, &fields, &grid, &cfg, &mut NullSink).unwrap();
//! assert!(u.is_finite());
//! ```

pub mod error;
pub mod fields;
pub mod grid;
pub mod observables;
pub mod oracle;
pub mod scalar;
pub mod splitting;
pub mod state;

pub use error::{PauliError, Result};
pub use num_complex::{Complex, Complex32, Complex64};
pub use fields::{
    sample_fields, validate_fields, EMFields, FieldSamples, FieldValidation, FIELD_PRESETS,
};
pub use grid::{
    curl, divergence, forward_dft, gradient, inverse_dft, spectral_derivative, trig_interpolate,
    DerivativeKind, Grid, Representation, SpectralField,
};
pub use observables::{
    continuity_residual, current_density, density, series_record, state_error, total_energy,
    total_mass, SeriesRecord, StateError,
};
pub use oracle::{
    assemble_generator, convergence_study, exact_evolve, fit_slope, ConvergenceTable,
    DenseGenerator,
};
pub use scalar::Real;
pub use splitting::{
    advection_step, coupling_matrix_closed_form, coupling_step, evolve, kinetic_step, lie_step,
    potential_step, precompute_propagators, precompute_strang_propagators, strang_step,
    trace_characteristics, EvolutionSink, NullSink, Propagators, SeriesCollector, Solver,
    SolverConfig, SplittingOrder, StrangPropagators,
};
pub use state::{
    alpha_norm, component_l2, initial_state_gaussian_pair, initial_state_spin_up, SpinorField,
    INITIAL_PRESETS,
};

pub type Grid64 = Grid<f64>;
pub type SpinorField64 = SpinorField<f64>;
pub type EMFields64 = EMFields<f64>;
pub type FieldSamples64 = FieldSamples<f64>;
pub type Propagators64 = Propagators<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type Solver64 = Solver<f64>;
pub type SeriesRecord64 = SeriesRecord<f64>;
pub type DenseGenerator64 = DenseGenerator<f64>;

pub type Grid32 = Grid<f32>;
pub type SpinorField32 = SpinorField<f32>;
pub type EMFields32 = EMFields<f32>;
pub type SolverConfig32 = SolverConfig<f32>;
pub type Solver32 = Solver<f32>;
