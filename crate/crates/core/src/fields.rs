//! Electromagnetic data: analytic potentials, their grid samples, and the
//! Coulomb-gauge / `B = curl A` consistency checks.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{PauliError, Result};
use crate::grid::{curl, divergence, Grid, SpectralField};
use crate::scalar::Real;

pub type VectorFn<T> = Arc<dyn Fn([T; 3]) -> [T; 3] + Send + Sync>;
pub type ScalarFn<T> = Arc<dyn Fn([T; 3]) -> T + Send + Sync>;

/// Names accepted by [`EMFields::from_preset`].
pub const FIELD_PRESETS: [&str; 3] = ["experiment1", "experiment2", "zero"];

/// Time-independent potentials `A`, `phi` and magnetic field `B`.
#[derive(Clone)]
pub struct EMFields<T: Real> {
    name: String,
    vector_potential: VectorFn<T>,
    scalar_potential: ScalarFn<T>,
    magnetic_field: VectorFn<T>,
}

impl<T: Real> fmt::Debug for EMFields<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EMFields").field("name", &self.name).finish()
    }
}

/// `pi/5 (x - 5)`, the phase used by both benchmark presets.
fn box_phase<T: Real>(x: T) -> T {
    T::PI() / T::lit(5.0) * (x - T::lit(5.0))
}

impl<T: Real> EMFields<T> {
    pub fn custom(
        name: impl Into<String>,
        vector_potential: impl Fn([T; 3]) -> [T; 3] + Send + Sync + 'static,
        scalar_potential: impl Fn([T; 3]) -> T + Send + Sync + 'static,
        magnetic_field: impl Fn([T; 3]) -> [T; 3] + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            vector_potential: Arc::new(vector_potential),
            scalar_potential: Arc::new(scalar_potential),
            magnetic_field: Arc::new(magnetic_field),
        }
    }

    pub fn zero() -> Self {
        Self::custom("zero", |_| [T::zero(); 3], |_| T::zero(), |_| [T::zero(); 3])
    }

    /// Planar vortex field on `[0,10]^3` with `B` purely along `x3`; the two
    /// spin components do not couple.
    pub fn experiment1() -> Self {
        Self::custom(
            "experiment1",
            |x| {
                let (a1, a2) = (box_phase(x[0]), box_phase(x[1]));
                [
                    -T::PI() * a2.cos() * a2.sin(),
                    T::PI() * a1.cos() * a1.sin(),
                    T::zero(),
                ]
            },
            |_| T::zero(),
            |x| [T::zero(), T::zero(), b3_common(x)],
        )
    }

    /// The vortex field of [`EMFields::experiment1`] plus
    /// `A3 = cos(a1) sin(a2)`, which adds in-plane `B1`, `B2` and couples
    /// the spin components.
    pub fn experiment2() -> Self {
        Self::custom(
            "experiment2",
            |x| {
                let (a1, a2) = (box_phase(x[0]), box_phase(x[1]));
                [
                    -T::PI() * a2.cos() * a2.sin(),
                    T::PI() * a1.cos() * a1.sin(),
                    a1.cos() * a2.sin(),
                ]
            },
            |_| T::zero(),
            |x| {
                let (a1, a2) = (box_phase(x[0]), box_phase(x[1]));
                let s = T::PI() / T::lit(5.0);
                [s * a1.cos() * a2.cos(), s * a1.sin() * a2.sin(), b3_common(x)]
            },
        )
    }

    /// Constant vector potential (so `B = 0`); characteristics are straight
    /// lines.
    pub fn uniform_vector_potential(a: [T; 3]) -> Self {
        Self::custom("uniform-A", move |_| a, |_| T::zero(), |_| [T::zero(); 3])
    }

    /// Constant scalar potential with vanishing `A` and `B`.
    pub fn uniform_scalar_potential(phi: T) -> Self {
        Self::custom("uniform-phi", |_| [T::zero(); 3], move |_| phi, |_| [T::zero(); 3])
    }

    /// Uniform `B` in the symmetric gauge `A = B x x / 2`. That potential is
    /// not periodic unless `B = 0`, so any other value is rejected.
    pub fn uniform_magnetic_symmetric_gauge(b: [T; 3]) -> Result<Self> {
        if b.iter().any(|c| *c != T::zero()) {
            return Err(PauliError::InvalidArgument(
                "symmetric-gauge potential of a non-zero uniform B is not periodic".into(),
            ));
        }
        Ok(Self::zero())
    }

    pub fn from_preset(name: &str) -> Result<Self> {
        match name {
            "experiment1" => Ok(Self::experiment1()),
            "experiment2" => Ok(Self::experiment2()),
            "zero" => Ok(Self::zero()),
            other => Err(PauliError::InvalidArgument(format!(
                "unknown preset \"{other}\" (expected one of {FIELD_PRESETS:?})"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vector_potential(&self, x: [T; 3]) -> [T; 3] {
        (self.vector_potential)(x)
    }

    pub fn scalar_potential(&self, x: [T; 3]) -> T {
        (self.scalar_potential)(x)
    }

    pub fn magnetic_field(&self, x: [T; 3]) -> [T; 3] {
        (self.magnetic_field)(x)
    }

    /// Largest change of `A`, `phi`, `B` under translation by one box period
    /// along any axis, over the given probe points.
    pub fn periodicity_defect(&self, lengths: [T; 3], probes: &[[T; 3]]) -> T {
        let mut worst = T::zero();
        for &x in probes {
            for axis in 0..3 {
                let mut y = x;
                y[axis] += lengths[axis];
                let da = self.vector_potential(x);
                let db = self.vector_potential(y);
                let ba = self.magnetic_field(x);
                let bb = self.magnetic_field(y);
                for l in 0..3 {
                    worst = worst.max((da[l] - db[l]).abs()).max((ba[l] - bb[l]).abs());
                }
                worst = worst.max((self.scalar_potential(x) - self.scalar_potential(y)).abs());
            }
        }
        worst
    }
}

/// `(pi/5) * pi * sum_{j=1,2} (cos^2 a_j - sin^2 a_j)`.
fn b3_common<T: Real>(x: [T; 3]) -> T {
    let term = |a: T| T::PI() * (a.cos() * a.cos() - a.sin() * a.sin());
    T::PI() / T::lit(5.0) * (term(box_phase(x[0])) + term(box_phase(x[1])))
}

/// Grid samples of an [`EMFields`].
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSamples<T: Real> {
    dims: [usize; 3],
    pub a: [Vec<T>; 3],
    pub phi: Vec<T>,
    pub b: [Vec<T>; 3],
}

impl<T: Real> FieldSamples<T> {
    pub fn dims(&self) -> [usize; 3] {
        self.dims
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

    /// `|A(x_j)|^2`.
    pub fn a_squared(&self, j: usize) -> T {
        self.a[0][j] * self.a[0][j] + self.a[1][j] * self.a[1][j] + self.a[2][j] * self.a[2][j]
    }

    /// `true` when `B1` and `B2` vanish identically on the grid.
    pub fn in_plane_field_vanishes(&self) -> bool {
        self.b[0].iter().chain(&self.b[1]).all(|v| *v == T::zero())
    }
}

/// Pointwise evaluation of `fields` at every grid point.
pub fn sample_fields<T: Real>(fields: &EMFields<T>, grid: &Grid<T>) -> Result<FieldSamples<T>> {
    let n = grid.len();
    let mut a = [vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]];
    let mut b = a.clone();
    let mut phi = vec![T::zero(); n];
    for j in 0..n {
        let x = grid.point(grid.multi_index(j));
        let av = fields.vector_potential(x);
        let bv = fields.magnetic_field(x);
        let p = fields.scalar_potential(x);
        if av.iter().chain(&bv).any(|v| !v.is_finite()) || !p.is_finite() {
            return Err(PauliError::Evaluation {
                point: x.map(|c| c.to_f64_lossy()),
            });
        }
        for l in 0..3 {
            a[l][j] = av[l];
            b[l][j] = bv[l];
        }
        phi[j] = p;
    }
    Ok(FieldSamples {
        dims: grid.counts(),
        a,
        phi,
        b,
    })
}

/// Outcome of [`validate_fields`]; failures are reported, not raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValidation<T> {
    /// max |div A| over the grid
    pub divergence_max: T,
    /// max over components of |curl A - B|
    pub curl_residual_max: T,
    pub tolerance: T,
    pub coulomb_gauge_ok: bool,
    pub curl_ok: bool,
}

impl<T> FieldValidation<T> {
    pub fn passed(&self) -> bool {
        self.coulomb_gauge_ok && self.curl_ok
    }
}

/// Spectral check of `div A = 0` and `curl A = B`.
pub fn validate_fields<T: Real>(
    samples: &FieldSamples<T>,
    grid: &Grid<T>,
    tol: T,
) -> Result<FieldValidation<T>> {
    samples.check_grid(grid)?;
    let a = [
        SpectralField::from_real(grid, &samples.a[0])?,
        SpectralField::from_real(grid, &samples.a[1])?,
        SpectralField::from_real(grid, &samples.a[2])?,
    ];
    let div = divergence(&a, grid)?;
    let divergence_max = max_modulus(div.data());
    let rot = curl(&a, grid)?;
    let mut curl_residual_max = T::zero();
    for l in 0..3 {
        for (z, b) in rot[l].data().iter().zip(&samples.b[l]) {
            curl_residual_max = curl_residual_max.max((*z - Complex::new(*b, T::zero())).norm());
        }
    }
    Ok(FieldValidation {
        divergence_max,
        curl_residual_max,
        tolerance: tol,
        coulomb_gauge_ok: divergence_max <= tol,
        curl_ok: curl_residual_max <= tol,
    })
}

fn max_modulus<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn standard_grid() -> Grid<f64> {
        Grid::new([10.0; 3], [25; 3]).unwrap()
    }

    #[test]
    fn experiment1_vanishes_at_box_centre() {
        let f = EMFields::<f64>::experiment1();
        for z in [0.0, 3.3, 7.1] {
            let a = f.vector_potential([5.0, 5.0, z]);
            assert!(a.iter().all(|v| v.abs() < 1e-15));
            assert_eq!(f.scalar_potential([1.0, 2.0, z]), 0.0);
        }
        let b = f.magnetic_field([1.0, 2.0, 3.0]);
        assert_eq!((b[0], b[1]), (0.0, 0.0));
    }

    #[test]
    fn experiment2_point_values() {
        let f = EMFields::<f64>::experiment2();
        for x2 in [0.0, 2.5, 6.0] {
            let a = f.vector_potential([5.0, x2, 1.0]);
            assert!((a[2] - (PI * (x2 - 5.0) / 5.0).sin()).abs() < 1e-15);
        }
        let b = f.magnetic_field([5.0, 5.0, 4.0]);
        assert!((b[0] - PI / 5.0).abs() < 1e-15);
        assert!(b[1].abs() < 1e-15);
        // B3 at the centre: (pi/5) * pi * (1 + 1)
        assert!((b[2] - 2.0 * PI * PI / 5.0).abs() < 1e-14);
    }

    #[test]
    fn presets_are_consistent_on_standard_grid() {
        let g = standard_grid();
        for f in [EMFields::experiment1(), EMFields::experiment2()] {
            let s = sample_fields(&f, &g).unwrap();
            let report = validate_fields(&s, &g, 1e-6).unwrap();
            assert!(report.passed(), "{}: {report:?}", f.name());
            assert!(report.curl_residual_max < 1e-8);
            assert!(report.divergence_max < 1e-8);
        }
    }

    #[test]
    fn presets_are_periodic() {
        let probes = [[0.1, 0.2, 0.3], [3.7, 9.1, 5.5], [9.9, 0.0, 2.0]];
        for f in [EMFields::<f64>::experiment1(), EMFields::experiment2()] {
            assert!(f.periodicity_defect([10.0; 3], &probes) < 1e-12);
        }
    }

    #[test]
    fn sample_shapes_and_zero_fields() {
        let g = standard_grid();
        let s = sample_fields(&EMFields::experiment1(), &g).unwrap();
        assert_eq!(s.dims(), [25, 25, 25]);
        assert_eq!(s.a[0].len(), 15625);
        assert_eq!(s.phi.len(), 15625);
        assert_eq!(s.b[2].len(), 15625);
        let z = sample_fields(&EMFields::zero(), &g).unwrap();
        assert!(z.a.iter().chain(&z.b).flatten().chain(&z.phi).all(|v| *v == 0.0));
    }

    #[test]
    fn constant_b_sample_is_constant() {
        let g = Grid::new([10.0; 3], [6; 3]).unwrap();
        let bz = 0.7;
        let f = EMFields::custom(
            "const-bz",
            |x: [f64; 3]| EMFields::<f64>::experiment1().vector_potential(x).map(|v| v * 0.5),
            |_| 0.0,
            move |_| [0.0, 0.0, bz],
        );
        let s = sample_fields(&f, &g).unwrap();
        assert!(s.b[2].iter().all(|v| *v == bz));
    }

    #[test]
    fn constructed_violations_are_reported() {
        let g = Grid::new([10.0; 3], [16; 3]).unwrap();
        let compressive = EMFields::custom(
            "compressive",
            |x: [f64; 3]| [(2.0 * PI * x[0] / 10.0).sin(), 0.0, 0.0],
            |_| 0.0,
            |_| [0.0; 3],
        );
        let r = validate_fields(&sample_fields(&compressive, &g).unwrap(), &g, 1e-6).unwrap();
        assert!(!r.coulomb_gauge_ok);
        assert!(r.curl_ok);

        let wrong_b = EMFields::custom("wrong-b", |_| [0.0; 3], |_| 0.0, |_| [0.0, 0.0, 1.0]);
        let r = validate_fields(&sample_fields(&wrong_b, &g).unwrap(), &g, 1e-6).unwrap();
        assert!(r.coulomb_gauge_ok);
        assert!(!r.curl_ok);
        assert!(!r.passed());
    }

    #[test]
    fn non_finite_sample_names_point() {
        let g = Grid::new([1.0; 3], [2; 3]).unwrap();
        let bad = EMFields::custom("bad", |_| [0.0; 3], |x: [f64; 3]| 1.0 / x[0], |_| [0.0; 3]);
        match sample_fields(&bad, &g) {
            Err(PauliError::Evaluation { point }) => assert_eq!(point, [0.0, 0.0, 0.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn preset_lookup() {
        assert!(EMFields::<f64>::from_preset("experiment2").is_ok());
        let err = EMFields::<f64>::from_preset("dipole").unwrap_err();
        assert!(err.to_string().contains("unknown preset"));
        assert!(EMFields::<f64>::uniform_magnetic_symmetric_gauge([0.0, 0.0, 1.0]).is_err());
        assert!(EMFields::<f64>::uniform_magnetic_symmetric_gauge([0.0; 3]).is_ok());
    }
}
