use nalgebra::{ComplexField, DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::Float;

use crate::scalar::Real;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn norm1<T: Real + RealField>(a: &DMatrix<Complex<T>>) -> T {
    a.column_iter()
        .map(|c| c.iter().fold(T::zero(), |s, z| s + z.norm()))
        .fold(T::zero(), Float::max)
}

/// Matrix exponential by degree-13 Pade approximation with scaling and
/// squaring.
pub fn dense_expm<T: Real + RealField>(a: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    assert!(a.is_square(), "matrix exponential of a non-square matrix");
    let n = a.nrows();
    let nrm = norm1(a).to_f64_lossy();
    let s = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scale = Complex::new(T::lit(0.5f64.powi(s)), T::zero());
    let a = a * scale;
    let b = |k: usize| Complex::new(T::lit(PADE13[k]), T::zero());
    let id = DMatrix::<Complex<T>>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);
    let p = &v + &u;
    let q = v - u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Pade denominator is nonsingular after scaling");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// `exp(t G) v` by a truncated Taylor series on substeps with `||h G||_1 <= 1`.
pub(crate) fn expm_action<T: Real + RealField>(
    g: &DMatrix<Complex<T>>,
    v: &DVector<Complex<T>>,
    t: T,
) -> DVector<Complex<T>> {
    if t == T::zero() {
        return v.clone();
    }
    let nrm = (norm1(g) * Float::abs(t)).to_f64_lossy();
    let substeps = nrm.ceil().max(1.0) as usize;
    let h = t / T::from_usize_lossy(substeps);
    let tiny = <T as Float>::epsilon() * T::lit(0.1);
    let mut out = v.clone();
    for _ in 0..substeps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=80 {
            let c = Complex::new(h / T::from_usize_lossy(k), T::zero());
            term = (g * term) * c;
            acc += &term;
            if ComplexField::real(term.norm()) <= tiny * ComplexField::real(acc.norm()) {
                break;
            }
        }
        out = acc;
    }
    out
}
