//! Scalar abstraction shared by every module.
//!
//! All numerics are generic over a real floating type `T: Real` (implemented
//! for `f32` and `f64`); complex quantities are `num_complex::Complex<T>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts an integer into `T`.
#[inline]
pub fn int<T: Real>(x: i64) -> T {
    T::from_i64(x).expect("integer representable in scalar type")
}

/// Tolerance used to decide whether two (complex) orders coincide.
#[inline]
pub fn order_tol<T: Real>() -> T {
    lit::<T>(1e-9).max(T::epsilon() * lit(100.0))
}

/// `e^{iπx}` with `x` reduced modulo 2 before exponentiation.
pub fn cis_pi<T: Real>(x: T) -> Complex<T> {
    let two = lit::<T>(2.0);
    let mut r = x - two * (x / two).floor();
    if r > T::one() {
        r -= two;
    }
    let phase = T::PI() * r;
    Complex::new(phase.cos(), phase.sin())
}

/// `r^z` for `r > 0` real and complex `z`, principal branch.
#[inline]
pub fn rpow<T: Real>(r: T, z: Complex<T>) -> Complex<T> {
    if z.im == T::zero() {
        return Complex::new(r.powf(z.re), T::zero());
    }
    let l = r.ln();
    Complex::from_polar((z.re * l).exp(), z.im * l)
}

/// Generalized binomial coefficient `binom(z, q)` for complex `z`.
pub fn binom_complex<T: Real>(z: Complex<T>, q: usize) -> Complex<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    for i in 0..q {
        acc = acc * (z - int::<T>(i as i64)) / int::<T>(i as i64 + 1);
    }
    acc
}

/// Whether `z` is (numerically) a real integer; returns it if so.
pub fn as_integer<T: Real>(z: Complex<T>) -> Option<i64> {
    let tol = order_tol::<T>();
    if z.im.abs() > tol {
        return None;
    }
    let r = z.re.round();
    if (z.re - r).abs() <= tol {
        r.to_i64()
    } else {
        None
    }
}

/// Pairwise (cascade) summation. Deterministic for a fixed input order.
pub fn pairwise_sum<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        let mut acc = Complex::new(T::zero(), T::zero());
        for x in xs {
            acc += *x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `⟨x⟩ = sqrt(|x|² + 1)`.
pub fn japanese<T: Real>(x: &[T]) -> T {
    (x.iter().fold(T::one(), |acc, &v| acc + v * v)).sqrt()
}

/// `⟨k⟩` for a lattice point.
pub fn japanese_lattice<T: Real>(k: &[i64]) -> T {
    let s: i64 = k.iter().map(|v| v * v).sum();
    (int::<T>(s) + T::one()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cis_pi_stays_on_unit_circle_for_large_arguments() {
        for x in [0.0, 1e6 + 1.0 / 3.0, -12345.5, 7.0e9 + 0.25] {
            let z = cis_pi::<f64>(x);
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
        let z = cis_pi::<f64>(1.0 / 3.0);
        assert!((z.re - 0.5).abs() < 1e-15);
        assert!((z.im - (3f64).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn binomial_series_coefficients() {
        let b = binom_complex::<f64>(Complex::new(-1.0, 0.0), 3);
        assert!((b.re + 1.0).abs() < 1e-15);
        let b = binom_complex::<f64>(Complex::new(0.5, 0.0), 2);
        assert!((b.re + 0.125).abs() < 1e-15);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(as_integer(Complex::new(-2.0f64, 0.0)), Some(-2));
        assert_eq!(as_integer(Complex::new(-2.5f64, 0.0)), None);
        assert_eq!(as_integer(Complex::new(1.0f64, 0.5)), None);
    }

    #[test]
    fn peetre_inequality_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=3);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let t: f64 = rng.gen_range(-6.0..6.0);
            let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let lhs = japanese(&xy).powf(t);
            let rhs = 2f64.sqrt().powf(t.abs()) * japanese(&x).powf(t) * japanese(&y).powf(t.abs());
            assert!(lhs <= rhs * (1.0 + 1e-12), "x={x:?} y={y:?} t={t}");
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let xs: Vec<Complex<f64>> = (0..100).map(|i| Complex::new(i as f64, -(i as f64))).collect();
        let s = pairwise_sum(&xs);
        assert_eq!(s, Complex::new(4950.0, -4950.0));
    }
}
