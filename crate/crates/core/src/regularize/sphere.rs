use num_complex::Complex;

use crate::error::{NctError, Result};
use crate::lattice::MultiIndex;
use crate::quadrature::gauss_legendre;
use crate::scalar::{int, lit, Real};
use crate::symbol::ScalarTerm;

/// `ln Γ(t/2)` for a positive integer `t`, by the recursion from `Γ(1/2)` or `Γ(1)`.
fn ln_gamma_half(t: u32) -> f64 {
    let mut x = if t.is_multiple_of(2) { 1.0 } else { 0.5 };
    let mut acc = if t.is_multiple_of(2) {
        0.0
    } else {
        0.5 * std::f64::consts::PI.ln()
    };
    while 2.0 * x < t as f64 {
        acc += x.ln();
        x += 1.0;
    }
    acc
}

/// `∫_{S^{n−1}} ω^α dS`. For `n = 1` the sphere is `{±1}` with counting measure.
pub fn sphere_monomial_integral<T: Real>(alpha: &MultiIndex) -> T {
    if alpha.0.iter().any(|a| a % 2 == 1) {
        return T::zero();
    }
    let num: f64 = alpha.0.iter().map(|&a| ln_gamma_half(a + 1)).sum();
    let den = ln_gamma_half(alpha.0.iter().map(|&a| a + 1).sum());
    lit(2.0 * (num - den).exp())
}

/// `∫_{S^{n−1}}` of a finite sum of terms, each restricted to the unit sphere.
pub fn sphere_integral_terms<T: Real>(terms: &[ScalarTerm<T>]) -> Complex<T> {
    terms
        .iter()
        .map(|t| {
            // ⟨ω⟩^{mb} = 2^{mb/2} on |ω| = 1, while |ω|^s = χ(ω) = 1.
            let b = crate::scalar::rpow(lit::<T>(2.0), t.mb() / lit::<T>(2.0));
            t.coeff() * b * sphere_monomial_integral::<T>(t.alpha())
        })
        .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
}

/// Outcome of an adaptive quadrature on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereQuadrature<T> {
    pub value: Complex<T>,
    pub converged: bool,
    /// Nodes used by the last rule.
    pub nodes: usize,
}

const MAX_LEVEL: u32 = 14;

fn circle_rule<T: Real, F: Fn(&[T]) -> Complex<T>>(h: &F, m: usize) -> (Complex<T>, T) {
    let step = lit::<T>(2.0) * T::PI() / int::<T>(m as i64);
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut mass = T::zero();
    for i in 0..m {
        let phi = step * int::<T>(i as i64);
        let v = h(&[phi.cos(), phi.sin()]);
        acc += v;
        mass += v.norm();
    }
    (acc * step, mass * step)
}

fn sphere2_rule<T: Real, F: Fn(&[T]) -> Complex<T>>(h: &F, m: usize) -> (Complex<T>, T) {
    let (z, w) = gauss_legendre(m / 2);
    let step = lit::<T>(2.0) * T::PI() / int::<T>(m as i64);
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut mass = T::zero();
    for (zi, wi) in z.iter().zip(&w) {
        let zt = lit::<T>(*zi);
        let rho = (T::one() - zt * zt).max(T::zero()).sqrt();
        let wt = lit::<T>(*wi) * step;
        for i in 0..m {
            let phi = step * int::<T>(i as i64);
            let v = h(&[rho * phi.cos(), rho * phi.sin(), zt]);
            acc += v * wt;
            mass += v.norm() * wt;
        }
    }
    (acc, mass)
}

/// `∫_{S^{n−1}} h dS` for `n ≤ 3`: trapezoid rule on the circle, Gauss–Legendre
/// in `z` times trapezoid in the azimuth on `S²`. The node count doubles until
/// the change is below `rtol·∫|h|`.
pub fn sphere_integral<T: Real, F: Fn(&[T]) -> Complex<T>>(n: usize, h: F, rtol: T) -> Result<SphereQuadrature<T>> {
    match n {
        1 => Ok(SphereQuadrature {
            value: h(&[T::one()]) + h(&[-T::one()]),
            converged: true,
            nodes: 2,
        }),
        2 | 3 => {
            let rule = |m: usize| if n == 2 { circle_rule(&h, m) } else { sphere2_rule(&h, m) };
            let mut m = 8usize;
            let (mut prev, _) = rule(m);
            for _ in 0..MAX_LEVEL {
                m *= 2;
                let (cur, mass) = rule(m);
                if (cur - prev).norm() <= rtol * mass.max(T::min_positive_value()) {
                    return Ok(SphereQuadrature {
                        value: cur,
                        converged: true,
                        nodes: if n == 2 { m } else { m * m / 2 },
                    });
                }
                prev = cur;
            }
            Ok(SphereQuadrature {
                value: prev,
                converged: false,
                nodes: if n == 2 { m } else { m * m / 2 },
            })
        }
        _ => Err(NctError::Unsupported(format!(
            "sphere quadrature is available for n ≤ 3, got n = {n}"
        ))),
    }
}
