use num_complex::Complex;

use crate::error::{NctError, Result};
use crate::scalar::{int, lit, order_tol, rpow, Real};

const CUT: i64 = 50;
/// `B_{2j}/(2j)!` for `j = 1..=4`.
const BERNOULLI_OVER_FACTORIAL: [f64; 4] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];

/// Riemann zeta by Euler–Maclaurin summation with cut `M = 50`:
/// `Σ_{k<M} k^{−s} + M^{−s}/2 + M^{1−s}/(s−1) + Σ_{j≤4} B_{2j}/(2j)!·s(s+1)⋯(s+2j−2)·M^{−s−2j+1}`.
pub fn zeta_em<T: Real>(s: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    if (s - one).norm() <= order_tol::<T>() {
        return Err(NctError::InvalidTerm("zeta has a pole at s = 1".into()));
    }
    let m = int::<T>(CUT);
    let head: Vec<Complex<T>> = (1..CUT).map(|k| rpow(int::<T>(k), -s)).collect();
    let mut acc = crate::scalar::pairwise_sum(&head);
    acc += rpow(m, -s) / lit::<T>(2.0);
    acc += rpow(m, one - s) / (s - one);
    // rising factorial s(s+1)…(s+2j−2), times M^{−s−2j+1}
    let mut rising = s;
    let mut pw = rpow(m, -s - one);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        acc += rising * pw * lit::<T>(*b);
        let a = int::<T>(2 * j as i64 + 1);
        rising = rising * (s + a) * (s + a + T::one());
        pw /= m * m ;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn z(x: f64) -> f64 {
        zeta_em(Complex::new(x, 0.0)).unwrap().re
    }

    #[test]
    fn known_values() {
        assert!((z(2.0) - PI * PI / 6.0).abs() < 1e-12);
        assert!((z(4.0) - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((z(-1.0) + 1.0 / 12.0).abs() < 1e-12);
        assert!((z(0.0) + 0.5).abs() < 1e-12);
        assert!((z(0.5) + 1.460_354_508_809_586_8).abs() < 1e-12);
        assert!(zeta_em(Complex::new(1.0, 0.0)).is_err());
    }
}
