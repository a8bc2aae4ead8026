//! Dense least squares by Householder QR.

use num_complex::Complex;

use crate::error::{NctError, Result};
use crate::scalar::Real;

/// Solves `min ‖A x - b‖₂` for a tall real matrix given by columns.
///
/// Columns are scaled to unit norm before factorisation when `scale` is set.
/// Returns the solution and the residual vector `b - A x`.
pub fn lstsq<T: Real>(cols: &[Vec<T>], b: &[T], scale: bool) -> Result<(Vec<T>, Vec<T>)> {
    let p = cols.len();
    let m = b.len();
    if p == 0 {
        return Ok((Vec::new(), b.to_vec()));
    }
    if cols.iter().any(|c| c.len() != m) {
        return Err(NctError::FitConfig("column length differs from right-hand side".into()));
    }
    if m < p {
        return Err(NctError::FitConfig(format!("{m} equations for {p} unknowns")));
    }
    let mut factors = vec![T::one(); p];
    let mut a: Vec<Vec<T>> = cols.to_vec();
    if scale {
        for (j, c) in a.iter_mut().enumerate() {
            let nrm = c.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
            if nrm == T::zero() {
                return Err(NctError::FitConfig(format!("column {j} vanishes")));
            }
            factors[j] = nrm;
            for x in c.iter_mut() {
                *x /= nrm;
            }
        }
    }
    let mut rhs = b.to_vec();
    let mut diag = vec![T::zero(); p];
    for j in 0..p {
        let nrm = a[j][j..].iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
        if nrm == T::zero() {
            return Err(NctError::FitConfig(format!("rank deficient at column {j}")));
        }
        let alpha = if a[j][j] > T::zero() { -nrm } else { nrm };
        let mut v: Vec<T> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2 = v.iter().fold(T::zero(), |s, &x| s + x * x);
        diag[j] = alpha;
        if vnorm2 > T::zero() {
            for col in a.iter_mut().skip(j + 1) {
                let dot = v.iter().zip(&col[j..]).fold(T::zero(), |s, (&x, &y)| s + x * y);
                let f = (dot + dot) / vnorm2;
                for (x, &vi) in col[j..].iter_mut().zip(&v) {
                    *x -= f * vi;
                }
            }
            let dot = v.iter().zip(&rhs[j..]).fold(T::zero(), |s, (&x, &y)| s + x * y);
            let f = (dot + dot) / vnorm2;
            for (x, &vi) in rhs[j..].iter_mut().zip(&v) {
                *x -= f * vi;
            }
        }
    }
    let dmax = diag.iter().fold(T::zero(), |s, &x| s.max(x.abs()));
    let mut x = vec![T::zero(); p];
    for j in (0..p).rev() {
        if diag[j].abs() <= dmax * T::epsilon() * T::from_usize(m).unwrap_or_else(T::one) {
            return Err(NctError::FitConfig(format!("rank deficient at column {j}")));
        }
        let mut s = rhs[j];
        for (i, xi) in x.iter().enumerate().skip(j + 1) {
            s -= a[i][j] * *xi;
        }
        x[j] = s / diag[j];
    }
    for (xi, f) in x.iter_mut().zip(&factors) {
        *xi /= *f;
    }
    let residual = (0..m)
        .map(|i| b[i] - cols.iter().zip(&x).fold(T::zero(), |s, (c, &xj)| s + c[i] * xj))
        .collect();
    Ok((x, residual))
}

/// Complex least squares through the real form `[[Re A, -Im A], [Im A, Re A]]`.
pub fn lstsq_complex<T: Real>(
    cols: &[Vec<Complex<T>>],
    b: &[Complex<T>],
    scale: bool,
) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    let p = cols.len();
    let mut rcols = Vec::with_capacity(2 * p);
    for c in cols {
        rcols.push(c.iter().map(|z| z.re).chain(c.iter().map(|z| z.im)).collect::<Vec<T>>());
    }
    for c in cols {
        rcols.push(c.iter().map(|z| -z.im).chain(c.iter().map(|z| z.re)).collect::<Vec<T>>());
    }
    let rb: Vec<T> = b.iter().map(|z| z.re).chain(b.iter().map(|z| z.im)).collect();
    let (x, _) = lstsq(&rcols, &rb, scale)?;
    let coef: Vec<Complex<T>> = (0..p).map(|j| Complex::new(x[j], x[p + j])).collect();
    let residual = (0..b.len())
        .map(|i| {
            b[i] - cols
                .iter()
                .zip(&coef)
                .fold(Complex::new(T::zero(), T::zero()), |s, (c, &z)| s + c[i] * z)
        })
        .collect();
    Ok((coef, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_polynomial() {
        let xs: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let cols = vec![vec![1.0; 20], xs.clone(), xs.iter().map(|x| x * x).collect()];
        let b: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 0.5 * x * x).collect();
        let (c, r) = lstsq(&cols, &b, true).unwrap();
        assert!((c[0] - 3.0).abs() < 1e-10 && (c[1] + 2.0).abs() < 1e-11 && (c[2] - 0.5).abs() < 1e-12);
        assert!(r.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn complex_exponent_fit() {
        let e = Complex::new(-0.5, 2.0);
        let ns: Vec<f64> = (20..=60).map(|n| n as f64).collect();
        let one = vec![Complex::new(1.0, 0.0); ns.len()];
        let pw: Vec<Complex<f64>> = ns.iter().map(|&n| crate::scalar::rpow(n, e)).collect();
        let b: Vec<Complex<f64>> = pw.iter().map(|z| Complex::new(1.0, -1.0) + z * Complex::new(0.0, 2.0)).collect();
        let (c, _) = lstsq_complex(&[one, pw], &b, true).unwrap();
        assert!((c[0] - Complex::new(1.0, -1.0)).norm() < 1e-11);
        assert!((c[1] - Complex::new(0.0, 2.0)).norm() < 1e-11);
    }

    #[test]
    fn rank_deficiency_detected() {
        let cols = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        assert!(lstsq(&cols, &[1.0, 1.0, 1.0], true).is_err());
    }
}
