use num_complex::Complex;
use rayon::prelude::*;

use super::{FinitePartReport, FitConfig, Polytope, PowerCoefficient, SumSample};
use crate::error::{NctError, Result};
use crate::json::Cplx;
use crate::linalg::lstsq_complex;
use crate::scalar::{as_integer, int, lit, pairwise_sum, rpow, Real};
use crate::symbol::ScalarLattice;

/// `S(N) = Σ_{NΔ∩ℤ^n} σ(k)` for `N = 0..=n_max`, shell by shell.
pub fn partial_sums<T: Real, S: ScalarLattice<T>>(sigma: &S, polytope: Polytope, n_max: i64) -> Vec<Complex<T>> {
    sums_with_magnitude(sigma, polytope, n_max).0
}

/// Partial sums together with the partial sums of `|σ(k)|`.
fn sums_with_magnitude<T: Real, S: ScalarLattice<T>>(
    sigma: &S,
    polytope: Polytope,
    n_max: i64,
) -> (Vec<Complex<T>>, Vec<T>) {
    let n = sigma.scalar_dim();
    let shells: Vec<(Complex<T>, T)> = (0..=n_max.max(0))
        .into_par_iter()
        .map(|r| {
            let vals: Vec<Complex<T>> = polytope.shell(n, r).iter().map(|k| sigma.eval_scalar(k)).collect();
            let mags: Vec<Complex<T>> = vals.iter().map(|z| Complex::new(z.norm(), T::zero())).collect();
            (pairwise_sum(&vals), pairwise_sum(&mags).re)
        })
        .collect();
    let values: Vec<Complex<T>> = shells.iter().map(|s| s.0).collect();
    let mags: Vec<Complex<T>> = shells.iter().map(|s| Complex::new(s.1, T::zero())).collect();
    (
        (0..values.len()).map(|i| pairwise_sum(&values[..=i])).collect(),
        (0..mags.len()).map(|i| pairwise_sum(&mags[..=i]).re).collect(),
    )
}

enum Column<T> {
    Constant,
    Power(Complex<T>),
    Log,
}

fn basis<T: Real>(order: Complex<T>, n: usize, cfg: &FitConfig) -> Result<Vec<Column<T>>> {
    let nn = int::<T>(n as i64);
    let integral = matches!(as_integer(order), Some(m) if m >= -(n as i64));
    let log = match cfg.include_log {
        None => integral,
        Some(true) if !integral => {
            return Err(NctError::FitConfig(
                "a log column is only used at integer orders m ≥ −n".into(),
            ))
        }
        Some(false) if integral => {
            return Err(NctError::FitConfig(
                "integer order m ≥ −n requires include_log".into(),
            ))
        }
        Some(b) => b,
    };
    let floor = lit::<T>(cfg.exponent_floor).max(order.re + nn - lit::<T>(cfg.exponent_span));
    let tol = lit::<T>(1e-9);
    let mut cols = vec![Column::Constant];
    let mut exps: Vec<Complex<T>> = Vec::new();
    let mut j = 0i64;
    loop {
        let e = order + nn - int::<T>(j);
        if e.re <= floor {
            break;
        }
        if e.norm() > tol {
            if exps.iter().any(|f| (*f - e).norm() <= tol) {
                return Err(NctError::FitConfig("repeated exponent in fit basis".into()));
            }
            exps.push(e);
            cols.push(Column::Power(e));
        }
        j += 1;
    }
    if log {
        cols.push(Column::Log);
    }
    Ok(cols)
}

fn design<T: Real>(cols: &[Column<T>], window: &[i64]) -> Vec<Vec<Complex<T>>> {
    cols.iter()
        .map(|c| {
            window
                .iter()
                .map(|&m| {
                    let x = int::<T>(m);
                    match c {
                        Column::Constant => Complex::new(T::one(), T::zero()),
                        Column::Power(e) => rpow(x, *e),
                        Column::Log => Complex::new(x.ln(), T::zero()),
                    }
                })
                .collect()
        })
        .collect()
}

struct Fit<T> {
    cols: Vec<Column<T>>,
    coef: Vec<Complex<T>>,
    resid: Vec<Complex<T>>,
    error: T,
}

/// Least-squares fit with an error scale for the constant term: the worst-case
/// response to perturbations of size `ε·Σ|σ|`, plus the size of the two
/// smallest fitted powers at `N_min` (or the residual when larger).
fn fit<T: Real>(cols: Vec<Column<T>>, window: &[i64], b: &[Complex<T>], mags: &[T], scale: bool) -> Result<Fit<T>> {
    let a = design(&cols, window);
    let (coef, resid) = lstsq_complex(&a, b, scale)?;
    // Worst case over perturbations |η_i| ≤ 4ε·Σ_{N_i}|σ|: 4ε Σ_i |w_i| A_i with
    // w the row of the pseudo-inverse that yields c_0.
    let eps = T::epsilon() * lit::<T>(4.0);
    let mut noise = T::zero();
    let mut unit = vec![Complex::new(T::zero(), T::zero()); b.len()];
    for (i, &m) in mags.iter().enumerate() {
        unit[i] = Complex::new(T::one(), T::zero());
        let (w, _) = lstsq_complex(&a, &unit, scale)?;
        unit[i] = Complex::new(T::zero(), T::zero());
        noise += eps * m * w[0].norm();
    }
    let x0 = int::<T>(window[0]);
    let mut tail: Vec<T> = cols
        .iter()
        .zip(&coef)
        .filter_map(|(c, z)| match c {
            Column::Power(e) if e.re < T::zero() => Some((*z * rpow(x0, *e)).norm()),
            _ => None,
        })
        .collect();
    let tail_len = tail.len();
    let truncation = tail
        .drain(tail_len.saturating_sub(2)..)
        .fold(T::zero(), |m, t| m.max(t));
    let misfit = resid.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let error = noise + truncation.max(misfit);
    Ok(Fit { cols, coef, resid, error })
}

/// Cut-off discrete sum `f.p._{N→∞} Σ_{NΔ∩ℤ^n} σ(k)`.
///
/// The partial sums on the window `[n_min, n_max]` are fitted by least
/// squares to `c_0 + Σ_j c_j N^{m+n−j} (+ c_L log N)`. The fit is also used for
/// `Re m < −n`, where it extrapolates the convergent sum; the plain partial
/// sum at `n_max` is reported alongside.
pub fn cutoff_sum<T: Real, S: ScalarLattice<T>>(
    sigma: &S,
    order: Complex<T>,
    polytope: Polytope,
    cfg: &FitConfig,
) -> Result<FinitePartReport> {
    let n = sigma.scalar_dim();
    if cfg.n_min < 1 || cfg.n_max <= cfg.n_min {
        return Err(NctError::FitConfig(format!(
            "fit window [{}, {}] must satisfy 1 ≤ N_min < N_max",
            cfg.n_min, cfg.n_max
        )));
    }
    let full = basis(order, n, cfg)?;
    let samples = (cfg.n_max - cfg.n_min + 1) as usize;
    if samples < full.len() + 3 {
        return Err(NctError::FitConfig(format!(
            "{samples} samples for {} basis functions; need at least 3 more samples",
            full.len()
        )));
    }
    let (sums, mags) = sums_with_magnitude(sigma, polytope, cfg.n_max);
    let window: Vec<i64> = (cfg.n_min..=cfg.n_max).collect();
    let b: Vec<Complex<T>> = window.iter().map(|&m| sums[m as usize]).collect();
    let m: Vec<T> = window.iter().map(|&w| mags[w as usize]).collect();
    let Fit { cols, coef, resid, error } = fit(full, &window, &b, &m, cfg.scale_columns)?;
    let smax = b.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let rmax = resid.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let residual = if smax > T::zero() {
        (rmax / smax).to_f64().unwrap_or(f64::NAN)
    } else {
        0.0
    };
    let mut value = Complex::new(T::zero(), T::zero());
    let mut log = Complex::new(T::zero(), T::zero());
    let mut powers = Vec::new();
    let mut fitted = Vec::new();
    for (c, x) in cols.iter().zip(&coef) {
        match c {
            Column::Constant => value = *x,
            Column::Log => log = *x,
            Column::Power(e) => {
                fitted.push((*e).into());
                if e.re >= T::zero() {
                    powers.push(PowerCoefficient {
                        exponent: (*e).into(),
                        coefficient: (*x).into(),
                    });
                }
            }
        }
    }
    Ok(FinitePartReport {
        kind: "cutoff_sum".into(),
        dim: n,
        order: order.into(),
        value: value.into(),
        power_coefficients: powers,
        log_coefficient: Cplx::from(log),
        residual,
        converged: residual <= cfg.residual_tol,
        polytope: Some(polytope),
        window: Some([cfg.n_min, cfg.n_max]),
        direct_sum: Some(sums[cfg.n_max as usize].into()),
        error_estimate: error.to_f64(),
        fitted_exponents: fitted,
        samples: window
            .iter()
            .zip(&b)
            .map(|(&m, z)| SumSample {
                n: m,
                re: z.re.to_f64().unwrap_or(f64::NAN),
                im: z.im.to_f64().unwrap_or(f64::NAN),
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::FnScalar;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn constant_symbol_exact_ladder() {
        let one = FnScalar::new(1, |_k: &[i64]| c(1.0));
        let r = cutoff_sum(&one, c(0.0), Polytope::Cube, &FitConfig::default()).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-8, "{}", r.value.re);
        assert!((r.power_coefficient(c(1.0)).unwrap().re - 2.0).abs() < 1e-8);
        assert!(r.residual < 1e-10);
        assert!(r.converged);
        let cfg = FitConfig {
            include_log: Some(false),
            ..FitConfig::default()
        };
        assert!(matches!(cutoff_sum(&one, c(0.0), Polytope::Cube, &cfg), Err(NctError::FitConfig(_))));
    }

    #[test]
    fn window_validation() {
        let one = FnScalar::new(1, |_k: &[i64]| c(1.0));
        let cfg = FitConfig::default().window(20, 25);
        assert!(matches!(cutoff_sum(&one, c(0.5), Polytope::Cube, &cfg), Err(NctError::FitConfig(_))));
        let cfg = FitConfig::default().window(0, 25);
        assert!(cutoff_sum(&one, c(0.5), Polytope::Cube, &cfg).is_err());
    }

    #[test]
    fn partial_sums_count_points() {
        let one = FnScalar::new(3, |_k: &[i64]| c(1.0));
        let cube = partial_sums(&one, Polytope::Cube, 4);
        let cross = partial_sums(&one, Polytope::Cross, 4);
        for n in 0..=4i64 {
            assert_eq!(cube[n as usize].re, ((2 * n + 1) as f64).powi(3));
            // |k|_1 ≤ N in ℤ³: (2N+1)(2N²+2N+3)/3
            assert_eq!(cross[n as usize].re, ((2 * n + 1) * (2 * n * n + 2 * n + 3) / 3) as f64);
        }
    }
}
