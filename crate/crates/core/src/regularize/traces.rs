use std::borrow::Borrow;

use num_complex::Complex;
use serde::Serialize;

use super::csum::cutoff_sum;
use super::sphere::{sphere_integral, sphere_integral_terms, sphere_monomial_integral, SphereQuadrature};
use super::{FinitePartReport, FitConfig, Polytope};
use crate::error::{NctError, Result};
use crate::json::Cplx;
use crate::lattice::MultiIndex;
use crate::quantise::{Dequantised, Operator, Quantised};
use crate::scalar::{as_integer, int, lit, order_tol, Real};
use crate::symbol::{ScalarLattice, ScalarSymbol, SymbolDomain, SymbolExpr, TracePart};

/// Degree `−n` component of a scalar symbol, or `None` when there is none.
fn residue_component<T: Real>(s: &ScalarSymbol<T>) -> Result<Option<ScalarSymbol<T>>> {
    let nn = int::<T>(s.dim() as i64);
    if s.order().re < -nn - order_tol::<T>() {
        return Ok(None);
    }
    match as_integer(s.order() + nn) {
        Some(j) if j >= 0 => Ok(Some(s.homog_component(j as usize)?)),
        _ => Ok(None),
    }
}

/// `res_θ(σ) = ∫_{S^{n−1}} (τ̄σ)_{[−n]} dS`, integrated analytically term by term.
pub fn res_theta<T: Real>(sigma: &SymbolExpr<T>) -> Result<Complex<T>> {
    Ok(match residue_component(&sigma.bar_tau())? {
        Some(c) => sphere_integral_terms(c.terms()),
        None => Complex::new(T::zero(), T::zero()),
    })
}

/// [`res_theta`] by adaptive quadrature on the sphere (`n ≤ 3`).
pub fn res_theta_quadrature<T: Real>(sigma: &SymbolExpr<T>, rtol: T) -> Result<SphereQuadrature<T>> {
    let n = sigma.dim();
    match residue_component(&sigma.bar_tau())? {
        Some(c) => sphere_integral(n, |w: &[T]| c.eval_real(w), rtol),
        None => Ok(SphereQuadrature {
            value: Complex::new(T::zero(), T::zero()),
            converged: true,
            nodes: 0,
        }),
    }
}

/// `Res_θ(Op_θ σ) = res_θ(σ)`.
pub fn res_theta_op<T: Real, S: Borrow<SymbolExpr<T>>>(op: &Quantised<S>) -> Result<Complex<T>> {
    res_theta(op.0.borrow())
}

/// Settings for the canonical discrete sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalConfig {
    pub fit: FitConfig,
    /// Cube and cross-polytope values further apart than `2·tol` are flagged.
    pub tol: f64,
}

impl Default for CanonicalConfig {
    fn default() -> Self {
        CanonicalConfig {
            fit: FitConfig::default(),
            tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalReport {
    /// The cube value.
    pub value: Cplx,
    pub cube: FinitePartReport,
    pub cross: FinitePartReport,
    pub disagreement: f64,
    pub flagged: bool,
}

impl CanonicalReport {
    pub fn value<T: Real>(&self) -> Complex<T> {
        self.value.to_complex()
    }

    pub fn converged(&self) -> bool {
        self.cube.converged && self.cross.converged && !self.flagged
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Canonical discrete sum `−Σ σ` of a scalar lattice symbol of order
/// `m ∉ ℤ ∩ [−n, ∞)`, on both the cube and the cross-polytope.
pub fn canonical_sum<T: Real, S: ScalarLattice<T>>(
    sigma: &S,
    order: Complex<T>,
    cfg: &CanonicalConfig,
) -> Result<CanonicalReport> {
    let n = sigma.scalar_dim();
    if let Some(m) = as_integer(order) {
        if m >= -(n as i64) {
            return Err(NctError::IntegerOrder { order: m, dim: n });
        }
    }
    let fit = FitConfig {
        include_log: Some(false),
        ..cfg.fit.clone()
    };
    let cube = cutoff_sum(sigma, order, Polytope::Cube, &fit)?;
    let cross = cutoff_sum(sigma, order, Polytope::Cross, &fit)?;
    let a: Complex<f64> = cube.value();
    let b: Complex<f64> = cross.value();
    let disagreement = (a - b).norm();
    Ok(CanonicalReport {
        value: cube.value,
        flagged: !(disagreement <= 2.0 * cfg.tol),
        cube,
        cross,
        disagreement,
    })
}

/// `−Σ_θ σ = −Σ τ̄σ`.
pub fn canonical_sum_theta<T: Real>(sigma: &SymbolExpr<T>, cfg: &CanonicalConfig) -> Result<CanonicalReport> {
    canonical_sum(&TracePart(sigma), sigma.order(), cfg)
}

/// `TR_θ(A) = −Σ_θ(Op_θ^{−1} A)` for an operator of order `order`.
pub fn tr_theta<T: Real, O: Operator<T>>(op: &O, order: Complex<T>, cfg: &CanonicalConfig) -> Result<CanonicalReport> {
    canonical_sum(&TracePart(Dequantised(op)), order, cfg)
}

/// A linear functional on homogeneous scalar symbols of fixed degree.
pub trait LeadingFunctional<T: Real> {
    fn apply(&self, component: &ScalarSymbol<T>) -> Result<Complex<T>>;
}

/// Built-in leading-symbol functionals.
#[derive(Debug, Clone, PartialEq)]
pub enum LeadingKind {
    /// Mean over `S^{n−1}`.
    SphereAverage,
    /// Value at `ω0/|ω0|`.
    PointEval(Vec<f64>),
}

impl<T: Real> LeadingFunctional<T> for LeadingKind {
    fn apply(&self, component: &ScalarSymbol<T>) -> Result<Complex<T>> {
        let n = component.dim();
        match self {
            LeadingKind::SphereAverage => {
                let area = sphere_monomial_integral::<T>(&MultiIndex::zero(n));
                Ok(sphere_integral_terms(component.terms()) / area)
            }
            LeadingKind::PointEval(w) => {
                if w.len() != n {
                    return Err(NctError::DimensionMismatch {
                        expected: n,
                        found: w.len(),
                    });
                }
                let r = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                if !(r > 0.0) || !r.is_finite() {
                    return Err(NctError::InvalidTerm("evaluation direction must be non-zero".into()));
                }
                let omega: Vec<T> = w.iter().map(|x| lit(x / r)).collect();
                Ok(component.eval_real(&omega))
            }
        }
    }
}

/// `L((τ̄σ)_{[m]})` for a symbol of declared order `m`.
pub fn leading_trace<T: Real, L: LeadingFunctional<T> + ?Sized>(
    sigma: &SymbolExpr<T>,
    order: Complex<T>,
    functional: &L,
) -> Result<Complex<T>> {
    if (sigma.order() - order).norm() > order_tol::<T>() {
        return Err(NctError::NotExactOrder(format!(
            "declared order {} differs from the requested order {}",
            sigma.order(),
            order
        )));
    }
    functional.apply(&sigma.bar_tau().homog_component(0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DeformationMatrix;
    use crate::symbol::ScalarTerm;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    fn bracket_symbol(th: f64, mb: f64, extra: &[(Vec<i64>, f64)]) -> SymbolExpr<f64> {
        let th = Arc::new(DeformationMatrix::two_dim(th));
        let mut parts = vec![(vec![0, 0], vec![ScalarTerm::bracket(2, c(1.0), c(mb))])];
        for (l, w) in extra {
            parts.push((l.clone(), vec![ScalarTerm::bracket(2, c(*w), c(mb))]));
        }
        SymbolExpr::from_parts(th, c(mb), parts).unwrap()
    }

    #[test]
    fn residue_fixtures() {
        let s = bracket_symbol(0.3, -2.0, &[]);
        assert!((res_theta(&s).unwrap() - c(2.0 * PI)).norm() < 1e-12);
        let q = res_theta_quadrature(&s, 1e-12).unwrap();
        assert!(q.converged && (q.value - c(2.0 * PI)).norm() < 1e-10);
        let s = bracket_symbol(0.3, -2.0, &[(vec![1, 0], 5.0)]);
        assert!((res_theta(&s).unwrap() - c(2.0 * PI)).norm() < 1e-12);
        assert_eq!(res_theta(&bracket_symbol(0.3, -4.0, &[])).unwrap(), c(0.0));
        assert_eq!(res_theta(&bracket_symbol(0.3, -10.0, &[])).unwrap(), c(0.0));
        let s = bracket_symbol(0.3, -2.0, &[(vec![1, 2], 1.0)]);
        assert_eq!(res_theta(&s.bar_delta(&MultiIndex(vec![1, 0]))).unwrap(), c(0.0));
    }

    #[test]
    fn canonical_sum_refuses_integer_orders() {
        let s = bracket_symbol(0.3, -1.0, &[]);
        assert!(matches!(
            canonical_sum_theta(&s, &CanonicalConfig::default()),
            Err(NctError::IntegerOrder { order: -1, dim: 2 })
        ));
    }

    #[test]
    fn leading_trace_fixtures() {
        let s = bracket_symbol(0.2, 1.5, &[(vec![0, 1], 2.0)]);
        let avg = leading_trace(&s, c(1.5), &LeadingKind::SphereAverage).unwrap();
        assert!((avg - c(1.0)).norm() < 1e-14);
        let pt = leading_trace(&s, c(1.5), &LeadingKind::PointEval(vec![3.0, 4.0])).unwrap();
        assert!((pt - c(1.0)).norm() < 1e-14);
        assert!(matches!(
            leading_trace(&s, c(0.5), &LeadingKind::SphereAverage),
            Err(NctError::NotExactOrder(_))
        ));
    }
}
