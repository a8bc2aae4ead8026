//! Toroidal symbols with values in `A_θ`.
//!
//! Closed-form symbols live in [`SymbolExpr`] (and its scalar counterpart
//! [`ScalarSymbol`]); anything that can be sampled on the lattice implements
//! [`LatticeSymbol`], anything that can be sampled on `ℝ^n` implements
//! [`SmoothSymbol`].

mod adapters;
mod expr;
pub mod term;

use std::sync::Arc;

use num_complex::Complex;

use crate::algebra::{DeformationMatrix, WeylSeries};
use crate::lattice::{self, MultiIndex, Point};
use crate::scalar::Real;

pub use adapters::{FnScalar, FnSymbol, PointwiseProduct, Restricted, Tabulated, TracePart, Translated};
pub use expr::{default_depth, ClassicalMeta, ScalarSymbol, SymbolExpr};
pub use term::{excision, smooth_step, ScalarTerm};

/// Dimension and deformation shared by `A_θ`-valued symbols.
pub trait SymbolDomain<T: Real> {
    fn dim(&self) -> usize;
    fn theta(&self) -> &Arc<DeformationMatrix<T>>;
}

/// A symbol that can be evaluated at lattice points.
pub trait LatticeSymbol<T: Real>: SymbolDomain<T> + Send + Sync {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T>;

    /// `τ(σ(k))`.
    fn eval_trace(&self, k: &[i64]) -> Complex<T> {
        self.eval_lattice(k).tau()
    }

    /// `σ_l(k)`, the coefficient of `U_l` in `σ(k)`.
    fn weyl_coeff(&self, l: &[i64], k: &[i64]) -> Complex<T> {
        self.eval_lattice(k).coeff(l)
    }

    /// Finite Weyl support, when it is known.
    fn weyl_support(&self) -> Option<Vec<Point>> {
        None
    }
}

/// A symbol that can be evaluated at real points.
pub trait SmoothSymbol<T: Real>: SymbolDomain<T> + Send + Sync {
    fn eval_real(&self, xi: &[T]) -> WeylSeries<T>;
}

/// A scalar-valued lattice symbol.
pub trait ScalarLattice<T: Real>: Send + Sync {
    fn scalar_dim(&self) -> usize;
    fn eval_scalar(&self, k: &[i64]) -> Complex<T>;
}

impl<T: Real, S: SymbolDomain<T> + ?Sized> SymbolDomain<T> for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        (**self).theta()
    }
}

impl<T: Real, S: LatticeSymbol<T> + ?Sized> LatticeSymbol<T> for &S {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        (**self).eval_lattice(k)
    }
    fn eval_trace(&self, k: &[i64]) -> Complex<T> {
        (**self).eval_trace(k)
    }
    fn weyl_coeff(&self, l: &[i64], k: &[i64]) -> Complex<T> {
        (**self).weyl_coeff(l, k)
    }
    fn weyl_support(&self) -> Option<Vec<Point>> {
        (**self).weyl_support()
    }
}

impl<T: Real, S: SmoothSymbol<T> + ?Sized> SmoothSymbol<T> for &S {
    fn eval_real(&self, xi: &[T]) -> WeylSeries<T> {
        (**self).eval_real(xi)
    }
}

impl<T: Real, S: ScalarLattice<T> + ?Sized> ScalarLattice<T> for &S {
    fn scalar_dim(&self) -> usize {
        (**self).scalar_dim()
    }
    fn eval_scalar(&self, k: &[i64]) -> Complex<T> {
        (**self).eval_scalar(k)
    }
}

/// Iterated forward difference
/// `Δ^β σ(k) = Σ_{γ≤β} (-1)^{|β-γ|} binom(β,γ) σ(k+γ)`.
pub fn fwd_diff<T: Real, S: LatticeSymbol<T> + ?Sized>(
    beta: &MultiIndex,
    sigma: &S,
    k: &[i64],
) -> WeylSeries<T> {
    let mut out = WeylSeries::zero(sigma.theta().clone());
    for gamma in beta.below() {
        let sign = if (beta.order() - gamma.order()).is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        let w = sign * T::from_f64(beta.binomial(&gamma)).unwrap_or_else(T::zero);
        let v = sigma.eval_lattice(&lattice::add(k, &gamma.as_point()));
        for (p, c) in v.coeffs() {
            out.accumulate(p.clone(), *c * w);
        }
    }
    out.prune();
    out
}

/// Scalar version of [`fwd_diff`].
pub fn fwd_diff_scalar<T: Real, S: ScalarLattice<T> + ?Sized>(
    beta: &MultiIndex,
    sigma: &S,
    k: &[i64],
) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for gamma in beta.below() {
        let sign = if (beta.order() - gamma.order()).is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        let w = sign * T::from_f64(beta.binomial(&gamma)).unwrap_or_else(T::zero);
        acc += sigma.eval_scalar(&lattice::add(k, &gamma.as_point())) * w;
    }
    acc
}

/// `T_l σ = σ(l + ·)`.
pub fn translate<S>(l: Point, sigma: S) -> Translated<S> {
    Translated::new(sigma, l)
}
