use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex;

use super::{LatticeSymbol, ScalarLattice, SmoothSymbol, SymbolDomain};
use crate::algebra::{DeformationMatrix, WeylSeries};
use crate::error::{NctError, Result};
use crate::lattice::{self, Point};
use crate::scalar::{int, Real};

/// Lattice symbol given by a finite table, zero elsewhere.
#[derive(Debug, Clone)]
pub struct Tabulated<T> {
    theta: Arc<DeformationMatrix<T>>,
    values: BTreeMap<Point, WeylSeries<T>>,
}

impl<T: Real> Tabulated<T> {
    pub fn new(theta: Arc<DeformationMatrix<T>>) -> Self {
        Tabulated {
            theta,
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, k: Point, v: WeylSeries<T>) -> Result<()> {
        if k.len() != self.theta.dim() || v.dim() != self.theta.dim() {
            return Err(NctError::DimensionMismatch {
                expected: self.theta.dim(),
                found: k.len().max(v.dim()),
            });
        }
        if !v.same_algebra(&WeylSeries::zero(self.theta.clone())) {
            return Err(NctError::ThetaMismatch);
        }
        self.values.insert(k, v);
        Ok(())
    }

    /// Kronecker delta at 0 with value `U_0`.
    pub fn kronecker(theta: Arc<DeformationMatrix<T>>) -> Self {
        let n = theta.dim();
        let mut t = Self::new(theta.clone());
        t.values.insert(lattice::zero(n), WeylSeries::one(theta));
        t
    }

    pub fn values(&self) -> &BTreeMap<Point, WeylSeries<T>> {
        &self.values
    }
}

impl<T: Real> SymbolDomain<T> for Tabulated<T> {
    fn dim(&self) -> usize {
        self.theta.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        &self.theta
    }
}

impl<T: Real> LatticeSymbol<T> for Tabulated<T> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        self.values
            .get(k)
            .cloned()
            .unwrap_or_else(|| WeylSeries::zero(self.theta.clone()))
    }

    fn weyl_support(&self) -> Option<Vec<Point>> {
        let set: BTreeSet<Point> = self
            .values
            .values()
            .flat_map(|v| v.support().cloned())
            .collect();
        Some(set.into_iter().collect())
    }
}

/// Lattice symbol given by a closure.
pub struct FnSymbol<T, F> {
    theta: Arc<DeformationMatrix<T>>,
    f: F,
    support: Option<Vec<Point>>,
}

impl<T: Real, F: Fn(&[i64]) -> WeylSeries<T> + Send + Sync> FnSymbol<T, F> {
    pub fn new(theta: Arc<DeformationMatrix<T>>, f: F) -> Self {
        FnSymbol {
            theta,
            f,
            support: None,
        }
    }

    /// Declares the Weyl support; `f` must respect it.
    pub fn with_support(mut self, support: Vec<Point>) -> Self {
        self.support = Some(support);
        self
    }
}

impl<T: Real, F: Send + Sync> SymbolDomain<T> for FnSymbol<T, F> {
    fn dim(&self) -> usize {
        self.theta.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        &self.theta
    }
}

impl<T: Real, F: Fn(&[i64]) -> WeylSeries<T> + Send + Sync> LatticeSymbol<T> for FnSymbol<T, F> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        (self.f)(k)
    }
    fn weyl_support(&self) -> Option<Vec<Point>> {
        self.support.clone()
    }
}

/// `T_l σ = σ(l + ·)`.
#[derive(Debug, Clone)]
pub struct Translated<S> {
    inner: S,
    shift: Point,
}

impl<S> Translated<S> {
    pub fn new(inner: S, shift: Point) -> Self {
        Translated { inner, shift }
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }
}

impl<T: Real, S: SymbolDomain<T>> SymbolDomain<T> for Translated<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.inner.theta()
    }
}

impl<T: Real, S: LatticeSymbol<T>> LatticeSymbol<T> for Translated<S> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        self.inner.eval_lattice(&lattice::add(k, &self.shift))
    }
    fn eval_trace(&self, k: &[i64]) -> Complex<T> {
        self.inner.eval_trace(&lattice::add(k, &self.shift))
    }
    fn weyl_coeff(&self, l: &[i64], k: &[i64]) -> Complex<T> {
        self.inner.weyl_coeff(l, &lattice::add(k, &self.shift))
    }
    fn weyl_support(&self) -> Option<Vec<Point>> {
        self.inner.weyl_support()
    }
}

impl<T: Real, S: SmoothSymbol<T>> SmoothSymbol<T> for Translated<S> {
    fn eval_real(&self, xi: &[T]) -> WeylSeries<T> {
        let x: Vec<T> = xi
            .iter()
            .zip(&self.shift)
            .map(|(&a, &b)| a + int::<T>(b))
            .collect();
        self.inner.eval_real(&x)
    }
}

impl<T: Real, S: ScalarLattice<T>> ScalarLattice<T> for Translated<S> {
    fn scalar_dim(&self) -> usize {
        self.inner.scalar_dim()
    }
    fn eval_scalar(&self, k: &[i64]) -> Complex<T> {
        self.inner.eval_scalar(&lattice::add(k, &self.shift))
    }
}

/// `τ̄σ` of an arbitrary lattice symbol.
#[derive(Debug, Clone)]
pub struct TracePart<S>(pub S);

impl<T: Real, S: LatticeSymbol<T>> ScalarLattice<T> for TracePart<S> {
    fn scalar_dim(&self) -> usize {
        self.0.dim()
    }
    fn eval_scalar(&self, k: &[i64]) -> Complex<T> {
        self.0.eval_trace(k)
    }
}

/// Scalar lattice symbol given by a closure.
pub struct FnScalar<F> {
    dim: usize,
    f: F,
}

impl<F> FnScalar<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnScalar { dim, f }
    }
}

impl<T: Real, F: Fn(&[i64]) -> Complex<T> + Send + Sync> ScalarLattice<T> for FnScalar<F> {
    fn scalar_dim(&self) -> usize {
        self.dim
    }
    fn eval_scalar(&self, k: &[i64]) -> Complex<T> {
        (self.f)(k)
    }
}

/// Pointwise product of two lattice symbols, `k ↦ σ(k)τ(k)`.
#[derive(Debug, Clone)]
pub struct PointwiseProduct<A, B> {
    a: A,
    b: B,
}

impl<A, B> PointwiseProduct<A, B> {
    pub fn new<T: Real>(a: A, b: B) -> Result<Self>
    where
        A: LatticeSymbol<T>,
        B: LatticeSymbol<T>,
    {
        if a.dim() != b.dim() {
            return Err(NctError::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        if *a.theta() != *b.theta() {
            return Err(NctError::ThetaMismatch);
        }
        Ok(PointwiseProduct { a, b })
    }
}

impl<T: Real, A: SymbolDomain<T>, B> SymbolDomain<T> for PointwiseProduct<A, B> {
    fn dim(&self) -> usize {
        self.a.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.a.theta()
    }
}

impl<T: Real, A: LatticeSymbol<T>, B: LatticeSymbol<T>> LatticeSymbol<T> for PointwiseProduct<A, B> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        self.a
            .eval_lattice(k)
            .product(&self.b.eval_lattice(k))
            .expect("operands share θ")
    }
}

/// Restriction of a smooth symbol to the lattice.
#[derive(Debug, Clone)]
pub struct Restricted<S>(pub S);

impl<T: Real, S: SymbolDomain<T>> SymbolDomain<T> for Restricted<S> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.0.theta()
    }
}

impl<T: Real, S: SmoothSymbol<T>> LatticeSymbol<T> for Restricted<S> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        let xi: Vec<T> = k.iter().map(|&x| int::<T>(x)).collect();
        self.0.eval_real(&xi)
    }
}
