use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;

use super::term::{
    canonicalize, check_order_bound, d_xi_terms, eval_lattice_terms, eval_real_terms, homog_terms,
    mul_terms, ScalarTerm,
};
use super::{LatticeSymbol, ScalarLattice, SmoothSymbol, SymbolDomain};
use crate::algebra::{lattice_monomial, DeformationMatrix, WeylSeries};
use crate::error::{NctError, Result};
use crate::lattice::{self, MultiIndex, Point};
use crate::scalar::{as_integer, int, order_tol, Real};

/// Default resolution depth `ceil(Re m + n) + 2`, clamped at zero.
pub fn default_depth<T: Real>(order: Complex<T>, n: usize) -> usize {
    let d = (order.re + int::<T>(n as i64)).ceil() + int::<T>(2);
    d.to_i64().unwrap_or(0).max(0) as usize
}

/// Order and available number of homogeneous components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalMeta<T> {
    pub order: Complex<T>,
    pub depth: usize,
}

fn check_ladder<T: Real>(from: Complex<T>, to: Complex<T>) -> Result<()> {
    match as_integer(to - from) {
        Some(g) if g >= 0 => Ok(()),
        _ => Err(NctError::NotClassical(format!(
            "order {}{:+}i cannot be raised to {}{:+}i by an integer step",
            from.re, from.im, to.re, to.im
        ))),
    }
}

/// Closed-form `A_θ`-valued symbol `Σ_l (Σ scalar terms) U_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolExpr<T> {
    theta: Arc<DeformationMatrix<T>>,
    parts: BTreeMap<Point, Vec<ScalarTerm<T>>>,
    order: Complex<T>,
    depth: Option<usize>,
    smoothing: bool,
}

impl<T: Real> SymbolExpr<T> {
    /// The zero symbol with the given declared order.
    pub fn zero(theta: Arc<DeformationMatrix<T>>, order: Complex<T>) -> Self {
        SymbolExpr {
            theta,
            parts: BTreeMap::new(),
            order,
            depth: None,
            smoothing: false,
        }
    }

    pub fn from_parts<I>(theta: Arc<DeformationMatrix<T>>, order: Complex<T>, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Vec<ScalarTerm<T>>)>,
    {
        let mut s = Self::zero(theta, order);
        for (l, terms) in parts {
            s = s.with_part(l, terms)?;
        }
        Ok(s)
    }

    /// Scalar terms placed at Weyl index 0.
    pub fn scalar(theta: Arc<DeformationMatrix<T>>, order: Complex<T>, terms: Vec<ScalarTerm<T>>) -> Result<Self> {
        let n = theta.dim();
        Self::from_parts(theta, order, [(lattice::zero(n), terms)])
    }

    /// Adds `terms · U_l`, checking dimensions and the order bound.
    pub fn with_part(mut self, l: Point, terms: Vec<ScalarTerm<T>>) -> Result<Self> {
        let n = self.dim();
        if l.len() != n {
            return Err(NctError::DimensionMismatch {
                expected: n,
                found: l.len(),
            });
        }
        for t in &terms {
            if t.dim() != n {
                return Err(NctError::DimensionMismatch {
                    expected: n,
                    found: t.dim(),
                });
            }
        }
        check_order_bound(&terms, self.order)?;
        let entry = self.parts.entry(l.clone()).or_default();
        entry.extend(terms);
        let merged = canonicalize(std::mem::take(entry));
        if merged.is_empty() {
            self.parts.remove(&l);
        } else {
            self.parts.insert(l, merged);
        }
        Ok(self)
    }

    /// Overrides the resolution depth.
    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = Some(depth);
        self
    }

    /// Raises the declared order by a non-negative integer step.
    pub fn with_order(mut self, order: Complex<T>) -> Result<Self> {
        check_ladder(self.order, order)?;
        self.order = order;
        Ok(self)
    }

    pub fn order(&self) -> Complex<T> {
        self.order
    }

    pub fn parts(&self) -> &BTreeMap<Point, Vec<ScalarTerm<T>>> {
        &self.parts
    }

    pub fn part(&self, l: &[i64]) -> &[ScalarTerm<T>] {
        self.parts.get(l).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Whether some operation dropped terms supported in `|ξ| < 1`.
    pub fn smoothing_modified(&self) -> bool {
        self.smoothing
    }

    pub fn classical_meta(&self) -> ClassicalMeta<T> {
        ClassicalMeta {
            order: self.order,
            depth: self.depth.unwrap_or_else(|| default_depth(self.order, self.dim())),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(NctError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(Arc::ptr_eq(&self.theta, &other.theta) || *self.theta == *other.theta) {
            return Err(NctError::ThetaMismatch);
        }
        Ok(())
    }

    fn map_parts<F>(&self, order: Complex<T>, mut f: F) -> Self
    where
        F: FnMut(&Point, &[ScalarTerm<T>]) -> Vec<ScalarTerm<T>>,
    {
        let mut parts = BTreeMap::new();
        for (l, terms) in &self.parts {
            let t = f(l, terms);
            if !t.is_empty() {
                parts.insert(l.clone(), t);
            }
        }
        SymbolExpr {
            theta: self.theta.clone(),
            parts,
            order,
            depth: None,
            smoothing: self.smoothing,
        }
    }

    /// `∂_{ξ_i}σ`, valid on `|ξ| ≥ 1`; the declared order drops by one.
    pub fn d_xi(&self, i: usize) -> Self {
        let mut dropped = false;
        let mut out = self.map_parts(self.order - T::one(), |_, terms| {
            let (d, flag) = d_xi_terms(terms, i);
            dropped |= flag;
            d
        });
        out.smoothing |= dropped;
        out
    }

    /// `∂^α_ξ σ`.
    pub fn d_xi_multi(&self, alpha: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (i, &a) in alpha.0.iter().enumerate() {
            for _ in 0..a {
                out = out.d_xi(i);
            }
        }
        out
    }

    /// `δ̄^α σ`: the Weyl-index-`l` part is multiplied by `l^α`.
    pub fn bar_delta(&self, alpha: &MultiIndex) -> Self {
        self.map_parts(self.order, |l, terms| {
            let w = lattice_monomial::<T>(alpha, l);
            if w.norm() == T::zero() {
                Vec::new()
            } else {
                canonicalize(terms.iter().map(|t| t.scaled(w)).collect())
            }
        })
    }

    /// `τ̄σ: k ↦ τ(σ(k))`.
    pub fn bar_tau(&self) -> ScalarSymbol<T> {
        let n = self.dim();
        ScalarSymbol {
            dim: n,
            terms: self.part(&lattice::zero(n)).to_vec(),
            order: self.order,
            depth: self.depth,
            smoothing: self.smoothing,
        }
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        self.map_parts(self.order, |_, terms| {
            canonicalize(terms.iter().map(|t| t.scaled(c)).collect())
        })
    }

    /// Sum; the declared order is the one with the larger real part.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let order = if other.order.re > self.order.re + order_tol::<T>() {
            other.order
        } else {
            self.order
        };
        let mut out = SymbolExpr {
            theta: self.theta.clone(),
            parts: self.parts.clone(),
            order,
            depth: None,
            smoothing: self.smoothing || other.smoothing,
        };
        for (l, terms) in &other.parts {
            let e = out.parts.entry(l.clone()).or_default();
            e.extend(terms.iter().cloned());
            *e = canonicalize(std::mem::take(e));
        }
        out.parts.retain(|_, v| !v.is_empty());
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(Complex::new(-T::one(), T::zero())))
    }

    /// Pointwise product `(στ)(k) = σ(k)τ(k)` in `A_θ`; orders add.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut acc: BTreeMap<Point, Vec<ScalarTerm<T>>> = BTreeMap::new();
        let mut smoothing = self.smoothing || other.smoothing;
        for (l, a) in &self.parts {
            for (m, b) in &other.parts {
                let c = self.theta.cocycle_unchecked(l, m);
                if a.iter().any(|t| t.excised()) && b.iter().any(|t| t.excised()) {
                    smoothing = true;
                }
                let prod = mul_terms(a, b).into_iter().map(|t| t.scaled(c));
                acc.entry(lattice::add(l, m)).or_default().extend(prod);
            }
        }
        let parts = acc
            .into_iter()
            .map(|(l, v)| (l, canonicalize(v)))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        Ok(SymbolExpr {
            theta: self.theta.clone(),
            parts,
            order: self.order + other.order,
            depth: None,
            smoothing,
        })
    }

    /// Homogeneous component of degree `m - j` on `|ξ| ≥ 1`.
    pub fn homog_component(&self, j: usize) -> Result<Self> {
        let meta = self.classical_meta();
        if j > meta.depth {
            return Err(NctError::DepthShortfall {
                required: j,
                available: meta.depth,
            });
        }
        let order = self.order - Complex::new(int::<T>(j as i64), T::zero());
        let mut parts = BTreeMap::new();
        for (l, terms) in &self.parts {
            let h = homog_terms(terms, self.order, j)?;
            if !h.is_empty() {
                parts.insert(l.clone(), h);
            }
        }
        Ok(SymbolExpr {
            theta: self.theta.clone(),
            parts,
            order,
            depth: None,
            smoothing: self.smoothing,
        })
    }

    /// Same terms over another deformation matrix of equal dimension.
    pub fn with_theta(&self, theta: Arc<DeformationMatrix<T>>) -> Result<Self> {
        if theta.dim() != self.dim() {
            return Err(NctError::DimensionMismatch {
                expected: self.dim(),
                found: theta.dim(),
            });
        }
        let mut out = self.clone();
        out.theta = theta;
        Ok(out)
    }
}

impl<T: Real> SymbolDomain<T> for SymbolExpr<T> {
    fn dim(&self) -> usize {
        self.theta.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        &self.theta
    }
}

impl<T: Real> LatticeSymbol<T> for SymbolExpr<T> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        assert_eq!(k.len(), self.dim(), "lattice point dimension");
        let mut out = WeylSeries::zero(self.theta.clone());
        for (l, terms) in &self.parts {
            out.accumulate(l.clone(), eval_lattice_terms(terms, k));
        }
        out.prune();
        out
    }

    fn eval_trace(&self, k: &[i64]) -> Complex<T> {
        eval_lattice_terms(self.part(&lattice::zero(self.dim())), k)
    }

    fn weyl_coeff(&self, l: &[i64], k: &[i64]) -> Complex<T> {
        eval_lattice_terms(self.part(l), k)
    }

    fn weyl_support(&self) -> Option<Vec<Point>> {
        Some(self.parts.keys().cloned().collect())
    }
}

impl<T: Real> SmoothSymbol<T> for SymbolExpr<T> {
    fn eval_real(&self, xi: &[T]) -> WeylSeries<T> {
        assert_eq!(xi.len(), self.dim(), "point dimension");
        let mut out = WeylSeries::zero(self.theta.clone());
        for (l, terms) in &self.parts {
            out.accumulate(l.clone(), eval_real_terms(terms, xi));
        }
        out.prune();
        out
    }
}

/// Closed-form scalar symbol, the image of `τ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSymbol<T> {
    dim: usize,
    terms: Vec<ScalarTerm<T>>,
    order: Complex<T>,
    depth: Option<usize>,
    smoothing: bool,
}

impl<T: Real> ScalarSymbol<T> {
    pub fn new(dim: usize, order: Complex<T>, terms: Vec<ScalarTerm<T>>) -> Result<Self> {
        for t in &terms {
            if t.dim() != dim {
                return Err(NctError::DimensionMismatch {
                    expected: dim,
                    found: t.dim(),
                });
            }
        }
        check_order_bound(&terms, order)?;
        Ok(ScalarSymbol {
            dim,
            terms: canonicalize(terms),
            order,
            depth: None,
            smoothing: false,
        })
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn with_order(mut self, order: Complex<T>) -> Result<Self> {
        check_ladder(self.order, order)?;
        self.order = order;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> Complex<T> {
        self.order
    }

    pub fn terms(&self) -> &[ScalarTerm<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn smoothing_modified(&self) -> bool {
        self.smoothing
    }

    pub fn classical_meta(&self) -> ClassicalMeta<T> {
        ClassicalMeta {
            order: self.order,
            depth: self.depth.unwrap_or_else(|| default_depth(self.order, self.dim)),
        }
    }

    /// `ι_θ`: the symbol `k ↦ σ(k)U_0`.
    pub fn iota(&self, theta: Arc<DeformationMatrix<T>>) -> Result<SymbolExpr<T>> {
        if theta.dim() != self.dim {
            return Err(NctError::DimensionMismatch {
                expected: self.dim,
                found: theta.dim(),
            });
        }
        let mut parts = BTreeMap::new();
        if !self.terms.is_empty() {
            parts.insert(lattice::zero(self.dim), self.terms.clone());
        }
        Ok(SymbolExpr {
            theta,
            parts,
            order: self.order,
            depth: self.depth,
            smoothing: self.smoothing,
        })
    }

    pub fn eval_real(&self, xi: &[T]) -> Complex<T> {
        eval_real_terms(&self.terms, xi)
    }

    pub fn d_xi(&self, i: usize) -> Self {
        let (terms, dropped) = d_xi_terms(&self.terms, i);
        ScalarSymbol {
            dim: self.dim,
            terms,
            order: self.order - T::one(),
            depth: None,
            smoothing: self.smoothing || dropped,
        }
    }

    pub fn homog_component(&self, j: usize) -> Result<Self> {
        let meta = self.classical_meta();
        if j > meta.depth {
            return Err(NctError::DepthShortfall {
                required: j,
                available: meta.depth,
            });
        }
        Ok(ScalarSymbol {
            dim: self.dim,
            terms: homog_terms(&self.terms, self.order, j)?,
            order: self.order - Complex::new(int::<T>(j as i64), T::zero()),
            depth: None,
            smoothing: self.smoothing,
        })
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        out.terms = canonicalize(self.terms.iter().map(|t| t.scaled(c)).collect());
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(NctError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let order = if other.order.re > self.order.re + order_tol::<T>() {
            other.order
        } else {
            self.order
        };
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(ScalarSymbol {
            dim: self.dim,
            terms: canonicalize(terms),
            order,
            depth: None,
            smoothing: self.smoothing || other.smoothing,
        })
    }
}

impl<T: Real> ScalarLattice<T> for ScalarSymbol<T> {
    fn scalar_dim(&self) -> usize {
        self.dim
    }
    fn eval_scalar(&self, k: &[i64]) -> Complex<T> {
        eval_lattice_terms(&self.terms, k)
    }
}
