//! Star product `(σ∘_θτ)(k) = Σ_l τ_l(k) σ(l+k) U_l`, the star bracket and
//! their asymptotic expansions.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex;

use crate::algebra::{DeformationMatrix, WeylSeries};
use crate::error::{NctError, Result};
use crate::lattice::{self, MultiIndex, Point};
use crate::scalar::{as_integer, lit, Real};
use crate::symbol::{LatticeSymbol, SymbolDomain, SymbolExpr};

fn check_pair<T: Real, A: SymbolDomain<T>, B: SymbolDomain<T>>(a: &A, b: &B) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(NctError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if **a.theta() != **b.theta() {
        return Err(NctError::ThetaMismatch);
    }
    Ok(())
}

/// `σ∘_θτ` as a lattice symbol. The second factor needs finite Weyl support.
#[derive(Debug, Clone)]
pub struct StarProduct<A, B> {
    sigma: A,
    tau: B,
    tau_support: Vec<Point>,
}

impl<A, B> StarProduct<A, B> {
    pub fn new<T: Real>(sigma: A, tau: B) -> Result<Self>
    where
        A: LatticeSymbol<T>,
        B: LatticeSymbol<T>,
    {
        check_pair(&sigma, &tau)?;
        let tau_support = tau.weyl_support().ok_or(NctError::InfiniteSupport)?;
        Ok(StarProduct {
            sigma,
            tau,
            tau_support,
        })
    }
}

impl<T: Real, A: SymbolDomain<T>, B> SymbolDomain<T> for StarProduct<A, B> {
    fn dim(&self) -> usize {
        self.sigma.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.sigma.theta()
    }
}

impl<T: Real, A: LatticeSymbol<T>, B: LatticeSymbol<T>> LatticeSymbol<T> for StarProduct<A, B> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        let theta = self.sigma.theta();
        let mut out = WeylSeries::zero(theta.clone());
        for l in &self.tau_support {
            let t = self.tau.weyl_coeff(l, k);
            if t.norm() == T::zero() {
                continue;
            }
            let s = self.sigma.eval_lattice(&lattice::add(l, k));
            for (j, v) in s.coeffs() {
                let c = theta.cocycle_unchecked(j, l);
                out.accumulate(lattice::add(j, l), *v * t * c);
            }
        }
        out.prune();
        out
    }

    fn weyl_support(&self) -> Option<Vec<Point>> {
        let s = self.sigma.weyl_support()?;
        let set: BTreeSet<Point> = s
            .iter()
            .flat_map(|j| self.tau_support.iter().map(move |l| lattice::add(j, l)))
            .collect();
        Some(set.into_iter().collect())
    }
}

/// `{σ,τ}_θ = σ∘_θτ − τ∘_θσ`; both factors need finite Weyl support.
#[derive(Debug, Clone)]
pub struct StarBracket<A, B> {
    left: StarProduct<A, B>,
    right: StarProduct<B, A>,
}

impl<A: Clone, B: Clone> StarBracket<A, B> {
    pub fn new<T: Real>(sigma: A, tau: B) -> Result<Self>
    where
        A: LatticeSymbol<T>,
        B: LatticeSymbol<T>,
    {
        Ok(StarBracket {
            left: StarProduct::new(sigma.clone(), tau.clone())?,
            right: StarProduct::new(tau, sigma)?,
        })
    }
}

impl<T: Real, A: SymbolDomain<T>, B> SymbolDomain<T> for StarBracket<A, B> {
    fn dim(&self) -> usize {
        self.left.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.left.theta()
    }
}

impl<T: Real, A: LatticeSymbol<T>, B: LatticeSymbol<T>> LatticeSymbol<T> for StarBracket<A, B> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        self.left
            .eval_lattice(k)
            .minus(&self.right.eval_lattice(k))
            .expect("same algebra")
    }

    fn weyl_support(&self) -> Option<Vec<Point>> {
        let mut set: BTreeSet<Point> = self.left.weyl_support()?.into_iter().collect();
        set.extend(self.right.weyl_support()?);
        Some(set.into_iter().collect())
    }
}

/// `(σ∘_θτ)(k)`.
pub fn star_exact<T: Real, A: LatticeSymbol<T>, B: LatticeSymbol<T>>(
    sigma: &A,
    tau: &B,
    k: &[i64],
) -> Result<WeylSeries<T>> {
    Ok(StarProduct::new(sigma, tau)?.eval_lattice(k))
}

/// `{σ,τ}_θ(k)`.
pub fn bracket_exact<T: Real, A: LatticeSymbol<T>, B: LatticeSymbol<T>>(
    sigma: &A,
    tau: &B,
    k: &[i64],
) -> Result<WeylSeries<T>> {
    Ok(StarBracket::new(sigma, tau)?.eval_lattice(k))
}

fn inv_factorial<T: Real>(alpha: &MultiIndex) -> Complex<T> {
    Complex::new(lit::<T>(1.0 / alpha.factorial()), T::zero())
}

/// `Σ_{|α|≤J} (1/α!) (∂^α_ξ σ)(δ̄^α τ)`, with the closed form of `σ` used as
/// its own extension.
pub fn star_asympt<T: Real>(sigma: &SymbolExpr<T>, tau: &SymbolExpr<T>, depth: u32) -> Result<SymbolExpr<T>> {
    let order = sigma.order() + tau.order();
    let mut acc = SymbolExpr::zero(sigma.theta().clone(), order);
    for alpha in MultiIndex::up_to(sigma.dim(), depth) {
        let dt = tau.bar_delta(&alpha);
        if dt.is_zero() {
            continue;
        }
        let term = sigma
            .d_xi_multi(&alpha)
            .pointwise_mul(&dt)?
            .scaled(inv_factorial(&alpha));
        acc = acc.plus(&term)?;
    }
    acc.with_order(order)
}

/// `star_asympt(σ,τ,J) − star_asympt(τ,σ,J)`.
pub fn bracket_asympt<T: Real>(sigma: &SymbolExpr<T>, tau: &SymbolExpr<T>, depth: u32) -> Result<SymbolExpr<T>> {
    star_asympt(sigma, tau, depth)?.minus(&star_asympt(tau, sigma, depth)?)
}

/// Homogeneous part of degree `d` of the bracket expansion:
/// the sum over `|α| + i + i′ = m + m′ − d` of
/// `(1/α!)[(∂^α σ_{[m−i]}) δ̄^α τ_{[m′−i′]} − (∂^α τ_{[m′−i′]}) δ̄^α σ_{[m−i]}]`.
pub fn bracket_homog<T: Real>(sigma: &SymbolExpr<T>, tau: &SymbolExpr<T>, degree: Complex<T>) -> Result<SymbolExpr<T>> {
    check_pair(sigma, tau)?;
    let zero = SymbolExpr::zero(sigma.theta().clone(), degree);
    let g = match as_integer(sigma.order() + tau.order() - degree) {
        Some(g) if g >= 0 => g as usize,
        _ => return Ok(zero),
    };
    let sc: Vec<SymbolExpr<T>> = (0..=g).map(|i| sigma.homog_component(i)).collect::<Result<_>>()?;
    let tc: Vec<SymbolExpr<T>> = (0..=g).map(|i| tau.homog_component(i)).collect::<Result<_>>()?;
    let mut acc = zero;
    for a in 0..=g {
        for alpha in MultiIndex::with_order(sigma.dim(), a as u32) {
            let w = inv_factorial::<T>(&alpha);
            for i in 0..=(g - a) {
                let ip = g - a - i;
                let left = sc[i].d_xi_multi(&alpha).pointwise_mul(&tc[ip].bar_delta(&alpha))?;
                let right = tc[ip].d_xi_multi(&alpha).pointwise_mul(&sc[i].bar_delta(&alpha))?;
                acc = acc.plus(&left.minus(&right)?.scaled(w))?;
            }
        }
    }
    SymbolExpr::from_parts(acc.theta().clone(), degree, acc.parts().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantise::{Composition, Operator, Quantised};
    use crate::symbol::ScalarTerm;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn bracket_with_weyl_derivative_symbol() {
        // σ(k) = k_1 U_0, τ = U_(1,0): {τ,σ} = −δ̄_1 τ = −U_(1,0).
        let th = Arc::new(DeformationMatrix::two_dim(0.37));
        let sigma = SymbolExpr::scalar(th.clone(), c(1.0), vec![ScalarTerm::monomial(c(1.0), MultiIndex(vec![1, 0]))]).unwrap();
        let tau = SymbolExpr::from_parts(th, c(0.0), [(vec![1, 0], vec![ScalarTerm::constant(2, c(1.0))])]).unwrap();
        for k in [[0, 0], [3, -2], [-5, 7]] {
            let b = bracket_exact(&tau, &sigma, &k).unwrap();
            assert_eq!(b.len(), 1);
            assert!((b.coeff(&[1, 0]) - c(-1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn composition_matches_star_product() {
        let th = Arc::new(DeformationMatrix::two_dim(1.0 / 3.0));
        let b = |m: f64| ScalarTerm::bracket(2, c(1.0), c(m));
        let sigma = SymbolExpr::from_parts(th.clone(), c(-1.0), [(vec![0, 0], vec![b(-1.0)]), (vec![1, 1], vec![b(-2.0)])]).unwrap();
        let tau = SymbolExpr::from_parts(th.clone(), c(-1.0), [(vec![0, 1], vec![b(-1.0)]), (vec![-1, 0], vec![b(-1.0)])]).unwrap();
        let comp = Composition(Quantised(&sigma), Quantised(&tau));
        let star = StarProduct::new(&sigma, &tau).unwrap();
        let k = vec![2, -3];
        let lhs = comp.apply_basis(&k);
        let rhs = star
            .eval_lattice(&k)
            .product(&WeylSeries::monomial(th, k.clone(), c(1.0)))
            .unwrap();
        assert!(lhs.minus(&rhs).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn infinite_support_rejected() {
        let th = Arc::new(DeformationMatrix::two_dim(0.2));
        let s = SymbolExpr::scalar(th.clone(), c(0.0), vec![ScalarTerm::constant(2, c(1.0))]).unwrap();
        let f = crate::symbol::FnSymbol::new(th.clone(), move |_k: &[i64]| WeylSeries::one(th.clone()));
        assert_eq!(star_exact(&s, &f, &[0, 0]).unwrap_err(), NctError::InfiniteSupport);
    }

    #[test]
    fn scalar_bracket_homog_leading_degree_vanishes() {
        let th = Arc::new(DeformationMatrix::two_dim(0.4));
        let s = SymbolExpr::scalar(th.clone(), c(-1.0), vec![ScalarTerm::bracket(2, c(1.0), c(-1.0))]).unwrap();
        let t = SymbolExpr::scalar(th, c(1.0), vec![ScalarTerm::bracket(2, c(2.0), c(1.0))]).unwrap();
        assert!(bracket_homog(&s, &t, c(0.0)).unwrap().is_zero());
    }
}
