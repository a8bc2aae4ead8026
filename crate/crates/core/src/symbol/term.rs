//! Scalar terms `c·ξ^α·⟨ξ⟩^{m_b}·|ξ|^s·χ(ξ)` and operations on finite lists of them.

use num_complex::Complex;

use crate::error::{NctError, Result};
use crate::lattice::MultiIndex;
use crate::scalar::{as_integer, binom_complex, int, lit, order_tol, rpow, Real};

/// Smooth step `h(t) = g(t)/(g(t)+g(1-t))`, `g(t) = e^{-1/t}` for `t > 0`.
pub fn smooth_step<T: Real>(t: T) -> T {
    let g = |x: T| {
        if x > T::zero() {
            (-x.recip()).exp()
        } else {
            T::zero()
        }
    };
    let a = g(t);
    let b = g(T::one() - t);
    if a == T::zero() {
        T::zero()
    } else {
        a / (a + b)
    }
}

/// Excision `χ(ξ) = h(2|ξ| - 1)` as a function of `r = |ξ|`: zero on
/// `r ≤ 1/2`, one on `r ≥ 1`.
pub fn excision<T: Real>(r: T) -> T {
    if r >= T::one() {
        T::one()
    } else {
        smooth_step(lit::<T>(2.0) * r - T::one())
    }
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn close<T: Real>(a: Complex<T>, b: Complex<T>) -> bool {
    (a - b).norm() <= order_tol::<T>()
}

/// One scalar term `c·ξ^α·⟨ξ⟩^{m_b}·|ξ|^s`, optionally multiplied by `χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarTerm<T> {
    c: Complex<T>,
    alpha: MultiIndex,
    mb: Complex<T>,
    s: Complex<T>,
    excised: bool,
}

impl<T: Real> ScalarTerm<T> {
    /// Rejects a non-excised term with `s ≠ 0`.
    pub fn new(
        c: Complex<T>,
        alpha: MultiIndex,
        mb: Complex<T>,
        s: Complex<T>,
        excised: bool,
    ) -> Result<Self> {
        if s != czero() && !excised {
            return Err(NctError::InvalidTerm(
                "a term with a |ξ|^s factor, s ≠ 0, must be excised".into(),
            ));
        }
        if !(c.re.is_finite() && c.im.is_finite() && mb.re.is_finite() && mb.im.is_finite())
            || !(s.re.is_finite() && s.im.is_finite())
        {
            return Err(NctError::InvalidTerm("non-finite parameter".into()));
        }
        Ok(ScalarTerm {
            c,
            alpha,
            mb,
            s,
            excised,
        })
    }

    /// `c`, no ξ-dependence.
    pub fn constant(n: usize, c: Complex<T>) -> Self {
        ScalarTerm {
            c,
            alpha: MultiIndex::zero(n),
            mb: czero(),
            s: czero(),
            excised: false,
        }
    }

    /// `c·⟨ξ⟩^{m_b}`.
    pub fn bracket(n: usize, c: Complex<T>, mb: Complex<T>) -> Self {
        ScalarTerm {
            c,
            alpha: MultiIndex::zero(n),
            mb,
            s: czero(),
            excised: false,
        }
    }

    /// Excised `c·|ξ|^s`.
    pub fn radial(n: usize, c: Complex<T>, s: Complex<T>) -> Self {
        ScalarTerm {
            c,
            alpha: MultiIndex::zero(n),
            mb: czero(),
            s,
            excised: true,
        }
    }

    /// `c·ξ^α`, not excised.
    pub fn monomial(c: Complex<T>, alpha: MultiIndex) -> Self {
        ScalarTerm {
            c,
            alpha,
            mb: czero(),
            s: czero(),
            excised: false,
        }
    }

    /// Multiplies by `⟨ξ⟩^{mb}`.
    pub fn times_bracket(mut self, mb: Complex<T>) -> Self {
        self.mb += mb;
        self
    }

    pub fn coeff(&self) -> Complex<T> {
        self.c
    }

    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    pub fn mb(&self) -> Complex<T> {
        self.mb
    }

    pub fn s(&self) -> Complex<T> {
        self.s
    }

    pub fn excised(&self) -> bool {
        self.excised
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    /// Complex degree `|α| + m_b + s`; its real part is the order.
    pub fn degree(&self) -> Complex<T> {
        creal::<T>(int(self.alpha.order() as i64)) + self.mb + self.s
    }

    pub fn scaled(&self, k: Complex<T>) -> Self {
        let mut t = self.clone();
        t.c *= k;
        t
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.alpha == other.alpha
            && self.excised == other.excised
            && close(self.mb, other.mb)
            && close(self.s, other.s)
    }

    /// Value at a real point, including `χ` for excised terms.
    pub fn eval_real(&self, xi: &[T]) -> Complex<T> {
        let r2 = xi.iter().fold(T::zero(), |a, &x| a + x * x);
        let mut chi = T::one();
        if self.excised {
            let r = r2.sqrt();
            if r <= lit(0.5) {
                return czero();
            }
            chi = excision(r);
        }
        let mut mono = T::one();
        for (&a, &x) in self.alpha.0.iter().zip(xi) {
            if a > 0 {
                mono *= x.powi(a as i32);
            }
        }
        let mut v = self.c * mono * chi;
        if self.mb != czero() {
            v *= rpow(T::one() + r2, self.mb / lit::<T>(2.0));
        }
        if self.s != czero() {
            v *= rpow(r2, self.s / lit::<T>(2.0));
        }
        v
    }

    /// Value at a lattice point with `χ(0) = 0` and `χ(k) = 1` otherwise.
    pub fn eval_lattice(&self, k: &[i64]) -> Complex<T> {
        let n2: i64 = k.iter().map(|x| x * x).sum();
        if self.excised && n2 == 0 {
            return czero();
        }
        let mut mono = T::one();
        for (&a, &x) in self.alpha.0.iter().zip(k) {
            if a > 0 {
                mono *= int::<T>(x).powi(a as i32);
            }
        }
        let mut v = self.c * mono;
        if self.mb != czero() {
            v *= rpow(int::<T>(n2 + 1), self.mb / lit::<T>(2.0));
        }
        if self.s != czero() {
            v *= rpow(int::<T>(n2), self.s / lit::<T>(2.0));
        }
        v
    }

    /// `∂_{ξ_i}` of the term on `|ξ| ≥ 1`. The derivative of `χ` is dropped.
    pub fn d_xi(&self, i: usize) -> Vec<ScalarTerm<T>> {
        let mut out = Vec::with_capacity(3);
        let ai = self.alpha.0[i];
        let up = self.alpha.add(&MultiIndex::unit(self.dim(), i));
        if ai > 0 {
            let mut alpha = self.alpha.clone();
            alpha.0[i] -= 1;
            out.push(ScalarTerm {
                c: self.c * int::<T>(ai as i64),
                alpha,
                mb: self.mb,
                s: self.s,
                excised: self.excised,
            });
        }
        if self.mb != czero() {
            out.push(ScalarTerm {
                c: self.c * self.mb,
                alpha: up.clone(),
                mb: self.mb - lit::<T>(2.0),
                s: self.s,
                excised: self.excised,
            });
        }
        if self.s != czero() {
            out.push(ScalarTerm {
                c: self.c * self.s,
                alpha: up,
                mb: self.mb,
                s: self.s - lit::<T>(2.0),
                excised: self.excised,
            });
        }
        out
    }

    /// Product of two terms. Two excised factors give a single `χ`, which
    /// agrees with `χ²` on the lattice and on `|ξ| ≥ 1`.
    pub fn mul(&self, other: &Self) -> ScalarTerm<T> {
        ScalarTerm {
            c: self.c * other.c,
            alpha: self.alpha.add(&other.alpha),
            mb: self.mb + other.mb,
            s: self.s + other.s,
            excised: self.excised || other.excised,
        }
    }
}

/// Merges like terms and drops vanishing coefficients; the result is sorted.
/// The input is sorted first so that the result does not depend on its order.
pub fn canonicalize<T: Real>(mut terms: Vec<ScalarTerm<T>>) -> Vec<ScalarTerm<T>> {
    let full = |t: &ScalarTerm<T>| (sort_key(t), t.c.re.to_f64().unwrap_or(0.0), t.c.im.to_f64().unwrap_or(0.0));
    terms.sort_by(|a, b| full(a).partial_cmp(&full(b)).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<ScalarTerm<T>> = Vec::with_capacity(terms.len());
    for t in terms {
        if let Some(e) = out.iter_mut().find(|e| e.same_shape(&t)) {
            e.c += t.c;
        } else {
            out.push(t);
        }
    }
    out.retain(|t| t.c.norm() >= T::min_positive_value());
    out.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap_or(std::cmp::Ordering::Equal));
    out
}

type SortKey = (Vec<u32>, bool, f64, f64, f64, f64);

fn sort_key<T: Real>(t: &ScalarTerm<T>) -> SortKey {
    let f = |x: T| x.to_f64().unwrap_or(0.0);
    (
        t.alpha.0.clone(),
        t.excised,
        f(t.mb.re),
        f(t.mb.im),
        f(t.s.re),
        f(t.s.im),
    )
}

pub fn eval_real_terms<T: Real>(terms: &[ScalarTerm<T>], xi: &[T]) -> Complex<T> {
    terms.iter().fold(czero(), |acc, t| acc + t.eval_real(xi))
}

pub fn eval_lattice_terms<T: Real>(terms: &[ScalarTerm<T>], k: &[i64]) -> Complex<T> {
    terms.iter().fold(czero(), |acc, t| acc + t.eval_lattice(k))
}

/// Returns the derivative and whether any `χ` derivative was dropped.
pub fn d_xi_terms<T: Real>(terms: &[ScalarTerm<T>], i: usize) -> (Vec<ScalarTerm<T>>, bool) {
    let dropped = terms.iter().any(|t| t.excised);
    let out = terms.iter().flat_map(|t| t.d_xi(i)).collect();
    (canonicalize(out), dropped)
}

pub fn mul_terms<T: Real>(a: &[ScalarTerm<T>], b: &[ScalarTerm<T>]) -> Vec<ScalarTerm<T>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul(y));
        }
    }
    canonicalize(out)
}

/// Homogeneous part of degree `m - j` of a term list classical of order `m`.
///
/// Each `⟨ξ⟩^{m_b}` is expanded as `|ξ|^{m_b} Σ_q binom(m_b/2, q)|ξ|^{-2q}`.
pub fn homog_terms<T: Real>(
    terms: &[ScalarTerm<T>],
    order: Complex<T>,
    j: usize,
) -> Result<Vec<ScalarTerm<T>>> {
    let target = order - creal::<T>(int(j as i64));
    let mut out = Vec::new();
    for t in terms {
        let d = t.degree();
        let gap = match as_integer(order - d) {
            Some(g) if g >= 0 => g,
            _ => {
                return Err(NctError::NotClassical(format!(
                    "term of degree {}{:+}i is not in the ladder of order {}{:+}i",
                    d.re, d.im, order.re, order.im
                )))
            }
        };
        let shift = j as i64 - gap;
        if shift < 0 || shift % 2 != 0 {
            continue;
        }
        let q = (shift / 2) as usize;
        let b = binom_complex(t.mb / lit::<T>(2.0), q);
        if b.norm() == T::zero() {
            continue;
        }
        out.push(ScalarTerm {
            c: t.c * b,
            alpha: t.alpha.clone(),
            mb: czero(),
            s: target - creal::<T>(int(t.alpha.order() as i64)),
            excised: true,
        });
    }
    Ok(canonicalize(out))
}

/// Checks that every term's order is bounded by `order`.
pub fn check_order_bound<T: Real>(terms: &[ScalarTerm<T>], order: Complex<T>) -> Result<()> {
    for t in terms {
        if t.degree().re > order.re + order_tol::<T>() {
            return Err(NctError::InvalidTerm(format!(
                "term of order {} exceeds declared order {}",
                t.degree().re,
                order.re
            )));
        }
    }
    Ok(())
}
