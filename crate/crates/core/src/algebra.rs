//! Finitely supported Weyl series in the deformed algebra `A_θ`.
//!
//! Elements are finite sums `Σ a_k U_k` with `U_k U_l = c(k,l) U_{k+l}` and
//! cocycle `c(k,l) = e^{-πi⟨k,θl⟩}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{NctError, Result};
use crate::lattice::{self, MultiIndex, Point};
use crate::scalar::{cis_pi, int, japanese_lattice, lit, Real};

/// Antisymmetric real `n×n` matrix `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Real> DeformationMatrix<T> {
    /// Validates antisymmetry and stores the matrix with an exactly
    /// antisymmetric lower triangle.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(NctError::InvalidTheta("dimension must be positive".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(NctError::InvalidTheta(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        let tol = T::epsilon() * lit(8.0);
        let mut entries = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let a = rows[i][j];
                let b = rows[j][i];
                let scale = T::one().max(a.abs());
                if (a + b).abs() > tol * scale || !a.is_finite() {
                    return Err(NctError::NotAntisymmetric { i, j });
                }
                entries[i * n + j] = if i < j {
                    a
                } else if i > j {
                    -rows[j][i]
                } else {
                    T::zero()
                };
            }
        }
        Ok(DeformationMatrix { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        DeformationMatrix {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    /// `n = 2`, `θ = [[0, θ0], [-θ0, 0]]`.
    pub fn two_dim(theta0: T) -> Self {
        DeformationMatrix {
            n: 2,
            entries: vec![T::zero(), theta0, -theta0, T::zero()],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `θ ↦ -θ`; its cocycle is the complex conjugate of the original one.
    pub fn negated(&self) -> Self {
        DeformationMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&x| -x).collect(),
        }
    }

    /// Whether every entry is an integer (the commutative case).
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.fract() == T::zero())
    }

    /// `⟨k, θl⟩`.
    pub fn pairing(&self, k: &[i64], l: &[i64]) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            if k[i] == 0 {
                continue;
            }
            let mut row = T::zero();
            for j in 0..self.n {
                if l[j] != 0 {
                    row += self.get(i, j) * int(l[j]);
                }
            }
            acc += int::<T>(k[i]) * row;
        }
        acc
    }

    fn check_point(&self, k: &[i64]) -> Result<()> {
        if k.len() != self.n {
            return Err(NctError::DimensionMismatch {
                expected: self.n,
                found: k.len(),
            });
        }
        Ok(())
    }

    /// `c(k,l) = e^{-πi⟨k,θl⟩}`.
    pub fn cocycle(&self, k: &[i64], l: &[i64]) -> Result<Complex<T>> {
        self.check_point(k)?;
        self.check_point(l)?;
        Ok(self.cocycle_unchecked(k, l))
    }

    pub(crate) fn cocycle_unchecked(&self, k: &[i64], l: &[i64]) -> Complex<T> {
        cis_pi(-self.pairing(k, l))
    }
}

/// Free function form of [`DeformationMatrix::cocycle`].
pub fn cocycle<T: Real>(theta: &DeformationMatrix<T>, k: &[i64], l: &[i64]) -> Result<Complex<T>> {
    theta.cocycle(k, l)
}

/// Finitely supported element `Σ a_k U_k` of `A_θ`.
#[derive(Debug, Clone)]
pub struct WeylSeries<T> {
    theta: Arc<DeformationMatrix<T>>,
    coeffs: BTreeMap<Point, Complex<T>>,
}

impl<T: Real> PartialEq for WeylSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coeffs == other.coeffs
    }
}

fn keep<T: Real>(c: &Complex<T>) -> bool {
    c.norm() >= T::min_positive_value()
}

impl<T: Real> WeylSeries<T> {
    pub fn zero(theta: Arc<DeformationMatrix<T>>) -> Self {
        WeylSeries {
            theta,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c·U_k`.
    pub fn monomial(theta: Arc<DeformationMatrix<T>>, k: Point, c: Complex<T>) -> Self {
        assert_eq!(k.len(), theta.dim(), "lattice point dimension");
        let mut s = Self::zero(theta);
        if keep(&c) {
            s.coeffs.insert(k, c);
        }
        s
    }

    /// The unit `U_0`.
    pub fn one(theta: Arc<DeformationMatrix<T>>) -> Self {
        let n = theta.dim();
        Self::monomial(theta, lattice::zero(n), Complex::new(T::one(), T::zero()))
    }

    /// Sums repeated lattice points.
    pub fn from_terms<I>(theta: Arc<DeformationMatrix<T>>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Complex<T>)>,
    {
        let mut s = Self::zero(theta);
        for (k, c) in terms {
            if k.len() != s.dim() {
                return Err(NctError::DimensionMismatch {
                    expected: s.dim(),
                    found: k.len(),
                });
            }
            s.accumulate(k, c);
        }
        s.prune();
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        &self.theta
    }

    pub fn coeffs(&self) -> &BTreeMap<Point, Complex<T>> {
        &self.coeffs
    }

    pub fn coeff(&self, k: &[i64]) -> Complex<T> {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn accumulate(&mut self, k: Point, c: Complex<T>) {
        *self
            .coeffs
            .entry(k)
            .or_insert_with(|| Complex::new(T::zero(), T::zero())) += c;
    }

    pub(crate) fn prune(&mut self) {
        self.coeffs.retain(|_, c| keep(c));
    }

    /// Drops coefficients with modulus below `floor`. Explicit, never applied
    /// implicitly by arithmetic.
    pub fn truncated(&self, floor: T) -> Self {
        WeylSeries {
            theta: self.theta.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() >= floor)
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.theta, &other.theta) || *self.theta == *other.theta
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(NctError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !self.same_algebra(other) {
            return Err(NctError::ThetaMismatch);
        }
        Ok(())
    }

    /// Bilinear extension of `U_k U_l = c(k,l) U_{k+l}`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.theta.clone());
        for (k, a) in &self.coeffs {
            for (l, b) in &other.coeffs {
                let c = self.theta.cocycle_unchecked(k, l);
                out.accumulate(lattice::add(k, l), *a * *b * c);
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, b) in &other.coeffs {
            out.accumulate(k.clone(), *b);
        }
        out.prune();
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(Complex::new(-T::one(), T::zero())))
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = WeylSeries {
            theta: self.theta.clone(),
            coeffs: self.coeffs.iter().map(|(k, a)| (k.clone(), *a * c)).collect(),
        };
        out.prune();
        out
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.product(other)?.minus(&other.product(self)?)
    }

    /// `(Σ a_k U_k)* = Σ conj(a_k) U_{-k}`.
    pub fn adjoint(&self) -> Self {
        WeylSeries {
            theta: self.theta.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, a)| (lattice::neg(k), a.conj()))
                .collect(),
        }
    }

    /// `τ(a) = a_0`.
    pub fn tau(&self) -> Complex<T> {
        self.coeff(&lattice::zero(self.dim()))
    }

    /// `δ^α(Σ a_k U_k) = Σ a_k k^α U_k`.
    pub fn delta(&self, alpha: &MultiIndex) -> Self {
        let mut out = WeylSeries {
            theta: self.theta.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, a)| (k.clone(), *a * lattice_monomial::<T>(alpha, k)))
                .collect(),
        };
        out.prune();
        out
    }

    /// `⟨a,b⟩ = τ(ab*) = Σ a_k conj(b_k)`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, a) in &self.coeffs {
            if let Some(b) = other.coeffs.get(k) {
                acc += *a * b.conj();
            }
        }
        acc
    }

    pub fn norm(&self) -> T {
        self.coeffs
            .values()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
            .sqrt()
    }

    /// `q_N(a) = sup_k ⟨k⟩^N |a_k|`.
    pub fn seminorm_q(&self, order: u32) -> T {
        self.coeffs
            .iter()
            .map(|(k, a)| japanese_lattice::<T>(k).powi(order as i32) * a.norm())
            .fold(T::zero(), |x, y| x.max(y))
    }

    /// `⟨a,b⟩_s = Σ ⟨k⟩^{2s} a_k conj(b_k)`.
    pub fn sobolev_inner(&self, s: T, other: &Self) -> Complex<T> {
        let two = lit::<T>(2.0);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, a) in &self.coeffs {
            if let Some(b) = other.coeffs.get(k) {
                acc += *a * b.conj() * japanese_lattice::<T>(k).powf(two * s);
            }
        }
        acc
    }

    /// Largest modulus of the coefficients, 0 for the zero element.
    pub fn max_abs(&self) -> T {
        self.coeffs
            .values()
            .map(|a| a.norm())
            .fold(T::zero(), |x, y| x.max(y))
    }
}

/// `k^α` as a complex scalar.
pub(crate) fn lattice_monomial<T: Real>(alpha: &MultiIndex, k: &[i64]) -> Complex<T> {
    let mut v = T::one();
    for (&a, &x) in alpha.0.iter().zip(k) {
        if a > 0 {
            v *= int::<T>(x).powi(a as i32);
        }
    }
    Complex::new(v, T::zero())
}

/// Free-function forms matching the operation names.
pub fn weyl_mul<T: Real>(a: &WeylSeries<T>, b: &WeylSeries<T>) -> Result<WeylSeries<T>> {
    a.product(b)
}

pub fn adjoint<T: Real>(a: &WeylSeries<T>) -> WeylSeries<T> {
    a.adjoint()
}

pub fn tau<T: Real>(a: &WeylSeries<T>) -> Complex<T> {
    a.tau()
}

pub fn delta<T: Real>(alpha: &MultiIndex, a: &WeylSeries<T>) -> WeylSeries<T> {
    a.delta(alpha)
}

pub(crate) fn fmt_complex<T: Real>(c: &Complex<T>) -> String {
    if c.im == T::zero() {
        format!("{}", c.re)
    } else if c.re == T::zero() {
        format!("{}i", c.im)
    } else if c.im < T::zero() {
        format!("({}-{}i)", c.re, -c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

pub(crate) fn fmt_point(k: &[i64]) -> String {
    if lattice::is_zero(k) {
        "0".to_string()
    } else {
        let parts: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl<T: Real> fmt::Display for WeylSeries<T> {
    /// `1·U_0 + (0.5-2i)·U_(1,0)`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("{}·U_{}", fmt_complex(c), fmt_point(k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
