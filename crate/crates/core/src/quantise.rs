//! Quantisation `Op_θ(σ)(a) = Σ a_k σ(k) U_k`, its inverse, truncated
//! matrices and the operator trace of trace-class symbols.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{DeformationMatrix, WeylSeries};
use crate::error::{NctError, Result};
use crate::lattice::{self, Point};
use crate::scalar::{int, japanese_lattice, lit, pairwise_sum, Real};
use crate::symbol::{LatticeSymbol, SymbolDomain};

/// A linear operator on `A_θ` known through its action on the basis `U_k`.
pub trait Operator<T: Real>: SymbolDomain<T> + Send + Sync {
    fn apply_basis(&self, k: &[i64]) -> WeylSeries<T>;

    fn apply(&self, a: &WeylSeries<T>) -> Result<WeylSeries<T>> {
        check_element(self, a)?;
        let mut out = WeylSeries::zero(self.theta().clone());
        for (k, c) in a.coeffs() {
            for (l, v) in self.apply_basis(k).coeffs() {
                out.accumulate(l.clone(), *c * *v);
            }
        }
        out.prune();
        Ok(out)
    }
}

impl<T: Real, O: Operator<T> + ?Sized> Operator<T> for &O {
    fn apply_basis(&self, k: &[i64]) -> WeylSeries<T> {
        (**self).apply_basis(k)
    }
    fn apply(&self, a: &WeylSeries<T>) -> Result<WeylSeries<T>> {
        (**self).apply(a)
    }
}

fn check_element<T: Real, O: SymbolDomain<T> + ?Sized>(op: &O, a: &WeylSeries<T>) -> Result<()> {
    if a.dim() != op.dim() {
        return Err(NctError::DimensionMismatch {
            expected: op.dim(),
            found: a.dim(),
        });
    }
    if **a.theta() != **op.theta() {
        return Err(NctError::ThetaMismatch);
    }
    Ok(())
}

fn basis<T: Real>(theta: &Arc<DeformationMatrix<T>>, k: &[i64]) -> WeylSeries<T> {
    WeylSeries::monomial(theta.clone(), k.to_vec(), Complex::new(T::one(), T::zero()))
}

/// `Op_θ(σ)`.
#[derive(Debug, Clone)]
pub struct Quantised<S>(pub S);

impl<T: Real, S: SymbolDomain<T>> SymbolDomain<T> for Quantised<S> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.0.theta()
    }
}

impl<T: Real, S: LatticeSymbol<T>> Operator<T> for Quantised<S> {
    fn apply_basis(&self, k: &[i64]) -> WeylSeries<T> {
        self.0
            .eval_lattice(k)
            .product(&basis(self.0.theta(), k))
            .expect("symbol values live in the symbol's algebra")
    }
}

/// `A ∘ B`.
#[derive(Debug, Clone)]
pub struct Composition<A, B>(pub A, pub B);

impl<T: Real, A: SymbolDomain<T>, B> SymbolDomain<T> for Composition<A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.0.theta()
    }
}

impl<T: Real, A: Operator<T>, B: Operator<T>> Operator<T> for Composition<A, B> {
    fn apply_basis(&self, k: &[i64]) -> WeylSeries<T> {
        self.0
            .apply(&self.1.apply_basis(k))
            .expect("composed operators share θ")
    }
}

/// Left multiplication `b ↦ a b` by a fixed element.
#[derive(Debug, Clone)]
pub struct LeftMul<T>(pub WeylSeries<T>);

impl<T: Real> SymbolDomain<T> for LeftMul<T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.0.theta()
    }
}

impl<T: Real> Operator<T> for LeftMul<T> {
    fn apply_basis(&self, k: &[i64]) -> WeylSeries<T> {
        self.0
            .product(&basis(self.0.theta(), k))
            .expect("same algebra")
    }
}

/// The identity operator.
#[derive(Debug, Clone)]
pub struct IdentityOp<T>(pub Arc<DeformationMatrix<T>>);

impl<T: Real> SymbolDomain<T> for IdentityOp<T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        &self.0
    }
}

impl<T: Real> Operator<T> for IdentityOp<T> {
    fn apply_basis(&self, k: &[i64]) -> WeylSeries<T> {
        basis(&self.0, k)
    }
}

/// The symbol `k ↦ A(U_k) U_{-k}` of an operator.
#[derive(Debug, Clone)]
pub struct Dequantised<O>(pub O);

impl<T: Real, O: SymbolDomain<T>> SymbolDomain<T> for Dequantised<O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.0.theta()
    }
}

impl<T: Real, O: Operator<T>> LatticeSymbol<T> for Dequantised<O> {
    fn eval_lattice(&self, k: &[i64]) -> WeylSeries<T> {
        self.0
            .apply_basis(k)
            .product(&basis(self.0.theta(), &lattice::neg(k)))
            .expect("same algebra")
    }
}

/// `Op_θ(σ)(a)`.
pub fn op_apply<T: Real, S: LatticeSymbol<T>>(sigma: &S, a: &WeylSeries<T>) -> Result<WeylSeries<T>> {
    Quantised(sigma).apply(a)
}

/// `Op_θ^{-1}(A)(k) = A(U_k) U_{-k}`.
pub fn dequantise<T: Real, O: Operator<T>>(op: &O, k: &[i64]) -> WeylSeries<T> {
    Dequantised(op).eval_lattice(k)
}

/// Entries that fall outside the truncation window.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SpillReport {
    pub radius: i64,
    pub count: usize,
    pub max_abs: f64,
    pub total_abs: f64,
    /// First few `(l, k)` pairs, in basis order of `k`.
    pub examples: Vec<(Point, Point)>,
}

impl SpillReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Dense matrix of an operator on `{U_k : |k|_∞ ≤ K}`, entry `(l, k)` being
/// the coefficient of `U_l` in `A(U_k)`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<T> {
    radius: i64,
    basis: Vec<Point>,
    index: HashMap<Point, usize>,
    entries: Vec<Complex<T>>,
    spill: SpillReport,
}

const SPILL_EXAMPLES: usize = 8;

impl<T: Real> OperatorMatrix<T> {
    pub fn new<O: Operator<T>>(op: &O, radius: i64) -> Self {
        let basis = lattice::cube(op.dim(), radius);
        let index: HashMap<Point, usize> = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let size = basis.len();
        let columns: Vec<WeylSeries<T>> = basis.par_iter().map(|k| op.apply_basis(k)).collect();
        let mut entries = vec![Complex::new(T::zero(), T::zero()); size * size];
        let mut spill = SpillReport {
            radius,
            ..Default::default()
        };
        for (col, image) in columns.iter().enumerate() {
            for (l, v) in image.coeffs() {
                match index.get(l) {
                    Some(&row) => entries[row * size + col] = *v,
                    None => {
                        let a = v.norm().to_f64().unwrap_or(f64::NAN);
                        spill.count += 1;
                        spill.total_abs += a;
                        spill.max_abs = spill.max_abs.max(a);
                        if spill.examples.len() < SPILL_EXAMPLES {
                            spill.examples.push((l.clone(), basis[col].clone()));
                        }
                    }
                }
            }
        }
        OperatorMatrix {
            radius,
            basis,
            index,
            entries,
            spill,
        }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn spill(&self) -> &SpillReport {
        &self.spill
    }

    pub fn get(&self, l: &[i64], k: &[i64]) -> Option<Complex<T>> {
        let r = *self.index.get(l)?;
        let c = *self.index.get(k)?;
        Some(self.entries[r * self.size() + c])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.size() + col]
    }

    pub fn diag_sum(&self) -> Complex<T> {
        let n = self.size();
        let d: Vec<Complex<T>> = (0..n).map(|i| self.entries[i * n + i]).collect();
        pairwise_sum(&d)
    }

    /// `self · other` on a common window.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(NctError::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        let n = self.size();
        let rows: Vec<Vec<Complex<T>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![Complex::new(T::zero(), T::zero()); n];
                for j in 0..n {
                    let a = self.entries[i * n + j];
                    if a.norm() == T::zero() {
                        continue;
                    }
                    for (r, b) in row.iter_mut().zip(&other.entries[j * n..(j + 1) * n]) {
                        *r += a * *b;
                    }
                }
                row
            })
            .collect();
        Ok(OperatorMatrix {
            radius: self.radius,
            basis: self.basis.clone(),
            index: self.index.clone(),
            entries: rows.concat(),
            spill: SpillReport {
                radius: self.radius,
                ..Default::default()
            },
        })
    }

    /// CSV rows `k_index,l_index,re,im` for nonzero entries.
    pub fn to_csv(&self) -> String {
        let n = self.size();
        let mut s = String::from("k_index,l_index,re,im\n");
        for col in 0..n {
            for row in 0..n {
                let v = self.entries[row * n + col];
                if v.norm() != T::zero() {
                    let _ = writeln!(s, "{col},{row},{},{}", v.re, v.im);
                }
            }
        }
        s
    }
}

/// `matrix(σ, K)` for a symbol.
pub fn matrix<T: Real, S: LatticeSymbol<T>>(sigma: &S, radius: i64) -> OperatorMatrix<T> {
    OperatorMatrix::new(&Quantised(sigma), radius)
}

/// Stopping rule for [`op_trace`].
#[derive(Debug, Clone, Copy)]
pub struct TraceConfig {
    pub rtol: f64,
    /// Shells always summed before the tail test applies.
    pub min_radius: i64,
    /// Upper bound on the summation radius; `None` picks about 1.6e7 points.
    pub max_radius: Option<i64>,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            rtol: 1e-10,
            min_radius: 4,
            max_radius: None,
        }
    }
}

fn default_max_radius(n: usize) -> i64 {
    let r = (1.6e7f64.powf(1.0 / n as f64) - 1.0) / 2.0;
    (r.floor() as i64).max(8)
}

/// Result of a lattice trace summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceReport<T> {
    pub value: Complex<T>,
    /// Bound on the omitted tail `Σ_{|k|_∞ > radius}`.
    pub tail_bound: T,
    pub radius: i64,
    pub converged: bool,
}

/// Sum of `τ(σ(k))` over the shell `|k|_∞ = radius`, with the envelope
/// constant `max ⟨k⟩^{-Re m}|τσ(k)|` on that shell.
fn shell_sum<T: Real, S: LatticeSymbol<T>>(sigma: &S, radius: i64, order_re: T) -> (Complex<T>, T) {
    let shell = lattice::cube_shell(sigma.dim(), radius);
    let vals: Vec<(Complex<T>, T)> = shell
        .par_iter()
        .map(|k| {
            let v = sigma.eval_trace(k);
            (v, japanese_lattice::<T>(k).powf(-order_re) * v.norm())
        })
        .collect();
    let sums: Vec<Complex<T>> = vals.iter().map(|v| v.0).collect();
    let env = vals.iter().fold(T::zero(), |m, v| m.max(v.1));
    (pairwise_sum(&sums), env)
}

/// `Σ_{|k|_∞ ≤ K} τ(σ(k))`.
pub fn diag_sum<T: Real, S: LatticeSymbol<T>>(sigma: &S, radius: i64) -> Complex<T> {
    let shells: Vec<Complex<T>> = (0..=radius).map(|r| shell_sum(sigma, r, T::zero()).0).collect();
    pairwise_sum(&shells)
}

/// Analytic tail bound `C·2n·3^{n-1}·K^{Re m + n}/(-Re m - n)` for an
/// envelope `|τσ(k)| ≤ C⟨k⟩^{Re m}`.
pub fn trace_tail_bound<T: Real>(c: T, n: usize, radius: i64, order_re: T) -> T {
    let nn = int::<T>(n as i64);
    let e = order_re + nn;
    c * lit::<T>(2.0) * nn * lit::<T>(3.0).powi(n as i32 - 1) * int::<T>(radius).powf(e) / (-e)
}

/// `Tr Op(σ) = Σ_{ℤ^n} τ(σ(k))` by increasing sup-norm shells.
pub fn op_trace<T: Real, S: LatticeSymbol<T>>(
    sigma: &S,
    order: Complex<T>,
    cfg: &TraceConfig,
) -> Result<TraceReport<T>> {
    let n = sigma.dim();
    let nn = int::<T>(n as i64);
    if order.re >= -nn {
        return Err(NctError::NotTraceClass {
            order_re: order.re.to_f64().unwrap_or(f64::NAN),
            dim: n,
        });
    }
    let max_radius = cfg.max_radius.unwrap_or_else(|| default_max_radius(n));
    let rtol = lit::<T>(cfg.rtol);
    let mut shells = Vec::new();
    let mut running = Complex::new(T::zero(), T::zero());
    let mut prev_env = T::zero();
    let mut radius = 0;
    let mut tail = T::infinity();
    loop {
        let (s, env) = shell_sum(sigma, radius, order.re);
        shells.push(s);
        running += s;
        if radius >= cfg.min_radius.max(1) {
            let c = lit::<T>(2.0) * env.max(prev_env);
            tail = trace_tail_bound(c, n, radius, order.re);
            if tail <= rtol * running.norm() {
                return Ok(TraceReport {
                    value: pairwise_sum(&shells),
                    tail_bound: tail,
                    radius,
                    converged: true,
                });
            }
        }
        if radius >= max_radius {
            break;
        }
        prev_env = env;
        radius += 1;
    }
    Ok(TraceReport {
        value: pairwise_sum(&shells),
        tail_bound: tail,
        radius,
        converged: false,
    })
}
