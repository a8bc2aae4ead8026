//! Extension of lattice symbols to `ℝ^n` through `e(σ)(ξ) = Σ_k ρ̂(ξ−k) σ(k)`,
//! where `ρ(x) = ρ1(x_1)···ρ1(x_n)` and `ρ1(x) = h(1 − |x|)`.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{DeformationMatrix, WeylSeries};
use crate::error::{NctError, Result};
use crate::lattice;
use crate::quadrature::CompositeRule;
use crate::scalar::{int, lit, pairwise_sum, Real};
use crate::symbol::{smooth_step, LatticeSymbol, Restricted, ScalarLattice, SmoothSymbol, SymbolDomain};

/// Gauss–Legendre nodes per panel used for `ρ̂1`.
const PANEL_ORDER: usize = 16;
/// `ρ̂1` is tabulated on `[-HALF_WIDTH, HALF_WIDTH]` and taken as 0 beyond.
pub const HALF_WIDTH: f64 = 32.0;
/// Default truncation radius of the extension sum.
pub const DEFAULT_RADIUS: i64 = 24;
/// Tolerance of the interpolation check `ρ̂1(m) = δ_{m,0}`.
const INTERPOLATION_TOL: f64 = 1e-9;

/// `ρ1(x) = h(1 − |x|)`: even, supported in `[-1, 1]`, `ρ1(x) + ρ1(1−x) = 1` on `[0, 1]`.
pub fn rho1<T: Real>(x: T) -> T {
    let a = x.abs();
    if a >= T::one() {
        T::zero()
    } else {
        smooth_step(T::one() - a)
    }
}

/// Quadrature presets for `--profile-quality`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileQuality {
    Fast,
    Accurate,
}

impl ProfileQuality {
    /// `(panels, grid step)`.
    pub fn params(self) -> (usize, f64) {
        match self {
            ProfileQuality::Fast => (64, 0.02),
            ProfileQuality::Accurate => (128, 0.01),
        }
    }
}

/// `ρ̂1(ξ) = ∫ ρ1(x) e^{−2πixξ} dx`, tabulated on `ξ ≥ 0` and evaluated by a
/// clamped cubic spline (the function is even).
#[derive(Debug, Clone)]
pub struct BumpProfile<T> {
    panels: usize,
    step: T,
    values: Vec<T>,
    second: Vec<T>,
    /// `max |ρ̂1(ξ)|` over `12 ≤ ξ ≤ 13`; the value at the integer 12 itself
    /// vanishes by interpolation, so the envelope over a period is recorded.
    pub decay_at_12: T,
    /// `max_{|m| ≤ 20} |ρ̂1(m) − δ_{m,0}|`.
    pub interpolation_defect: T,
}

/// Persisted form of a profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileCache {
    pub panels: usize,
    pub step: f64,
    pub half_width: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

fn transform<T: Real>(rule: &CompositeRule<T>, xi: T) -> T {
    let w = T::TAU() * xi;
    lit::<T>(2.0) * rule.integrate(|x| rho1(x) * (w * x).cos())
}

fn transform_derivative<T: Real>(rule: &CompositeRule<T>, xi: T) -> T {
    let w = T::TAU() * xi;
    -lit::<T>(2.0) * rule.integrate(|x| T::TAU() * x * rho1(x) * (w * x).sin())
}

/// Second derivatives of the clamped cubic spline on a uniform grid.
fn clamped_spline<T: Real>(y: &[T], h: T, d0: T, d1: T) -> Vec<T> {
    let n = y.len() - 1;
    let six = lit::<T>(6.0);
    let mut diag = vec![lit::<T>(4.0); n + 1];
    let mut rhs = vec![T::zero(); n + 1];
    diag[0] = lit(2.0);
    diag[n] = lit(2.0);
    rhs[0] = six * ((y[1] - y[0]) / h - d0) / h;
    rhs[n] = six * (d1 - (y[n] - y[n - 1]) / h) / h;
    for i in 1..n {
        rhs[i] = six * (y[i + 1] - lit::<T>(2.0) * y[i] + y[i - 1]) / (h * h);
    }
    // Thomas algorithm with unit off-diagonals.
    for i in 1..=n {
        let w = T::one() / diag[i - 1];
        diag[i] -= w;
        rhs[i] = rhs[i] - w * rhs[i - 1];
    }
    let mut m = vec![T::zero(); n + 1];
    m[n] = rhs[n] / diag[n];
    for i in (0..n).rev() {
        m[i] = (rhs[i] - m[i + 1]) / diag[i];
    }
    m
}

impl<T: Real> BumpProfile<T> {
    /// Builds the profile with `panels` Gauss–Legendre panels on `[0, 1]` and
    /// grid step `step`.
    pub fn new(panels: usize, step: f64) -> Result<Self> {
        if panels < 64 {
            return Err(NctError::Profile(format!("{panels} quadrature panels, at least 64 required")));
        }
        if !(step > 0.0 && step <= 0.05) {
            return Err(NctError::Profile(format!("grid step {step} outside (0, 0.05]")));
        }
        let count = (HALF_WIDTH / step).round() as usize;
        let rule = CompositeRule::new(T::zero(), T::one(), panels, PANEL_ORDER);
        let h = lit::<T>(step);
        let values: Vec<T> = (0..=count)
            .into_par_iter()
            .map(|i| transform(&rule, lit::<T>(i as f64 * step)))
            .collect();
        let d1 = transform_derivative(&rule, lit::<T>(count as f64 * step));
        let second = clamped_spline(&values, h, T::zero(), d1);
        let mut p = BumpProfile {
            panels,
            step: h,
            values,
            second,
            decay_at_12: T::zero(),
            interpolation_defect: T::zero(),
        };
        p.finish()?;
        Ok(p)
    }

    pub fn preset(q: ProfileQuality) -> Result<Self> {
        let (panels, step) = q.params();
        Self::new(panels, step)
    }

    fn finish(&mut self) -> Result<()> {
        self.decay_at_12 = (0..=400)
            .map(|i| self.eval(lit(12.0 + i as f64 / 400.0)).abs())
            .fold(T::zero(), |a, b| a.max(b));
        let mut defect = T::zero();
        for m in -20..=20i64 {
            let target = if m == 0 { T::one() } else { T::zero() };
            defect = defect.max((self.eval(int(m)) - target).abs());
        }
        self.interpolation_defect = defect;
        if defect > lit(INTERPOLATION_TOL) {
            return Err(NctError::Profile(format!(
                "interpolation defect {defect} exceeds {INTERPOLATION_TOL}"
            )));
        }
        Ok(())
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn step(&self) -> T {
        self.step
    }

    /// `ρ̂1(ξ)`; zero for `|ξ| > HALF_WIDTH`.
    pub fn eval(&self, xi: T) -> T {
        let x = xi.abs();
        let h = self.step;
        let last = self.values.len() - 1;
        let pos = x / h;
        if pos > int(last as i64) {
            return T::zero();
        }
        let i = pos.floor().to_usize().unwrap_or(0).min(last - 1);
        let a = int::<T>(i as i64 + 1) * h - x;
        let b = x - int::<T>(i as i64) * h;
        let six = lit::<T>(6.0);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        m0 * a * a * a / (six * h)
            + m1 * b * b * b / (six * h)
            + (self.values[i] - m0 * h * h / six) * a / h
            + (self.values[i + 1] - m1 * h * h / six) * b / h
    }

    /// `∫_{-r}^{r} ρ̂1`, by Gauss–Legendre on the spline.
    pub fn mass(&self, r: T) -> T {
        let panels = (r.to_f64().unwrap_or(0.0) * 8.0).ceil().max(1.0) as usize;
        let rule = CompositeRule::new(-r, r, panels, 8);
        rule.integrate(|x| self.eval(x))
    }

    /// `2∫_{r}^{∞} |ρ̂1|`.
    pub fn abs_tail(&self, r: T) -> T {
        let w = lit::<T>(HALF_WIDTH);
        if r >= w {
            return T::zero();
        }
        let panels = ((w - r).to_f64().unwrap_or(0.0) * 8.0).ceil().max(1.0) as usize;
        let rule = CompositeRule::new(r, w, panels, 8);
        lit::<T>(2.0) * rule.integrate(|x| self.eval(x).abs())
    }

    pub fn to_cache(&self) -> ProfileCache {
        let step = self.step.to_f64().unwrap_or(f64::NAN);
        ProfileCache {
            panels: self.panels,
            step,
            half_width: HALF_WIDTH,
            grid: (0..self.values.len()).map(|i| i as f64 * step).collect(),
            values: self.values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_cache()).expect("serializable")
    }

    /// Rebuilds a profile from its cache; the end slope is recomputed.
    pub fn from_cache(cache: &ProfileCache) -> Result<Self> {
        if cache.values.len() < 3 || cache.grid.len() != cache.values.len() {
            return Err(NctError::Profile("malformed profile cache".into()));
        }
        if (cache.half_width - HALF_WIDTH).abs() > 1e-12 {
            return Err(NctError::Profile(format!("cache half width {} differs from {HALF_WIDTH}", cache.half_width)));
        }
        let rule = CompositeRule::new(T::zero(), T::one(), cache.panels.max(1), PANEL_ORDER);
        let h = lit::<T>(cache.step);
        let values: Vec<T> = cache.values.iter().map(|&v| lit(v)).collect();
        let d1 = transform_derivative(&rule, lit::<T>(*cache.grid.last().unwrap_or(&HALF_WIDTH)));
        let second = clamped_spline(&values, h, T::zero(), d1);
        let mut p = BumpProfile {
            panels: cache.panels,
            step: h,
            values,
            second,
            decay_at_12: T::zero(),
            interpolation_defect: T::zero(),
        };
        p.finish()?;
        Ok(p)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cache: ProfileCache = serde_json::from_str(s).map_err(|e| NctError::Parse(e.to_string()))?;
        Self::from_cache(&cache)
    }
}

/// `ρ̂1(ξ−k)` for the `2R+1` integers `k` nearest to `ξ`; returns the first
/// integer of the window.
fn axis_weights<T: Real>(profile: &BumpProfile<T>, x: T, radius: i64) -> (i64, Vec<T>) {
    let c = x.round().to_i64().unwrap_or(0);
    let start = c - radius;
    let w = (0..=2 * radius)
        .map(|j| profile.eval(x - int::<T>(start + j)))
        .collect();
    (start, w)
}

/// `e(σ)` truncated to `|k − round(ξ)|_∞ ≤ R_e`.
#[derive(Debug, Clone)]
pub struct ExtendedSymbol<S, T> {
    source: S,
    profile: Arc<BumpProfile<T>>,
    radius: i64,
}

impl<S, T: Real> ExtendedSymbol<S, T> {
    pub fn new(source: S, profile: Arc<BumpProfile<T>>, radius: i64) -> Self {
        ExtendedSymbol {
            source,
            profile,
            radius,
        }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn source(&self) -> &S {
        &self.source
    }
}

impl<T: Real, S: LatticeSymbol<T>> ExtendedSymbol<S, T> {
    /// Value and truncation estimate
    /// `n · max_{boundary} ‖σ(k)‖ · 2∫_{R_e}^{∞}|ρ̂1|`.
    pub fn eval_with_estimate(&self, xi: &[T]) -> (WeylSeries<T>, T) {
        let n = self.source.dim();
        let axes: Vec<(i64, Vec<T>)> = xi.iter().map(|&x| axis_weights(&self.profile, x, self.radius)).collect();
        let mut out = WeylSeries::zero(self.source.theta().clone());
        let mut boundary = T::zero();
        for off in lattice::cube(n, self.radius) {
            let mut w = T::one();
            let mut k = Vec::with_capacity(n);
            for (i, o) in off.iter().enumerate() {
                let j = (o + self.radius) as usize;
                w *= axes[i].1[j];
                k.push(axes[i].0 + j as i64);
            }
            let on_boundary = lattice::sup_norm(&off) == self.radius;
            if w == T::zero() && !on_boundary {
                continue;
            }
            let v = self.source.eval_lattice(&k);
            if on_boundary {
                boundary = boundary.max(v.norm());
            }
            for (l, c) in v.coeffs() {
                out.accumulate(l.clone(), *c * w);
            }
        }
        out.prune();
        let est = int::<T>(n as i64) * boundary * self.profile.abs_tail(int(self.radius));
        (out, est)
    }
}

impl<T: Real, S: SymbolDomain<T>> SymbolDomain<T> for ExtendedSymbol<S, T> {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn theta(&self) -> &Arc<DeformationMatrix<T>> {
        self.source.theta()
    }
}

impl<T: Real, S: LatticeSymbol<T>> SmoothSymbol<T> for ExtendedSymbol<S, T> {
    fn eval_real(&self, xi: &[T]) -> WeylSeries<T> {
        let n = self.source.dim();
        let axes: Vec<(i64, Vec<T>)> = xi.iter().map(|&x| axis_weights(&self.profile, x, self.radius)).collect();
        let mut out = WeylSeries::zero(self.source.theta().clone());
        for off in lattice::cube(n, self.radius) {
            let mut w = T::one();
            let mut k = Vec::with_capacity(n);
            for (i, o) in off.iter().enumerate() {
                let j = (o + self.radius) as usize;
                w *= axes[i].1[j];
                k.push(axes[i].0 + j as i64);
            }
            if w == T::zero() {
                continue;
            }
            for (l, c) in self.source.eval_lattice(&k).coeffs() {
                out.accumulate(l.clone(), *c * w);
            }
        }
        out.prune();
        out
    }
}

/// `e(σ)(ξ)`.
pub fn extend<T: Real, S: LatticeSymbol<T>>(
    sigma: S,
    xi: &[T],
    profile: Arc<BumpProfile<T>>,
    radius: i64,
) -> (WeylSeries<T>, T) {
    ExtendedSymbol::new(sigma, profile, radius).eval_with_estimate(xi)
}

/// Scalar extension `e(σ)(ξ)` of a scalar lattice symbol.
pub fn extend_scalar<T: Real, S: ScalarLattice<T> + ?Sized>(
    sigma: &S,
    xi: &[T],
    profile: &BumpProfile<T>,
    radius: i64,
) -> Complex<T> {
    let n = sigma.scalar_dim();
    let axes: Vec<(i64, Vec<T>)> = xi.iter().map(|&x| axis_weights(profile, x, radius)).collect();
    let mut acc = Complex::new(T::zero(), T::zero());
    for off in lattice::cube(n, radius) {
        let mut w = T::one();
        let mut k = Vec::with_capacity(n);
        for (i, o) in off.iter().enumerate() {
            let j = (o + radius) as usize;
            w *= axes[i].1[j];
            k.push(axes[i].0 + j as i64);
        }
        if w != T::zero() {
            acc += sigma.eval_scalar(&k) * w;
        }
    }
    acc
}

/// `r: σ ↦ σ|_{ℤ^n}`.
pub fn restrict<S>(sigma: S) -> Restricted<S> {
    Restricted(sigma)
}

/// Outcome of [`normalisation_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalisationReport {
    pub lattice_sum: f64,
    pub lattice_sum_im: f64,
    pub integral: f64,
    pub integral_im: f64,
    pub defect: f64,
}

/// Compares `Σ_{|k|_∞≤K} σ(k)` with the integral over `ℝ^n` of the
/// extension of `σ·1_{|k|_∞≤K}`.
///
/// The integral is a tensor Gauss–Legendre rule over the support box
/// `[−K−R_e−1/2, K+R_e+1/2]^n`, with panel edges on the half-integers where the
/// truncation window jumps; the tensor sum is contracted one axis at a time.
pub fn normalisation_check<T: Real, S: ScalarLattice<T> + ?Sized>(
    sigma: &S,
    cutoff: i64,
    profile: &BumpProfile<T>,
    radius: i64,
) -> NormalisationReport {
    let n = sigma.scalar_dim();
    let half = lit::<T>(0.5);
    let edge = int::<T>(cutoff + radius) + half;
    let panels = (2 * (2 * (cutoff + radius) + 1)) as usize;
    let rule = CompositeRule::new(-edge, edge, panels, 8);
    // m[j] = Σ_a w_a ρ̂1(x_a − k_j)·[|k_j − round(x_a)| ≤ R_e], k_j = j − K.
    let side = (2 * cutoff + 1) as usize;
    let m: Vec<T> = (0..side)
        .into_par_iter()
        .map(|j| {
            let k = int::<T>(j as i64 - cutoff);
            let mut parts = Vec::with_capacity(rule.nodes.len());
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let c = x.round();
                if (c - k).abs() <= int(radius) {
                    parts.push(Complex::new(w * profile.eval(x - k), T::zero()));
                }
            }
            pairwise_sum(&parts).re
        })
        .collect();
    let points = lattice::cube(n, cutoff);
    let terms: Vec<(Complex<T>, Complex<T>)> = points
        .par_iter()
        .map(|k| {
            let v = sigma.eval_scalar(k);
            let w = k
                .iter()
                .fold(T::one(), |acc, &x| acc * m[(x + cutoff) as usize]);
            (v, v * w)
        })
        .collect();
    let sum = pairwise_sum(&terms.iter().map(|t| t.0).collect::<Vec<_>>());
    let integral = pairwise_sum(&terms.iter().map(|t| t.1).collect::<Vec<_>>());
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    NormalisationReport {
        lattice_sum: f(sum.re),
        lattice_sum_im: f(sum.im),
        integral: f(integral.re),
        integral_im: f(integral.im),
        defect: f((sum - integral).norm()),
    }
}

/// Points `k + (1/2, …, 1/2)` with `|k + 1/2| ∈ [lo, hi]` along the diagonal
/// and the first axis, used to compare two extensions of the same symbol.
pub fn half_lattice_probe(n: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut r = lo.floor() as i64;
    while (r as f64) <= hi + 1.0 {
        let mut axis = vec![0.5; n];
        axis[0] = r as f64 + 0.5;
        let diag = vec![r as f64 + 0.5; n];
        for p in [axis, diag] {
            let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm >= lo && norm <= hi {
                out.push(p);
            }
        }
        r += 1;
    }
    out
}
