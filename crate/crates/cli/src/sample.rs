//! Random test data for the verification suites, in any dimension.

use std::sync::Arc;

use nctorus::{DeformationMatrix, MultiIndex, ScalarTerm, SymbolExpr, WeylSeries, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn rand_c(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn rand_point(r: &mut ChaCha8Rng, n: usize, radius: i64) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(-radius..=radius)).collect()
}

/// A uniformly random direction on `S^{n−1}`.
pub fn rand_direction(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 && norm <= 1.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn rand_series(r: &mut ChaCha8Rng, theta: &Arc<DeformationMatrix<f64>>, terms: usize, radius: i64) -> WeylSeries<f64> {
    let n = theta.dim();
    let t: Vec<(Vec<i64>, C64)> = (0..terms).map(|_| (rand_point(r, n, radius), rand_c(r))).collect();
    WeylSeries::from_terms(theta.clone(), t).expect("matching dimensions")
}

/// `size` distinct Weyl indices with `|l|_∞ ≤ 2`, including 0 when `with_zero`.
pub fn rand_support(r: &mut ChaCha8Rng, n: usize, size: usize, with_zero: bool) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    if with_zero {
        out.push(vec![0; n]);
    }
    while out.len() < size {
        let p = rand_point(r, n, 2);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// `{0, ±l_1, …, ±l_pairs}`: symbols on a common support of this shape have
/// brackets with a nonzero `τ̄`-part.
pub fn paired_support(r: &mut ChaCha8Rng, n: usize, pairs: usize) -> Vec<Vec<i64>> {
    let mut support = vec![vec![0; n]];
    while support.len() < 1 + 2 * pairs {
        let p = rand_point(r, n, 2);
        let q: Vec<i64> = p.iter().map(|x| -x).collect();
        if p != q && !support.contains(&p) {
            support.push(p);
            support.push(q);
        }
    }
    support
}

/// Classical scalar terms of order `m`: `⟨ξ⟩^m`, `ξ_i⟨ξ⟩^{m−1}`,
/// `ξ_iξ_j⟨ξ⟩^{m−2}`, `⟨ξ⟩^{m−1}` and sometimes an excised `ξ_i|ξ|^{m−1}`.
pub fn rand_terms(r: &mut ChaCha8Rng, n: usize, m: f64) -> Vec<ScalarTerm<f64>> {
    let unit = |r: &mut ChaCha8Rng| MultiIndex::unit(n, r.gen_range(0..n));
    let mut t = vec![ScalarTerm::bracket(n, rand_c(r), c(m))];
    t.push(ScalarTerm::monomial(rand_c(r), unit(r)).times_bracket(c(m - 1.0)));
    let a = unit(r).add(&unit(r));
    t.push(ScalarTerm::monomial(rand_c(r), a).times_bracket(c(m - 2.0)));
    t.push(ScalarTerm::bracket(n, rand_c(r), c(m - 1.0)));
    if r.gen_bool(0.5) {
        let a = unit(r);
        t.push(ScalarTerm::new(rand_c(r), a, c(0.0), c(m - 1.0), true).expect("excised term"));
    }
    t
}

pub fn symbol_on(r: &mut ChaCha8Rng, theta: &Arc<DeformationMatrix<f64>>, m: f64, support: &[Vec<i64>]) -> SymbolExpr<f64> {
    let n = theta.dim();
    let parts: Vec<(Vec<i64>, Vec<ScalarTerm<f64>>)> = support.iter().map(|l| (l.clone(), rand_terms(r, n, m))).collect();
    SymbolExpr::from_parts(theta.clone(), c(m), parts).expect("classical of order m")
}

pub fn rand_symbol(r: &mut ChaCha8Rng, theta: &Arc<DeformationMatrix<f64>>, m: f64, support: usize, with_zero: bool) -> SymbolExpr<f64> {
    let s = rand_support(r, theta.dim(), support, with_zero);
    symbol_on(r, theta, m, &s)
}

pub fn l1(a: &WeylSeries<f64>) -> f64 {
    a.coeffs().values().map(|z| z.norm()).sum::<f64>()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Riemann zeta for real `s ≠ 1` by Borwein's acceleration of the Dirichlet
/// eta series, `ζ(s) = η(s)/(1 − 2^{1−s})`. Independent of the library's
/// Euler–Maclaurin evaluation.
pub fn zeta_borwein(s: f64) -> f64 {
    let n = 60usize;
    let mut d = vec![0.0f64; n + 1];
    let mut term = 1.0 / n as f64;
    let mut acc = term;
    d[0] = n as f64 * acc;
    for i in 1..=n {
        let (fi, fn_) = (i as f64, n as f64);
        term *= (fn_ + fi - 1.0) * 4.0 * (fn_ - fi + 1.0) / ((2.0 * fi - 1.0) * (2.0 * fi));
        acc += term;
        d[i] = n as f64 * acc;
    }
    let mut eta = 0.0;
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        eta += sign * (d[k] - d[n]) / ((k + 1) as f64).powf(s);
    }
    eta /= -d[n];
    eta / (1.0 - 2f64.powf(1.0 - s))
}

/// Area of `S^{n−1}` from `|S^{d}| = 2π|S^{d−2}|/(d−1)`.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI * sphere_area(n - 2) / (n - 2) as f64,
    }
}
