#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use nctorus::symbol::ScalarTerm;
use nctorus::{DeformationMatrix, MultiIndex, SymbolExpr, WeylSeries, C64};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn theta2(t: f64) -> Arc<DeformationMatrix<f64>> {
    Arc::new(DeformationMatrix::two_dim(t))
}

pub const THETAS: [f64; 3] = [0.0, 1.0 / 3.0, std::f64::consts::FRAC_1_SQRT_2];

pub fn rand_c(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub fn rand_point(r: &mut ChaCha8Rng, n: usize, radius: i64) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(-radius..=radius)).collect()
}

/// Up to `terms` monomials with `|k|_∞ ≤ radius`.
pub fn rand_series(r: &mut ChaCha8Rng, theta: &Arc<DeformationMatrix<f64>>, terms: usize, radius: i64) -> WeylSeries<f64> {
    let n = theta.dim();
    let t: Vec<(Vec<i64>, C64)> = (0..terms).map(|_| (rand_point(r, n, radius), rand_c(r))).collect();
    WeylSeries::from_terms(theta.clone(), t).unwrap()
}

/// Distinct random Weyl indices, always including 0 when `with_zero`.
pub fn rand_support(r: &mut ChaCha8Rng, n: usize, size: usize, radius: i64, with_zero: bool) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    if with_zero {
        out.push(vec![0; n]);
    }
    while out.len() < size {
        let p = rand_point(r, n, radius);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Classical scalar terms of order `m` in `n = 2`: `⟨ξ⟩^m`, `ξ_i⟨ξ⟩^{m−1}`,
/// `ξ_iξ_j⟨ξ⟩^{m−2}`, a lower-order `⟨ξ⟩^{m−1}`, and for non-integer `m` an
/// excised `ξ_i|ξ|^{m−1}`.
pub fn rand_terms(r: &mut ChaCha8Rng, m: f64) -> Vec<ScalarTerm<f64>> {
    let mut t = vec![ScalarTerm::bracket(2, rand_c(r), c(m))];
    let i = r.gen_range(0..2usize);
    t.push(ScalarTerm::monomial(rand_c(r), MultiIndex::unit(2, i)).times_bracket(c(m - 1.0)));
    let a = MultiIndex::unit(2, r.gen_range(0..2usize)).add(&MultiIndex::unit(2, r.gen_range(0..2usize)));
    t.push(ScalarTerm::monomial(rand_c(r), a).times_bracket(c(m - 2.0)));
    t.push(ScalarTerm::bracket(2, rand_c(r), c(m - 1.0)));
    if r.gen_bool(0.5) {
        let a = MultiIndex::unit(2, r.gen_range(0..2usize));
        t.push(ScalarTerm::new(rand_c(r), a, c(0.0), c(m - 1.0), true).unwrap());
    }
    t
}

/// Random classical `A_θ`-valued symbol of order `m` with Weyl support of
/// size `support` inside `|l|_∞ ≤ 2`.
pub fn rand_symbol(r: &mut ChaCha8Rng, theta: &Arc<DeformationMatrix<f64>>, m: f64, support: usize, with_zero: bool) -> SymbolExpr<f64> {
    let parts: Vec<(Vec<i64>, Vec<ScalarTerm<f64>>)> = rand_support(r, 2, support, 2, with_zero)
        .into_iter()
        .map(|l| (l, rand_terms(r, m)))
        .collect();
    SymbolExpr::from_parts(theta.clone(), c(m), parts).unwrap()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Riemann zeta for real `s ≠ 1` by Borwein's alternating-series
/// acceleration of the Dirichlet eta function, `ζ(s) = η(s)/(1 − 2^{1−s})`.
pub fn zeta_borwein(s: f64) -> f64 {
    let n = 60usize;
    // d_k = n Σ_{i=0}^{k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let mut d = vec![0.0f64; n + 1];
    let mut term = 1.0 / n as f64; // i = 0 term divided by n
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

/// Jacobi theta `Σ_{k∈ℤ} e^{−tk²}`, using the modular transform for small `t`.
pub fn theta3(t: f64) -> f64 {
    if t < 1.0 {
        let s: f64 = (1..40).map(|k| (-(PI * PI) * (k * k) as f64 / t).exp()).sum();
        (PI / t).sqrt() * (1.0 + 2.0 * s)
    } else {
        1.0 + 2.0 * (1..40).map(|k| (-t * (k * k) as f64).exp()).sum::<f64>()
    }
}

/// `Σ_{k∈ℤ²} (1+|k|²)^{−p}` for an integer `p ≥ 2`, from
/// `(1+x)^{−p} = Γ(p)^{−1}∫_0^∞ t^{p−1}e^{−t(1+x)}dt`.
pub fn bracket_lattice_sum_2d(p: i32) -> f64 {
    let gamma: f64 = (1..p).map(|i| i as f64).product();
    let (nodes, weights) = nctorus::quadrature::gauss_legendre(32);
    let mut acc = 0.0;
    let panels = 800;
    let (a, b) = (0.0, 80.0);
    let h = (b - a) / panels as f64;
    for q in 0..panels {
        let mid = a + h * (q as f64 + 0.5);
        for (x, w) in nodes.iter().zip(&weights) {
            let t = mid + 0.5 * h * x;
            acc += 0.5 * h * w * t.powi(p - 1) * (-t).exp() * theta3(t).powi(2);
        }
    }
    acc / gamma
}

/// Weyl support `{0, ±l_1, .., ±l_pairs}`. Two symbols on a common support of
/// this shape have a bracket whose `τ̄`-part is genuinely nonzero.
pub fn paired_support(r: &mut ChaCha8Rng, pairs: usize) -> Vec<Vec<i64>> {
    let mut support: Vec<Vec<i64>> = vec![vec![0, 0]];
    while support.len() < 1 + 2 * pairs {
        let p = rand_point(r, 2, 2);
        let q: Vec<i64> = p.iter().map(|x| -x).collect();
        if p != q && !support.contains(&p) {
            support.push(p);
            support.push(q);
        }
    }
    support
}

/// Random classical symbol of order `m` on the given Weyl support.
pub fn symbol_on(r: &mut ChaCha8Rng, theta: &Arc<DeformationMatrix<f64>>, m: f64, support: &[Vec<i64>]) -> SymbolExpr<f64> {
    let parts: Vec<(Vec<i64>, Vec<ScalarTerm<f64>>)> = support.iter().map(|l| (l.clone(), rand_terms(r, m))).collect();
    SymbolExpr::from_parts(theta.clone(), c(m), parts).unwrap()
}
