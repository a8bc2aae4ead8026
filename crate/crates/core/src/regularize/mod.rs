//! Finite parts and regularized traces.

mod csum;
mod cutoff;
mod sphere;
mod traces;
mod zeta;

use std::fmt::Write as _;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::json::Cplx;
use crate::lattice::{self, Point};

pub use csum::{cutoff_sum, partial_sums};
pub use cutoff::cutoff_integral;
pub use sphere::{sphere_integral, sphere_integral_terms, sphere_monomial_integral, SphereQuadrature};
pub use traces::{
    canonical_sum, canonical_sum_theta, leading_trace, res_theta, res_theta_op, res_theta_quadrature,
    tr_theta, CanonicalConfig, CanonicalReport, LeadingFunctional, LeadingKind,
};
pub use zeta::zeta_em;

/// Expanding polytope `NΔ ∩ ℤ^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polytope {
    /// `|k|_∞ ≤ N`.
    #[default]
    Cube,
    /// `|k|_1 ≤ N`.
    Cross,
}

impl Polytope {
    /// Lattice points on the boundary layer of `NΔ`.
    pub fn shell(self, n: usize, radius: i64) -> Vec<Point> {
        match self {
            Polytope::Cube => lattice::cube_shell(n, radius),
            Polytope::Cross => lattice::cross_shell(n, radius),
        }
    }

    pub fn contains(self, k: &[i64], radius: i64) -> bool {
        match self {
            Polytope::Cube => lattice::sup_norm(k) <= radius,
            Polytope::Cross => lattice::one_norm(k) <= radius,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Polytope::Cube => "cube",
            Polytope::Cross => "cross",
        }
    }
}

impl std::str::FromStr for Polytope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cube" => Ok(Polytope::Cube),
            "cross" => Ok(Polytope::Cross),
            _ => Err(format!("unknown polytope `{s}` (expected cube or cross)")),
        }
    }
}

/// Least-squares model for the partial sums `S(N)`:
/// `c_0 + Σ_j c_j N^{m+n−j}` over the exponents with real part above
/// `max(exponent_floor, m + n − exponent_span)`, plus `c_L log N` at integer
/// orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    pub n_min: i64,
    pub n_max: i64,
    pub exponent_floor: f64,
    /// Exponents are also kept within this distance of the leading one
    /// `m + n`; a longer ladder amplifies roundoff in fast-growing sums.
    pub exponent_span: f64,
    /// `None` selects the log column exactly at integer orders `m ≥ −n`.
    pub include_log: Option<bool>,
    pub scale_columns: bool,
    pub residual_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            n_min: 20,
            n_max: 60,
            exponent_floor: -6.0,
            exponent_span: 7.0,
            include_log: None,
            scale_columns: true,
            residual_tol: 1e-6,
        }
    }
}

impl FitConfig {
    pub fn window(mut self, n_min: i64, n_max: i64) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCoefficient {
    pub exponent: Cplx,
    pub coefficient: Cplx,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumSample {
    pub n: i64,
    pub re: f64,
    pub im: f64,
}

/// Finite part of a divergent integral or sum, with the divergent pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePartReport {
    /// `"cutoff_integral"` or `"cutoff_sum"`.
    pub kind: String,
    pub dim: usize,
    pub order: Cplx,
    pub value: Cplx,
    /// Coefficients of `R^p` (or `N^p`) with `Re p ≥ 0`, `p ≠ 0`.
    pub power_coefficients: Vec<PowerCoefficient>,
    pub log_coefficient: Cplx,
    /// Max relative fit residual (sums) or quadrature refinement defect (integrals).
    pub residual: f64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polytope: Option<Polytope>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    /// Plain partial sum at the top of the window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_sum: Option<Cplx>,
    /// Rough error scale of `value`: roundoff amplification plus the size of
    /// the last fitted powers at `N_min`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
    /// All exponents of the fitted power ladder, including negative ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fitted_exponents: Vec<Cplx>,
    #[serde(skip)]
    pub samples: Vec<SumSample>,
}

impl FinitePartReport {
    pub fn value<T: crate::scalar::Real>(&self) -> Complex<T> {
        self.value.to_complex()
    }

    /// Coefficient of the power with exponent closest to `p`, if within `1e-9`.
    pub fn power_coefficient(&self, p: Complex<f64>) -> Option<Complex<f64>> {
        self.power_coefficients
            .iter()
            .find(|c| (Complex::new(c.exponent.re, c.exponent.im) - p).norm() < 1e-9)
            .map(|c| Complex::new(c.coefficient.re, c.coefficient.im))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// `N,re,im` rows of the sampled partial sums.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,re,im\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{:.17e},{:.17e}", s.n, s.re, s.im);
        }
        out
    }
}
