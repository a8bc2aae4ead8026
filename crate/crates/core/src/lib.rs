//! Pseudodifferential calculus on noncommutative tori.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: the deformation matrix `Θ`, the 2-cocycle and finitely
//!   supported elements of `A_θ` ([`WeylSeries`]).
//! - [`symbol`]: toroidal symbols `ℤ^n → A_θ`, with a closed-form term
//!   algebra ([`SymbolExpr`]) supporting homogeneous resolutions.
//! - [`quantise`]: `Op_θ`, its inverse, truncated operator matrices and the
//!   lattice trace.
//! - [`star`]: exact and asymptotic star products and brackets.
//! - [`extension`]: the extension map `ℤ^n → ℝ^n` built from a bump profile.
//! - [`regularize`]: residues, cut-off integrals and sums, canonical traces.
//!
//! Everything numerical is generic over `T: Real` (`f32` or `f64`); the
//! `*64` aliases below fix `T = f64`.

pub mod algebra;
pub mod error;
pub mod extension;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod quadrature;
pub mod quantise;
pub mod regularize;
pub mod scalar;
pub mod star;
pub mod symbol;

pub use algebra::{cocycle, DeformationMatrix, WeylSeries};
pub use error::{NctError, Result};
pub use extension::{BumpProfile, ExtendedSymbol, ProfileQuality};
pub use lattice::{MultiIndex, Point};
pub use quantise::{op_trace, Operator, OperatorMatrix, Quantised, TraceConfig, TraceReport};
pub use regularize::{FinitePartReport, FitConfig, Polytope};
pub use scalar::Real;
pub use symbol::{LatticeSymbol, ScalarSymbol, ScalarTerm, SmoothSymbol, SymbolDomain, SymbolExpr};

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type DeformationMatrix64 = DeformationMatrix<f64>;
pub type DeformationMatrix32 = DeformationMatrix<f32>;
pub type WeylSeries64 = WeylSeries<f64>;
pub type WeylSeries32 = WeylSeries<f32>;
pub type SymbolExpr64 = SymbolExpr<f64>;
pub type SymbolExpr32 = SymbolExpr<f32>;
pub type ScalarSymbol64 = ScalarSymbol<f64>;
pub type ScalarSymbol32 = ScalarSymbol<f32>;
pub type ScalarTerm64 = ScalarTerm<f64>;
pub type ScalarTerm32 = ScalarTerm<f32>;
pub type BumpProfile64 = BumpProfile<f64>;
pub type BumpProfile32 = BumpProfile<f32>;
