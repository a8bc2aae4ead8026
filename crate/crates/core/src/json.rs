//! JSON forms of Weyl series and symbols.
//!
//! ```json
//! {"dim": 2, "theta": [[0, 0.5], [-0.5, 0]],
//!  "coeffs": [{"k": [1, 0], "re": 1.0, "im": 0.0}]}
//! ```

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::algebra::{DeformationMatrix, WeylSeries};
use crate::error::{NctError, Result};
use crate::lattice::{MultiIndex, Point};
use crate::scalar::{lit, Real};
use crate::symbol::{ScalarTerm, SymbolDomain, SymbolExpr};

/// `{"re": x, "im": y}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Cplx {
    pub fn new(re: f64, im: f64) -> Self {
        Cplx { re, im }
    }

    pub fn from_complex<T: Real>(z: Complex<T>) -> Self {
        Cplx {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        Complex::new(lit(self.re), lit(self.im))
    }
}

impl<T: Real> From<Complex<T>> for Cplx {
    fn from(z: Complex<T>) -> Self {
        Cplx::from_complex(z)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffJson {
    pub k: Point,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylSeriesJson {
    pub dim: usize,
    pub theta: Vec<Vec<f64>>,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub c: Cplx,
    pub alpha: Vec<u32>,
    #[serde(default)]
    pub mb: Cplx,
    #[serde(default)]
    pub s: Cplx,
    #[serde(default)]
    pub excised: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartJson {
    pub weyl: Point,
    pub scalars: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolJson {
    pub dim: usize,
    pub theta: Vec<Vec<f64>>,
    pub order: Cplx,
    pub terms: Vec<PartJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

pub(crate) fn parse_err(e: serde_json::Error) -> NctError {
    NctError::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
}

fn theta_rows<T: Real>(theta: &DeformationMatrix<T>) -> Vec<Vec<f64>> {
    theta
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
        .collect()
}

/// Builds and validates a deformation matrix from JSON rows.
pub fn theta_from_rows<T: Real>(dim: usize, rows: &[Vec<f64>]) -> Result<DeformationMatrix<T>> {
    if rows.len() != dim {
        return Err(NctError::DimensionMismatch {
            expected: dim,
            found: rows.len(),
        });
    }
    DeformationMatrix::new(rows.iter().map(|r| r.iter().map(|&x| lit(x)).collect()).collect())
}

impl WeylSeriesJson {
    pub fn from_series<T: Real>(a: &WeylSeries<T>) -> Self {
        WeylSeriesJson {
            dim: a.dim(),
            theta: theta_rows(a.theta()),
            coeffs: a
                .coeffs()
                .iter()
                .map(|(k, c)| CoeffJson {
                    k: k.clone(),
                    re: c.re.to_f64().unwrap_or(f64::NAN),
                    im: c.im.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
        }
    }

    pub fn to_series<T: Real>(&self) -> Result<WeylSeries<T>> {
        let theta = Arc::new(theta_from_rows::<T>(self.dim, &self.theta)?);
        WeylSeries::from_terms(
            theta,
            self.coeffs
                .iter()
                .map(|c| (c.k.clone(), Complex::new(lit(c.re), lit(c.im)))),
        )
    }
}

impl SymbolJson {
    pub fn from_symbol<T: Real>(s: &SymbolExpr<T>) -> Self {
        SymbolJson {
            dim: s.dim(),
            theta: theta_rows(s.theta()),
            order: s.order().into(),
            terms: s
                .parts()
                .iter()
                .map(|(l, terms)| PartJson {
                    weyl: l.clone(),
                    scalars: terms
                        .iter()
                        .map(|t| TermJson {
                            c: t.coeff().into(),
                            alpha: t.alpha().0.clone(),
                            mb: t.mb().into(),
                            s: t.s().into(),
                            excised: t.excised(),
                        })
                        .collect(),
                })
                .collect(),
            depth: None,
        }
    }

    pub fn to_symbol<T: Real>(&self) -> Result<SymbolExpr<T>> {
        let theta = Arc::new(theta_from_rows::<T>(self.dim, &self.theta)?);
        let mut parts = Vec::with_capacity(self.terms.len());
        for p in &self.terms {
            let mut terms = Vec::with_capacity(p.scalars.len());
            for t in &p.scalars {
                if t.alpha.len() != self.dim {
                    return Err(NctError::DimensionMismatch {
                        expected: self.dim,
                        found: t.alpha.len(),
                    });
                }
                terms.push(ScalarTerm::new(
                    t.c.to_complex(),
                    MultiIndex(t.alpha.clone()),
                    t.mb.to_complex(),
                    t.s.to_complex(),
                    t.excised,
                )?);
            }
            parts.push((p.weyl.clone(), terms));
        }
        let s = SymbolExpr::from_parts(theta, self.order.to_complex(), parts)?;
        Ok(match self.depth {
            Some(d) => s.with_depth(d),
            None => s,
        })
    }
}

pub fn weyl_to_json<T: Real>(a: &WeylSeries<T>) -> String {
    serde_json::to_string(&WeylSeriesJson::from_series(a)).expect("serializable")
}

pub fn weyl_from_json<T: Real>(s: &str) -> Result<WeylSeries<T>> {
    let j: WeylSeriesJson = serde_json::from_str(s).map_err(parse_err)?;
    j.to_series()
}

pub fn symbol_to_json<T: Real>(s: &SymbolExpr<T>) -> String {
    serde_json::to_string_pretty(&SymbolJson::from_symbol(s)).expect("serializable")
}

pub fn symbol_from_json<T: Real>(s: &str) -> Result<SymbolExpr<T>> {
    let j: SymbolJson = serde_json::from_str(s).map_err(parse_err)?;
    j.to_symbol()
}
