use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use nctorus::extension::{ProfileQuality, DEFAULT_RADIUS};
use nctorus::regularize::CanonicalConfig;
use nctorus::{DeformationMatrix, FitConfig, Polytope, TraceConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `"zero"`, a single `θ0` (two dimensions only) or a full matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    Named(String),
    Theta0(f64),
    Matrix(Vec<Vec<f64>>),
}

impl Default for ThetaSpec {
    fn default() -> Self {
        ThetaSpec::Theta0(std::f64::consts::FRAC_1_SQRT_2)
    }
}

impl ThetaSpec {
    pub fn build(&self, dim: usize) -> Result<DeformationMatrix<f64>, CliError> {
        match self {
            ThetaSpec::Named(s) if s == "zero" => Ok(DeformationMatrix::zero(dim)),
            ThetaSpec::Named(s) => Err(CliError::Config(format!("unknown θ specification `{s}` (expected \"zero\", a number or a matrix)"))),
            ThetaSpec::Theta0(t) if dim == 2 => Ok(DeformationMatrix::two_dim(*t)),
            ThetaSpec::Theta0(_) => Err(CliError::Config(format!("a single θ0 needs dim = 2, got dim = {dim}"))),
            ThetaSpec::Matrix(rows) => Ok(nctorus::json::theta_from_rows(dim, rows)?),
        }
    }
}

/// Everything a run depends on. Echoed verbatim in every verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub theta: ThetaSpec,
    pub seed: u64,
    /// Sup-norm window of truncated operator matrices.
    pub matrix_radius: i64,
    /// Largest shell summed by the lattice trace; `None` uses the library default.
    pub trace_max_radius: Option<i64>,
    pub trace_rtol: f64,
    /// Truncation radius `R_e` of the extension map.
    pub extension_radius: i64,
    pub profile_quality: ProfileQuality,
    pub fit: FitConfig,
    /// Polytope for integer-order cut-off sums; canonical sums use both.
    pub polytope: Option<Polytope>,
    /// Canonical-sum tolerance: cube and cross values further apart than
    /// twice this are flagged.
    pub canonical_tol: f64,
    /// Replaces every check tolerance when set.
    pub tol: Option<f64>,
    /// Per-check tolerance overrides keyed by `suite/check`.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 2,
            theta: ThetaSpec::default(),
            seed: 0,
            matrix_radius: 6,
            trace_max_radius: None,
            trace_rtol: TraceConfig::default().rtol,
            extension_radius: DEFAULT_RADIUS,
            profile_quality: ProfileQuality::Accurate,
            fit: FitConfig::default(),
            polytope: None,
            canonical_tol: CanonicalConfig::default().tol,
            tol: None,
            tolerances: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
        })
    }

    /// Checks the deformation matrix and the numeric settings.
    pub fn validate(&self) -> Result<Arc<DeformationMatrix<f64>>, CliError> {
        if self.dim == 0 {
            return Err(CliError::Config("dim must be positive".into()));
        }
        if self.matrix_radius < 1 || self.extension_radius < 1 {
            return Err(CliError::Config("matrix_radius and extension_radius must be at least 1".into()));
        }
        if self.fit.n_min < 1 || self.fit.n_max <= self.fit.n_min {
            return Err(CliError::Config(format!(
                "fit window [{}, {}] must satisfy 1 ≤ N_min < N_max",
                self.fit.n_min, self.fit.n_max
            )));
        }
        for (name, t) in self.tol.iter().map(|t| ("--tol", t)).chain(self.tolerances.iter().map(|(k, t)| (k.as_str(), t))) {
            if !(*t > 0.0) || !t.is_finite() {
                return Err(CliError::Config(format!("tolerance for {name} must be positive and finite, got {t}")));
            }
        }
        Ok(Arc::new(self.theta.build(self.dim)?))
    }

    pub fn canonical(&self) -> CanonicalConfig {
        CanonicalConfig {
            fit: self.fit.clone(),
            tol: self.canonical_tol,
        }
    }

    pub fn trace(&self) -> TraceConfig {
        TraceConfig {
            rtol: self.trace_rtol,
            max_radius: self.trace_max_radius,
            ..TraceConfig::default()
        }
    }

    /// Tolerance for `suite/check`, after overrides.
    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tol.or_else(|| self.tolerances.get(key).copied()).unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_specs() {
        let zero: RunConfig = serde_json::from_str(r#"{"theta": "zero"}"#).unwrap();
        assert_eq!(*zero.validate().unwrap(), DeformationMatrix::zero(2));
        let single: RunConfig = serde_json::from_str(r#"{"theta": 0.25}"#).unwrap();
        assert_eq!(*single.validate().unwrap(), DeformationMatrix::two_dim(0.25));
        let full: RunConfig =
            serde_json::from_str(r#"{"dim": 3, "theta": [[0, 0.1, 0], [-0.1, 0, 0.2], [0, -0.2, 0]]}"#).unwrap();
        assert_eq!(full.validate().unwrap().dim(), 3);
        let skew: RunConfig = serde_json::from_str(r#"{"theta": [[0, 0.1], [0.1, 0]]}"#).unwrap();
        assert!(skew.validate().is_err());
        let wrong: RunConfig = serde_json::from_str(r#"{"dim": 3, "theta": 0.1}"#).unwrap();
        assert!(wrong.validate().is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"thetta": 0.1}"#).is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let mut cfg = RunConfig::default();
        cfg.tolerances.insert("algebra/trace".into(), 1e-3);
        assert_eq!(cfg.tolerance("algebra/trace", 1e-12), 1e-3);
        assert_eq!(cfg.tolerance("algebra/other", 1e-12), 1e-12);
        cfg.tol = Some(0.5);
        assert_eq!(cfg.tolerance("algebra/trace", 1e-12), 0.5);
    }
}
