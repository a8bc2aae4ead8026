//! The single-computation subcommands.

use std::fmt::Write as _;
use std::path::Path;

use nctorus::json::{symbol_from_json, Cplx, SymbolJson, WeylSeriesJson};
use nctorus::quantise::{op_trace, Quantised};
use nctorus::regularize::{canonical_sum, cutoff_sum, res_theta, res_theta_quadrature, tr_theta, zeta_em, CanonicalReport};
use nctorus::star::{bracket_asympt, star_asympt, StarBracket, StarProduct};
use nctorus::symbol::{FnScalar, LatticeSymbol, ScalarLattice, SmoothSymbol, SymbolDomain, TracePart};
use nctorus::{FinitePartReport, NctError, SymbolExpr, WeylSeries, C64};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::Format;

/// Rendered output of a command, with its exit status.
pub struct Output {
    pub body: String,
    /// One line for the terminal when the body goes to a file.
    pub summary: String,
    pub exit: i32,
}

impl Output {
    fn ok(body: String, summary: String) -> Self {
        Output { body, summary, exit: 0 }
    }
}

pub fn load_symbol(path: &Path) -> Result<SymbolExpr<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    symbol_from_json(&text).map_err(|e| CliError::from(e).in_file(path))
}

fn pretty<S: Serialize>(v: &S) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn check_len(dim: usize, point_len: usize) -> Result<(), CliError> {
    if dim != point_len {
        return Err(NctError::DimensionMismatch {
            expected: dim,
            found: point_len,
        }
        .into());
    }
    Ok(())
}

fn series_csv(a: &WeylSeries<f64>) -> String {
    let n = a.dim();
    let mut out: String = (1..=n).map(|i| format!("l{i},")).collect();
    out.push_str("re,im\n");
    for (l, z) in a.coeffs() {
        for x in l {
            let _ = write!(out, "{x},");
        }
        let _ = writeln!(out, "{:e},{:e}", z.re, z.im);
    }
    out
}

fn render_series(a: &WeylSeries<f64>, format: Format, extra: serde_json::Value) -> String {
    match format {
        Format::Text => format!("{a}\n"),
        Format::Csv => series_csv(a),
        Format::Json => {
            let mut v = extra;
            v["value"] = serde_json::to_value(WeylSeriesJson::from_series(a)).expect("serializable");
            pretty(&v)
        }
    }
}

pub enum EvalAt {
    Lattice(Vec<i64>),
    Real(Vec<f64>),
}

pub fn eval(path: &Path, at: EvalAt, format: Format) -> Result<Output, CliError> {
    let s = load_symbol(path)?;
    let (value, point) = match at {
        EvalAt::Lattice(k) => {
            check_len(s.dim(), k.len())?;
            (s.eval_lattice(&k), json!({ "k": k }))
        }
        EvalAt::Real(xi) => {
            check_len(s.dim(), xi.len())?;
            (s.eval_real(&xi), json!({ "xi": xi }))
        }
    };
    let summary = format!("σ at {point}: {} Weyl terms", value.len());
    Ok(Output::ok(render_series(&value, format, json!({ "command": "eval", "point": point })), summary))
}

pub struct StarArgs {
    pub k: Option<Vec<i64>>,
    pub asympt: Option<u32>,
    pub bracket: bool,
    pub table: bool,
}

pub fn star(sigma: &Path, tau: &Path, args: StarArgs, format: Format) -> Result<Output, CliError> {
    let s = load_symbol(sigma)?;
    let t = load_symbol(tau)?;
    if let Some(k) = &args.k {
        check_len(s.dim(), k.len())?;
    }
    let name = if args.bracket { "{σ,τ}_θ" } else { "σ∘_θτ" };
    let exact = |k: &[i64]| -> Result<WeylSeries<f64>, CliError> {
        Ok(if args.bracket {
            StarBracket::new(&s, &t)?.eval_lattice(k)
        } else {
            StarProduct::new(&s, &t)?.eval_lattice(k)
        })
    };
    let expansion = |j: u32| -> Result<SymbolExpr<f64>, CliError> {
        Ok(if args.bracket { bracket_asympt(&s, &t, j)? } else { star_asympt(&s, &t, j)? })
    };
    match (args.asympt, args.k) {
        (Some(j), dir) if args.table => {
            let dir = dir.unwrap_or_else(|| {
                let mut e = vec![0; s.dim()];
                e[0] = 1;
                e
            });
            if dir.iter().all(|&x| x == 0) {
                return Err(CliError::Usage("--table needs a nonzero direction --k".into()));
            }
            let asym = expansion(j)?;
            let mut rows = Vec::new();
            for p in 0..8 {
                let scale = 1i64 << p;
                let k: Vec<i64> = dir.iter().map(|x| x * scale).collect();
                let defect = exact(&k)?.minus(&asym.eval_lattice(&k))?.max_abs();
                rows.push((scale, k, defect));
            }
            let body = match format {
                Format::Csv => {
                    let mut out = String::from("scale,k,defect\n");
                    for (scale, k, d) in &rows {
                        let ks: Vec<String> = k.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(out, "{scale},{},{d:e}", ks.join(" "));
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "command": "star",
                    "product": name,
                    "depth": j,
                    "rows": rows.iter().map(|(scale, k, d)| json!({"scale": scale, "k": k, "defect": d})).collect::<Vec<_>>(),
                })),
                Format::Text => rows
                    .iter()
                    .map(|(scale, k, d)| format!("{scale:>4} {k:?} {d:.3e}\n"))
                    .collect(),
            };
            Ok(Output::ok(body, format!("{name} expansion to depth {j}: {} rows", rows.len())))
        }
        (Some(j), None) => {
            let asym = expansion(j)?;
            let body = pretty(&SymbolJson::from_symbol(&asym));
            Ok(Output::ok(body, format!("{name} expansion to depth {j}, order {}", fmt_c(asym.order()))))
        }
        (Some(j), Some(k)) => {
            let ex = exact(&k)?;
            let asym = expansion(j)?.eval_lattice(&k);
            let defect = ex.minus(&asym)?.max_abs();
            let body = match format {
                Format::Text => format!("exact:      {ex}\nasymptotic: {asym}\ndefect:     {defect:e}\n"),
                Format::Csv => format!("defect\n{defect:e}\n"),
                Format::Json => pretty(&json!({
                    "command": "star",
                    "product": name,
                    "k": k,
                    "depth": j,
                    "exact": WeylSeriesJson::from_series(&ex),
                    "asymptotic": WeylSeriesJson::from_series(&asym),
                    "defect": defect,
                })),
            };
            Ok(Output::ok(body, format!("{name} at {k:?}: expansion defect {defect:e}")))
        }
        (None, Some(k)) => {
            let v = exact(&k)?;
            let summary = format!("{name} at {k:?}: {} Weyl terms", v.len());
            Ok(Output::ok(render_series(&v, format, json!({ "command": "star", "product": name, "k": k })), summary))
        }
        (None, None) => Err(CliError::Usage("star needs --k and/or --asympt".into())),
    }
}

fn value_body(name: &str, value: C64, report: serde_json::Value, format: Format) -> String {
    match format {
        Format::Text => format!("{name} = {}\n", fmt_c(value)),
        Format::Csv => format!("quantity,re,im\n{name},{:e},{:e}\n", value.re, value.im),
        Format::Json => pretty(&report),
    }
}

pub fn res(path: &Path, format: Format) -> Result<Output, CliError> {
    let s = load_symbol(path)?;
    let value = res_theta(&s)?;
    let quad = res_theta_quadrature(&s, 1e-12)?;
    let report = json!({
        "command": "res",
        "order": Cplx::from(s.order()),
        "value": Cplx::from(value),
        "quadrature": { "value": Cplx::from(quad.value), "converged": quad.converged, "nodes": quad.nodes },
    });
    let mut out = Output::ok(value_body("res_θ", value, report, format), format!("res_θ = {}", fmt_c(value)));
    if !quad.converged {
        out.exit = 3;
    }
    Ok(out)
}

fn partial_sums_csv(reports: &[&FinitePartReport]) -> String {
    let mut out = String::from("polytope,N,re,im\n");
    for r in reports {
        let name = r.polytope.map(|p| p.name()).unwrap_or("");
        for s in &r.samples {
            let _ = writeln!(out, "{name},{},{:e},{:e}", s.n, s.re, s.im);
        }
    }
    out
}

/// Canonical sum of `τ̄σ`, or the cut-off sum on one polytope when the
/// configuration names one. `origin` replaces the value at `k = 0`.
pub fn csum(path: &Path, origin: Option<C64>, cfg: &RunConfig, format: Format) -> Result<Output, CliError> {
    let s = load_symbol(path)?;
    let n = s.dim();
    let base = TracePart(&s);
    let sym = FnScalar::new(n, |k: &[i64]| match origin {
        Some(z) if k.iter().all(|&x| x == 0) => z,
        _ => base.eval_scalar(k),
    });
    if let Some(poly) = cfg.polytope {
        let rep = cutoff_sum(&sym, s.order(), poly, &cfg.fit)?;
        let value: C64 = rep.value();
        let body = match format {
            Format::Csv => partial_sums_csv(&[&rep]),
            Format::Json => rep.to_json() + "\n",
            Format::Text => format!("f.p. Σ over N·{} = {}\n", poly.name(), fmt_c(value)),
        };
        let mut out = Output::ok(body, format!("cut-off sum ({}) = {}", poly.name(), fmt_c(value)));
        if !rep.converged {
            out.exit = 3;
        }
        return Ok(out);
    }
    let rep: CanonicalReport = canonical_sum(&sym, s.order(), &cfg.canonical()).map_err(|e| match e {
        NctError::IntegerOrder { .. } => CliError::Usage(format!("{e}; pass --polytope to compute a polytope-dependent cut-off sum")),
        e => e.into(),
    })?;
    let value: C64 = rep.value();
    let body = match format {
        Format::Csv => partial_sums_csv(&[&rep.cube, &rep.cross]),
        Format::Json => rep.to_json() + "\n",
        Format::Text => format!(
            "−Σ_θ = {}\ncube/cross disagreement {:.1e}{}\n",
            fmt_c(value),
            rep.disagreement,
            if rep.flagged { " (flagged)" } else { "" }
        ),
    };
    let mut out = Output::ok(body, format!("−Σ_θ = {}", fmt_c(value)));
    if !rep.converged() {
        out.exit = 3;
    }
    Ok(out)
}

pub fn trace(path: &Path, cfg: &RunConfig, format: Format) -> Result<Output, CliError> {
    let s = load_symbol(path)?;
    let n = s.dim() as f64;
    let order = s.order();
    let tr = tr_theta(&Quantised(&s), order, &cfg.canonical())?;
    let value: C64 = tr.value();
    let lattice = if order.re < -n { Some(op_trace(&s, order, &cfg.trace())?) } else { None };
    let mut report = json!({
        "command": "trace",
        "order": Cplx::from(order),
        "value": Cplx::from(value),
        "canonical": serde_json::to_value(&tr).expect("serializable"),
    });
    if let Some(l) = &lattice {
        report["lattice_trace"] = json!({
            "value": Cplx::from(l.value),
            "tail_bound": l.tail_bound,
            "radius": l.radius,
            "converged": l.converged,
        });
        report["difference"] = json!((value - l.value).norm());
    }
    let body = match format {
        Format::Text => {
            let mut out = format!("TR_θ = {}\n", fmt_c(value));
            if let Some(l) = &lattice {
                let _ = writeln!(
                    out,
                    "Σ_k τ(σ(k)) = {} (radius {}, tail bound {:.1e}{}), difference {:.1e}",
                    fmt_c(l.value),
                    l.radius,
                    l.tail_bound,
                    if l.converged { "" } else { ", not converged" },
                    (value - l.value).norm()
                );
            }
            out
        }
        Format::Csv => partial_sums_csv(&[&tr.cube, &tr.cross]),
        Format::Json => pretty(&report),
    };
    let mut out = Output::ok(body, format!("TR_θ = {}", fmt_c(value)));
    if !tr.converged() {
        out.exit = 3;
    }
    Ok(out)
}

pub fn zeta(s: C64, format: Format) -> Result<Output, CliError> {
    let value = zeta_em(s)?;
    let report = json!({ "command": "zeta", "s": Cplx::from(s), "value": Cplx::from(value) });
    Ok(Output::ok(value_body("ζ(s)", value, report, format), format!("ζ({}) = {}", fmt_c(s), fmt_c(value))))
}
