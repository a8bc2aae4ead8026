use std::path::PathBuf;
use std::process::{Command, Output};

use nctorus::json::symbol_from_json;
use nctorus::{LatticeSymbol, SmoothSymbol, SymbolDomain, SymbolExpr, WeylSeries, C64};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn nct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nct")).args(args).output().expect("nct runs")
}

fn nct_on(args: &[&str], file: &str) -> Output {
    let path = fixture(file);
    let mut all: Vec<&str> = args.to_vec();
    all.insert(1, path.to_str().unwrap());
    nct(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(o));
    serde_json::from_str(&stdout(o)).expect("json output")
}

fn cplx(v: &Value) -> C64 {
    C64::new(v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap_or(0.0))
}

fn symbol(name: &str) -> SymbolExpr<f64> {
    symbol_from_json(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

/// Maximum coefficient gap between a printed series and a library series.
fn series_gap(printed: &Value, expect: &WeylSeries<f64>) -> f64 {
    let coeffs = printed["coeffs"].as_array().unwrap();
    let mut gap: f64 = 0.0;
    for c in coeffs {
        let k: Vec<i64> = c["k"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        gap = gap.max((cplx(c) - expect.coeff(&k)).norm());
    }
    for (k, v) in expect.coeffs() {
        let listed = coeffs.iter().any(|c| c["k"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).eq(k.iter().copied()));
        if !listed {
            gap = gap.max(v.norm());
        }
    }
    gap
}

#[test]
fn eval_unit_symbol() {
    let o = nct_on(&["eval", "--k", "3,-7"], "unit.json");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1·U_0\n");
}

#[test]
fn eval_matches_library() {
    for name in ["mixed.json", "residue.json", "trace_class.json"] {
        let s = symbol(name);
        for k in [[0i64, 0], [-2, 5], [7, 1]] {
            let arg = format!("{},{}", k[0], k[1]);
            let v = json(&nct_on(&["eval", "--format", "json", &format!("--k={arg}")], name));
            assert!(series_gap(&v["value"], &s.eval_lattice(&k)) < 1e-15, "{name} at {k:?}");
        }
        let v = json(&nct_on(&["eval", "--format", "json", "--xi=0.5,-1.25"], name));
        assert!(series_gap(&v["value"], &s.eval_real(&[0.5, -1.25])) < 1e-15, "{name}");
    }
}

#[test]
fn malformed_symbol_reports_position() {
    let o = nct_on(&["eval", "--k", "1,1"], "malformed.json");
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("malformed.json") && e.contains("line 3, column 11"), "{e}");
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = nct(&["res", "/nonexistent/symbol.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn star_with_unit_is_identity() {
    let sigma = symbol("mixed.json");
    let (m, u) = (fixture("mixed.json"), fixture("unit.json"));
    for (a, b) in [(&m, &u), (&u, &m)] {
        let o = nct(&["star", a.to_str().unwrap(), b.to_str().unwrap(), "--k=2,-1", "--format", "json"]);
        let v = json(&o);
        assert!(series_gap(&v["value"], &sigma.eval_lattice(&[2, -1])) < 1e-15);
    }
}

#[test]
fn star_bracket_with_monomial() {
    // {σ, U_l}(k) = σ(k+l)U_l − U_lσ(k), computed with the Weyl product.
    let sigma = symbol("mixed.json");
    let theta = sigma.theta().clone();
    let l = vec![1i64, -2];
    let ul = WeylSeries::monomial(theta, l.clone(), C64::new(1.0, 0.0));
    for k in [[2i64, 1], [-3, 4], [0, 0]] {
        let kl = [k[0] + l[0], k[1] + l[1]];
        let expect = sigma.eval_lattice(&kl).product(&ul).unwrap().minus(&ul.product(&sigma.eval_lattice(&k)).unwrap()).unwrap();
        let o = nct(&[
            "star",
            fixture("mixed.json").to_str().unwrap(),
            fixture("monomial.json").to_str().unwrap(),
            "--bracket",
            &format!("--k={},{}", k[0], k[1]),
            "--format",
            "json",
        ]);
        let v = json(&o);
        assert!(series_gap(&v["value"], &expect) < 1e-15, "k = {k:?}");
    }
}

#[test]
fn star_table_defects_decay() {
    let m = fixture("mixed.json");
    let o = nct(&["star", m.to_str().unwrap(), m.to_str().unwrap(), "--asympt", "1", "--table", "--k", "1,2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("scale,k,defect"));
    let defects: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(defects.len(), 8);
    // Order 2·(−1.5) − 2 = −5, so doubling the point divides the defect by about 32.
    for w in defects.windows(2).skip(3) {
        let ratio = w[0] / w[1];
        assert!(ratio > 20.0 && ratio < 50.0, "{defects:?}");
    }
}

#[test]
fn star_without_point_or_depth_is_usage_error() {
    let m = fixture("mixed.json");
    let o = nct(&["star", m.to_str().unwrap(), m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn residue_fixture() {
    // Only the U_0 part ⟨ξ⟩^{−2} contributes: res = |S^1| = 2π.
    let v = json(&nct_on(&["res", "--format", "json"], "residue.json"));
    let z = cplx(&v["value"]);
    assert!((z - C64::new(2.0 * std::f64::consts::PI, 0.0)).norm() < 1e-12, "{z}");
}

/// ζ(1/2) to 16 digits, tabulated.
const ZETA_HALF: f64 = -1.460_354_508_809_586_8;

#[test]
fn canonical_sum_of_radial_power() {
    // Σ_{k≠0} |k|^{−1/2} regularizes to 2ζ(1/2); the origin contributes 1.
    let v = json(&nct_on(&["csum", "--origin", "1", "--format", "json"], "radial_1d.json"));
    let z = cplx(&v["value"]);
    assert!((z.re - (1.0 + 2.0 * ZETA_HALF)).abs() < 1e-6, "{z}");
    assert!(z.im.abs() < 1e-12);
}

#[test]
fn integer_order_needs_polytope() {
    let o = nct_on(&["csum"], "integer_order.json");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--polytope"));
    let v = json(&nct_on(&["csum", "--polytope", "cube", "--format", "json"], "integer_order.json"));
    assert_eq!(v["polytope"], "cube");
    assert!(cplx(&v["value"]).norm().is_finite());
}

#[test]
fn trace_agrees_with_lattice_trace() {
    let v = json(&nct_on(&["trace", "--format", "json"], "trace_class.json"));
    let canonical = cplx(&v["value"]);
    let lattice = cplx(&v["lattice_trace"]["value"]);
    let tail = v["lattice_trace"]["tail_bound"].as_f64().unwrap();
    assert!((canonical - lattice).norm() <= tail + 1e-9, "{canonical} vs {lattice}, tail {tail}");
}

#[test]
fn zeta_values() {
    let v = json(&nct(&["zeta", "2", "--format", "json"]));
    assert!((cplx(&v["value"]).re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    let v = json(&nct(&["zeta", "0.5", "--format", "json"]));
    assert!((cplx(&v["value"]).re - ZETA_HALF).abs() < 1e-12);
}

#[test]
fn verify_algebra_passes() {
    let o = nct(&["verify", "algebra"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("9 passed"));
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = nct(&["verify", "traces", "--seed", "42", "--format", "json", "--out", p.to_str().unwrap()]);
        assert_ne!(o.status.code(), Some(2), "{}", stderr(&o));
        assert!(stdout(&o).contains("seed 42"));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    let v: Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(v["seed"], 42);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c.get("runtime_s").is_none()));
}

#[test]
fn injected_fault_is_detected() {
    let o = nct(&["verify", "algebra", "--inject-fault", "cocycle-sign", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("algebra,weyl_product,")).unwrap();
    assert!(row.contains(",FAIL,"), "{row}");
}

#[test]
fn unknown_suite_is_rejected() {
    let o = nct(&["verify", "geometry"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cfg.json");
    std::fs::write(&p, r#"{"dim": 3, "theta": 0.5}"#).unwrap();
    let o = nct(&["verify", "algebra", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&p, r#"{"seeed": 1}"#).unwrap();
    let o = nct(&["verify", "algebra", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seeed"));
}

#[test]
fn timings_are_opt_in() {
    let o = nct(&["verify", "algebra", "--timings", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().next().unwrap().ends_with(",runtime_s"));
}
