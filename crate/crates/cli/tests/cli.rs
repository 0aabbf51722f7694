use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use vps_core::dsl::{parse_expr, parse_form, parse_model, parse_operator};

fn model(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
    root.join(format!("{name}.vps")).display().to_string()
}

fn vps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vps")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = vps(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (code(&o), v)
}

#[test]
fn el_prints_the_equation() {
    let o = vps(&["el", "-m", &model("oscillator"), "-L", "L"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(-u[t,t] - u)\n");
}

#[test]
fn noether_json_report() {
    let (c, v) = json(&["noether", "-m", &model("oscillator"), "-L", "L", "--symmetry", "timeshift"]);
    assert_eq!(c, 0);
    assert_eq!(v["command"], "noether");
    assert_eq!(v["model"], "oscillator");
    assert_eq!(v["status"], "pass");
    assert!(v["ms"].is_u64());
    let items = v["items"].as_array().unwrap();
    let current = items.iter().find(|i| i["certificate"].is_array()).expect("certificate item");
    assert_eq!(current["witness"], "(-1/2*u[t]^2 - 1/2*u^2)*[]");
    assert_eq!(current["certificate"][0], "(u[t])*E[u]");
    for item in items {
        let keys: Vec<&str> = item.as_object().unwrap().keys().map(String::as_str).collect();
        assert!(keys.iter().all(|k| ["name", "status", "witness", "certificate"].contains(k)));
    }
}

#[test]
fn exit_codes() {
    let osc = model("oscillator");
    assert_eq!(code(&vps(&["noether", "-m", &osc, "--symmetry", "scaling"])), 1);
    assert_eq!(code(&vps(&["gauge", "-m", &osc, "--operator", "dt"])), 1);
    assert_eq!(code(&vps(&["kernel", "-m", &osc, "--symmetry", "timeshift"])), 2);
    assert_eq!(code(&vps(&["frobnicate"])), 64);
    assert_eq!(code(&vps(&["el"])), 64);
    assert_eq!(code(&vps(&["el", "-m", "/nonexistent.vps"])), 64);
    assert_eq!(code(&vps(&["noether", "-m", &osc, "--symmetry", "nope"])), 64);
    assert_eq!(code(&vps(&["bracket", "-m", &osc, "--symmetry", "timeshift"])), 64);
    assert_eq!(code(&vps(&["selftest", "--criterion", "11"])), 64);

    let dir = std::env::temp_dir().join(format!("vps-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.vps");
    std::fs::write(&bad, "model \"b\" { independent t; dependent u; lagrangian L = u_q; }").unwrap();
    let o = vps(&["el", "-m", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 64);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("1:") && err.contains("undeclared"), "{err}");
}

#[test]
fn maxwell_gauge_commands() {
    let mx = model("maxwell2d");
    let (c, v) = json(&["gauge", "-m", &mx, "--operator", "grad"]);
    assert_eq!((c, v["status"].as_str()), (0, Some("pass")));
    let (c, _) = json(&["identity", "-m", &mx, "--operator", "grad"]);
    assert_eq!(c, 0);
    let (c, _) = json(&["kernel", "-m", &mx, "--operator", "grad", "--param", "t*x"]);
    assert_eq!(c, 0);
    let (c, _) = json(&["kernel", "-m", &mx, "--symmetry", "gauge_tx"]);
    assert_eq!(c, 0);
}

#[test]
fn witnesses_reparse() {
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("oscillator", vec!["el"]),
        ("oscillator", vec!["noether", "--symmetry", "scaling"]),
        ("oscillator", vec!["gauge", "--operator", "dt"]),
        ("klein_gordon", vec!["legendre"]),
        ("klein_gordon", vec!["omega"]),
        ("klein_gordon", vec!["linearize"]),
        ("klein_gordon", vec!["adjoint"]),
        ("klein_gordon", vec!["noether", "--symmetry", "boost"]),
        ("klein_gordon", vec!["bracket", "--symmetry", "timeshift", "--symmetry", "spaceshift"]),
        ("maxwell2d", vec!["kernel", "--operator", "grad", "--param", "t^2*x"]),
        ("maxwell2d", vec!["adjoint", "--operator", "div"]),
        ("sine_gordon", vec!["el"]),
    ];
    for (name, args) in runs {
        let path = model(name);
        let src = std::fs::read_to_string(&path).unwrap();
        let m = parse_model(&src).unwrap();
        let b = m.bundle.clone();
        // gauge witnesses live on the bundle extended by the operator inputs
        let extended: Vec<_> = m.operators.iter().filter_map(|(_, d)| b.extended(&d.params).ok()).collect();
        let mut all = args.clone();
        all.extend(["-m", path.as_str()]);
        let (_, v) = json(&all);
        for item in v["items"].as_array().unwrap() {
            let Some(w) = item["witness"].as_str() else { continue };
            let ok = parse_expr(&b, w).is_ok()
                || parse_form(&b, w, (0, 0)).is_ok()
                || parse_operator(&b, w).is_ok()
                || extended.iter().any(|e| parse_expr(e, w).is_ok());
            assert!(ok, "{name} {args:?}: witness does not re-parse: {w}");
        }
    }
}

#[test]
fn sign_sheet() {
    let o = vps(&["--sign-sheet"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("s = -1"));
}

#[test]
fn selftest_is_deterministic_under_seed() {
    let strip = |mut v: Value| {
        v["ms"] = Value::Null;
        v
    };
    let (c1, a) = json(&["selftest", "--seed", "11", "--criterion", "1"]);
    let (c2, b) = json(&["selftest", "--seed", "11", "--criterion", "1"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(strip(a), strip(b));
    let (c, v) = json(&["selftest", "--criterion", "10"]);
    assert_eq!(c, 0);
    assert_eq!(v["model"], "-");
}
