use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_atypical"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn strings(v: &Value, key: &str) -> Vec<String> {
    v.as_array().unwrap().iter().map(|e| e[key].as_str().unwrap().to_string()).collect()
}

#[test]
fn cubic_over_hyperbola() {
    let r = json(&["--f", "x^3+1", "--g", "x y+1"]);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(strings(&r["B_infty"], "defining"), ["t"]);
    assert_eq!(strings(&r["B_infty"], "approx"), ["0"]);
    assert_eq!(strings(&r["K0"], "defining"), ["t-1"]);
    assert_eq!(r["K1"], Value::Array(vec![]));
    assert_eq!(r["B"]["relation"], "equality");
    assert_eq!(strings(&r["B"]["values"], "approx"), ["0", "1"]);
}

#[test]
fn golden_report() {
    let out = run(&["--f", "x^3+1", "--g", "x y+1", "--json"]);
    let expected = std::fs::read_to_string(golden("cubic_over_hyperbola.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn equal_degrees_report_containment() {
    let r = json(&["--f", "x y+1", "--g", "x^2+1"]);
    assert_eq!(r["B_infty"], Value::Array(vec![]));
    assert_eq!(r["B"]["relation"], "containment");
    let flags: Vec<&str> = r["flags"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert!(flags.contains(&"deg f = deg g: B reported as containment"));
}

#[test]
fn exit_codes() {
    let out = run(&["--f", "x", "--g", "x"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("common factor"));
    let out = run(&["--f", "x^2+y^2", "--g", "(x^2+y^2)^2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["--f", "3", "--g", "1"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["--f", "x + z", "--g", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 5"));
    assert_eq!(run(&["--f", "x", "--radii", "3:1:2"]).status.code(), Some(2));
    assert_eq!(run(&["--f", "x", "--diagnose", "/nonexistent/curves"]).status.code(), Some(2));
    assert_eq!(run(&["--f", "x", "--g", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--f", "x", "--precision", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--f", "x"]).status.code(), Some(0));
}

#[test]
fn text_and_json_agree() {
    for (f, g) in [("x^3+1", "x y+1"), ("x y+1", "x^2+1"), ("x+x^2y", "1"), ("x^2+y^2", "1"), ("y^2-x^3", "x+1")] {
        let r = json(&["--f", f, "--g", g]);
        let text = String::from_utf8(run(&["--f", f, "--g", g]).stdout).unwrap();
        for section in ["K0", "K1", "B_infty"] {
            for e in r[section].as_array().unwrap() {
                assert!(text.contains(&format!("defining: {}", e["defining"].as_str().unwrap())), "{f} {g} {section}");
                assert!(text.contains(&format!("approx: {}", e["approx"].as_str().unwrap())), "{f} {g} {section}");
            }
        }
        assert!(text.contains(&format!("relation: {}", r["B"]["relation"].as_str().unwrap())));
        for flag in r["flags"].as_array().unwrap() {
            assert!(text.contains(flag.as_str().unwrap()));
        }
        let text_values = text.matches("defining:").count();
        let json_values = ["K0", "K1", "B_infty"].iter().map(|s| r[*s].as_array().unwrap().len()).sum::<usize>()
            + r["B"]["values"].as_array().unwrap().len();
        assert_eq!(text_values, json_values, "{f} {g}");
    }
}

#[test]
fn deterministic_with_diagnostics() {
    let args = ["--f", "x^3+1", "--g", "x y+1", "--diagnose", "auto", "--json", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["config"]["seed"], 7);
    let searches = r["diagnostics"]["searches"].as_array().unwrap();
    assert_eq!(searches[0]["t0"], "0");
    assert_eq!(searches[0]["trend"]["verdict"], "→0");
    assert_eq!(searches[0]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn curve_file_diagnostics() {
    let path = std::env::temp_dir().join(format!("atypical-curves-{}.txt", std::process::id()));
    std::fs::write(&path, "# sequence (k, ik)\ns; i s; 10; 10000; 4; i\ns; s; 10; 1000; 3\n").unwrap();
    let r = json(&["--f", "x y+1", "--g", "x^2+1", "--diagnose", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    let curves = r["diagnostics"]["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 2);
    let verdicts: Vec<&str> = curves[0]["trends"].as_array().unwrap().iter().map(|t| t["verdict"].as_str().unwrap()).collect();
    assert_eq!(&verdicts[..2], ["→0", "→0"]);
    assert_eq!(curves[0]["t0_origin"], "given");
    assert_eq!(curves[1]["t0_origin"], "nearest value of B to F at the last sample");
    assert_eq!(curves[0]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn chi_check_can_be_skipped() {
    let r = json(&["--f", "x^3+1", "--g", "x y+1", "--no-chi-check"]);
    assert_eq!(r["chi_table"], Value::Null);
    assert_eq!(r["config"]["verify_chi"], false);
}
