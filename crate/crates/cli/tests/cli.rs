use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE_22: &str = "<a,t | t a t^-1 = a^2>\n";
const TREFOIL: &str = "<x,y | x y x = y x y>\n";
const PERFECT_KERNEL: &str = "<a,t | t a^-2 t^-1 a^-1 t a^-1 t^-1 a t a t^-1 a^-1 t a t^-1 a>\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotkernel")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Files {
        Files { dir: tempfile::tempdir().unwrap() }
    }

    fn put(&self, name: &str, text: &str) -> String {
        let path: PathBuf = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

#[test]
fn parse_command() {
    let f = Files::new();
    let good = f.put("t.pres", TREFOIL);
    let v = json(&["parse", &good]);
    assert_eq!(v["command"], "parse");
    assert_eq!(v["result"]["deficiency"], 1);
    assert_eq!(v["result"]["abelianization"]["rank"], 1);
    assert_eq!(code(&["parse", &f.put("bad.pres", "<x | x^>")]), 2);
    assert_eq!(code(&["parse", &f.put("unknown.pres", "<x | y>")]), 1);
    assert_eq!(code(&["parse", "/nonexistent/file.pres"]), 2);
}

#[test]
fn alex_command() {
    let f = Files::new();
    let v = json(&["alex", &f.put("t.pres", TREFOIL), "--primes", "2,3"]);
    assert_eq!(v["result"]["alexander"]["delta"], "t^2 - t + 1");
    assert_eq!(v["result"]["alexander"]["mod_p_table"].as_object().unwrap().len(), 2);
    let two = f.put("z2.pres", "<x | x^2>");
    assert_eq!(code(&["alex", &two]), 1);
    assert_eq!(code(&["alex", &f.put("e.pres", EXAMPLE_22), "--chi", "t=1,a"]), 2);
    assert_eq!(code(&["alex", &f.put("e2.pres", EXAMPLE_22), "--chi", "t=2"]), 1);
    assert_eq!(code(&["alex", &f.put("e3.pres", EXAMPLE_22), "--primes", "4"]), 1);
}

#[test]
fn criteria_command() {
    let f = Files::new();
    let r = json(&["criteria", &f.put("e.pres", EXAMPLE_22)]);
    let report = &r["result"]["report"];
    assert_eq!(report["delta"], "t - 2");
    assert_eq!(report["primes"][0]["n_p"], 0);
    assert_eq!(report["surjects_to_Z"]["answer"], false);
    assert_eq!(report["kernel_fg"], "NotFG");

    let r = json(&["analyze", &f.put("t.pres", TREFOIL)]);
    let report = &r["result"]["report"];
    assert_eq!(report["delta"], "t^2 - t + 1");
    assert_eq!(report["primes"][0]["n_p"], 3);
    assert_eq!(report["surjects_to_Z"]["answer"], true);
    assert_eq!(report["kernel_fg"], "FG");

    let r = json(&["criteria", &f.put("p.pres", PERFECT_KERNEL)]);
    let report = &r["result"]["report"];
    assert_eq!(report["delta"], "1");
    assert!(report["primes"].as_array().unwrap().iter().all(|p| p["classification"] == "none"));
    assert_eq!(report["kervaire"]["weight_one_witness"], "t");

    assert_eq!(code(&["criteria", &f.put("torsion.pres", "<x, y | x^2, y^3>")]), 1);
    assert_eq!(code(&["criteria", &f.put("bad.pres", "<x, y | x y")]), 2);
    let text = String::from_utf8(run(&["criteria", &f.put("t2.pres", TREFOIL)]).stdout).unwrap();
    assert!(text.contains("Delta = t^2 - t + 1"));
}

#[test]
fn twobridge_command() {
    let out = run(&["twobridge", "3", "1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "<u, v | u v u v^-1 u^-1 v^-1>");
    let v = json(&["twobridge", "--family", "3"]);
    assert_eq!(v["result"]["presentation"], "<u, a | u a^3 u a^-3 u^-1 a^2 u^-1 a^-3>");
    let v = json(&["twobridge", "11", "9"]);
    assert_eq!(v["result"]["epsilon"].as_array().unwrap().len(), 10);
    assert_eq!(code(&["twobridge", "4", "1"]), 1);
    assert_eq!(code(&["twobridge", "--family", "0"]), 1);
    assert_eq!(code(&["twobridge", "x", "1"]), 2);
    assert_eq!(code(&["twobridge"]), 2);
}

#[test]
fn rs_command() {
    let f = Files::new();
    let v = json(&["rs", &f.put("p.pres", PERFECT_KERNEL)]);
    assert_eq!(
        v["result"]["shift"]["templates"][0],
        "a[i+1]^-2 a[i]^-1 a[i+1]^-1 a[i] a[i+1] a[i]^-1 a[i+1] a[i]"
    );
    assert_eq!(v["result"]["stabilized"], false);
    let v = json(&["rs", &f.put("t.pres", TREFOIL)]);
    assert_eq!(v["result"]["stabilized"], true);
    assert_eq!(v["result"]["width"], 2);
    assert_eq!(code(&["rs", &f.put("z.pres", "<x, y | x^2>")]), 1);
    assert_eq!(code(&["rs", &f.put("b.pres", "x y")]), 2);
}

#[test]
fn reps_command() {
    let f = Files::new();
    let fam = String::from_utf8(run(&["twobridge", "--family", "3"]).stdout).unwrap();
    let fam = f.put("family3.pres", &fam);
    let v = json(&["reps", &fam, "--group", "S3", "--max-period", "9"]);
    let census = &v["result"]["census"];
    assert!(census["classification"]["positive_entropy"].as_f64().unwrap() > 0.01);
    assert_eq!(v["result"]["periodic_points"].as_array().unwrap().len(), 9);

    let v = json(&["reps", &f.put("p.pres", PERFECT_KERNEL), "--group", "Z5"]);
    assert_eq!(v["result"]["census"]["classification"], "only_trivial");

    let z2 = f.put("z2.table", "2\n0 1\n1 0\n");
    let v = json(&["reps", &f.put("t.pres", TREFOIL), "--table", &z2]);
    assert_eq!(v["result"]["census"]["classification"]["finite"], 4);

    assert_eq!(code(&["reps", &fam, "--group", "Q8"]), 1);
    assert_eq!(code(&["reps", &fam, "--table", &f.put("bad.table", "2\n0 1\n1 1\n")]), 2);
    assert_eq!(code(&["reps", &fam, "--group", "S3", "--tol", "2"]), 1);
    assert_eq!(code(&["reps", &fam]), 2);
    assert_eq!(code(&["reps", &f.put("b.pres", "<x | x"), "--group", "Z2"]), 2);
}

#[test]
fn recurrence_command() {
    let v = json(&["recurrence", "1,-1,-1"]);
    assert_eq!(v["result"]["answer"], true);
    assert_eq!(v["result"]["witness_factor"], "t^2 - t - 1");
    let v = json(&["recurrence", "1,-1,-1", "--witness", "-5", "5"]);
    assert_eq!(v["result"]["window"]["base"], -5);
    assert_eq!(v["result"]["window"]["values"], serde_json::json!([-8, 5, -3, 2, -1, 1, 0, 1, 1, 2, 3]));
    let v = json(&["recurrence", "1,-2"]);
    assert_eq!(v["result"]["answer"], false);
    assert_eq!(code(&["recurrence", "2,-5,2", "--witness", "0", "3"]), 1);
    assert_eq!(code(&["recurrence", "0,1"]), 1);
    assert_eq!(code(&["recurrence", "1,x"]), 2);
}

#[test]
fn json_is_deterministic() {
    let f = Files::new();
    let t = f.put("t.pres", TREFOIL);
    let fam = f.put("f.pres", "<u, a | u a^3 u a^-3 u^-1 a^2 u^-1 a^-3>");
    let cases: Vec<Vec<&str>> = vec![
        vec!["--json", "parse", &t],
        vec!["--json", "alex", &t],
        vec!["--json", "criteria", &t],
        vec!["--json", "twobridge", "7", "3"],
        vec!["--json", "rs", &t],
        vec!["--json", "reps", &fam, "--group", "S3"],
        vec!["--json", "recurrence", "1,-3,1", "--witness", "-20", "20"],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    }
    let a = json(&["alex", &t]);
    let b = json(&["alex", &t, "--primes", "2,3"]);
    assert_ne!(a["input_digest"], b["input_digest"]);
}
