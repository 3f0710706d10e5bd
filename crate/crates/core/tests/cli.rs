//! The `wnk` binary: exit codes, output bytes, golden files.

use std::path::Path;
use std::process::{Command, Output};

fn wnk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wnk")).args(args).output().expect("run wnk")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn dump_window(h: u32, extra: &[&str]) -> String {
    let mut out = String::new();
    for n in -3..=3 {
        let n = n.to_string();
        let h = h.to_string();
        let mut args = vec!["dump-op", "--h", &h, "--k", "1", "--n", &n, "--weight-cap", "8"];
        args.extend_from_slice(extra);
        let o = wnk(&args);
        assert_eq!(o.status.code(), Some(0));
        out.push_str(&format!("n = {n}\n{}", stdout(&o)));
    }
    out
}

#[test]
fn closed_form_golden_files() {
    for h in [2, 3] {
        let g = golden(&format!("virasoro_h{h}.txt"));
        assert_eq!(dump_window(h, &["--closed-form"]), g, "closed form, h = {h}");
        assert_eq!(dump_window(h, &["--reduced"]), g, "reduced extraction, h = {h}");
    }
}

#[test]
fn golden_h2_spot_values() {
    // by hand: h^{-n-1}/2 sum over odd m of :J_m J_{2n-m}: at n = 0, -1
    let g = golden("virasoro_h2.txt");
    let n0: Vec<&str> = g.split("n = 0\n").nth(1).unwrap().lines().take(5).collect();
    assert_eq!(n0, ["1/16", "1/2 * J_{-7} J_{7}", "1/2 * J_{-5} J_{5}", "1/2 * J_{-3} J_{3}", "1/2 * J_{-1} J_{1}"]);
    assert!(g.contains("n = -1\n1 * J_{-7} J_{5}\n1 * J_{-5} J_{3}\n1 * J_{-3} J_{1}\n1/2 * J_{-1} J_{-1}\n"));
}

#[test]
fn expand_c_series_lines() {
    let o = wnk(&["expand", "c-series", "--h", "2", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0: 2\n1: 0\n2: 1/16\n3: -1/16\n");
}

#[test]
fn correlators_json_schema_and_order() {
    let o = wnk(&["correlators", "--h", "2", "--g-max", "1", "--weight-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["h"], 2);
    assert_eq!(v["caps"]["weight_max"], 6);
    let c = v["correlators"].as_array().unwrap();
    assert_eq!(c[0]["g"], 0);
    assert_eq!(c[0]["insertions"].as_array().unwrap().len(), 3);
    assert_eq!(c[0]["value"], "1");
    let gs: Vec<u64> = c.iter().map(|e| e["g"].as_u64().unwrap()).collect();
    assert!(gs.windows(2).all(|w| w[0] <= w[1]));
    assert!(c.iter().any(|e| e["g"] == 1 && e["value"] == "1/24"));
    assert!(!v["residual_report"]["rows"].as_array().unwrap().is_empty());
}

#[test]
fn correlators_csv() {
    let o = wnk(&["correlators", "--h", "2", "--g-max", "1", "--weight-max", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "g,insertions,value\n0,1:0 1:0 1:0,1\n1,1:1,1/24\n");
}

#[test]
fn output_independent_of_thread_count() {
    let base = ["correlators", "--h", "3", "--g-max", "1", "--weight-max", "10", "--include-zeros"];
    let mut outs = Vec::new();
    for t in ["1", "2", "5"] {
        let mut args = base.to_vec();
        args.extend(["--threads", t]);
        let o = wnk(&args);
        assert_eq!(o.status.code(), Some(0));
        outs.push(o.stdout);
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("wnk-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let p = path.to_str().unwrap();
    let o = wnk(&["correlators", "--h", "2", "--weight-max", "6", "--format", "csv", "--out", p]);
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn no_pivot_exits_2() {
    let o = wnk(&["correlators", "--h", "3", "--weight-max", "6", "--k-set", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no pivot"));
}

#[test]
fn verify_exit_codes() {
    let o = wnk(&["verify", "c-series", "--h", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
    let o = wnk(&["verify", "virasoro", "--h", "2", "--n-window", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = wnk(&["verify", "residuals", "--h", "2", "--g-max", "0", "--weight-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vacuous"));
    let o = wnk(&["verify", "periods", "--h", "4", "--n-window", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_arguments() {
    assert_eq!(wnk(&["correlators", "--h", "1"]).status.code(), Some(1));
    assert_eq!(wnk(&["verify", "w-bracket", "--h", "3", "--N", "1"]).status.code(), Some(1));
    assert_eq!(wnk(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(wnk(&["dump-op", "--k", "2", "--closed-form"]).status.code(), Some(1));
}

#[test]
fn verbose_goes_to_stderr() {
    let quiet = wnk(&["correlators", "--h", "2", "--weight-max", "6"]);
    let loud = wnk(&["-vv", "correlators", "--h", "2", "--weight-max", "6"]);
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(!loud.stderr.is_empty());
}
