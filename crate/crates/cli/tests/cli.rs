use std::process::{Command, Output};

use serde_json::Value;

fn eccpie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eccpie"))
        .args(args)
        .output()
        .expect("run eccpie")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn traditional_chart_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let o = eccpie(&["chart", "--shares", "0.2,0.3,0.15,0.25,0.1", "--apex", "0,0", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert_eq!(text.matches("class=\"sector\"").count(), 5);
}

#[test]
fn two_half_discs() {
    let o = eccpie(&["chart", "--shares", "0.5,0.5", "--apex", "0,0", "--json", "-"]);
    assert!(o.status.success());
    let r = json(&o);
    let p = &r["solutions"]["boundary_points"][1];
    assert!(p["x"].as_f64().unwrap().abs() < 1e-12 && (p["y"].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn near_boundary_apex_warns() {
    let o = eccpie(&["chart", "--shares", "0.4,0.6", "--apex", "0.99,0", "--json", "-"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("ill-conditioned"));
    assert_eq!(json(&o)["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_inputs_name_the_flag() {
    let o = eccpie(&["chart", "--shares", "0.5,0.6", "--apex", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--shares"));
    let o = eccpie(&["chart", "--shares", "1", "--apex", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--apex"));
    let o = eccpie(&["cut", "--proportions", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--proportions"));
    let o = eccpie(&["pizza", "--apex", "0,0", "--blades", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--blades"));
}

#[test]
fn near_symmetric_cut_is_centered() {
    let o = eccpie(&["cut", "--proportions", "0.3334,0.3333,0.3333", "--json", "-"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = json(&o);
    assert!(r["paper_check"].is_null());
    let x0 = r["solutions"]["classes"][0]["representative"]["values"][0].as_f64().unwrap();
    assert!(x0.abs() < 1e-3);
}

#[test]
fn refine_from_reference() {
    let o = eccpie(&["cut", "--proportions", "0.4,0.35,0.25", "--mode", "refine", "--start", "reference", "--json", "-"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["paper_check"]["agrees"], Value::Bool(true));
    let o = eccpie(&["cut", "--proportions", "0.4,0.35,0.25", "--mode", "refine"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let o = eccpie(&["cut", "--proportions", "0.4,0.35,0.25", "--json", "-"]);
    assert!(json(&o).get("timing_ms").is_none());
    let o = eccpie(&["cut", "--proportions", "0.4,0.35,0.25", "--json", "-", "--timing"]);
    assert!(json(&o)["timing_ms"]["solve"].is_number());
}

#[test]
fn exported_system_solves_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sys.txt");
    let f = file.to_str().unwrap();
    let o = eccpie(&["solve-poly", "--builtin", "single-sector", "--export-only", "--out", f]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = eccpie(&["solve-poly", "--system", f, "--export-only"]);
    assert_eq!(o.stdout, std::fs::read(&file).unwrap());
    let o = eccpie(&["solve-poly", "--system", f, "--json", "-"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["solutions"]["roots"]["paths"]["total"], 40);
    assert_eq!(r["solutions"]["refined"].as_array().unwrap().len(), 2);
}

#[test]
fn piecut_export_and_budget() {
    let o = eccpie(&["solve-poly", "--builtin", "piecut", "--export-only"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("# model: piecut 0.4 0.35"));
    let o = eccpie(&["solve-poly", "--builtin", "piecut", "--path-budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("3276800"));
}

#[test]
fn missing_system_file() {
    let o = eccpie(&["solve-poly", "--system", "/nonexistent/system.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--system"));
}

#[test]
fn pizza_report() {
    let o = eccpie(&["pizza", "--apex", "0.3,-0.2", "--blades", "8", "--json", "-"]);
    let r = json(&o);
    assert!(r["solutions"]["even_deviation"].as_f64().unwrap().abs() < 1e-10);
    assert!(r["solutions"]["odd_deviation"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(r["solutions"]["sectors"], 16);
}
