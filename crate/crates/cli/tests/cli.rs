use std::process::{Command, Output};

use serde_json::Value;

fn montevol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_montevol")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_ppm() {
    let out = montevol(&["analyze", "1/2,1/2,-1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "PPM");
    assert_eq!(v["crossings"], 6);
    assert_eq!(v["twist_number"], 3);
    assert_eq!(v["bounds"]["thm1_state"], "A");
    assert_eq!(v["bounds"]["thm2_applicable"], false);
    assert_eq!(v["ec_bound"], 1);
    assert_eq!(v["mirrored"], false);
}

#[test]
fn analyze_two_sided_bounds() {
    let v = json(&montevol(&["analyze", "2/5,-3/7,1/2,-1/3"]));
    assert_eq!(v["class"], "PMPM");
    let upper = v["bounds"]["thm2_upper"].as_f64().unwrap();
    let t = v["twist_number"].as_f64().unwrap();
    assert!((upper - 2.0 * 3.663862376708876 * t).abs() < 1e-9);
}

#[test]
fn state_flag_selects_b() {
    let v = json(&montevol(&["analyze", "2/5,-3/7,1/2,-1/3", "--state", "B"]));
    assert_eq!(v["bounds"]["thm1_state"], "B");
    assert_eq!(v["bounds"]["thm1_lower_raw_a"], Value::Null);
    assert_eq!(v["mirrored"], true);
}

#[test]
fn integer_slope_is_rejected() {
    let out = montevol(&["analyze", "1/2,2,-1/3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("IntegerSlope at position 1"));
}

#[test]
fn malformed_token_is_named() {
    let out = montevol(&["analyze", "1/2,x/3,-1/3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x/3"));
}

#[test]
fn excluded_pretzel_exits_2() {
    let out = montevol(&["analyze", "1/2,-1/2,1/2,-1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["hyperbolicity"], "ExcludedPretzel");
    assert_eq!(v["bounds"]["thm2_lower"], Value::Null);
}

#[test]
fn two_tangles_have_no_bounds() {
    let out = montevol(&["analyze", "1/3,2/5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["class"], "TwoTangle");
    assert_eq!(v["hyperbolicity"], "Assumed");
    assert_eq!(v["bounds"]["thm1_applicable"], false);
}

#[test]
fn writes_pd_and_svg() {
    let dir = std::env::temp_dir().join(format!("montevol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (pd, svg) = (dir.join("d.pd"), dir.join("h.svg"));
    let out = montevol(&[
        "analyze",
        "1/2,1/3,-1/2",
        "--pd",
        pd.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pd_text = std::fs::read_to_string(&pd).unwrap();
    assert_eq!(pd_text.lines().filter(|l| l.starts_with("X[")).count(), 7);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<ellipse").count() as u64, v["states"]["A"]["vertices"].as_u64().unwrap());
    assert_eq!(svg_text.matches("<polyline").count(), 7);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn batch_is_ordered_json_lines() {
    let a = montevol(&["batch", "--tangles", "3", "--max-den", "3"]);
    let b = montevol(&["batch", "--tangles", "3", "--max-den", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count() as u128, montevol::enumerate::closed_form_count(3, 3));
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], "1");
    }
}

#[test]
fn injected_fault_is_caught() {
    let out = montevol(&["check", "--tangles", "3", "--max-den", "3", "--inject-fault", "swap-smoothing"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("counterexample: trefoil"));
}

#[test]
fn version_flag() {
    let out = montevol(&["--version"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("montevol "));
}
