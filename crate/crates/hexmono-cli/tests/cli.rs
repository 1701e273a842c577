use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hexmono"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hexmono-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("HEXMONO_BUDGET").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn build(kind: &str, extra: &[&str], file: &Path) -> Output {
    let mut args = vec!["build", kind, "-o", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn build_then_analyze_a_spiral() {
    let f = scratch("p2.hexmono");
    let out = build("spiral", &["--n", "2"], &f);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verdicts"]["tiles"], 21);
    assert_eq!(v["verdicts"]["directly_constructible"], true);
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.starts_with("hexmono v1"));
    assert!(text.contains("SPIRAL_P"));
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tiles"], 21);
    assert_eq!(v["r2_components"], 1);
}

#[test]
fn analyze_flags_a_lattice_violation() {
    let f = scratch("lattice.hexmono");
    assert_eq!(build("periodic-lattice", &["--m", "1", "--extent", "2"], &f).status.code(), Some(0));
    let out = run(&["analyze", f.to_str().unwrap(), "--period-bound", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["r2_components"].as_u64().unwrap() > 1);
}

#[test]
fn refute_finds_the_cycle_seed_radius() {
    let f = scratch("cycle.hexmono");
    let cert = scratch("cycle.cert");
    assert_eq!(build("cycle-seed", &["--n", "0"], &f).status.code(), Some(0));
    let out = run(&["refute", f.to_str().unwrap(), "--radius", "4", "--certificate", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["minimal_radius"], 3);
    assert_eq!(v["verdict"]["status"], "REFUTED");
    let c = hexmono::io::read_certificate(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c.radius, 3);
}

#[test]
fn embed_check_exit_codes() {
    let f = scratch("p1.hexmono");
    assert_eq!(build("spiral", &["--n", "1"], &f).status.code(), Some(0));
    let out = run(&["embed-check", f.to_str().unwrap(), "--radius", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "EXTENDABLE");
    let out = run(&["embed-check", f.to_str().unwrap(), "--radius", "3", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "UNKNOWN");
    let out = bin()
        .args(["embed-check", f.to_str().unwrap(), "--radius", "3"])
        .env("HEXMONO_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "the budget is read from the environment");
}

#[test]
fn forced_lengths_and_calibration() {
    let out = run(&["forced-lengths", "--orientation", "2", "--radius", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let observed: Vec<u64> =
        json(&out)["observed"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert!(observed.iter().all(|l| (l + 1).is_power_of_two()));
    let out = run(&["calibrate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["matches_shipped"], true);
    assert_eq!(run(&["calibrate", "--symmetric-stripe"]).status.code(), Some(1));
    let out = run(&["template"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("pairing"));
}

#[test]
fn render_writes_svg() {
    let f = scratch("hull.hexmono");
    let svg = scratch("hull.svg");
    assert_eq!(build("hull-s", &["--n", "1"], &f).status.code(), Some(0));
    let out = run(&[
        "render",
        f.to_str().unwrap(),
        "--layers",
        "tiles,r2_graph",
        "--highlight",
        "0,0;1,0",
        "-o",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("</svg>"));
    let out = run(&["render", f.to_str().unwrap(), "--layers", "bogus", "-o", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["analyze", "/nonexistent/file.hexmono"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let f = scratch("bad.hexmono");
    assert_eq!(build("spiral", &["--n", "99"], &f).status.code(), Some(2));
    std::fs::write(&f, "not a patch\n").unwrap();
    let out = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn every_construction_builds() {
    for (kind, extra) in [
        ("t0", &["--radius", "8"][..]),
        ("faultline", &["--width", "16", "--m-max", "2"][..]),
        ("anticycle-seed", &[][..]),
        ("infinite-triangle", &["--radius", "8"][..]),
        ("hull-r", &["--n", "2"][..]),
    ] {
        let f = scratch(&format!("{kind}.hexmono"));
        let out = build(kind, extra, &f);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        let back = hexmono::io::load(&f).unwrap();
        assert!(!back.patch.is_empty());
    }
}
