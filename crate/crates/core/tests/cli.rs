use std::path::PathBuf;
use std::process::{Command, Output};

use bihole::{io, verify_bihole, BiHoleCertificate};

fn bihole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bihole"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bihole-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.ends_with('\n') && text.lines().count() == 1, "{text}");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn gen_cycle_then_solve() {
    let dir = scratch("cycle");
    let file = dir.join("c10.txt");
    let f = file.to_str().unwrap();
    assert!(bihole(&["gen", "--kind", "cycle", "--n", "5", "--out", f])
        .status
        .success());
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("c10.txt.json")).unwrap()).unwrap();
    assert_eq!(sidecar["schema"], 1);

    let out = bihole(&["solve", f]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["k"], 2);
    assert_eq!(v["optimal"], true);

    // The emitted certificate re-verifies against the file.
    let g = io::read_graph(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let cert: BiHoleCertificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(verify_bihole(&g, &cert).unwrap());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn solve_empty_graph() {
    let dir = scratch("empty");
    let file = dir.join("e.txt");
    std::fs::write(&file, "c nothing here\np bihole 6 6 0\n").unwrap();
    let v = json(&bihole(&["solve", file.to_str().unwrap()]));
    assert_eq!(v["k"], 6);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "gen", "--kind", "pairing", "--n", "30", "--delta", "3", "--seed", "5",
    ];
    let a = bihole(&args);
    let b = bihole(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let c = bihole(&[
        "gen", "--kind", "pairing", "--n", "30", "--delta", "3", "--seed", "6",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn construct_with_trace() {
    let dir = scratch("construct");
    let file = dir.join("g.txt");
    let f = file.to_str().unwrap();
    assert!(
        bihole(&["gen", "--kind", "pairing", "--n", "60", "--delta", "4", "--out", f])
            .status
            .success()
    );
    let out = bihole(&["construct", f, "--algorithm", "xi-chain", "--seed", "1"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["details"]["terminal_delta"], 2);
    assert_eq!(v["details"]["levels"].as_array().unwrap().len(), 2);

    let out = bihole(&["construct", f, "--algorithm", "general", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("n,delta,size,guarantee,verified,pass,x,y\n"),
        "{text}"
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn exit_status_reflects_guarantees() {
    // The Δ = 4 upper cell is off by more than the table tolerance.
    let out = bihole(&["table"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["mismatches"], 1);

    assert!(bihole(&["verify-f2", "--n-max", "6", "--trials", "5"])
        .status
        .success());
    assert!(bihole(&["bounds", "h", "--n", "1331", "--delta", "64"])
        .status
        .success());
    assert_eq!(
        bihole(&["bounds", "h", "--n", "40", "--delta", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bihole(&["verify-f2", "--n-max", "13"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bihole(&["solve", "/nonexistent/graph.txt"]).status.code(),
        Some(2)
    );
}

#[test]
fn montecarlo_matchings_and_csv() {
    let out = bihole(&["montecarlo", "--n", "10", "--delta", "1", "--trials", "15"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["summary"]["min"], 5);
    assert_eq!(v["summary"]["max"], 5);

    let out = bihole(&[
        "montecarlo",
        "--n",
        "12",
        "--delta",
        "3",
        "--trials",
        "8",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn bounds_subcommands() {
    let v = json(&bihole(&["bounds", "beta", "--delta", "3"]));
    assert!((v["beta"].as_f64().unwrap() - 0.4591).abs() < 5e-4);
    let v = json(&bihole(&["bounds", "delta-t", "--t", "2", "--n", "10000"]));
    assert_eq!(v["lower"], 9900.0);
    let out = bihole(&["bounds", "table", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 9);
}
