//! The `trisqrt` binary: exit codes, JSON shape and determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], envs: &[(&str, &str)]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_trisqrt")).args(args).envs(envs.iter().copied()).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, v)
}

#[test]
fn verify_passes_at_an_ordinary_prime() {
    let (out, v) = run(&["verify", "--p", "13", "--M", "4"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["regime"], "sign-insensitive");
    for key in ["alpha1", "e_p", "s", "k_factor", "d", "rho", "slack"] {
        assert!(!v[key].is_null(), "{key} missing");
    }
    // exact data are strings, never JSON numbers
    assert!(v["d"].is_string() && v["slack"].is_string());
    let (_, w) = run(&["verify", "--p", "13", "--M", "4", "--ep-sign", "plus"], &[]);
    assert_eq!(w["verdict"], true);
}

#[test]
fn reports_are_deterministic() {
    let (a, _) = run(&["verify", "--p", "13"], &[]);
    let (b, _) = run(&["verify", "--p", "13"], &[("TRISQRT_THREADS", "1")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failures_name_their_stage() {
    let (out, v) = run(&["verify"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(v["stage"], "hida");
    assert_eq!(v["error"], "NotOrdinary");
    let (out, v) = run(&["verify", "--k", "20"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(v["stage"], "validate");
    let (out, v) = run(&["verify", "--ep-sign", "sideways"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(v["error"], "InvalidInput");
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("trisqrt-cli-{}.json", std::process::id()));
    let (out, _) = run(&["identity", "--out", path.to_str().unwrap()], &[]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["comparison"]["discrepancy_is_two_alpha2_ap"], true);
    assert_eq!(v["step2"]["match"], true);
}

#[test]
fn module_subcommands() {
    let (out, v) = run(&["qexp", "--nmax", "6"], &[]);
    assert!(out.status.success());
    assert_eq!(v["coeffs"][2], "-24");
    let (_, v) = run(&["qexp", "--series", "eigen", "--k", "16", "--nmax", "4", "--op", "up", "--p", "2"], &[]);
    assert_eq!(v["coeffs"][1], "216");
    let (out, _) = run(&["qexp", "--op", "up"], &[]);
    assert_eq!(out.status.code(), Some(2));

    let (_, v) = run(&["modforms", "--k", "24", "--nmax", "3"], &[]);
    assert_eq!(v["dim_cusp"], "2");
    assert_eq!(v["charpoly_t2"][1], "-1080");

    let (_, v) = run(&["hida", "--p", "11", "--scan", "12,22,32"], &[]);
    assert_eq!(v["constant_on_branches"], true);
    let (_, v) = run(&["hida", "--p", "13", "--k", "24"], &[]);
    assert_eq!(v["ordinary_rank"], "1");
    assert_eq!(v["pairing"]["unimodular"], true);

    let (_, v) = run(&["lfunc", "local", "--q", "2"], &[]);
    assert_eq!(v["triple"]["dirichlet_coefficient"], "-13824");
    let (_, v) = run(&["lfunc", "local", "--q", "3", "--k", "24", "--a", "-1", "--b", "2", "--c", "3"], &[]);
    assert_eq!(v["triple"]["coefficients"][1], "6");
    let (_, v) = run(&["lfunc", "partial", "--Q", "1"], &[]);
    assert_eq!(v["lo"], "1.00000000000000000000");
    let (_, v) = run(&["lfunc", "partial", "--Q", "50", "--s", "47/2"], &[]);
    assert_eq!(v["absolutely_convergent"], false);

    let (out, v) = run(&["measure", "--p", "13"], &[]);
    assert!(out.status.success());
    assert_eq!(v["d"], "18566");
}
