//! Binary contract tests: exit codes, output schema, determinism.

use std::process::{Command, Output};

fn mubsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubsig"))
        .args(args)
        .env_remove("MUBSIG_TOL_STRUCTURAL")
        .env_remove("MUBSIG_TOL_ORACLE")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = mubsig(args);
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn verify_prime_dims_exit_zero() {
    for d in ["2", "3"] {
        let out = mubsig(&["verify", "--dim", d, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "dim {d}");
    }
}

#[test]
fn verify_composite_dim_exits_two_with_diagnostic() {
    let out = mubsig(&["verify", "--dim", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("prime"), "stderr: {stderr}");
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_with_impossible_tolerance_exits_one() {
    let out = mubsig(&["verify", "--dim", "3", "--tol-structural", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn env_tolerance_override_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_mubsig"))
        .args(["verify", "--dim", "3"])
        .env("MUBSIG_TOL_STRUCTURAL", "1e-20")
        .env_remove("MUBSIG_TOL_ORACLE")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));

    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_mubsig"))
        .args(["verify", "--dim", "3", "--tol-structural", "1e-12"])
        .env("MUBSIG_TOL_STRUCTURAL", "1e-20")
        .env_remove("MUBSIG_TOL_ORACLE")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn probs_requires_prep_and_message() {
    let out = mubsig(&["probs", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mubsig(&["probs", "--dim", "3", "--prep", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probs_rejects_bad_tokens() {
    let out = mubsig(&["probs", "--dim", "3", "--prep", "0,0", "--message", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mubsig(&["probs", "--dim", "3", "--prep", "0,0,3", "--message", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mubsig(&["probs", "--dim", "3", "--prep", "0,0,0", "--message", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mubsig(&["probs", "--dim", "3", "--prep", "0,0,0", "--message", "zz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probs_accepts_ddot0_and_reports_inconclusive_row() {
    let text = stdout_of(&[
        "probs", "--dim", "3", "--prep", "1,2,0", "--message", "ddot0", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    // the (c, r) = (1, 2) row carries 1/d on both routes
    let row = rows
        .iter()
        .find(|r| r["c_prime"] == 1 && r["r_prime"] == 2)
        .unwrap();
    assert!((row["closed_form"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((row["brute_force"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-10);
    assert!(v["results"]["max_abs_diff"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn json_envelope_has_stable_keys() {
    for args in [
        vec!["verify", "--dim", "2", "--format", "json"],
        vec!["probs", "--dim", "2", "--prep", "0,0,0", "--message", "ddot0", "--format", "json"],
        vec!["simulate", "--dim", "2", "--trials", "10", "--format", "json"],
        vec!["capacity", "--dim", "2", "--format", "json"],
    ] {
        let text = stdout_of(&args);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&String> = obj.keys().collect();
        keys.sort();
        assert_eq!(keys, ["command", "dim", "results", "seed"].iter().collect::<Vec<_>>());
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate", "--dim", "3", "--trials", "5000", "--seed", "42", "--format", "json",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);

    let other_seed = stdout_of(&[
        "simulate", "--dim", "3", "--trials", "5000", "--seed", "43", "--format", "json",
    ]);
    assert_ne!(first, other_seed);
}

#[test]
fn parallel_simulation_matches_serial_bytes() {
    let serial = stdout_of(&[
        "simulate", "--dim", "5", "--trials", "4000", "--seed", "9", "--format", "json",
    ]);
    let parallel = stdout_of(&[
        "simulate", "--dim", "5", "--trials", "4000", "--seed", "9", "--format", "json",
        "--parallel",
    ]);
    assert_eq!(serial, parallel);
}

#[test]
fn simulate_confusion_has_no_off_diagonal_mass() {
    let text = stdout_of(&[
        "simulate", "--dim", "3", "--trials", "20000", "--seed", "5", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let confusion = v["results"]["confusion"].as_object().unwrap();
    for (sent, row) in confusion {
        for (decoded, count) in row.as_object().unwrap() {
            if decoded != sent {
                assert_eq!(count.as_u64(), Some(0), "sent {sent} decoded {decoded}");
            }
        }
    }
}

#[test]
fn simulate_csv_covers_all_pairs() {
    let text = stdout_of(&[
        "simulate", "--dim", "2", "--trials", "100", "--seed", "1", "--format", "csv",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sent,decoded,count"));
    // 3 sent labels x (3 decoded + inconclusive)
    assert_eq!(lines.count(), 12);
    let total: u64 = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 100);
}

#[test]
fn capacity_reports_reference_columns() {
    let text = stdout_of(&["capacity", "--dim", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let report = &v["results"][0];
    assert!((report["mutual_information_bits"].as_f64().unwrap() - 4.0 / 3.0).abs() <= 1e-12);
    assert!((report["log2_d"].as_f64().unwrap() - 3f64.log2()).abs() <= 1e-15);
    assert!((report["two_log2_d"].as_f64().unwrap() - 2.0 * 3f64.log2()).abs() <= 1e-15);
    assert_eq!(report["exceeds_log2_d"], serde_json::Value::Bool(false));
}

#[test]
fn capacity_sweep_covers_fixed_dims() {
    let text = stdout_of(&["capacity", "--sweep", "--format", "csv"]);
    let dims: Vec<u64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 3, 5, 7, 11, 13]);
}

#[test]
fn out_flag_writes_payload_verbatim() {
    let dir = std::env::temp_dir().join("mubsig_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("capacity.json");
    let args_stdout = ["capacity", "--dim", "5", "--format", "json"];
    let expected = stdout_of(&args_stdout);

    let out = mubsig(&[
        "capacity", "--dim", "5", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, expected);
    std::fs::remove_file(&path).ok();
}

#[test]
fn human_format_shows_same_digits_as_json() {
    let json_text = stdout_of(&["capacity", "--dim", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    let mi = v["results"][0]["mutual_information_bits"].as_f64().unwrap();
    let mi_digits = serde_json::to_string(&mi).unwrap();
    let human_text = stdout_of(&["capacity", "--dim", "5", "--format", "human"]);
    assert!(
        human_text.contains(&mi_digits),
        "human output missing {mi_digits}:\n{human_text}"
    );
}
