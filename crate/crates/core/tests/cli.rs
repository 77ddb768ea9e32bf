use std::process::{Command, Output};

fn qdelete(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdelete"))
        .args(args)
        .env_remove("QDELETE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid json")
}

#[test]
fn headline_run() {
    let out = qdelete(&["--format", "json", "run", "--n", "10", "--tau", "37", "--k", "1", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for key in ["config", "case", "residual", "fidelity", "elapsed_ms", "seed", "version"] {
        assert!(keys.contains(&key), "missing {key}");
    }
    assert_eq!(v["case"], "DeletedCase");
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["oracle_calls"], 1);
}

#[test]
fn tau_out_of_range() {
    let out = qdelete(&["run", "--n", "3", "--tau", "9", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tau out of range [0, 8)"));
    assert!(stderr(&out).contains("Usage:"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn identity_after_six_steps() {
    let out = qdelete(&["--format", "json", "run", "--n", "4", "--tau", "5", "--k", "6", "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["case"], "IdentityCase");
    assert!(v["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    // Identity up to a global phase: every probability is 1/16.
    for row in v["amplitudes"].as_array().unwrap() {
        assert!((row["probability"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
    }
}

#[test]
fn printed_probabilities_sum_to_one() {
    for args in [
        &["--format", "json", "run", "--n", "7", "--tau", "100", "--k", "2"][..],
        &["--format", "json", "run", "--n", "5", "--tau", "3", "--k", "1", "--mode", "fixed"],
        &["--format", "json", "run", "--n", "13", "--tau", "1", "--dump-amps"],
    ] {
        let v = json(&qdelete(args));
        let total: f64 = v["amplitudes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["probability"].as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-9, "{args:?}: {total}");
    }
    let csv = stdout(&qdelete(&["--format", "csv", "run", "--n", "6", "--tau", "9", "--k", "4"]));
    let amps = csv.split("\n\n").nth(1).expect("amplitude section");
    let mut reader = csv::Reader::from_reader(amps.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["index", "re", "im", "probability"]);
    let total: f64 = reader
        .records()
        .map(|r| r.unwrap()[3].parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn amplitude_table_gated_above_twelve_qubits() {
    let v = json(&qdelete(&["--format", "json", "run", "--n", "13", "--tau", "1"]));
    assert!(v.get("amplitudes").is_none());
    let text = stdout(&qdelete(&["run", "--n", "13", "--tau", "1"]));
    assert!(!text.contains("probability"));
}

#[test]
fn byte_identical_outputs() {
    let strip_time = |s: String| -> String {
        s.lines()
            .filter(|l| !l.contains("elapsed_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    for args in [
        &["--format", "csv", "sweep-phi", "--n-max", "12"][..],
        &["--format", "json", "sweep-phi", "--n-max", "12"],
        &["--format", "csv", "table"],
        &["--format", "json", "table", "--k-max", "24"],
        &["--format", "json", "--seed", "99", "verify", "--n-max", "4"],
        &["--format", "csv", "verify", "--n-max", "3", "--trials", "2"],
    ] {
        let a = qdelete(args);
        let b = qdelete(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    // Run reports carry a wall time; everything else must match.
    let args = ["--format", "json", "--seed", "5", "run", "--n", "8", "--tau", "17", "--k", "2"];
    assert_eq!(strip_time(stdout(&qdelete(&args))), strip_time(stdout(&qdelete(&args))));
}

#[test]
fn seed_is_echoed() {
    let v = json(&qdelete(&["--format", "json", "--seed", "123", "run", "--n", "2", "--tau", "0"]));
    assert_eq!(v["seed"], 123);
    let v = json(&qdelete(&["--format", "json", "--seed", "123", "verify", "--n-max", "2"]));
    assert_eq!(v["seed"], 123);
}

#[test]
fn sweep_phi_rows() {
    let v = json(&qdelete(&["--format", "json", "sweep-phi", "--n-min", "1", "--n-max", "20"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["N"], 2);
    assert!((rows[0]["phi"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!(rows[19]["phi_minus_pi_over_3"].as_f64().unwrap() < 1e-6);
    let text = stdout(&qdelete(&["--format", "csv", "sweep-phi", "--n-max", "1"]));
    assert_eq!(text, "n,N,phi,phi_minus_pi_over_3\n1,2,1.57079632679,0.523598775598\n");
    for bad in [&["sweep-phi", "--n-min", "0"][..], &["sweep-phi", "--n-max", "27"]] {
        assert_eq!(qdelete(bad).status.code(), Some(1));
    }
}

#[test]
fn table_rows() {
    let text = stdout(&qdelete(&["--format", "csv", "table", "--k-max", "12"]));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(&rows[1][2], "-0.5");
    assert_eq!((&rows[5][1], &rows[5][2]), ("0", "1"));
    assert_eq!(&rows[8][4], "1");
    assert_eq!(qdelete(&["table", "--k-max", "0"]).status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    let out = qdelete(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("oracle_equivalence"));

    let out = qdelete(&["--format", "json", "verify", "--n_max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["invariants"].as_array().unwrap().iter().all(|r| r["checks"].as_u64().unwrap() > 0
        || r["name"] == "complement_phase"
        || r["name"] == "mode_consistency"));

    let out = qdelete(&["verify", "--n-max", "3", "--inject-fault", "span_periodicity"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("invariant span_periodicity failed"), "{err}");
    assert!(err.contains("n=") && err.contains("tau=") && err.contains("seed="), "{err}");
}

#[test]
fn bench_columns() {
    let v = json(&qdelete(&["--format", "json", "bench", "--n", "12,14", "--repetitions", "2"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["quantum_queries"], 1);
    assert_eq!(rows[1]["classical_avg_queries"].as_f64().unwrap(), 8192.5);
    assert!(v["loglog_slope"].is_f64());
    assert_eq!(qdelete(&["bench", "--n", "30"]).status.code(), Some(1));
}

#[test]
fn cap_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_qdelete"))
        .args(["run", "--n", "5", "--tau", "0"])
        .env("QDELETE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range [1, 4]"));

    let out = Command::new(env!("CARGO_BIN_EXE_qdelete"))
        .args(["--cap", "5", "run", "--n", "5", "--tau", "0"])
        .env("QDELETE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(env!("CARGO_BIN_EXE_qdelete"))
        .args(["table"])
        .env("QDELETE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_help() {
    assert_eq!(qdelete(&[]).status.code(), Some(1));
    assert_eq!(qdelete(&["run", "--n", "3"]).status.code(), Some(1));
    assert_eq!(qdelete(&["--format", "xml", "table"]).status.code(), Some(1));
    let help = qdelete(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    for cmd in ["run", "sweep-phi", "table", "verify", "bench"] {
        assert!(stdout(&help).contains(cmd));
    }
    assert_eq!(qdelete(&["--version"]).status.code(), Some(0));
}
