use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_imdlab");

const TABLE1_INSTANCE: &str = r#"{
  "mu": 0.5,
  "p_h_given_H": 0.75,
  "p_h_given_L": 0.5,
  "alpha_L": 0.2,
  "alpha_H": 0.8,
  "n": 51
}"#;

const OPTIMAL_PROFILE: &str = r#"{
  "strategy_for_L": {"delta_l": -0.5, "delta_h": -0.3},
  "strategy_for_H": {"delta_l": 0.5, "delta_h": 0.3}
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("IMDLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn analyze_human_reports_critical_proportions() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "t1.json", TABLE1_INSTANCE);
    let out = stdout_of(&run(&["analyze", "--config", &config]));
    assert!(out.contains("M                = 0.6"));
    assert!(out.contains("0.8333333333333334"));
    assert!(out.contains("(0.5, 0.3)"));
    assert!(out.contains("theta_maj >= theta*: yes"));
}

#[test]
fn analyze_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "t1.json", TABLE1_INSTANCE);
    let out = stdout_of(&run(&["analyze", "--format", "json", "--config", &config]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["theta_star"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((v["ideal_threshold"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(v["threshold_dominance_holds"], serde_json::Value::Bool(true));
}

#[test]
fn analyze_rejects_malformed_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "bad.json", r#"{"mu": 0.5}"#);
    let out = run(&["analyze", "--config", &config]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json"), "stderr names the file: {err}");
}

#[test]
fn election_exact_matches_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write(dir.path(), "t1.json", TABLE1_INSTANCE);
    let profile = write(dir.path(), "p.json", OPTIMAL_PROFILE);
    let out = stdout_of(&run(&[
        "election",
        "--format",
        "json",
        "--instance",
        &instance,
        "--profile",
        &profile,
        "--exact",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let lah = v["lambda_a_h"].as_f64().unwrap();
    let lal = v["lambda_a_l"].as_f64().unwrap();
    // Both states put 0.6 of the vote behind the informed majority decision,
    // so the two conditional mistake rates coincide.
    assert!(lah > 0.5 && lah < 1.0);
    assert!(((1.0 - lah) - lal).abs() < 1e-12);
}

#[test]
fn election_simulation_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write(dir.path(), "t1.json", TABLE1_INSTANCE);
    let profile = write(dir.path(), "p.json", OPTIMAL_PROFILE);
    let args = [
        "election",
        "--format",
        "json",
        "--instance",
        instance.as_str(),
        "--profile",
        profile.as_str(),
        "--simulate",
        "--trials",
        "2000",
        "--seed",
        "7",
    ];
    let a = stdout_of(&run(&args));
    let b = stdout_of(&run(&args));
    assert_eq!(a, b);

    // IMDLAB_SEED is an alternative spelling of --seed.
    let via_env = Command::new(BIN)
        .args(&args[..args.len() - 2])
        .env("IMDLAB_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a, String::from_utf8(via_env.stdout).unwrap());

    let c = stdout_of(&run(&[
        "election",
        "--format",
        "json",
        "--instance",
        &instance,
        "--profile",
        &profile,
        "--simulate",
        "--trials",
        "2000",
        "--seed",
        "8",
    ]));
    assert_ne!(a, c);
}

#[test]
fn mechanism_run_emits_full_trace() {
    let dir = tempfile::tempdir().unwrap();
    let reports = write(
        dir.path(),
        "r.csv",
        "type,signal,threshold\nH,h,0.4\nH,l,0.4\nH,h,0.4\nL,l,0.4\nH,h,0.4\n",
    );
    let out = stdout_of(&run(&["mechanism", "run", "--format", "json", "--reports", &reports]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["identified_majority"], "H");
    assert!((v["collective_threshold"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert!((v["l_frequency"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(v["assessed_state"], "H");
    assert_eq!(v["output"], "A");
}

#[test]
fn mechanism_run_reports_bad_rows_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let reports = write(dir.path(), "r.csv", "type,signal,threshold\nH,h,0.4\nX,h,0.4\n");
    let out = run(&["mechanism", "run", "--reports", &reports]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "stderr points at the row: {err}");
}

#[test]
fn elicit_feeds_mechanism() {
    let dir = tempfile::tempdir().unwrap();
    let responses = write(
        dir.path(),
        "q.csv",
        "pref_L,signal,peer_l,posterior_L,cf_peer_l,cf_posterior_L\n\
         R,l,0.4166666666666667,0.6666666666666667,0.35,0.4\n\
         R,h,0.35,0.4,0.4166666666666667,0.6666666666666667\n\
         A,l,0.4166666666666667,0.6666666666666667,0.35,0.4\n",
    );
    let derived = dir.path().join("derived.csv");
    let derived = derived.to_str().unwrap();
    let out = stdout_of(&run(&[
        "elicit",
        "--format",
        "json",
        "--responses",
        &responses,
        "--emit-reports",
        derived,
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
    assert_eq!(v["deltas_consistent"], serde_json::Value::Bool(true));

    let trace = stdout_of(&run(&["mechanism", "run", "--format", "json", "--reports", derived]));
    let t: serde_json::Value = serde_json::from_str(&trace).unwrap();
    assert_eq!(t["identified_majority"], "H");
    assert!((t["collective_threshold"].as_f64().unwrap() - 0.4).abs() < 1e-9);
}

#[test]
fn equilibrium_check_finds_minority_witness_on_coarse_grid() {
    let dir = tempfile::tempdir().unwrap();
    let instance = write(dir.path(), "t1.json", TABLE1_INSTANCE);
    let profile = write(dir.path(), "p.json", OPTIMAL_PROFILE);
    let out = stdout_of(&run(&[
        "equilibrium-check",
        "--format",
        "json",
        "--instance",
        &instance,
        "--profile",
        &profile,
        "--epsilon",
        "0.0",
        "--grid",
        "0.25",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["is_epsilon_equilibrium"], serde_json::Value::Bool(false));
    assert_eq!(v["witness"]["coalition"], "AllMinority");
}

#[test]
fn impossibility_tvd_writes_decreasing_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("tvd.csv");
    let csv_path = csv_path.to_str().unwrap();
    stdout_of(&run(&[
        "impossibility-tvd",
        "--alpha",
        "0.7",
        "--delta",
        "0.25",
        "--n",
        "400,1600",
        "--csv",
        csv_path,
    ]));
    let table = std::fs::read_to_string(csv_path).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next().unwrap(), "n,tvd,bound,tvd_sqrt_n");
    let tvd_at = |line: &str| line.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    let first = tvd_at(lines.next().unwrap());
    let second = tvd_at(lines.next().unwrap());
    assert!(first > second && second > 0.0);
}

#[test]
fn dist_binomial_sums_to_one() {
    let out = stdout_of(&run(&["dist", "binomial", "--n", "20", "--p", "0.3"]));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "index,probability");
    let total: f64 = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn reproduce_runs_all_checks_and_gates_exit_code() {
    let out = run(&["reproduce"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert_eq!(text.matches(" PASS ").count(), 6, "{text}");

    let one = run(&["reproduce", "tvd-decay"]);
    assert!(one.status.success());
    assert_eq!(String::from_utf8_lossy(&one.stdout).matches(" PASS ").count(), 1);

    let unknown = run(&["reproduce", "nonsense"]);
    assert!(!unknown.status.success());
    let err = String::from_utf8_lossy(&unknown.stderr);
    assert!(err.contains("optimal-strategy") && err.contains("tvd-decay"), "{err}");
}
