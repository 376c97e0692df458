use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn keychain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keychain"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = keychain(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn usage_errors_exit_with_clap_code() {
    assert_eq!(keychain(&["sample", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        keychain(&["sample", "--n", "5", "--p", "0.5", "--c", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(keychain(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_one() {
    let o = keychain(&["sample", "--n", "5", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    // Growth 2 has no parameters at n = 100.
    assert_eq!(keychain(&["params", "--n", "100"]).status.code(), Some(1));
    assert_eq!(
        keychain(&["check", "--graph", "/nonexistent/graph.txt"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        keychain(&[
            "--profile",
            "paper",
            "--growth",
            "3",
            "params",
            "--n",
            "1000"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn failed_embedding_is_data() {
    // An isolated vertex at this density for seed 0.
    let csv = stdout(&["--format", "csv", "embed", "--n", "500", "--c", "2"]);
    assert_eq!(
        csv,
        "stage,attempt,ok,detail\nhost,0,false,vertex 177 is isolated\n"
    );
}

#[test]
fn params_accept_huge_n() {
    let csv = stdout(&[
        "--format",
        "csv",
        "params",
        "--n",
        "1000000000000000000000000",
    ]);
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("1000000000000000000000000,55,"), "{row}");
    let json: Value =
        serde_json::from_str(&stdout(&["params", "--n", "1024", "--growth", "2"])).unwrap();
    assert_eq!(json["ell"], 24);
}

#[test]
fn template_matches_edge_list_format() {
    let text = stdout(&["template", "--n", "24", "--t", "5", "--ell", "3"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("24 24"));
    assert_eq!(lines.count(), 24);
}

#[test]
fn empty_grid_gives_header_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout(&["--out", out, "sweep", "--n", "100"]);
    assert_eq!(
        read(dir.path(), "sweep_summary.csv"),
        "n,c,p,metric,trials,successes,rate\n"
    );
    assert_eq!(
        read(dir.path(), "sweep_trials.csv"),
        "n,c,p,trial,seed,metric,success,detail\n"
    );
    let json: Value = serde_json::from_str(&read(dir.path(), "sweep_trials.json")).unwrap();
    assert_eq!(json, Value::Array(vec![]));
}

#[test]
fn embed_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout(&[
        "--seed", "1", "--out", out, "sample", "--n", "3000", "--c", "2",
    ]);
    let graph = dir.path().join("graph.txt");
    let graph = graph.to_str().unwrap();
    stdout(&["--seed", "1", "--out", out, "embed", "--graph", graph]);
    let outcome: Value = serde_json::from_str(&read(dir.path(), "embed.json")).unwrap();
    assert_eq!(outcome["outcome"], "embedded");

    let embedding = dir.path().join("embed.json");
    let v: Value = serde_json::from_str(&stdout(&[
        "verify",
        "--graph",
        graph,
        "--embedding",
        embedding.to_str().unwrap(),
    ]))
    .unwrap();
    assert_eq!(v["ok"], true);

    // A bare embedding with two images swapped no longer verifies.
    let mut bare = outcome["embedding"].clone();
    let phi = bare["phi"].as_array_mut().unwrap();
    phi.swap(0, 1);
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, bare.to_string()).unwrap();
    let csv = stdout(&[
        "--format",
        "csv",
        "verify",
        "--graph",
        graph,
        "--embedding",
        tampered.to_str().unwrap(),
    ]);
    assert!(csv.lines().nth(1).unwrap().starts_with("false,"), "{csv}");
}

#[test]
fn same_seed_same_sample_different_seed_differs() {
    let a = stdout(&["--seed", "5", "sample", "--n", "50", "--p", "0.1"]);
    let b = stdout(&["--seed", "5", "sample", "--n", "50", "--p", "0.1"]);
    let c = stdout(&["--seed", "6", "sample", "--n", "50", "--p", "0.1"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn sweep_trial_reproduces_single_run() {
    // Trial j of a sweep is the single run with the trial's seed.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout(&[
        "--seed", "9", "--trials", "2", "--out", out, "sweep", "--n", "500", "--c", "3",
        "--metric", "embed",
    ]);
    let trials = read(dir.path(), "sweep_trials.csv");
    let row: Vec<String> = csv::Reader::from_reader(trials.as_bytes())
        .records()
        .last()
        .unwrap()
        .unwrap()
        .iter()
        .map(str::to_string)
        .collect();
    assert_eq!(row[3], "1");
    let seed = &row[4];
    let json: Value = serde_json::from_str(&stdout(&[
        "--seed", seed, "embed", "--n", "500", "--c", "3",
    ]))
    .unwrap();
    assert_eq!(json["outcome"] == "embedded", row[6] == "true");
}

#[test]
fn check_reports_every_requested_property() {
    let csv = stdout(&[
        "--format",
        "csv",
        "check",
        "--n",
        "12",
        "--p",
        "0.4",
        "--mode",
        "exact",
        "--property",
        "P1,P5,P8",
    ]);
    let props: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(props, ["P1", "P5", "P8"]);
    assert_eq!(
        keychain(&["check", "--n", "12", "--p", "0.4", "--property", "P9"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn mcs_bound_reports_certificate() {
    let json: Value = serde_json::from_str(&stdout(&[
        "mcs",
        "bound",
        "--n",
        "1000000",
        "--epsilon",
        "0.5",
        "--delta",
        "0.1",
    ]))
    .unwrap();
    assert_eq!(json["certified"], true);
    assert_eq!(json["m"], 1_500_000);
}
