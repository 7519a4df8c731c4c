use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmwave-assoc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout should be JSON")
}

#[test]
fn generate_writes_the_same_bytes_for_the_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "9", "--seed", "42", "--out", "a.json",
        ],
    );
    let b = run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "9", "--seed", "42", "--out", "b.json",
        ],
    );
    assert!(a.status.success() && b.status.success());
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);

    let scenario: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(scenario["aps"].as_array().unwrap().len(), 3);
    assert_eq!(scenario["clients"].as_array().unwrap().len(), 9);
    assert_eq!(scenario["demands_bps"].as_array().unwrap().len(), 9);
    assert!(scenario["cell_radius_m"].as_f64().unwrap() > 0.0);
}

#[test]
fn solve_reports_a_certified_auction_run() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "9", "--seed", "42", "--out", "s.json",
        ],
    );
    let record = stdout_json(&run(dir.path(), &["solve", "s.json"]));
    assert_eq!(record["method"], "auction");
    assert_eq!(record["m"], 3);
    assert_eq!(record["n"], 9);
    assert_eq!(record["epsilon_exact"], "1/4");
    assert_eq!(record["feasible"], true);
    assert_eq!(record["certified"], true);
    assert_eq!(record["certificate"]["cs_a"], "pass");
    assert!(record["total_benefit_scaled"].as_i64().unwrap() > 0);
}

#[test]
fn exact_methods_agree_on_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "7", "--seed", "9", "--out", "s.json",
        ],
    );
    let auction = stdout_json(&run(
        dir.path(),
        &["solve", "s.json", "--method", "auction"],
    ));
    let flow = stdout_json(&run(dir.path(), &["solve", "s.json", "--method", "flow"]));
    let brute = stdout_json(&run(
        dir.path(),
        &["solve", "s.json", "--method", "bruteforce"],
    ));
    let optimum = auction["total_benefit_scaled"].as_i64().unwrap();
    assert_eq!(flow["total_benefit_scaled"].as_i64().unwrap(), optimum);
    assert_eq!(brute["total_benefit_scaled"].as_i64().unwrap(), optimum);
}

#[test]
fn verify_accepts_a_run_and_rejects_a_tampered_one() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "9", "--seed", "42", "--out", "s.json",
        ],
    );
    let solve = run(dir.path(), &["solve", "s.json", "--out", "run.json"]);
    assert!(solve.status.success());

    let verify = run(dir.path(), &["verify", "run.json"]);
    assert!(verify.status.success());
    let report = String::from_utf8_lossy(&verify.stdout);
    assert!(report.contains("certificate PASS"), "{report}");

    let path = dir.path().join("run.json");
    let mut saved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let total = saved["record"]["total_benefit_scaled"].as_i64().unwrap();
    saved["record"]["total_benefit_scaled"] = (total + 1).into();
    std::fs::write(&path, saved.to_string()).unwrap();

    let tampered = run(dir.path(), &["verify", "run.json"]);
    assert_eq!(tampered.status.code(), Some(2));
    let message = String::from_utf8_lossy(&tampered.stderr);
    assert!(message.contains("does not match"), "{message}");
}

#[test]
fn oversized_enumeration_exits_with_the_infeasibility_code() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--m", "10", "--n", "60", "--seed", "1", "--out", "s.json",
        ],
    );
    let output = run(dir.path(), &["solve", "s.json", "--method", "bruteforce"]);
    assert_eq!(output.status.code(), Some(3));
    let message = String::from_utf8_lossy(&output.stderr);
    assert!(message.contains("enumeration limit"), "{message}");
}

#[test]
fn coarse_epsilon_fails_with_the_right_codes() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "9", "--seed", "42", "--out", "s.json",
        ],
    );
    let solve = run(dir.path(), &["solve", "s.json", "--epsilon", "1/2"]);
    assert_eq!(solve.status.code(), Some(2));

    let sweep = run(
        dir.path(),
        &[
            "experiment",
            "benefit_vs_clients",
            "--epsilon",
            "1/2",
            "--sweep",
            "10:10",
            "--seeds",
            "1,",
        ],
    );
    assert_eq!(sweep.status.code(), Some(1));
}

#[test]
fn experiment_csv_is_ordered_and_deterministic_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "experiment",
        "benefit_vs_clients",
        "--m",
        "2",
        "--sweep",
        "2:4:2",
        "--seeds",
        "2",
    ];
    let first = run(dir.path(), &args);
    let second = run(dir.path(), &args);
    assert!(first.status.success());
    let first = String::from_utf8(first.stdout).unwrap();
    let second = String::from_utf8(second.stdout).unwrap();

    let lines: Vec<&str> = first.trim_end().lines().collect();
    assert_eq!(
        lines[0],
        "experiment,point_m,point_n,method,seed,epsilon,total_benefit,wall_time_ms,feasible,certified"
    );
    assert_eq!(lines.len(), 1 + 2 * 3 * 2);

    let mut keys = Vec::new();
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[0], "benefit_vs_clients");
        assert_eq!(fields[1], "2");
        if fields[3] == "auction" {
            assert!(!fields[5].is_empty());
            assert_eq!(fields[9], "true");
        } else {
            assert!(fields[5].is_empty());
            assert_eq!(fields[9], "false");
        }
        let method_rank = ["auction", "rssi", "random"]
            .iter()
            .position(|m| *m == fields[3])
            .unwrap();
        keys.push((
            fields[2].parse::<usize>().unwrap(),
            method_rank,
            fields[4].parse::<u64>().unwrap(),
        ));
    }
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "rows must be ordered by point, method, seed");

    let strip_timing = |text: &str| -> Vec<String> {
        text.trim_end()
            .lines()
            .map(|line| {
                let mut fields: Vec<&str> = line.split(',').collect();
                fields.remove(7);
                fields.join(",")
            })
            .collect()
    };
    assert_eq!(strip_timing(&first), strip_timing(&second));
}

#[test]
fn runtime_experiment_sweeps_three_increments_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(
        dir.path(),
        &[
            "experiment",
            "runtime_vs_size",
            "--pairs",
            "2x6",
            "--seeds",
            "2",
        ],
    );
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let rows: Vec<&str> = text.trim_end().lines().skip(1).collect();
    assert_eq!(rows.len(), 3 * 2);
    let epsilons: Vec<&str> = rows
        .iter()
        .map(|row| row.split(',').nth(5).unwrap())
        .collect();
    let thirds = (1.0f64 / 3.0).to_string();
    assert_eq!(epsilons[0], thirds);
    assert_eq!(epsilons[2], "0.25");
    assert_eq!(epsilons[4], "0.125");
    assert!(rows.iter().all(|row| row.contains(",auction,")));
}

#[test]
fn trace_logs_one_line_per_bid() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "generate", "--m", "3", "--n", "9", "--seed", "42", "--out", "s.json",
        ],
    );
    let record = stdout_json(&run(
        dir.path(),
        &["solve", "s.json", "--trace", "trace.csv"],
    ));
    let bids = record["bids_total"].as_u64().unwrap();
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let lines: Vec<&str> = trace.trim_end().lines().collect();
    assert_eq!(lines[0], "phase,iteration,actor,target,level,delta,evicted");
    assert_eq!(lines.len() as u64, 1 + bids);
    assert!(lines[1].starts_with("forward,1,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 7));
}
