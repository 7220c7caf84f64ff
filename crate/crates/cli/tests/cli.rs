use std::process::{Command, Output};

fn hochex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochex")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = hochex(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn homology_of_the_three_cycle_at_n4() {
    let v = json(&["homology", "-s", "3", "-n", "4"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["all_match"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let nonzero: Vec<(u64, u64)> = rows
        .iter()
        .filter(|r| r["dim"].as_u64().unwrap() > 0)
        .map(|r| (r["q"].as_u64().unwrap(), r["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(nonzero, vec![(6, 1)]);
    assert!(rows.iter().all(|r| r["match"] == true));
}

#[test]
fn homology_of_the_loop_over_f2() {
    let v = json(&["homology", "-s", "1", "-n", "2", "--char", "2"]);
    let dims: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![0, 1, 1, 0]);
}

#[test]
fn extend_reports_base_at_the_top_degree() {
    let v = json(&["extend", "-s", "3", "-n", "2", "-q", "3"]);
    assert_eq!(v["verdict"], "BASE");
    assert_eq!(v["lemma42"], false);
    assert_eq!(v["dim_T"], 12);
    assert_eq!(v["zero_class"], false);
}

#[test]
fn extend_reports_trivial_extension_below_the_top_degree() {
    let v = json(&["extend", "-s", "3", "-n", "3", "-q", "3", "--coeffs", "1,0"]);
    assert_eq!(v["verdict"], "TRIVIAL_EXT");
    assert_eq!(v["lemma42"], true);
    assert_eq!(v["coefficients"], serde_json::json!(["1", "0"]));
}

#[test]
fn zero_coefficients_warn() {
    let o = hochex(&["extend", "-s", "3", "-n", "2", "-q", "3", "--coeffs", "0"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero class"));
    assert!(stdout(&o).contains("TRIVIAL_EXT"));
}

#[test]
fn fractional_and_negative_coefficients_parse() {
    let v = json(&["extend", "-s", "3", "-n", "3", "-q", "3", "--coeffs", "-1/2,3"]);
    assert_eq!(v["coefficients"], serde_json::json!(["-1/2", "3"]));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["extend", "-s", "3", "-n", "3", "-q", "5"],
        vec!["extend", "-s", "3", "-n", "3", "-q", "4"],
        vec!["extend", "-s", "3", "-n", "3", "-q", "3", "--coeffs", "1"],
        vec!["homology", "-s", "3", "-n", "2", "--char", "4"],
        vec!["oracle", "-s", "4", "-n", "4"],
        vec!["homology", "-s", "0", "-n", "2"],
        vec!["homology", "-s", "2", "-n", "1"],
    ] {
        let o = hochex(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn oracle_agrees_on_small_algebras() {
    let v = json(&["oracle", "-s", "3", "-n", "2"]);
    assert_eq!((v["h2_bar"].as_u64(), v["hh2_bar"].as_u64(), v["hh2_skoldberg_sum"].as_u64()), (Some(1), Some(1), Some(1)));
    let v = json(&["oracle", "-s", "1", "-n", "2", "--char", "2"]);
    assert_eq!(v["h2_bar"], 2);
    assert_eq!(v["agree"], true);
}

#[test]
fn verify_passes_and_exits_zero() {
    let o = hochex(&["verify", "-s", "3", "-n", "2", "--char", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("PASS (")));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn json_output_is_reproducible() {
    for args in [
        vec!["homology", "-s", "2", "-n", "4", "--format", "json"],
        vec!["extend", "-s", "2", "-n", "3", "-q", "4", "--format", "json"],
        vec!["verify", "-s", "3", "-n", "2", "--seed", "7", "--format", "json"],
        vec!["oracle", "-s", "2", "-n", "3", "--format", "json"],
    ] {
        let (a, b) = (hochex(&args), hochex(&args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["verify", "-s", "3", "-n", "3", "--format", "json"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_hochex")).args(args).env("HOCHEX_THREADS", threads).output().unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}
