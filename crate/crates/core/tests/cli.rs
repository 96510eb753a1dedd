use std::process::{Command, Output};

fn lastsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lastsq")).args(args).env_remove("LASTSQ_MAX_CELLS").output().expect("run lastsq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn compute_prints_value() {
    let o = lastsq(&["compute", "S", "6", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "17\n");
    let o = lastsq(&["compute", "T", "10", "4"]);
    assert_eq!(stdout(&o), "5503\n");
}

#[test]
fn compute_all_sums_agree_on_a_large_instance() {
    let values: Vec<String> =
        ["T", "U", "V", "W"].iter().map(|s| stdout(&lastsq(&["compute", s, "150", "49"]))).collect();
    let s = stdout(&lastsq(&["compute", "S", "200", "49"]));
    assert!(values.iter().all(|v| *v == s), "{values:?} vs {s}");
}

#[test]
fn compute_out_of_range_is_usage_error() {
    let o = lastsq(&["compute", "T", "3", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(code(&lastsq(&["bogus"])), 2);
    assert_eq!(code(&lastsq(&["compute", "X", "3", "1"])), 2);
}

#[test]
fn table_csv_matches_golden_file() {
    let o = lastsq(&["table", "10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), include_str!("golden/t_table_10.csv"));
}

#[test]
fn table_plain_contains_rows() {
    let o = lastsq(&["table", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().last().unwrap().split_whitespace().eq(["4", "|", "15", "17", "7", "1"]));
}

#[test]
fn enumerate_lists_plus_class_in_canonical_order() {
    let o = lastsq(&["enumerate", "B", "3", "1", "--sign", "plus", "--list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "btt\nbtw\nbwt\ntbt\nwbt\n");
}

#[test]
fn enumerate_count_and_render() {
    let o = lastsq(&["enumerate", "D", "6", "1", "--sign", "plus", "--count"]);
    assert_eq!(stdout(&o), "17\n");
    let o = lastsq(&["enumerate", "B", "3", "1", "--weight", "1", "--list", "--render"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "tbt  [^][#][^]"));
}

#[test]
fn weight_filter_on_domino_family_is_rejected() {
    let o = lastsq(&["enumerate", "D", "6", "1", "--weight", "1", "--count"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn size_guard_and_environment_override() {
    let o = lastsq(&["enumerate", "D", "25", "12", "--count"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("LASTSQ_MAX_CELLS"));
    let o = Command::new(env!("CARGO_BIN_EXE_lastsq"))
        .args(["enumerate", "D", "25", "12", "--count"])
        .env("LASTSQ_MAX_CELLS", "30")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn enumeration_output_is_identical_across_job_counts() {
    let base = lastsq(&["enumerate", "B", "10", "3", "--sign", "plus", "--list", "--jobs", "1"]);
    assert_eq!(code(&base), 0);
    for jobs in ["2", "4", "7"] {
        let o = lastsq(&["enumerate", "B", "10", "3", "--sign", "plus", "--list", "--jobs", jobs]);
        assert_eq!(o.stdout, base.stdout, "jobs={jobs}");
    }
}

#[test]
fn verify_output_is_identical_across_job_counts() {
    let args = ["verify", "lemma", "--nmax", "8", "--format", "json", "--jobs"];
    let one = lastsq(&[&args[..], &["1"]].concat());
    let many = lastsq(&[&args[..], &["3"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn biject_examples() {
    assert_eq!(stdout(&lastsq(&["biject", "prop5-inv", "tbt"])), "bwdw\n");
    assert_eq!(stdout(&lastsq(&["biject", "prop5", "bwdw"])), "tbt\n");
    let o = lastsq(&["biject", "prop1", r#"{"m":4,"chosen":[1,2,3,4],"marks":[1]}"#]);
    assert_eq!(stdout(&o), "bdw\n");
    let o = lastsq(&["biject", "prop1-inv", "bwdw"]);
    assert_eq!(stdout(&o), "{\"m\":5,\"chosen\":[1,3,4,5],\"marks\":[1]}\n");
}

#[test]
fn biject_domain_errors_exit_three() {
    assert_eq!(code(&lastsq(&["biject", "prop5", "bd"])), 3);
    assert_eq!(code(&lastsq(&["biject", "conjugate", "btw"])), 3);
}

#[test]
fn biject_parse_error_exits_two() {
    assert_eq!(code(&lastsq(&["biject", "prop5-inv", "bxq"])), 2);
    assert_eq!(code(&lastsq(&["biject", "prop1", "{not json"])), 2);
}

#[test]
fn conjugate_reports_exceptional_arrangement() {
    let o = lastsq(&["biject", "conjugate", "bbw"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "EXCEPTIONAL epsilon-\n");
}

#[test]
fn verify_json_ends_with_summary() {
    let o = lastsq(&["verify", "auxiliary", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    for line in text.lines().take(5) {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["check_name", "params", "status", "lhs", "rhs", "paper_ref", "detail"] {
            assert!(r.get(key).is_some(), "missing {key} in {line}");
        }
    }
}

#[test]
fn verify_plain_prints_summary() {
    let o = lastsq(&["verify", "strata", "--nmax", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("SKIP strata.V")));
    assert!(text.lines().last().unwrap().starts_with("summary: pass="));
}
