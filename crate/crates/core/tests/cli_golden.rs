use std::process::Command;

use serde_json::Value;

fn nullcone(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nullcone"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("golden file")
}

#[test]
fn count_record_matches_golden_file() {
    let (code, out) = nullcone(&["count", "--space", "Sp", "--t", "1", "--k", "1", "-q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("count_sp_t1_k1_q3.json"));
}

#[test]
fn height_record_matches_golden_file() {
    let args = [
        "height", "--family", "generic", "-m", "2", "-t", "2", "-n", "2", "--vc", "1,1", "--field",
        "p=32003",
    ];
    let (code, out) = nullcone(&args);
    assert_eq!(code, 0);
    assert_eq!(out, golden("height_generic_vc11.json"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["computed"]["height"], 3);
}

#[test]
fn grid_csv_matches_golden_file() {
    let (code, out) = nullcone(&["grid", "char2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("grid_char2.csv"));
}

#[test]
fn certificate_example() {
    let args = [
        "ara-certify",
        "--family",
        "pfaffian",
        "-t",
        "1",
        "-n",
        "3",
        "--field",
        "p=32003",
        "--seed",
        "42",
    ];
    let (code, first) = nullcone(&args);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["formulas"]["ara"], 3);
    assert_eq!(v["certificate"]["verified"], true);
    let (_, second) = nullcone(&args);
    assert_eq!(first, second);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(
        nullcone(&["count", "--space", "X_alt", "-t", "2", "-n", "4", "-q", "3"]).0,
        3
    );
    assert_eq!(nullcone(&["count", "--bogus"]).0, 64);
    let (code, out) = nullcone(&[
        "check-identities",
        "--check",
        "char2",
        "-n",
        "3",
        "--field",
        "p=3",
    ]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["checks"][0]["witness"].is_string());
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_nullcone"))
            .env("NULLCONE_THREADS", threads)
            .args(["grid", "counts", "--format", "csv"])
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("4"));
}
