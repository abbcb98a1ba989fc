//! End-to-end tests of the `cdb` binary: pipelines between subcommands,
//! exit codes, and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cdb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("cdb-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn construct1_output_verifies_as_constrained() {
    let words = tmp("c1.words");
    let out = cdb(&[
        "construct1",
        "--q",
        "2",
        "--k",
        "3",
        "--ell",
        "2",
        "--out",
        words.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");

    // every codeword is a (q^k - 1, 2k)-constrained word
    let verify = cdb(&[
        "verify",
        "--b",
        "7",
        "--k",
        "6",
        words.to_str().unwrap(),
    ]);
    assert!(verify.status.success(), "{verify:?}");
    let text = stdout(&verify);
    assert!(text.contains("100/100 words satisfy"), "{text}");
    std::fs::remove_file(&words).ok();
}

#[test]
fn verify_fails_on_bad_words_with_exit_2() {
    let path = tmp("bad.words");
    std::fs::write(&path, "# sigma=2\n0 0 0 0\n0 1 0 1\n").unwrap();
    let out = cdb(&["verify", "--b", "2", "--k", "1", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("word 1: FAIL"), "{text}");
    assert!(text.contains("word 2: ok"), "{text}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_empty_file_passes() {
    let path = tmp("empty.words");
    std::fs::write(&path, "").unwrap();
    let out = cdb(&["verify", "--b", "3", "--k", "2", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(&path).ok();
}

#[test]
fn validation_errors_exit_1() {
    let out = cdb(&["count", "--n", "4", "--b", "0", "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = cdb(&["count", "--n", "4", "--b", "2", "--k", "2", "--method", "sorcery"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn count_methods_agree() {
    let exact = stdout(&cdb(&["count", "--n", "10", "--b", "3", "--k", "3"]));
    let brute = stdout(&cdb(&[
        "count", "--n", "10", "--b", "3", "--k", "3", "--method", "brute",
    ]));
    let recursion = stdout(&cdb(&[
        "count", "--n", "10", "--b", "3", "--k", "3", "--method", "recursion",
    ]));
    assert_eq!(exact, brute);
    assert_eq!(exact, recursion);
    assert_eq!(exact.trim(), "378");
}

#[test]
fn rank_unrank_roundtrip_through_the_cli() {
    let word = stdout(&cdb(&[
        "unrank", "--r", "17", "--n", "9", "--b", "3", "--k", "3",
    ]));
    let word = word.trim().to_string();
    let rank = stdout(&cdb(&["rank", "--b", "3", "--k", "3", "--word", &word]));
    assert_eq!(rank.trim(), "17");
}

#[test]
fn table_headers_and_values() {
    let out = stdout(&cdb(&["table", "--b-max", "2", "--k-max", "3"]));
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "b\\k,1,2,3");
    assert!(lines.next().unwrap().starts_with("1,1.0000,1.0000"));
    let row2 = lines.next().unwrap();
    assert!(row2.starts_with("2,"), "{row2}");
    assert!(row2.contains("0.6942"), "{row2}");
}

#[test]
fn simulation_manifests_are_byte_identical_and_clean() {
    let args = [
        "simulate-lsymbol",
        "--n",
        "48",
        "--b",
        "3",
        "--k",
        "3",
        "--mode",
        "cyclic",
        "--trials",
        "200",
        "--seed",
        "99",
    ];
    let a = cdb(&args);
    let b = cdb(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical output");
    let manifest: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(manifest["schema"], 1);
    assert_eq!(manifest["failures"], 0);
}

#[test]
fn racetrack_simulation_runs_clean() {
    let out = cdb(&[
        "simulate-racetrack",
        "--m",
        "3",
        "--n",
        "32",
        "--b",
        "3",
        "--k",
        "2",
        "--t1",
        "2",
        "--trials",
        "200",
        "--seed",
        "5",
    ]);
    assert!(out.status.success(), "{out:?}");
    let manifest: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(manifest["failures"], 0);
    assert_eq!(manifest["ell"], 3);
}

#[test]
fn capacity_exports_automaton_and_matrix() {
    let aut = tmp("automaton.json");
    let mat = tmp("matrix.csv");
    let out = cdb(&[
        "capacity",
        "--b",
        "3",
        "--k",
        "3",
        "--format",
        "json",
        "--automaton-out",
        aut.to_str().unwrap(),
        "--matrix-out",
        mat.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(manifest["states"], 13);
    assert_eq!(manifest["essential_states"], 10);

    let aut_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&aut).unwrap()).unwrap();
    assert_eq!(aut_json["states"].as_array().unwrap().len(), 13);
    assert_eq!(aut_json["initial"], 0);
    let matrix = std::fs::read_to_string(&mat).unwrap();
    assert_eq!(matrix.lines().count(), 10);
    assert_eq!(matrix.lines().next().unwrap().split(',').count(), 10);
    std::fs::remove_file(&aut).ok();
    std::fs::remove_file(&mat).ok();
}

#[test]
fn independent_set_cycles_verify_cyclically() {
    // order-4 de Bruijn cycles are cyclic (2^4, 4)-constrained words
    let words = tmp("isets.words");
    let out = cdb(&[
        "independent-set",
        "--k",
        "4",
        "--delta",
        "3",
        "--seed",
        "2",
        "--out",
        words.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let verify = cdb(&[
        "verify",
        "--b",
        "16",
        "--k",
        "4",
        "--mode",
        "cyclic",
        words.to_str().unwrap(),
    ]);
    assert_eq!(verify.status.code(), Some(0), "{verify:?}");
    std::fs::remove_file(&words).ok();
}

#[test]
fn forbidden_family_listing() {
    let out = stdout(&cdb(&["forbidden", "--b", "3", "--k", "3"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# sigma=2");
    assert_eq!(lines.len(), 5);
    assert!(lines.contains(&"0 0 0 0"));
    assert!(lines.contains(&"0 1 0 1 0"));
}

#[test]
fn msequences_listing() {
    let out = cdb(&["msequences", "--q", "2", "--k", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 2);
    for entry in v["msequences"].as_array().unwrap() {
        let word = entry["word"].as_str().unwrap();
        assert_eq!(word.split(' ').count(), 15);
        assert!(word.ends_with("0 0 0"), "zero run at the end: {word}");
    }
}

#[test]
fn zero_trials_produce_an_empty_manifest() {
    let out = cdb(&[
        "simulate-lsymbol",
        "--n",
        "16",
        "--b",
        "3",
        "--k",
        "3",
        "--trials",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(manifest["trials"], 0);
    assert_eq!(manifest["failures"], 0);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let path = tmp("mangled.words");
    std::fs::write(&path, "0 1 0\n0 x 1\n").unwrap();
    let out = cdb(&["verify", "--b", "2", "--k", "1", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn construct1_fixed_length_words_share_one_length() {
    let out = cdb(&[
        "construct1",
        "--q",
        "2",
        "--k",
        "3",
        "--ell",
        "2",
        "--fixed-length",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let words = v["codewords"].as_array().unwrap();
    assert_eq!(words.len(), 100);
    for w in words {
        assert_eq!(w.as_str().unwrap().split(' ').count(), 22);
    }
}

#[test]
fn dump_reads_writes_the_tuple_format() {
    let dump = tmp("reads.txt");
    let out = cdb(&[
        "simulate-lsymbol",
        "--n",
        "16",
        "--b",
        "3",
        "--k",
        "3",
        "--trials",
        "1",
        "--seed",
        "3",
        "--dump-reads",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    for line in text.lines() {
        assert_eq!(line.split(' ').count(), 4, "ell-tuple per line: {line}");
    }
    assert!(text.lines().count() >= 1);
    std::fs::remove_file(&dump).ok();
}
