//! End-to-end tests driving the compiled binary: exit codes, output
//! shapes, determinism of reruns, and the full
//! extract -> split -> baseline -> score pipeline.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_intentarg")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> TempDir {
        let dir = std::env::temp_dir().join(format!("intentarg-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).expect("create temp dir");
        TempDir(dir)
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, contents).expect("write temp file");
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn s(path: &Path) -> String {
    path.to_str().expect("utf-8 path").to_string()
}

#[test]
fn classify_labels_lines_and_marks_non_directives() {
    let dir = TempDir::new("classify");
    let input = dir.file(
        "utterances.txt",
        "Why don't you just call the police?\nhow many points you got\nthe weather was nice\n",
    );
    let output = run(&["classify", &s(&input)]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "4\twhy dont you just call the police\n2\thow many points you got\n-\tthe weather was nice\n"
    );
}

#[test]
fn extract_emits_corpus_rows() {
    let dir = TempDir::new("extract");
    let input = dir.file("utterances.txt", "please dont tell my daddy\n");
    let output = run(&["extract", &s(&input), "--labels", "str", "--strip-notation"]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "prohibition\tplease dont tell my daddy\tnot to tell the speakers daddy\n"
    );
}

#[test]
fn validate_exit_codes_and_report() {
    let dir = TempDir::new("validate");
    let clean = dir.file("clean.tsv", "3\tdont shout\tnot to shout\n");
    let output = run(&["validate", &s(&clean)]);
    assert!(output.status.success(), "clean corpus should validate");

    // Head marker inconsistent with the requirement label.
    let bad = dir.file("bad.tsv", "4\tdont pick me up\tnot to pick the speaker up\n");
    let output = run(&["validate", &s(&bad)]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("head mismatch"));

    let output = run(&["validate", &s(&bad), "--format", "report"]);
    assert_eq!(output.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert_eq!(report["count"], 1);
    assert_eq!(report["violations"][0]["kind"], "head_mismatch");
    assert!(report["config"]["cmd"].is_string());
}

#[test]
fn missing_input_is_an_io_error() {
    let output = run(&["stats", "/nonexistent/corpus.tsv"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn usage_error_exit_code() {
    let dir = TempDir::new("usage");
    let corpus = dir.file("c.tsv", "4\ta\tto a\n4\tb\tto b\n");
    let output = run(&[
        "split",
        &s(&corpus),
        "--fraction",
        "nonsense",
        "--train-out",
        &s(&dir.path("train.tsv")),
        "--test-out",
        &s(&dir.path("test.tsv")),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn stats_table_and_report_agree() {
    let dir = TempDir::new("stats");
    let corpus = dir.file(
        "c.tsv",
        "0\ta\tif a\n0\tb\tif b\n3\tc\tnot to c\n4\td\tto d\t-\tweather\n",
    );
    let output = run(&["stats", &s(&corpus)]);
    assert!(output.status.success());
    let table = stdout(&output);
    assert!(table.contains("yes_no_question"));
    assert!(table.contains("total"));

    let output = run(&["stats", &s(&corpus), "--format", "report"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("json");
    assert_eq!(report["per_type"]["yes_no_question"], 2);
    assert_eq!(report["per_type"]["prohibition"], 1);
    assert_eq!(report["total"], 4);
    assert_eq!(report["per_topic"]["weather"], 1);
}

#[test]
fn split_is_deterministic_and_leaves_inputs_untouched() {
    let dir = TempDir::new("split");
    let rows: String = (0..20).map(|i| format!("4\tsentence {i}\tto {i}\n")).collect();
    let corpus = dir.file("c.tsv", &rows);
    let before = std::fs::read(&corpus).unwrap();

    for round in 0..2 {
        let train = dir.path(&format!("train{round}.tsv"));
        let test = dir.path(&format!("test{round}.tsv"));
        let output = run(&[
            "split",
            &s(&corpus),
            "--fraction",
            "7/10",
            "--seed",
            "5",
            "--train-out",
            &s(&train),
            "--test-out",
            &s(&test),
        ]);
        assert!(output.status.success());
    }
    assert_eq!(
        std::fs::read(dir.path("train0.tsv")).unwrap(),
        std::fs::read(dir.path("train1.tsv")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.path("test0.tsv")).unwrap(),
        std::fs::read(dir.path("test1.tsv")).unwrap()
    );
    let test_rows = std::fs::read_to_string(dir.path("test0.tsv")).unwrap();
    assert_eq!(test_rows.lines().count(), 6); // round-half-up of 20 * 3/10
    assert_eq!(std::fs::read(&corpus).unwrap(), before);
}

#[test]
fn augment_plan_report_matches_the_documented_totals() {
    let dir = TempDir::new("plan");
    let corpus = dir.file("c.tsv", "1\ta or b\twhether a or b\n");
    let output = run(&[
        "augment-plan",
        &s(&corpus),
        "--quota",
        "alternative_question=400",
        "--quota",
        "prohibition=400",
        "--quota",
        "strong_requirement=400",
        "--quota",
        "wh_question=800",
        "--variants",
        "10",
        "--format",
        "report",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("json");
    assert_eq!(report["plan"]["total_arguments"], 2000);
    assert_eq!(report["plan"]["total_pairs"], 20000);
    assert_eq!(report["plan"]["allocation"]["alternative_question"][4], 200);
}

#[test]
fn augment_apply_generates_classifiable_rows() {
    let dir = TempDir::new("apply");
    let arguments = dir.file("args.txt", "to ask ones wife\nnot to meet tomorrow\n");
    let output = run(&["augment-apply", &s(&arguments), "--n", "3", "--seed", "9"]);
    assert!(output.status.success());
    let rows = stdout(&output);
    assert_eq!(rows.lines().count(), 6);
    for line in rows.lines() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields.len(), 3);
        assert!(fields[0] == "4" || fields[0] == "3");
    }
    // Deterministic rerun.
    let again = run(&["augment-apply", &s(&arguments), "--n", "3", "--seed", "9"]);
    assert_eq!(rows, stdout(&again));
}

#[test]
fn score_perfect_predictions_total_one() {
    let dir = TempDir::new("score");
    let gold = dir.file("gold.tsv", "4\task your wife\tto ask ones wife\n4\tcall me\tto call the speaker\n");
    let pred = dir.file("pred.txt", "to ask ones wife\nto call the speaker\n");
    let emb = dir.file(
        "emb.txt",
        "to 1 0\nask 0.9 0.1\nones 0.5 0.5\nwife 0.1 0.9\ncall 0.7 0.3\nthe 0.2 0.8\nspeaker 0.4 0.6\n",
    );
    let output = run(&[
        "score", "--pred", &s(&pred), "--gold", &s(&gold), "--embeddings", &s(&emb),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("total     1.0000"), "{}", stdout(&output));

    let output = run(&[
        "score", "--pred", &s(&pred), "--gold", &s(&gold), "--embeddings", &s(&emb),
        "--format", "report",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("json");
    assert_eq!(report["report"]["count"], 2);
    assert!((report["report"]["means"]["total"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // Misaligned prediction file.
    let short = dir.file("short.txt", "to ask ones wife\n");
    let output = run(&[
        "score", "--pred", &s(&short), "--gold", &s(&gold), "--embeddings", &s(&emb),
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn baseline_then_score_pipeline() {
    let dir = TempDir::new("pipeline");
    let train = dir.file(
        "train.tsv",
        "4\topen the window now\tto open the window\n3\tdont touch the stove\tnot to touch the stove\n",
    );
    let input = dir.file("input.tsv", "4\topen the window please\tto open the window\n");
    let preds = dir.path("preds.txt");
    let output = run(&[
        "baseline", "--train", &s(&train), "--input", &s(&input), "--out", &s(&preds),
    ]);
    assert!(output.status.success());
    assert_eq!(std::fs::read_to_string(&preds).unwrap(), "to open the window\n");

    let emb = dir.file("emb.txt", "to 1 0\nopen 0 1\nthe 0.5 0.5\nwindow 0.3 0.7\n");
    let output = run(&[
        "score", "--pred", &s(&preds), "--gold", &s(&input), "--embeddings", &s(&emb),
    ]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("total     1.0000"));
}

#[test]
fn kappa_from_matrix_file() {
    let dir = TempDir::new("kappa");
    let matrix = dir.file("m.txt", "2 0\n1 1\n");
    let output = run(&["kappa", &s(&matrix)]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("kappa: -0.333333"));

    let output = run(&["kappa", &s(&matrix), "--format", "report"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("json");
    assert!((report["kappa"].as_f64().unwrap() + 1.0 / 3.0).abs() < 1e-9);

    let bad = dir.file("bad.txt", "2 0\n1 1 1\n");
    let output = run(&["kappa", &s(&bad)]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn korean_rules_end_to_end() {
    let dir = TempDir::new("korean");
    let input = dir.file("ko.txt", "저번처럼 가지 말고 백화점 세일은 미리 가서 대기하렴\n");
    let output = run(&["extract", &s(&input), "--rules", "ko", "--strip-notation"]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "5\t저번처럼 가지 말고 백화점 세일은 미리 가서 대기하렴\t백화점 세일은 미리 가서 대기하기\n"
    );
}
