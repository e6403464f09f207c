use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use terkit_cli::render::parse_edit_counts;

fn mini(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/mini")
        .join(name)
}

fn terkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_terkit"))
        .args(args)
        .env("RUST_LOG", "off")
        .env_remove("TERKIT_RESOURCE_DIR")
        .output()
        .expect("spawn terkit")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn score_jsonl(hyp: &Path, extra: &[&str]) -> Vec<Value> {
    let refs = mini("metadata.tsv");
    let alts = mini("alternatives.txt");
    let mut args = vec![
        "score",
        "--ref",
        path(&refs),
        "--alts",
        path(&alts),
        "--hyp",
        path(hyp),
        "--format",
        "jsonl",
    ];
    args.extend_from_slice(extra);
    stdout(&terkit(&args))
        .lines()
        .map(|l| serde_json::from_str(l).expect("jsonl line"))
        .collect()
}

fn summary(hyp: &Path, extra: &[&str]) -> Value {
    let refs = mini("metadata.tsv");
    let alts = mini("alternatives.txt");
    let mut args = vec![
        "score",
        "--ref",
        path(&refs),
        "--alts",
        path(&alts),
        "--hyp",
        path(hyp),
    ];
    args.extend_from_slice(extra);
    serde_json::from_str(&stdout(&terkit(&args))).expect("summary json")
}

fn micro_ter(s: &Value) -> f64 {
    s["micro"]["TER"].as_f64().expect("micro TER")
}

#[test]
fn verbatim_references_score_zero() {
    let dir = tempfile::tempdir().unwrap();
    let meta = fs::read_to_string(mini("metadata.tsv")).unwrap();
    let mut hyp = String::from("ID\tTEXT\n");
    for line in meta.lines().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        hyp.push_str(&format!("{}\t{}\n", cols[0], cols[3]));
    }
    let hyp_path = dir.path().join("verbatim.tsv");
    fs::write(&hyp_path, hyp).unwrap();
    let s = summary(&hyp_path, &[]);
    assert_eq!(s["micro"]["TER"].to_string(), "0.00");
    assert_eq!(s["micro"]["mTER"].to_string(), "0.00");
    for u in score_jsonl(&hyp_path, &[]) {
        assert_eq!(u["TER"].to_string(), "0.00", "{u}");
    }
}

#[test]
fn dae_never_raises_corpus_ter() {
    for model in ["model_a.tsv", "model_b.tsv", "model_c.tsv"] {
        let on = micro_ter(&summary(&mini(model), &[]));
        let off = micro_ter(&summary(&mini(model), &["--toggle", "dae=off"]));
        assert!(on <= off, "{model}: on {on} off {off}");
    }
}

#[test]
fn rendered_edit_rows_match_jsonl_counts() {
    let refs = mini("metadata.tsv");
    let alts = mini("alternatives.txt");
    let hyp = mini("model_c.tsv");
    let text = stdout(&terkit(&[
        "render",
        "--ref",
        path(&refs),
        "--alts",
        path(&alts),
        "--hyp",
        path(&hyp),
    ]));
    let blocks: Vec<&str> = text.split("\n\n").collect();
    let rows = score_jsonl(&hyp, &[]);
    assert_eq!(blocks.len(), rows.len());
    for (block, row) in blocks.iter().zip(&rows) {
        let c = parse_edit_counts(block).expect("parsable block");
        let got = [c.cor, c.sub, c.ins, c.del].map(|n| n as u64);
        let want = ["cor", "sub", "ins", "del"].map(|k| row[k].as_u64().unwrap());
        assert_eq!(got, want, "{block}");
    }
}

#[test]
fn render_selects_one_uid() {
    let refs = mini("metadata.tsv");
    let hyp = mini("model_a.tsv");
    let text = stdout(&terkit(&[
        "render",
        "--ref",
        path(&refs),
        "--hyp",
        path(&hyp),
        "--uid",
        "POD0000052",
    ]));
    assert!(text.starts_with(r#"{"uid":"POD0000052", "#), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn crlf_inputs_give_identical_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let crlf = |name: &str| {
        let body = fs::read_to_string(mini(name))
            .unwrap()
            .replace('\n', "\r\n");
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    };
    let (refs, alts, hyp) = (
        crlf("metadata.tsv"),
        crlf("alternatives.txt"),
        crlf("model_b.tsv"),
    );
    let plain = stdout(&terkit(&[
        "score",
        "--ref",
        path(&mini("metadata.tsv")),
        "--alts",
        path(&mini("alternatives.txt")),
        "--hyp",
        path(&mini("model_b.tsv")),
        "--format",
        "jsonl",
    ]));
    let windows = stdout(&terkit(&[
        "score",
        "--ref",
        path(&refs),
        "--alts",
        path(&alts),
        "--hyp",
        path(&hyp),
        "--format",
        "jsonl",
    ]));
    assert_eq!(plain, windows);
}

#[test]
fn normalize_reads_stdin_style_file_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "Uh, she went to the Theatre at 8.30 a.m.\n").unwrap();
    let out = terkit(&["normalize", path(&input), "--trace"]);
    assert_eq!(stdout(&out), "she went to the theater at eight thirty am\n");
    let trace = String::from_utf8(out.stderr).unwrap();
    assert!(trace.contains("  nsw  : "), "{trace}");
    assert!(trace.contains("  ukus : "), "{trace}");
}

#[test]
fn normalize_respects_toggles() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "The Theatre.\n").unwrap();
    let out = terkit(&["normalize", path(&input), "--toggle", "ukus=off"]);
    assert_eq!(stdout(&out), "the theatre\n");
}

#[test]
fn ablation_matrix_csv_has_every_cell() {
    let refs = mini("metadata.tsv");
    let alts = mini("alternatives.txt");
    let (a, b, c) = (
        mini("model_a.tsv"),
        mini("model_b.tsv"),
        mini("model_c.tsv"),
    );
    let csv = stdout(&terkit(&[
        "ablate",
        "--ref",
        path(&refs),
        "--alts",
        path(&alts),
        "--hyp",
        path(&a),
        "--hyp",
        path(&b),
        "--hyp",
        path(&c),
        "--format",
        "csv",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "config,model,wer,rank");
    assert_eq!(lines.len(), 1 + 6 * 3);
    assert!(csv.contains("A0,model_a,0.79,1"), "{csv}");
}

#[test]
fn ablation_tied_models_share_a_rank() {
    let refs = mini("metadata.tsv");
    let dir = tempfile::tempdir().unwrap();
    let twin = dir.path().join("twin.tsv");
    fs::copy(mini("model_b.tsv"), &twin).unwrap();
    let b = mini("model_b.tsv");
    let a = mini("model_a.tsv");
    let csv = stdout(&terkit(&[
        "ablate",
        "--ref",
        path(&refs),
        "--hyp",
        path(&a),
        "--hyp",
        path(&b),
        "--hyp",
        path(&twin),
        "--configs",
        "A0",
        "--format",
        "csv",
    ]));
    let ranks: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(ranks, ["3", "1", "1"], "{csv}");
}

#[test]
fn missing_file_exits_one_with_json_error() {
    let out = terkit(&[
        "--error-json",
        "score",
        "--ref",
        "/nonexistent/metadata.tsv",
        "--hyp",
        path(&mini("model_a.tsv")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let line = String::from_utf8(out.stderr).unwrap();
    let err: Value = serde_json::from_str(line.trim()).expect("json error line");
    assert_eq!(err["exit_code"], 1);
    assert!(err["path"].as_str().unwrap().contains("metadata.tsv"));
}

#[test]
fn malformed_data_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "ID\tTEXT\nPOD0000051\tone\nPOD0000051\ttwo\n").unwrap();
    let out = terkit(&[
        "--error-json",
        "score",
        "--ref",
        path(&mini("metadata.tsv")),
        "--hyp",
        path(&bad),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["exit_code"], 2);
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(terkit(&["score"]).status.code(), Some(1));
    let bad_toggle = terkit(&["normalize", "--toggle", "bogus=on", "/dev/null"]);
    assert_eq!(bad_toggle.status.code(), Some(1));
    assert_eq!(terkit(&["--help"]).status.code(), Some(0));
}
