use std::fs::{self, File};
use std::path::Path;
use std::process::{Command, Output};

use gecsynth::corpus::write_tagged_corpus;
use gecsynth::noise::NoiseOp;
use gecsynth_fixtures::{config_path, data_dir, generate_corpus};
use serde_json::Value;
use tempfile::TempDir;

fn gecsynth(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gecsynth"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn config() -> String {
    config_path().display().to_string()
}

/// Runs a command expected to succeed and parses its JSON report.
fn ok(dir: &Path, args: &[&str]) -> Value {
    let out = gecsynth(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(dir: &Path, args: &[&str]) -> i32 {
    gecsynth(dir, args).status.code().expect("exit code")
}

fn write_tagged(dir: &Path, name: &str, n: usize, seed: u64) {
    let corpus = generate_corpus(n, seed);
    write_tagged_corpus(File::create(dir.join(name)).unwrap(), &corpus).unwrap();
}

#[test]
fn preprocess_keeps_clean_corpus() {
    let dir = TempDir::new().unwrap();
    let text: Vec<String> = generate_corpus(50, 1).iter().map(|s| s.text()).collect();
    fs::write(dir.path().join("clean.txt"), text.join("\n") + "\n").unwrap();
    let m = ok(dir.path(), &["--config", &config(), "preprocess", "-i", "clean.txt", "-o", "kept.txt"]);
    assert_eq!(m["counts"]["read"], 50);
    assert_eq!(m["counts"]["kept"], 50);
    assert_eq!(m["counts"]["rejected"], serde_json::json!({}));
    assert_eq!(fs::read_to_string(dir.path().join("kept.txt")).unwrap().lines().count(), 50);
}

#[test]
fn preprocess_rejects_blocklisted_sentences() {
    let dir = TempDir::new().unwrap();
    let lines = [
        "Ég er að leita að vinnu í borginni.",
        "Ég er að leyta að vinnu í borginni.",
        "Hann fór yfr ána í gær.",
        "Við fundum vynnu fyrir sumarið.",
        "Þetta er ágæt setning um hesta.",
        "Ok",
    ];
    fs::write(dir.path().join("in.txt"), lines.join("\n")).unwrap();
    let m = ok(dir.path(), &["--config", &config(), "preprocess", "-i", "in.txt", "-o", "kept.txt"]);
    let counts = &m["counts"];
    assert_eq!(counts["rejected"]["known_misspelling"], 3);
    assert_eq!(counts["rejected"]["length"], 1);
    assert_eq!(counts["kept"], 2);
    let report = fs::read_to_string(dir.path().join("kept.rejected.tsv")).unwrap();
    assert_eq!(report.lines().filter(|l| l.contains("\tknown_misspelling\t")).count(), 3);
}

#[test]
fn preprocess_decode_policy() {
    let dir = TempDir::new().unwrap();
    let mut bytes = "Ég er að leita að vinnu.\n".as_bytes().to_vec();
    bytes.extend_from_slice(b"bad \xff\xfe line here\n");
    bytes.extend_from_slice("Við lesum bók í safni.\n".as_bytes());
    fs::write(dir.path().join("in.txt"), bytes).unwrap();
    assert_eq!(exit_code(dir.path(), &["preprocess", "-i", "in.txt", "-o", "kept.txt"]), 5);
    let m = ok(dir.path(), &["--lenient", "preprocess", "-i", "in.txt", "-o", "kept.txt"]);
    assert_eq!(m["counts"]["read"], 3);
    assert_eq!(m["counts"]["kept"], 2);
    assert_eq!(m["counts"]["rejected"]["invalid_utf8"], 1);
}

#[test]
fn startup_errors_have_distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("in.txt"), "Ég er hér núna.\n").unwrap();
    let missing_rules = ["preprocess", "-i", "in.txt", "-o", "k.txt", "--rules", "nope.json"];
    assert_eq!(exit_code(dir.path(), &missing_rules), 3);
    fs::write(dir.path().join("bad.json"), r#"{"seed": 1, "naive_op_probability": 2.0}"#).unwrap();
    assert_eq!(exit_code(dir.path(), &["--config", "bad.json", "stats", "-i", "in.txt"]), 3);
    assert_eq!(exit_code(dir.path(), &["noise", "-i", "missing.tagged", "-o", "p.tsv"]), 4);
    assert_eq!(exit_code(dir.path(), &["noise", "-i", "in.txt", "-o", "p.tsv"]), 5);
    assert_eq!(exit_code(dir.path(), &["no-such-command"]), 2);
    assert_eq!(exit_code(dir.path(), &["--strict", "--lenient", "stats", "-i", "in.txt"]), 2);
}

#[test]
fn noise_manifest_counts() {
    let dir = TempDir::new().unwrap();
    write_tagged(dir.path(), "corpus.tagged", 300, 2);
    let m = ok(dir.path(), &["--config", &config(), "noise", "-i", "corpus.tagged", "-o", "pairs.tsv"]);
    let counts = &m["counts"];
    assert_eq!(counts["read"], 300);
    assert_eq!(counts["pairs_emitted"], 300);
    let ops = counts["ops"].as_object().unwrap();
    assert_eq!(ops.len(), NoiseOp::ALL.len());
    for op in NoiseOp::ALL {
        let c = &ops[op.as_str()];
        let applied = c["applied"].as_u64().unwrap();
        assert!(applied <= c["applicable"].as_u64().unwrap());
        if op.is_rule_based() {
            assert!(applied <= 300);
        }
    }
    assert_eq!(fs::read_to_string(dir.path().join("pairs.tsv")).unwrap().lines().count(), 300);
    assert_eq!(fs::read_to_string(dir.path().join("pairs.edits.jsonl")).unwrap().lines().count(), 300);
}

#[test]
fn stats_agree_with_noise_manifest() {
    let dir = TempDir::new().unwrap();
    write_tagged(dir.path(), "corpus.tagged", 400, 8);
    let m = ok(dir.path(), &["--config", &config(), "noise", "-i", "corpus.tagged", "-o", "pairs.tsv"]);
    let s = ok(dir.path(), &["stats", "-i", "pairs.tsv"]);
    assert_eq!(s["pairs"], 400);
    assert_eq!(s["edit_count_source"], "edit_log");
    let ids: Vec<&str> = NoiseOp::ALL.iter().map(|op| op.as_str()).collect();
    for (op, n) in s["per_op"].as_object().unwrap() {
        assert!(ids.contains(&op.as_str()), "{op}");
        assert_eq!(n, &m["counts"]["ops"][op]["applied"], "{op}");
        assert_eq!(s["per_op_edits"][op], m["counts"]["ops"][op]["edits"], "{op}");
    }
    assert!(s["mean_edit_count"].as_f64().unwrap() > 1.0);
}

#[test]
fn stats_of_identity_pairs() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("id.tsv"), "a b\ta b\nÉg er hér.\tÉg er hér.\n").unwrap();
    let s = ok(dir.path(), &["stats", "-i", "id.tsv"]);
    assert_eq!(s["mean_edit_count"], 0.0);
    assert_eq!(s["identity_pairs"], 2);
    assert_eq!(s["edit_count_source"], "spans");
    assert_eq!(s["length_ratio"]["mean"], 1.0);
}

#[test]
fn split_sizes_and_sidecar() {
    let dir = TempDir::new().unwrap();
    write_tagged(dir.path(), "corpus.tagged", 40, 3);
    ok(dir.path(), &["--config", &config(), "noise", "-i", "corpus.tagged", "-o", "pairs.tsv"]);
    let args = [
        "--seed", "5", "split", "-i", "pairs.tsv", "--out-dir", "parts", "--sidecar", "pairs.edits.jsonl",
        "--n-valid", "4", "--n-test", "6",
    ];
    let m = ok(dir.path(), &args);
    assert_eq!(m["counts"]["parts"], serde_json::json!({"train": 30, "valid": 4, "test": 6}));
    let lines = |p: &str| fs::read_to_string(dir.path().join(p)).unwrap().lines().map(str::to_owned).collect::<Vec<_>>();
    let mut all: Vec<String> = ["parts/train.tsv", "parts/valid.tsv", "parts/test.tsv"]
        .iter()
        .flat_map(|p| lines(p))
        .collect();
    all.sort();
    let mut original = lines("pairs.tsv");
    original.sort();
    assert_eq!(all, original);
    assert_eq!(lines("parts/test.edits.jsonl").len(), 6);
    let too_big = ["split", "-i", "pairs.tsv", "--out-dir", "p2", "--n-valid", "30", "--n-test", "30"];
    assert_eq!(exit_code(dir.path(), &too_big), 6);
}

#[test]
fn typed_testsets_and_scoring() {
    let dir = TempDir::new().unwrap();
    write_tagged(dir.path(), "corpus.tagged", 1500, 4);
    let m = ok(
        dir.path(),
        &["--config", &config(), "make-testsets", "-i", "corpus.tagged", "--out-dir", "sets", "-n", "50"],
    );
    assert_eq!(m["counts"]["pairs_emitted"], 350);
    for (name, _) in NoiseOp::TEST_SETS {
        let tsv = fs::read_to_string(dir.path().join(format!("sets/{name}.tsv"))).unwrap();
        assert_eq!(tsv.lines().count(), 50, "{name}");
    }

    let gleu = ok(dir.path(), &["score", "gleu", "--pairs", "sets/commas.tsv", "--hypothesis", "identity"]);
    assert!(gleu["score"].as_f64().unwrap() < 100.0);
    let span = ok(dir.path(), &["score", "span", "--m2", "sets/commas.m2", "--hypothesis", "identity"]);
    assert_eq!(span["f05"], 0.0);
    assert!(span["fn"].as_u64().unwrap() >= 50);

    let targets: Vec<String> = fs::read_to_string(dir.path().join("sets/commas.tsv"))
        .unwrap()
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().to_owned())
        .collect();
    fs::write(dir.path().join("targets.txt"), targets.join("\n") + "\n").unwrap();
    let gleu = ok(dir.path(), &["score", "gleu", "--pairs", "sets/commas.tsv", "--hypothesis", "targets.txt"]);
    assert_eq!(gleu["gleu"], 100.0);
    let span = ok(dir.path(), &["score", "span", "--pairs", "sets/commas.tsv", "--hypothesis", "targets.txt"]);
    assert_eq!(span["f05"], 1.0);
    let span = ok(dir.path(), &["score", "span", "--m2", "sets/commas.m2", "--hypothesis", "targets.txt"]);
    assert_eq!(span["f05"], 1.0);

    fs::write(dir.path().join("short.txt"), targets[..10].join("\n")).unwrap();
    let mismatch = ["score", "gleu", "--pairs", "sets/commas.tsv", "--hypothesis", "short.txt"];
    assert_eq!(exit_code(dir.path(), &mismatch), 7);
    let mismatch = ["score", "span", "--m2", "sets/commas.m2", "--hypothesis", "short.txt"];
    assert_eq!(exit_code(dir.path(), &mismatch), 7);
}

#[test]
fn gleu_from_separate_files_and_multiple_references() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("src.txt"), "Ég hlakka til.\nHann fer heim.\n").unwrap();
    fs::write(dir.path().join("ref.txt"), "Ég hlakka til .\nHann fer heim.\n").unwrap();
    fs::write(dir.path().join("hyp.txt"), "Ég hlakka til.\nHann fer heim.\n").unwrap();
    let one = ok(
        dir.path(),
        &["score", "gleu", "--source", "src.txt", "--reference", "ref.txt", "--hypothesis", "hyp.txt"],
    );
    assert_eq!(one["gleu"], 100.0);
    let two = ok(
        dir.path(),
        &[
            "score", "gleu", "--source", "src.txt", "--reference", "ref.txt", "--reference", "ref.txt",
            "--hypothesis", "hyp.txt",
        ],
    );
    assert_eq!(two["score"], one["score"]);
    assert_eq!(two["references"], 2);
}

#[test]
fn exhausted_type_is_named() {
    let dir = TempDir::new().unwrap();
    let plain = data_dir().join("corpus.tagged");
    let text = fs::read_to_string(plain).unwrap();
    // keep only the blocks without oblique-subject verbs
    let blocks: Vec<&str> = text
        .split("\n\n")
        .filter(|b| !["hlakka", "langa", "kvíða", "vanta", "dreyma"].iter().any(|v| b.contains(&format!("\t{v}\t"))))
        .collect();
    fs::write(dir.path().join("plain.tagged"), blocks.join("\n\n")).unwrap();
    let out = gecsynth(
        dir.path(),
        &["--config", &config(), "make-testsets", "-i", "plain.tagged", "--out-dir", "sets", "--types", "dativitis", "-n", "1"],
    );
    assert_eq!(out.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dativitis"));
    let unknown = ["make-testsets", "-i", "plain.tagged", "--out-dir", "sets", "--types", "typos"];
    assert_eq!(exit_code(dir.path(), &unknown), 2);
}

#[test]
fn m2_convert_round_trip() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("pairs.tsv"),
        "Ég hlakka til sumars .\tÉg hlakka til sumarsins .\nMér langar heim\tMig langar heim\nsama\tsama\n",
    )
    .unwrap();
    let r = ok(dir.path(), &["m2", "convert", "-i", "pairs.tsv", "-o", "gold.m2"]);
    assert_eq!(r["entries"], 3);
    assert_eq!(r["edits"], 2);
    let m2 = fs::read_to_string(dir.path().join("gold.m2")).unwrap();
    assert!(m2.contains("A 3 4|||UNK|||sumarsins|||REQUIRED|||-NONE-|||0"));
    ok(dir.path(), &["m2", "convert", "-i", "gold.m2", "-o", "back.tsv", "--to", "pairs"]);
    assert_eq!(
        fs::read_to_string(dir.path().join("back.tsv")).unwrap(),
        fs::read_to_string(dir.path().join("pairs.tsv")).unwrap()
    );
    fs::write(dir.path().join("broken.m2"), "S a b\nA x y|||UNK|||c|||REQUIRED|||-NONE-|||0\n\n").unwrap();
    assert_eq!(exit_code(dir.path(), &["m2", "convert", "-i", "broken.m2", "-o", "x.tsv", "--to", "pairs"]), 5);
}

#[test]
fn pretty_output_is_a_table() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("id.tsv"), "a b\ta b\n").unwrap();
    let out = gecsynth(dir.path(), &["--pretty", "stats", "-i", "id.tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("pairs") && l.trim_end().ends_with('1')));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn manifest_file_is_written() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("id.tsv"), "a b\ta b\n").unwrap();
    ok(dir.path(), &["--manifest", "run.json", "--seed", "9", "stats", "-i", "id.tsv"]);
    let m: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "stats");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["counts"]["read"], 1);
}
