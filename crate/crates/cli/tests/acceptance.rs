//! Black-box tests against the real binary: exact worked-example output,
//! the eval fixture, exit codes, and stdout discipline.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn corpus(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file)
}

fn rhetor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhetor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn criterion_1_parse_emits_the_exact_worked_example_line() {
    let start = Instant::now();
    let worked_text = corpus("zero_crossing.txt");
    let out = rhetor(&["parse", worked_text.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "[[[1 <EX> 2] <ES> [3 <EG> [4 <EX> 5]]] <SR> 6]\n"
    );
    assert_eq!(stderr(&out), "");
    assert!(start.elapsed() <= Duration::from_secs(1));
    println!("acceptance criterion 1 (cli): PASS — parse emits the exact bracket line");
}

#[test]
fn criterion_9_eval_records_match_the_fixture() {
    let manifest = corpus("synth/manifest.txt");
    let fixture = std::fs::read_to_string(corpus("synth/fixture.txt")).unwrap();
    let out = rhetor(&["eval", "--ratio", "0.4", manifest.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let records: String = text
        .lines()
        .filter(|l| l.starts_with("doc ") || l.starts_with("total "))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(records, fixture);
    println!("acceptance criterion 9 (cli): PASS — eval records match the fixture");
}

#[test]
fn summarize_counts_match_the_worked_abstracts() {
    let worked_text = corpus("zero_crossing.txt");
    let path = worked_text.to_str().unwrap();

    let out = rhetor(&["summarize", "--sentences", "3", path]);
    let text = stdout(&out);
    assert!(text.starts_with("In the context of discrete-time signals"));
    assert!(text.contains("Thus, the average zero-crossing rate"));
    assert!(!text.contains("narrow band signals")); // sentence 3 cut

    let out = rhetor(&["summarize", "--sentences", "1", path]);
    assert_eq!(
        stdout(&out),
        "Thus, the average zero-crossing rate gives a reasonable way to estimate the frequency of a sine wave.\n"
    );

    let out = rhetor(&["summarize", "--sentences", "6", path]);
    assert_eq!(stdout(&out).trim_end().split(". ").count(), 6);
}

#[test]
fn summarize_low_ratio_keeps_the_concluding_sentence() {
    // budget = ceil(0.16 * 6) = 1
    let worked_text = corpus("zero_crossing.txt");
    let out = rhetor(&["summarize", "--ratio", "0.16", worked_text.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("Thus, the average zero-crossing rate"));
}

#[test]
fn penalties_mode_prefixes_indices_and_penalties() {
    let worked_text = corpus("zero_crossing.txt");
    let out = rhetor(&[
        "summarize",
        "--sentences",
        "3",
        "--mode",
        "penalties",
        worked_text.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("[1:1 p=1] In the context"));
    assert!(lines.next().unwrap().starts_with("[1:2 p=1] The rate"));
    assert!(lines.next().unwrap().starts_with("[1:6 p=0] Thus,"));
}

#[test]
fn two_paragraph_file_emits_three_tree_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.txt");
    std::fs::write(
        &path,
        "One sentence. Another here.\n\nThus, a second paragraph.\n",
    )
    .unwrap();
    let out = rhetor(&["parse", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().last().unwrap(), "[1 <SR> 2]");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let manifest = corpus("synth/manifest.txt");
    let doc = corpus("synth/doc01.txt");
    for args in [
        vec!["parse", doc.to_str().unwrap()],
        vec!["summarize", "--ratio", "0.5", doc.to_str().unwrap()],
        vec!["eval", "--ratio", "0.4", manifest.to_str().unwrap()],
    ] {
        let a = rhetor(&args);
        let b = rhetor(&args);
        assert_eq!(a.stdout, b.stdout, "args: {args:?}");
    }
}

#[test]
fn multiple_inputs_are_reported_in_order() {
    let a = corpus("synth/doc02.txt");
    let b = corpus("synth/doc03.txt");
    let out = rhetor(&["parse", a.to_str().unwrap(), b.to_str().unwrap()]);
    let text = stdout(&out);
    let headers: Vec<&str> = text.lines().filter(|l| l.starts_with("# file: ")).collect();
    assert_eq!(headers.len(), 2);
    assert!(headers[0].contains("doc02"));
    assert!(headers[1].contains("doc03"));
}

#[test]
fn one_sentence_per_line_mode_bypasses_the_splitter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lines.txt");
    std::fs::write(
        &path,
        "No terminal punctuation here\nBut this line has a tag\n",
    )
    .unwrap();
    let out = rhetor(&["parse", "--one-sentence-per-line", path.to_str().unwrap()]);
    assert_eq!(stdout(&out), "[1 <NG> 2]\n");
}

#[test]
fn empty_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    let out = rhetor(&["parse", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no text"));
    assert_eq!(stdout(&out), "");
}

#[test]
fn missing_file_exits_2() {
    let out = rhetor(&["parse", "/nonexistent/input.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), "");
}

#[test]
fn manifest_with_missing_document_exits_2_listing_failures() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.txt");
    std::fs::write(&manifest, "gone-a.txt 1:1 1:1\ngone-b.txt 1:1 1:1\n").unwrap();
    let out = rhetor(&["eval", "--ratio", "0.5", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("gone-a.txt"));
    assert!(err.contains("gone-b.txt"));
    assert_eq!(stdout(&out), "");
}

#[test]
fn invalid_catalog_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "relations = [{ id = \"SR\", name = \"serial\", nucleus = \"right\" }]\n",
    )
    .unwrap();
    let worked_text = corpus("zero_crossing.txt");
    let out = rhetor(&[
        "parse",
        "--catalog",
        path.to_str().unwrap(),
        worked_text.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("extension tag"));
}

#[test]
fn bad_targets_exit_3() {
    let worked_text = corpus("zero_crossing.txt");
    let path = worked_text.to_str().unwrap();
    let out = rhetor(&["summarize", path]);
    assert_eq!(out.status.code(), Some(3));
    let out = rhetor(&["summarize", "--ratio", "1.5", path]);
    assert_eq!(out.status.code(), Some(3));
    let out = rhetor(&["summarize", "--sentences", "0", path]);
    assert_eq!(out.status.code(), Some(3));
    let out = rhetor(&["summarize", "--sentences", "7", path]);
    assert_eq!(out.status.code(), Some(3));
    let out = rhetor(&["summarize", "--ratio", "0.5", "--sentences", "2", path]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn all_mode_prints_trees_penalties_then_abstract() {
    let worked_text = corpus("zero_crossing.txt");
    let out = rhetor(&[
        "summarize",
        "--sentences",
        "1",
        "--mode",
        "all",
        worked_text.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    let sections: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(sections.len(), 3);
    assert!(sections[0].starts_with("[[[1(p=1)"));
    assert!(sections[1].starts_with("[1:6 p=0] Thus,"));
    assert!(sections[2].starts_with("Thus, the average"));
}

#[test]
fn catalog_check_reports_counts() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/default_catalog.toml");
    let out = rhetor(&["catalog", "check", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "catalog ok: 12 relations, 13 lexicon entries, 106 preference rules\n"
    );
}

#[test]
fn char_ratio_flag_changes_the_length_basis() {
    let manifest = corpus("synth/manifest.txt");
    let sent = rhetor(&["eval", "--ratio", "0.4", manifest.to_str().unwrap()]);
    let chars = rhetor(&[
        "eval",
        "--ratio",
        "0.4",
        "--char-ratio",
        manifest.to_str().unwrap(),
    ]);
    assert!(chars.status.success());
    let pick = |o: &Output| {
        stdout(o)
            .lines()
            .last()
            .unwrap()
            .split_whitespace()
            .find(|f| f.starts_with("length_ratio="))
            .unwrap()
            .to_string()
    };
    assert_ne!(pick(&sent), pick(&chars));
}

#[test]
fn warnings_go_to_stderr_and_can_be_silenced() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.txt");
    // all-extension paragraph: every sentence shares penalty 0
    std::fs::write(&path, "One plain line. Another plain line. A third one.\n").unwrap();
    let noisy = rhetor(&["summarize", "--ratio", "1.0", path.to_str().unwrap()]);
    assert!(noisy.status.success());
    assert!(stderr(&noisy).contains("cannot gradate"));
    let quiet = rhetor(&[
        "summarize",
        "--ratio",
        "1.0",
        "--no-warnings",
        path.to_str().unwrap(),
    ]);
    assert_eq!(stderr(&quiet), "");
    assert_eq!(noisy.stdout, quiet.stdout);
}

#[test]
fn tree_mode_annotates_penalties() {
    let worked_text = corpus("zero_crossing.txt");
    let out = rhetor(&[
        "summarize",
        "--sentences",
        "3",
        "--mode",
        "tree",
        worked_text.to_str().unwrap(),
    ]);
    assert_eq!(
        stdout(&out),
        "[[[1(p=1) <EX> 2(p=1)](p=1) <ES> [3(p=2) <EG> [4(p=3) <EX> 5(p=3)](p=3)](p=2)](p=1) <SR> 6(p=0)](p=0)\n"
    );
}

#[test]
fn custom_catalog_overrides_the_default() {
    // a catalog whose lexicon maps "thus" to negative instead of serial
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("custom.toml");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"
relations = [
    {{ id = "EX", name = "extension", nucleus = "both" }},
    {{ id = "NG", name = "negative", nucleus = "right" }},
]
lexicon = [{{ pattern = "thus", tag = "NG", priority = 0, position = "start" }}]
"#
    )
    .unwrap();
    let input = dir.path().join("text.txt");
    std::fs::write(&input, "A premise stands. Thus, a conclusion follows.\n").unwrap();
    let out = rhetor(&[
        "parse",
        "--catalog",
        path.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "[1 <NG> 2]\n");
}
