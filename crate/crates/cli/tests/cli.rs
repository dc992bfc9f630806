use std::path::Path;
use std::process::{Command, Output};

const GEOGRAPHY: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/geography.corpus");

fn cnlwiki(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnlwiki")).arg("--store").arg(store).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn import_geography() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    let out = cnlwiki(&store, &["import", GEOGRAPHY]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("15: accepted #1 \"Zurich is a city.\""), "{text}");
    assert!(text.contains("23: beyond-fragment #9 \"If X borders Y then Y borders X.\""));
    assert!(text.contains("24: rejected #10 \"Zurich is not a city.\""));
    assert!(text.contains("26: ask \"What is Zurich?\" -> [\"Zurich is a city.\" \"Zurich is an area.\"]"));
    assert!(text.ends_with(
        "summary: 11 words, 8 accepted, 1 beyond-fragment, 1 rejected, 0 questions, 2 asks, 0 errors\n"
    ));
    assert!(store.exists());
}

#[test]
fn import_reports_bad_lines_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    let corpus = dir.path().join("bad.corpus");
    std::fs::write(
        &corpus,
        "word proper-name Zurich\nword noun city cities\nsentence Zurich Zurich likes cheese .\nfrobnicate\nsentence Zurich Zurich is a city.\n",
    )
    .unwrap();
    let out = cnlwiki(&store, &["import", corpus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("error line 3: UnknownWord: unknown word `likes` at position 2"), "{text}");
    assert!(text.contains("error line 4: unknown directive `frobnicate`"), "{text}");
    assert!(text.contains("5: accepted"));
    assert!(text.contains("2 errors"));
}

#[test]
fn missing_files_are_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    let out = cnlwiki(&store, &["import", "/nonexistent/corpus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("reading /nonexistent/corpus"));
    let out = cnlwiki(&store, &["report"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("i/o error"), "{}", stderr(&out));
    let out = Command::new(env!("CARGO_BIN_EXE_cnlwiki")).arg("report").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for name in ["a.json", "b.json"] {
        let store = dir.path().join(name);
        assert!(cnlwiki(&store, &["import", GEOGRAPHY]).status.success());
        let out = cnlwiki(&store, &["report"]);
        assert!(out.status.success());
        reports.push(out.stdout);
    }
    assert_eq!(reports[0], reports[1]);
    let text = String::from_utf8(reports[0].clone()).unwrap();
    assert!(text.starts_with("consistency: OK\n"));
    assert!(text.contains("\n  Every city is an area.\n"));
    assert!(text.contains("\n  Zurich is an area.\n"));
}

#[test]
fn empty_store_reports_zero_counts() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    let corpus = dir.path().join("empty.corpus");
    std::fs::write(&corpus, "# nothing yet\n").unwrap();
    assert!(cnlwiki(&store, &["import", corpus.to_str().unwrap()]).status.success());
    let text = stdout(&cnlwiki(&store, &["report"]));
    assert!(text.ends_with(
        "counts: 0 words, 0 sentences, 0 accepted, 0 beyond-fragment, 0 rejected, 0 questions, 0 axioms\n"
    ));
}

#[test]
fn corrupt_store_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    std::fs::write(&store, "{\"format_version\": 1").unwrap();
    let out = cnlwiki(&store, &["report"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad store file"));
}

#[test]
fn ask_answers() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    cnlwiki(&store, &["import", GEOGRAPHY]);
    let out = cnlwiki(&store, &["ask", "What is Zurich?"]);
    assert_eq!(stdout(&out), "Zurich is a city.\nZurich is an area.\n");
    let out = cnlwiki(&store, &["ask", "Which countries border Switzerland?"]);
    assert_eq!(stdout(&out), "Germany borders Switzerland.\n");
    let out = cnlwiki(&store, &["ask", "Zurich is a city."]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a question"));
}

#[test]
fn export_replays_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("wiki.json");
    cnlwiki(&store, &["import", GEOGRAPHY]);
    let exported = dir.path().join("export.corpus");
    assert!(cnlwiki(&store, &["export", "--out", exported.to_str().unwrap()]).status.success());
    assert_eq!(stdout(&cnlwiki(&store, &["export"])), std::fs::read_to_string(&exported).unwrap());

    let copy = dir.path().join("copy.json");
    let out = cnlwiki(&copy, &["import", exported.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(cnlwiki(&store, &["report"]).stdout, cnlwiki(&copy, &["report"]).stdout);
}
