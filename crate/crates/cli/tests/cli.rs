use std::path::Path;
use std::process::{Command, Output};

fn mgf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgf")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn dir_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The CSV body without the provenance line, whose hash covers the arguments.
fn body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&mgf(&["--bogus"])), 2);
    assert_eq!(code(&mgf(&["gen", "--kind", "nope"])), 2);
    assert_eq!(code(&mgf(&["decompose", "--kind", "nope"])), 2);
    assert_eq!(code(&mgf(&["counterexample", "--family", "phi", "--m", "x"])), 2);
    assert_eq!(code(&mgf(&["decompose", "--kind", "gundy", "--lambda", "-1", "--depth", "2"])), 2);
}

#[test]
fn invalid_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&mgf(&["gen", "--depth", "0"])), 3);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"schema":"mgf-0","tool_version":"0","config_hash":"","body":{}}"#).unwrap();
    let o = mgf(&["verify", "--input", dir_arg(&bad)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("mgf-0"));
    assert_eq!(code(&mgf(&["verify", "--input", "/nonexistent/corpus.json"])), 3);
}

#[test]
fn every_subcommand_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir_arg(dir.path());
    let small = ["--depth", "3", "--count", "2"];
    for args in [
        vec!["gen"],
        vec!["decompose", "--kind", "davis", "--generator", "random-tree"],
        vec!["decompose", "--kind", "gundy", "--lambda", "0.5"],
        vec!["decompose", "--kind", "krickeberg"],
        vec!["decompose", "--kind", "corc"],
        vec!["decompose", "--kind", "regular", "--values", "positive"],
        vec!["norms", "--p", "1,2"],
        vec!["verify", "--p", "1.5"],
        vec!["trace", "--values", "positive"],
        vec!["search", "--objective", "theorem_a", "--iterations", "20"],
    ] {
        let mut full = args.clone();
        full.extend(small);
        full.extend(["--out", out]);
        let o = mgf(&full);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["corpus.json", "decomposition.json", "norms.csv", "suite.csv", "summary.csv", "traces.csv", "search.json"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.contains("mgf-1"), "{name}");
    }
}

#[test]
fn counterexample_table_is_exact() {
    let o = mgf(&["counterexample", "--family", "phi", "--m", "2,10"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# schema=mgf-1"));
    assert!(text.contains("phi,2,1,1.5,1.5"));
    let o = mgf(&["counterexample", "--family", "xi", "--m", "2"]);
    assert!(stdout(&o).contains("xi,2,1.5,1,1.5"));
}

#[test]
fn saved_corpus_verifies_like_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ["--kind", "random-tree", "--depth", "3", "--branching", "3", "--count", "4", "--seed", "17"];
    let gen_dir = dir.path().join("gen");
    let mut args = vec!["gen", "--out", dir_arg(&gen_dir)];
    args.extend(spec);
    assert_eq!(code(&mgf(&args)), 0);
    let corpus = gen_dir.join("corpus.json");

    let mut direct = vec!["verify"];
    direct.extend(spec);
    let from_file = ["verify", "--input", dir_arg(&corpus)];
    assert_eq!(body(&stdout(&mgf(&direct))), body(&stdout(&mgf(&from_file))));
}

#[test]
fn outputs_do_not_depend_on_jobs() {
    let run = |jobs: &str| stdout(&mgf(&["verify", "--kind", "random-tree", "--depth", "3", "--count", "6", "--jobs", jobs]));
    assert_eq!(run("1"), run("4"));
}
