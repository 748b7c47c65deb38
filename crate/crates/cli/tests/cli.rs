use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use numberings::constructions::scenarios;

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn inputs(name: &str) -> String {
    workspace().join("fixtures/inputs").join(name).display().to_string()
}

fn numberings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numberings")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn splice_on_a_never_failing_script_tracks_the_real() {
    let dir = tempfile::tempdir().unwrap();
    let script = temp_file(&dir, "s.tsv", "0\t0\tdyadic\t1/4\n3\t0\tdyadic\t1/2\n");
    let machine = temp_file(&dir, "m.tsv", "");
    let out = numberings(&["run", "splice", "--script", &script, "--machine", &machine, "--c", "1", "--horizon", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 51);
    assert!(text.lines().all(|l| l.split('\t').nth(1) == Some("tracking")));
    assert_eq!(text.lines().last(), Some("50\ttracking\t1/2^1"));
}

#[test]
fn star_prints_one_snapshot_per_stage() {
    let out = numberings(&["run", "star", "--listing", &inputs("listing.txt"), "--horizon", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 21);
    assert_eq!(text.lines().next(), Some("0\tgood\ta\t{}"));
}

#[test]
fn malformed_script_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let script = temp_file(&dir, "s.tsv", "# header\n0\t0\tdyadic\t1/4\n1\t0\tdyadic 1/2\n");
    let out = numberings(&["run", "beta", "--script", &script]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("E-PARSE") && err.contains("line 3"), "{err}");
}

#[test]
fn machine_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let script = temp_file(&dir, "s.tsv", "0\t0\tdyadic\t1/4\n");
    let machine = temp_file(&dir, "m.tsv", "0\t1\t0\n01\t11\t2\n");
    let out = numberings(&["run", "splice", "--script", &script, "--machine", &machine]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("E-PREFIX-FREE"));
    let machine = temp_file(&dir, "bad.tsv", "0\t1\tx\n");
    let out = numberings(&["run", "splice", "--script", &script, "--machine", &machine]);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn preconditions_and_capacity_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let script = temp_file(&dir, "s.tsv", "0\t0\tdyadic\t3/4\n0\t1\tdyadic\t3/4\n");
    let full = temp_file(&dir, "full.tsv", "0\t-\t0\n1\t-\t0\n");
    let out = numberings(&["run", "splice", "--script", &script, "--machine", &full, "--horizon", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.contains("E-PRECONDITION") && err.contains("splice"), "{err}");

    let machine = temp_file(&dir, "m.tsv", "0\t11\t1\n");
    let out = numberings(&["run", "regret", "--script", &script, "--machine", &machine, "--slots", "1", "--horizon", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("E-CAPACITY"), "{}", stderr(&out));
}

#[test]
fn missing_inputs_are_usage_errors() {
    let out = numberings(&["run", "splice"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--script"));
    let out = numberings(&["run", "class-tree", "--machine", &inputs("machine.tsv")]);
    assert_eq!(out.status.code(), Some(2));
    let out = numberings(&["check", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_suites_pass_and_the_mutant_fails() {
    let out = numberings(&["check", "coverings", "--depth", "3", "--cases", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = numberings(&["check", "dyadic", "--len", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let out = numberings(&["check", "coverings", "--depth", "3", "--cases", "50", "--inject-mutant"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("counterexample: S = {"), "{}", stdout(&out));
}

#[test]
fn every_construction_runs_on_the_sample_inputs() {
    let (reals, sets, machine) = (inputs("reals.tsv"), inputs("sets.tsv"), inputs("machine.tsv"));
    let (t0, t1, listing) = (inputs("t0.txt"), inputs("t1.txt"), inputs("listing.txt"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["splice", "--script", &reals, "--machine", &machine, "--c", "1"],
        vec!["hat-m", "--script", &reals, "--machine", &machine, "--k", "2"],
        vec!["hat-m", "--script", &reals, "--machine", &machine, "--k", "2", "--above", "--index", "1"],
        vec!["regret", "--script", &reals, "--machine", &machine, "--c", "1"],
        vec!["beta", "--script", &reals],
        vec!["merge", "--script", &sets],
        vec!["friedberg-lce", "--script", &reals, "--depth", "4"],
        vec!["friedberg-random", "--script", &reals, "--machine", &machine, "--depth", "4", "--k", "2"],
        vec!["capped", "--script", &sets, "--n", "4"],
        vec!["diagonalize", "--tree", &t0, "--tree", &t1],
        vec!["intersect", "--tree", &t1, "--machine", &machine, "--c", "0"],
        vec!["class-tree", "--machine", &machine, "--depth", "5"],
        vec!["star", "--listing", &listing],
        vec!["cover", "--listing", &listing],
        vec!["odd-ones", "--count", "8"],
        vec!["coverings", "--count", "8", "--even"],
    ];
    for args in runs {
        let mut full = vec!["run"];
        full.extend(&args);
        let out = numberings(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        assert!(!out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn diagonalize_reports_grafts() {
    let out = numberings(&["run", "diagonalize", "--tree", &inputs("t0.txt"), "--tree", &inputs("t1.txt")]);
    let text = stdout(&out);
    assert!(text.starts_with("# n 0 dead end 1 graft 1\n# n 1 dead end 01 graft 010\n"), "{text}");
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.tsv");
    let out = numberings(&["run", "odd-ones", "--count", "3", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(path).unwrap(), "0\t1\n1\t01\n2\t001\n");
}

#[test]
fn scenario_fixtures_match_the_library() {
    let root = workspace().join("fixtures/scenarios");
    let lib = scenarios::library();
    assert_eq!(fs::read_dir(&root).unwrap().count(), lib.len());
    for s in lib {
        let dir = root.join(s.name);
        assert_eq!(fs::read_to_string(dir.join("script.tsv")).unwrap(), s.script, "{}", s.name);
        assert_eq!(fs::read_to_string(dir.join("machine.tsv")).unwrap(), s.machine, "{}", s.name);
        let args: Vec<String> = fs::read_to_string(dir.join("args")).unwrap().lines().map(String::from).collect();
        assert_eq!(args, s.cli_args("."), "{}", s.name);
        assert_eq!(fs::read_to_string(dir.join("expected.tsv")).unwrap(), s.expected_output().unwrap(), "{}", s.name);
    }
}

#[test]
fn scenario_export_recreates_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = numberings(&["scenarios", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for s in scenarios::library() {
        for file in ["script.tsv", "machine.tsv", "args", "expected.tsv"] {
            let ours = fs::read(dir.path().join(s.name).join(file)).unwrap();
            let fixture = fs::read(workspace().join("fixtures/scenarios").join(s.name).join(file)).unwrap();
            assert_eq!(ours, fixture, "{}/{file}", s.name);
        }
    }
}
