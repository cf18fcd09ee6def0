use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn tsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsp")).args(args).output().unwrap()
}

fn tsp_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tsp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(name: &str) -> String {
    stdout(&tsp(&["gen", name]))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// `key<TAB>value` pairs of a machine report.
fn machine(o: &Output) -> Vec<(String, String)> {
    stdout(o)
        .lines()
        .filter_map(|l| l.split_once('\t'))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn value(o: &Output, key: &str) -> String {
    machine(o)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("missing {key} in {}", stdout(o)))
        .1
}

#[test]
fn gen_is_byte_stable() {
    assert_eq!(gen("classical-3"), "outcomes a b c\ntest a b c\n");
    assert_eq!(gen("glued-pair"), "outcomes a b c d e\ntest a b c\ntest c d e\n");
    assert_eq!(gen("triangle"), gen("triangle"));
    let bad = tsp(&["gen", "nope"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn info_of_classical_space() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write(dir.path(), "t1.tsp", &gen("classical-3"));
    let o = tsp(&["--format", "machine", "info", &t1]);
    assert!(o.status.success());
    assert_eq!(value(&o, "info.rank"), "3");
    assert_eq!(value(&o, "info.tests"), "1");
    assert_eq!(value(&o, "info.events"), "8");
}

#[test]
fn logic_of_mo2() {
    let o = tsp_stdin(&["--format", "machine", "logic", "-"], &gen("mo2"));
    assert!(o.status.success());
    assert_eq!(value(&o, "logic.classes"), "6");
    for flag in ["orthocoherent", "osum_is_join", "orthomodular"] {
        assert_eq!(value(&o, &format!("logic.{flag}")), "true");
    }
}

#[test]
fn non_algebraic_space_is_negative_under_strict() {
    let text = "outcomes a b c d e\ntest a b\ntest b c\ntest c d\ntest a d e\n";
    assert!(tsp_stdin(&["logic", "-"], text).status.success());
    assert_eq!(tsp_stdin(&["--strict", "logic", "-"], text).status.code(), Some(1));
}

#[test]
fn dispersion_free_states_of_triangle() {
    let o = tsp_stdin(&["states", "--dispersion-free", "-"], &gen("triangle"));
    let states: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("state ")).map(String::from).collect();
    assert_eq!(
        states,
        [
            "state a=1 b=0 c=0 x=0 y=1 z=0",
            "state a=0 b=1 c=0 x=0 y=0 z=1",
            "state a=0 b=0 c=1 x=1 y=0 z=0",
            "state a=0 b=0 c=0 x=1 y=1 z=1",
        ]
    );
}

#[test]
fn stateless_space_prints_certificate() {
    let o = tsp_stdin(&["--strict", "--format", "machine", "states", "-"], &gen("stateless-grid"));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(value(&o, "states.feasible"), "false");
    assert_eq!(value(&o, "states.certificate_checked"), "true");
    assert!(stdout(&o).lines().any(|l| l.starts_with("certificate ")));
}

#[test]
fn state_verification() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write(dir.path(), "t1.tsp", &gen("classical-3"));
    let states = write(dir.path(), "s.txt", "state a=1/3 b=1/3 c=1/3\nstate a=1 b=1 c=0\n");
    let o = tsp(&["--format", "machine", "states", &t1, "--verify", &states]);
    assert_eq!(value(&o, "states.state0.valid"), "true");
    assert_eq!(value(&o, "states.state1.valid"), "false");
    assert_eq!(value(&o, "states.state1.residual"), "1.000000");
}

#[test]
fn udf_of_glued_pair() {
    let o = tsp_stdin(&["--format", "machine", "states", "--udf", "-"], &gen("glued-pair"));
    assert_eq!(value(&o, "states.udf"), "true");
}

#[test]
fn orthoalgebra_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&tsp(&["oa", "gen", "boolean-3"]));
    let file = write(dir.path(), "b3.oa", &text);
    let o = tsp(&["--format", "machine", "oa", "roundtrip", &file]);
    assert!(o.status.success());
    assert_eq!(value(&o, "roundtrip.isomorphic"), "true");
    assert_eq!(value(&o, "roundtrip.tests"), "5");
    let space = stdout(&tsp(&["oa", "space", &file]));
    assert!(space.starts_with("outcomes "));
}

#[test]
fn frames_sample_check_and_extract() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames.tsp");
    let frames = frames.to_str().unwrap();
    let o = tsp(&["sample-frames", "-d", "3", "-n", "200", "--seed", "5", "-o", frames]);
    assert!(o.status.success());
    assert!(dir.path().join("frames.coords").exists());

    let check = tsp(&["--format", "machine", "metric", "check", frames]);
    assert!(check.status.success());
    assert_eq!(value(&check, "invariants.largest_orthogonal_subset"), "3");
    assert_eq!(value(&check, "rank_bound.totally_non_orthogonal"), "true");

    let sub = dir.path().join("sub.tsp");
    let args = [
        "--format", "machine", "extract", frames, "--basis", "auto:8", "--delta", "1.0", "--seed", "3", "-o",
        sub.to_str().unwrap(),
    ];
    let first = tsp(&args);
    assert!(first.status.success());
    assert_eq!(value(&first, "extract.failures"), "0");
    assert_eq!(value(&first, "extract.hidden_variable_valid"), "true");
    assert!(dir.path().join("sub.coords").exists());
    let info = tsp(&["--format", "machine", "info", sub.to_str().unwrap()]);
    assert_eq!(value(&info, "info.semiclassical"), "true");

    // Identical inputs and seeds give identical reports.
    assert_eq!(stdout(&first), stdout(&tsp(&args)));
}

#[test]
fn extract_with_basis_file_and_resampling() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames.tsp");
    let frames = frames.to_str().unwrap();
    tsp(&["sample-frames", "-n", "20", "--seed", "1", "-o", frames]);
    // Three tiny balls around the axes: a match needs a frame close to the standard basis.
    let basis = write(
        dir.path(),
        "basis.txt",
        "open\nball 0.2 1 0 0\nball 0.2 0 1 0\nball 0.2 0 0 1\n",
    );
    let basis_arg = format!("file:{basis}");
    let o = tsp(&["--strict", "--format", "machine", "extract", frames, "--basis", &basis_arg]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(value(&o, "extract.failures"), "1");
    let o = tsp(&[
        "--format", "machine", "extract", frames, "--basis", &basis_arg, "--resample-factor", "500",
    ]);
    assert!(o.status.success());
    assert_eq!(value(&o, "extract.resampled_frames"), "10000");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(tsp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tsp(&["info", "/nonexistent/file.tsp"]).status.code(), Some(2));
    let o = tsp_stdin(&["info", "-"], "outcomes a b\ntest a c\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 8"));
}
