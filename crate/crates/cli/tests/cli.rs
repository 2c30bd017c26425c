use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn asset(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn lars(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lars"))
        .args(args)
        .output()
        .unwrap()
}

fn lars_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lars"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("lars-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn join_matches_golden() {
    let (p, s) = (asset("join.lars"), asset("fig1.stream"));
    for engine in ["incremental", "naive"] {
        let o = lars(&["run", "--program", &p, "--stream", &s, "--engine", engine]);
        assert!(o.status.success());
        assert_eq!(
            stdout(&o),
            std::fs::read_to_string(asset("golden/join.txt")).unwrap()
        );
    }
    let lines: Vec<String> = stdout(&lars(&["run", "--program", &p, "--stream", &s]))
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines[3], "38 -> q(x1,y,z), q(x2,y,z)");
    assert_eq!(lines[0], "35 ->");
}

#[test]
fn cooling_matches_golden() {
    let o = lars(&[
        "run",
        "--program",
        &asset("cooling.lars"),
        "--stream",
        &asset("cooling.stream"),
        "--const",
        "n=5",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(asset("golden/cooling.txt")).unwrap()
    );
}

#[test]
fn empty_program_prints_empty_ticks() {
    let p = temp_file("empty.lars", "% nothing\n");
    let o = lars(&["run", "--program", &p, "--stream", &asset("fig1.stream")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 8);
    assert!(out.lines().all(|l| l.ends_with(" ->")));
}

#[test]
fn csv_round_trip() {
    let (p, s) = (asset("join.lars"), asset("fig1.stream"));
    let o = lars(&["run", "--program", &p, "--stream", &s, "--format", "csv"]);
    assert!(o.status.success());
    let mut rows: Vec<(u64, String)> = Vec::new();
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap(), vec!["tick", "atom"]);
    for rec in r.records() {
        let rec = rec.unwrap();
        rows.push((rec[0].parse().unwrap(), rec[1].to_string()));
    }
    let mut expected: Vec<(u64, String)> = Vec::new();
    for line in stdout(&lars(&["run", "--program", &p, "--stream", &s])).lines() {
        let (t, atoms) = line.split_once(" ->").unwrap();
        for a in atoms.split(", ").map(str::trim).filter(|a| !a.is_empty()) {
            expected.push((t.parse().unwrap(), a.to_string()));
        }
    }
    assert_eq!(rows, expected);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(asset("golden/join.csv")).unwrap()
    );
}

#[test]
fn stdin_matches_file() {
    let (p, s) = (asset("join.lars"), asset("fig1.stream"));
    let text = std::fs::read_to_string(&s).unwrap();
    let file = stdout(&lars(&["run", "--program", &p, "--stream", &s]));
    for engine in ["incremental", "naive"] {
        let o = lars_stdin(
            &["run", "--program", &p, "--stdin", "--engine", engine],
            &text,
        );
        assert!(o.status.success(), "{engine}");
        assert_eq!(stdout(&o), file, "{engine}");
    }
}

#[test]
fn stdin_merges_lines_and_fills_gaps() {
    let p = temp_file("copy.lars", "q(X) :- [1 t] <> p(X).\n");
    let o = lars_stdin(
        &["run", "--program", &p, "--stdin"],
        "2 p(a)\n2 p(b)\n5 p(c)\n",
    );
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "2 -> q(a), q(b)\n3 -> q(a), q(b)\n4 ->\n5 -> q(c)\n"
    );
    let o = lars_stdin(&["run", "--program", &p, "--stdin"], "5 p(a)\n2 p(b)\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn telemetry_goes_to_stderr() {
    let o = lars(&[
        "run",
        "--program",
        &asset("join.lars"),
        "--stream",
        &asset("fig1.stream"),
        "--telemetry",
    ]);
    assert!(o.status.success());
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(err.lines().filter(|l| l.starts_with("tick=")).count(), 8);
    assert!(!stdout(&o).contains("firings"));
}

#[test]
fn exit_codes() {
    let p = asset("join.lars");
    let bad_program = temp_file("bad.lars", "q(X) :- .\n");
    assert_eq!(
        lars(&[
            "run",
            "--program",
            &bad_program,
            "--stream",
            &asset("fig1.stream")
        ])
        .status
        .code(),
        Some(2)
    );
    let bad_stream = temp_file("bad.stream", "3 a(X)\n");
    assert_eq!(
        lars(&["run", "--program", &p, "--stream", &bad_stream])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lars(&["run", "--program", &p, "--stream", "/nonexistent/x.stream"])
            .status
            .code(),
        Some(2)
    );
    let unresolved = lars(&[
        "run",
        "--program",
        &asset("cooling.lars"),
        "--stream",
        &asset("cooling.stream"),
    ]);
    assert_eq!(unresolved.status.code(), Some(2));
    assert!(String::from_utf8(unresolved.stderr)
        .unwrap()
        .contains("--const n="));
    let intensional = temp_file("int.stream", "1 q(a,b,c)\n");
    for engine in ["incremental", "naive"] {
        let o = lars(&[
            "run",
            "--program",
            &p,
            "--stream",
            &intensional,
            "--engine",
            engine,
        ]);
        assert_eq!(o.status.code(), Some(3), "{engine}");
    }
    let bare = temp_file("bare.lars", "q :- @[T] a.\n");
    let o = lars(&[
        "run",
        "--program",
        &bare,
        "--stream",
        &asset("fig1.stream"),
        "--gc",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_agrees_on_examples() {
    let o = lars(&[
        "check",
        "--program",
        &asset("join.lars"),
        "--stream",
        &asset("fig1.stream"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = lars(&[
        "check",
        "--program",
        &asset("cooling.lars"),
        "--stream",
        &asset("cooling.stream"),
        "--const",
        "n=5",
        "--no-ssne",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_fuzz_range() {
    let o = lars(&["check", "--fuzz", "0..500"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("500 instances agree"));
}

#[test]
fn bench_grid() {
    let o = lars(&[
        "bench",
        "diamond",
        "--windows",
        "1,10,80",
        "--rates",
        "200,800",
        "--ticks",
        "5",
    ]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap(),
        vec![
            "scenario",
            "window",
            "rate",
            "engine",
            "total_s",
            "per_atom_us",
            "firings"
        ]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|row| &row[0] == "diamond"));
    assert_eq!(rows.iter().filter(|row| &row[3] == "naive").count(), 6);

    let o = lars(&[
        "bench",
        "--scenario",
        "cooling",
        "--windows",
        "5",
        "--rates",
        "200",
        "--ticks",
        "5",
        "--engine",
        "incremental",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    assert_eq!(lars(&["bench", "nosuch"]).status.code(), Some(2));
}
