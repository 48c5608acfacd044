use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_supermagic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("supermagic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn generate_then_verify_through_a_pipe() {
    for (n, m, constant) in [(3, 3, "38"), (4, 6, "98"), (15, 9, "542")] {
        let gen = run(&["generate", &n.to_string(), &m.to_string()]);
        assert_eq!(gen.status.code(), Some(0));
        let ver = run_with_stdin(&["verify", "-"], &gen.stdout);
        assert_eq!(ver.status.code(), Some(0), "{}", String::from_utf8_lossy(&ver.stdout));
        assert!(String::from_utf8_lossy(&ver.stdout).contains(constant));
    }
}

#[test]
fn edge_list_output_verifies() {
    let gen = run(&["generate", "5", "5", "--format", "edges"]);
    assert_eq!(gen.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&gen.stdout).starts_with("5 5\n"));
    assert_eq!(run_with_stdin(&["verify", "-"], &gen.stdout).status.code(), Some(0));
}

#[test]
fn unsupported_shape_points_at_search() {
    let out = run(&["generate", "3", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("search 3 4"));
    assert_eq!(run(&["generate", "5", "7"]).status.code(), Some(2));
}

#[test]
fn tampered_file_is_rejected_and_located() {
    let gen = run(&["generate", "3", "3"]);
    let text = String::from_utf8(gen.stdout).unwrap().replace("[1, 4, 9]", "[4, 1, 9]");
    let path = scratch("tampered.json");
    std::fs::write(&path, &text).unwrap();

    let ver = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(ver.status.code(), Some(5));
    let stdout = String::from_utf8_lossy(&ver.stdout);
    assert!(stdout.contains("not supermagic"));
    assert!(stdout.contains("x(1,1)"), "{stdout}");

    let audit = run(&["audit", path.to_str().unwrap(), "--plan", "file"]);
    assert_eq!(audit.status.code(), Some(5));

    let report = run(&["verify", path.to_str().unwrap(), "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&report.stdout).unwrap();
    assert_eq!(json["is_supermagic"], false);
    assert_eq!(json["is_bijection"], true);
}

#[test]
fn audit_plans() {
    let path = scratch("nine_fifteen.json");
    let gen = run(&["generate", "9", "15", "--out", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));
    for plan in ["auto", "file", "odd-odd"] {
        let out = run(&["audit", path.to_str().unwrap(), "--plan", plan]);
        assert_eq!(out.status.code(), Some(0), "plan {plan}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("all 270 corners match"));
    }
    // the even/even plan does not apply to an odd grid
    assert_eq!(run(&["audit", path.to_str().unwrap(), "--plan", "even-even"]).status.code(), Some(1));
}

#[test]
fn search_exit_codes() {
    let out = run(&["search", "3", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run_with_stdin(&["verify", "-"], &out.stdout).status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Found"));

    assert_eq!(run(&["search", "3", "4", "--node-budget", "1"]).status.code(), Some(3));

    let seeded = run(&["search", "4", "4", "--seed", "11", "--jobs", "2"]);
    assert_eq!(seeded.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["generate", "three", "3"]).status.code(), Some(1));
    assert_eq!(run(&["generate", "2", "3"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "/nonexistent/labeling.json"]).status.code(), Some(1));
    assert_eq!(run_with_stdin(&["verify", "-"], b"{ not json").status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn decompose_lists_every_diagonal() {
    let out = run(&["decompose", "4", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("C_4 x C_6: l=12 d=2 q=48\n"));
    let rows: Vec<_> = text.lines().filter(|l| l.starts_with('D')).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(": ").nth(1).unwrap().split(' ').count() == 24));

    let built = String::from_utf8(run(&["decompose", "3", "9", "--construction"]).stdout).unwrap();
    assert!(built.contains("D1 start=4"), "{built}");
}

#[test]
fn render_writes_figures() {
    let path = scratch("five.json");
    run(&["generate", "5", "5", "--out", path.to_str().unwrap()]);
    let dot = run(&["render", path.to_str().unwrap(), "--format", "dot", "--annotate", "weights"]);
    assert_eq!(dot.status.code(), Some(0));
    let dot = String::from_utf8(dot.stdout).unwrap();
    assert!(dot.starts_with("graph "));
    assert_eq!(dot.matches("\\n102\"").count(), 25);

    let svg = run(&["render", path.to_str().unwrap(), "--format", "svg", "--highlight-diagonals"]);
    assert!(String::from_utf8_lossy(&svg.stdout).starts_with("<svg"));
}
