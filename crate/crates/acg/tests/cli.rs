use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_acg");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn acg(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_p2_with_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = data("p2.json");
    for algo in ["acg", "acg1", "acgh", "acgr", "multipulse", "oracle"] {
        let sol = dir.path().join(format!("{algo}.json"));
        let out = acg(&["solve", s(&p2), "--algo", algo, "--workers", "4", "-o", s(&sol)]);
        assert_eq!(code(&out), 0, "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        let text = fs::read_to_string(&sol).unwrap();
        assert!(text.contains("\"cost\": 4.0"), "{algo}: {text}");
        assert!(text.contains("\"path\": [\n    0,\n    1\n  ]"), "{algo}: {text}");
        assert_eq!(code(&acg(&["check", s(&p2), s(&sol)])), 0, "{algo}");
    }
}

#[test]
fn unfeasible_instance_exits_2() {
    let inst = data("p2_unfeasible.json");
    for algo in ["multipulse", "acg1", "oracle"] {
        let out = acg(&["solve", s(&inst), "--algo", algo]);
        assert_eq!(code(&out), 2, "{algo}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("\"status\": \"infeasible\""));
    }
}

#[test]
fn check_rejects_tampered_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = data("p2.json");
    let sol = dir.path().join("sol.json");
    assert_eq!(code(&acg(&["solve", s(&p2), "--algo", "acg1", "-o", s(&sol)])), 0);
    let text = fs::read_to_string(&sol).unwrap();
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, text.replace("\"cost\": 4.0", "\"cost\": 3.0")).unwrap();
    assert_eq!(code(&acg(&["check", s(&p2), s(&tampered)])), 1);
    // sv, vt is cheaper but violates both bounds
    let other = text.replace("\"path\": [\n    0,\n    1\n  ]", "\"path\": [\n    2,\n    3\n  ]");
    fs::write(&tampered, other.replace("\"cost\": 4.0", "\"cost\": 2.0")).unwrap();
    assert_eq!(code(&acg(&["check", s(&p2), s(&tampered)])), 1);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(code(&acg(&["solve"])), 64);
    assert_eq!(code(&acg(&["solve", s(&data("p2.json")), "--algo", "simplex"])), 64);
    assert_eq!(code(&acg(&["frobnicate"])), 64);
    assert_eq!(code(&acg(&["--help"])), 0);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"version\": 1, \"nodes\":").unwrap();
    let out = acg(&["solve", s(&bad)]);
    assert_eq!(code(&out), 65);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(code(&acg(&["solve", s(&dir.path().join("missing.json"))])), 65);
}

#[test]
fn output_is_reproducible() {
    let p2 = data("p2.json");
    for algo in ["acg1", "multipulse", "oracle"] {
        let a = acg(&["solve", s(&p2), "--algo", algo, "--no-wall-time"]);
        let b = acg(&["solve", s(&p2), "--algo", algo, "--no-wall-time"]);
        assert_eq!(a.stdout, b.stdout, "{algo}");
    }
    let gen = ["generate", "grid", "--width", "5", "--height", "4", "--path-size", "6", "--seed", "11"];
    let a = acg(&gen);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, acg(&gen).stdout);
}

#[test]
fn generate_solve_check_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for (seed, unfeasible) in [(1, false), (2, false), (3, true)] {
        let inst = dir.path().join(format!("g{seed}.json"));
        let seed_s = seed.to_string();
        let mut args = vec!["generate", "grid", "--width", "4", "--height", "4", "--path-size", "5", "--seed", &seed_s];
        if unfeasible {
            args.push("--unfeasible");
        }
        args.extend(["-o", s(&inst)]);
        assert_eq!(code(&acg(&args)), 0);
        let sol = dir.path().join(format!("s{seed}.json"));
        let out = acg(&["solve", s(&inst), "--algo", "acg", "-o", s(&sol)]);
        let oracle = acg(&["solve", s(&inst), "--algo", "oracle"]);
        assert_eq!(code(&out), code(&oracle));
        if unfeasible {
            assert_eq!(code(&out), 2);
        } else {
            assert_eq!(code(&out), 0);
            assert_eq!(code(&acg(&["check", s(&inst), s(&sol)])), 0);
        }
    }
}

#[test]
fn generate_from_topology_file() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("ring.txt");
    let mut text = String::from("NODES\n");
    for i in 0..8 {
        text.push_str(&format!("n{i}\n"));
    }
    text.push_str("EDGES\n");
    for i in 0..8 {
        text.push_str(&format!("n{i} n{}\nn{i} n{}\n", (i + 1) % 8, (i + 3) % 8));
    }
    fs::write(&topo, text).unwrap();
    let inst = dir.path().join("inst.json");
    let out = acg(&["generate", "file", "--topology", s(&topo), "--path-size", "4", "--seed", "5", "-o", s(&inst)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&acg(&["solve", s(&inst), "--algo", "acg1"])), 0);
    fs::write(&topo, "EDGES\nn0\n").unwrap();
    assert_eq!(code(&acg(&["generate", "file", "--topology", s(&topo), "--path-size", "4"])), 65);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(data("p2.json"), dir.path().join("a_p2.json")).unwrap();
    fs::copy(data("p2_unfeasible.json"), dir.path().join("b_unf.json")).unwrap();
    let csv = dir.path().join("out.csv");
    let out = acg(&["bench", s(dir.path()), "--algos", "acg1,multipulse", "--csv", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,algo,status,cost,bound,wall_ms,columns,nodes_expanded");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("a_p2,acg1,optimal,4,4,"), "{}", lines[1]);
    assert!(lines[2].starts_with("a_p2,multipulse,optimal,4,4,"), "{}", lines[2]);
    assert!(lines[4].starts_with("b_unf,multipulse,infeasible,,,"), "{}", lines[4]);
}
