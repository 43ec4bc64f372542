use std::path::Path;
use std::process::{Command, Output};

fn sigma2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigma2"))
        .args(args)
        .env_remove("SIGMA2_CATALOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn solution_ns(o: &Output) -> Vec<String> {
    json_lines(o)
        .into_iter()
        .filter(|v| v.get("n").is_some())
        .map(|v| v["n"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn solve_f_perfect() {
    let o = sigma2(&["solve", "--A", "3", "--B", "0", "--cap", "30000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(solution_ns(&o), ["10", "65", "20737"]);
    let summary = json_lines(&o).pop().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["complete"], true);
}

#[test]
fn solve_symbolic_all_primes() {
    let o = sigma2(&["solve", "--A", "0", "--B", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["solutions"], "all primes");
}

#[test]
fn solve_negative_b_and_exceptional() {
    let o = sigma2(&["solve", "--A", "322", "--B", "-20735", "--cap", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    let exceptional: Vec<_> = lines.iter().filter(|v| v["form"] == "exceptional").collect();
    assert_eq!(exceptional.len(), 1);
    assert_eq!(exceptional[0]["n"], "1755");
    assert_eq!(exceptional[0]["factorization"], serde_json::json!([[3, 3], [5, 1], [13, 1]]));
    assert_eq!(lines.last().unwrap()["complete"], false);
}

#[test]
fn output_is_deterministic_without_timestamp() {
    let args = ["solve", "--A", "7", "--B", "-8", "--cap", "3375", "--no-timestamp"];
    let a = sigma2(&args);
    let b = sigma2(&["--threads", "1", "solve", "--A", "7", "--B", "-8", "--cap", "3375", "--no-timestamp"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("timestamp"));
    assert!(stdout(&sigma2(&args[..7])).contains("timestamp"));
}

#[test]
fn budget_refusal_exits_3() {
    let o = sigma2(&["solve", "--A", "322", "--B", "-20735", "--cap", "10^13"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("resumable passes"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["solve", "--A", "x", "--B", "0"][..],
        &["solve", "--A", "3"],
        &["family", "polignac", "--k", "3"],
        &["family", "fib", "--k", "2"],
        &["family", "fibonacci", "--m", "1"],
        &["pell", "--D", "4", "--N", "1"],
        &["pell", "--fib-conic", "3"],
        &["sigma2", "0"],
        &["sigma2", "9223372036854775808"],
        &["--segments", "100", "sigma2", "10"],
        &["--catalog", "/nonexistent/catalog.txt", "verify-tables"],
    ] {
        let o = sigma2(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn sigma2_command() {
    let o = sigma2(&["sigma2", "1755"]);
    assert_eq!(json_lines(&o)[0]["sigma2"], "3624400");
    let o = sigma2(&["sigma2", "10", "--format", "human"]);
    assert_eq!(stdout(&o), "sigma2(10) = 130\n10 = 2 * 5\n");
}

#[test]
fn family_fib_row_one() {
    let o = sigma2(&["family", "fib", "--m", "1", "--index-bound", "600", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|v| v["verified"] == true));
    assert_eq!(lines[4]["closed_form"], serde_json::json!({"seq": "fib", "i": 569, "j": 571}));
    let human = sigma2(&["family", "fib", "--m", "1", "--index-bound", "600", "--format", "human"]);
    assert!(stdout(&human).lines().nth(3).unwrap().contains("F_431 · F_433"));
}

#[test]
fn family_lucas_plus_row_three() {
    let o = sigma2(&["family", "lucas+", "--m", "3", "--index-bound", "4800"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[7]["closed_form"], serde_json::json!({"seq": "lucas", "i": 4787, "j": 4793}));
}

#[test]
fn pell_fib_conic_and_orbits() {
    let o = sigma2(&["pell", "--fib-conic", "-4", "--y-bound", "100"]);
    let pts: Vec<(String, String)> = json_lines(&o)
        .iter()
        .map(|v| (v["x"].as_str().unwrap().to_string(), v["y"].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(pts.len(), 6);
    assert_eq!(pts[5], ("199".to_string(), "89".to_string()));

    let o = sigma2(&["pell", "--D", "45", "--N", "-36", "--y-bound", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let mut got: Vec<(i64, i64)> = json_lines(&o)
        .iter()
        .filter(|v| v["kind"] == "point")
        .map(|v| (v["x"].as_str().unwrap().parse().unwrap(), v["y"].as_str().unwrap().parse().unwrap()))
        .collect();
    got.sort();
    let mut oracle = Vec::new();
    for y in 0..=1000i64 {
        let t = 45 * y * y - 36;
        if t < 0 {
            continue;
        }
        let x = (t as f64).sqrt().round() as i64;
        for x in [x - 1, x, x + 1] {
            if x >= 0 && x * x == t {
                oracle.push((x, y));
                if x > 0 {
                    oracle.push((-x, y));
                }
            }
        }
    }
    oracle.sort();
    oracle.dedup();
    assert_eq!(got, oracle);
}

#[test]
fn verify_tables_default_and_corrupt_catalog() {
    let o = sigma2(&["verify-tables", "--format", "human"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for d in ["180", "238", "258", "2003"] {
        assert!(text.contains(&format!("has {d} digits (expected {d}) ok")), "{text}");
    }

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "fib 3\nfib banana\n").unwrap();
    let o = sigma2(&["verify-tables", "--catalog", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.txt");
    let bundled = sigma2_core_catalog_without("fib 433");
    std::fs::write(&partial, bundled).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sigma2"))
        .args(["verify-tables"])
        .env("SIGMA2_CATALOG", &partial)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("index 433 not in catalog"));
}

fn sigma2_core_catalog_without(line: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/prime_indices.txt");
    std::fs::read_to_string(path).unwrap().lines().filter(|l| l.trim() != line).collect::<Vec<_>>().join("\n")
}

#[test]
fn resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cp_s = cp.to_str().unwrap();
    let common = ["--no-timestamp", "--segments", "1024", "--threads", "1"];
    let full = sigma2(&[&["solve", "--A", "322", "--B", "-20735", "--cap", "50000"][..], &common].concat());
    assert_eq!(full.status.code(), Some(0));

    let half = sigma2(&[&["solve", "--A", "322", "--B", "-20735", "--cap", "20000", "--checkpoint", cp_s][..], &common].concat());
    assert_eq!(half.status.code(), Some(0));
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cp).unwrap()).unwrap();
    assert_eq!(saved["completed_upto"], 20000);

    let resumed = sigma2(&[&["solve", "--A", "322", "--B", "-20735", "--cap", "50000", "--resume", cp_s][..], &common].concat());
    assert_eq!(resumed.status.code(), Some(0));
    assert_eq!(stdout(&resumed), stdout(&full));

    let wrong = sigma2(&[&["solve", "--A", "3", "--B", "0", "--resume", cp_s][..], &common].concat());
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn csv_format_has_digit_column() {
    let o = sigma2(&["family", "lucas+", "--m", "2", "--index-bound", "620", "--format", "csv"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,digits,form,factors,provenance,verified,closed_form");
    let last = lines.last().unwrap();
    assert!(last.contains(",258,prime-pair,"), "{last}");
}
