use std::path::Path;
use std::process::{Command, Output};

use gamma_index::cli::{EXIT_BAD_ATTRACTOR, EXIT_BAD_PARAMETERS, EXIT_BAD_TEXT, EXIT_CORRUPT_INDEX, EXIT_OUT_OF_RANGE, EXIT_TOO_LARGE, EXIT_VERSION};

fn gidx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gidx")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_locate_extract_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.gidx");
    std::fs::write(&input, "abaababa").unwrap();

    let o = gidx(&["build", "--input", p(&input), "--output", p(&index)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("n=8 gamma=5 "));

    let o = gidx(&["locate", "--index", p(&index), "--pattern", "a"]);
    assert_eq!(stdout(&o), "1\n3\n4\n6\n8\n");

    let o = gidx(&["locate", "--index", p(&index), "--pattern", "bb"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let o = gidx(&["locate", "--index", p(&index), "--pattern", "aba", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 3);
    assert_eq!(v["positions"], serde_json::json!([1, 4, 6]));

    let pattern_file = dir.path().join("p");
    std::fs::write(&pattern_file, "ab").unwrap();
    let o = gidx(&["locate", "--index", p(&index), "--pattern-file", p(&pattern_file), "--format", "count"]);
    assert_eq!(stdout(&o), "3\n");

    assert_eq!(gidx(&["extract", "--index", p(&index), "--start", "1", "--len", "8"]).stdout, b"abaababa");
    assert_eq!(gidx(&["extract", "--index", p(&index), "--start", "4", "--len", "0"]).stdout, b"");
    let o = gidx(&["extract", "--index", p(&index), "--start", "8", "--len", "2"]);
    assert_eq!(o.status.code(), Some(EXIT_OUT_OF_RANGE));

    let o = gidx(&["stats", "--index", p(&index)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 8);
    assert_eq!(v["gamma"], 6);
    let (w, g) = (v["leaves"].as_u64().unwrap(), v["gamma"].as_u64().unwrap());
    assert_eq!(v["explicit_count"].as_u64().unwrap(), 2 * w - g);
    assert!(v["bound_ratio"].as_f64().unwrap() <= 1.0);
}

#[test]
fn builds_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    std::fs::write(&input, "mississippi river mississippi").unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(gidx(&["build", "--input", p(&input), "--output", p(out), "--seed", "5"]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.gidx");
    std::fs::write(&input, b"ab\0ab").unwrap();
    let o = gidx(&["build", "--input", p(&input), "--output", p(&index)]);
    assert_eq!(o.status.code(), Some(EXIT_BAD_TEXT));

    // {2} (1-based) is not an attractor of abab
    std::fs::write(&input, "abab").unwrap();
    let positions = dir.path().join("gamma");
    std::fs::write(&positions, "2\n").unwrap();
    let o = gidx(&["build", "--input", p(&input), "--output", p(&index), "--attractor", p(&positions)]);
    assert_eq!(o.status.code(), Some(EXIT_BAD_ATTRACTOR));
    let o = gidx(&["validate", "--input", p(&input), "--attractor", p(&positions)]);
    assert_eq!(o.status.code(), Some(EXIT_BAD_ATTRACTOR));
    assert!(stdout(&o).starts_with("invalid witness="));

    std::fs::write(&positions, "1 2").unwrap();
    let o = gidx(&["validate", "--input", p(&input), "--attractor", p(&positions)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "valid gamma=2\n");

    std::fs::write(&input, "a".repeat(501)).unwrap();
    let o = gidx(&["validate", "--input", p(&input), "--attractor", "lz77"]);
    assert_eq!(o.status.code(), Some(EXIT_TOO_LARGE));
}

#[test]
fn corrupt_and_foreign_index_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t");
    let index = dir.path().join("t.gidx");
    std::fs::write(&input, "abaababaabaab").unwrap();
    assert!(gidx(&["build", "--input", p(&input), "--output", p(&index)]).status.success());
    let good = std::fs::read(&index).unwrap();

    let mut bad = good.clone();
    let mid = bad.len() / 2;
    bad[mid] ^= 0x10;
    std::fs::write(&index, &bad).unwrap();
    let o = gidx(&["locate", "--index", p(&index), "--pattern", "a"]);
    assert_eq!(o.status.code(), Some(EXIT_CORRUPT_INDEX));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));

    // a version bump with a recomputed checksum
    let mut newer = good.clone();
    newer[4] = 2;
    let body = newer.len() - 8;
    let sum = crc::Crc::<u64>::new(&crc::CRC_64_XZ).checksum(&newer[..body]);
    newer[body..].copy_from_slice(&sum.to_le_bytes());
    std::fs::write(&index, &newer).unwrap();
    let o = gidx(&["stats", "--index", p(&index)]);
    assert_eq!(o.status.code(), Some(EXIT_VERSION));

    std::fs::write(&index, b"not an index").unwrap();
    let o = gidx(&["stats", "--index", p(&index)]);
    assert_eq!(o.status.code(), Some(EXIT_CORRUPT_INDEX));
}

#[test]
fn gen_families() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let o = gidx(&["gen", "--family", "fibonacci", "--order", "10", "--out", p(&out)]);
    assert!(o.status.success());
    let fib = std::fs::read(&out).unwrap();
    assert_eq!(fib.len(), 89);
    assert!(fib.iter().all(|c| b"ab".contains(c)));

    let args = ["gen", "--family", "mutated-copies", "--copies", "100", "--len", "10000", "--rate", "0.001", "--seed", "3"];
    let other = dir.path().join("d");
    assert!(gidx(&[&args[..], &["--out", p(&out)]].concat()).status.success());
    assert!(gidx(&[&args[..], &["--out", p(&other)]].concat()).status.success());
    let (a, b) = (std::fs::read(&out).unwrap(), std::fs::read(&other).unwrap());
    assert_eq!(a.len(), 1_000_000);
    assert_eq!(a, b);

    let o = gidx(&["gen", "--family", "random", "--len", "10", "--sigma", "0", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(EXIT_BAD_PARAMETERS));
    let o = gidx(&["gen", "--family", "thue-morse", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(EXIT_BAD_PARAMETERS));
}
