use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn polydev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydev"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, kind: &str, n: usize, seed: u64, affine: bool) -> PathBuf {
    let prefix = dir.join(format!("{kind}{n}_{seed}"));
    let mut args = vec!["generate".to_string(), kind.into(), "-n".into(), n.to_string(), "--seed".into(), seed.to_string()];
    if affine {
        args.push("--affine".into());
    }
    args.push("--out".into());
    args.push(prefix.to_str().unwrap().into());
    let o = polydev(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    prefix
}

fn file(prefix: &Path, suffix: &str) -> String {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    s.into_string().unwrap()
}

#[test]
fn generate_writes_both_files() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "cube", 4, 1, true);
    for s in [".poly.json", ".dev.json", ".image.poly.json", ".image.dev.json"] {
        assert!(Path::new(&file(&p, s)).exists(), "{s}");
    }
}

#[test]
fn cube_and_image_are_conditional() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "cube", 4, 3, true);
    let o = polydev(&["recognize", &file(&p, ".dev.json"), &file(&p, ".image.dev.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("AffineEquivalentConditional"), "{}", stdout(&o));
    let o = polydev(&["oracle", &file(&p, ".poly.json"), &file(&p, ".image.poly.json")]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["affine"], true);
}

#[test]
fn bipyramid_pair_is_refuted() {
    let dir = TempDir::new().unwrap();
    let a = gen(dir.path(), "bipyramid", 3, 0, false);
    let b = gen(dir.path(), "perturbed-bipyramid", 3, 0, false);
    let o = polydev(&["oracle", &file(&a, ".poly.json"), &file(&b, ".poly.json")]);
    assert_eq!(code(&o), 1);
    let o = polydev(&["recognize", "--json", &file(&a, ".dev.json"), &file(&b, ".dev.json")]);
    assert_eq!(code(&o), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "NotAffineEquivalent");
    assert_eq!(doc["certified"], true);
    // the suspension certificate alone cannot decide this pair
    let o = polydev(&["suspension", &file(&a, ".dev.json"), &file(&b, ".dev.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Inconclusive"));
}

#[test]
fn json_is_identical_across_jobs() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "suspension", 5, 9, true);
    let (a, b) = (file(&p, ".dev.json"), file(&p, ".image.dev.json"));
    let one = polydev(&["recognize", "--json", "--jobs", "1", &a, &b]);
    let two = polydev(&["recognize", "--json", "--jobs", "2", &a, &b]);
    assert_eq!(code(&one), code(&two));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn explicit_map_file() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "cube", 4, 5, true);
    let (a, b) = (file(&p, ".dev.json"), file(&p, ".image.dev.json"));
    let ids = ["b0", "b1", "b2", "b3", "t0", "t1", "t2", "t3"];
    let map: serde_json::Map<String, serde_json::Value> = ids.iter().map(|i| (i.to_string(), (*i).into())).collect();
    let good = dir.path().join("map.json");
    std::fs::write(&good, serde_json::json!({ "vertices": map }).to_string()).unwrap();
    assert_eq!(code(&polydev(&["recognize", "--map", good.to_str().unwrap(), &a, &b])), 0);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices": {"b0": "nowhere"}}"#).unwrap();
    assert_eq!(code(&polydev(&["recognize", "--map", bad.to_str().unwrap(), &a, &b])), 2);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    let j = junk.to_str().unwrap();
    assert_eq!(code(&polydev(&["validate", j])), 2);
    assert_eq!(code(&polydev(&["recognize", j, j])), 2);
    assert_eq!(code(&polydev(&["recognize", "/nonexistent/a.json", j])), 2);
    assert_eq!(code(&polydev(&["generate", "dodecahedron", "--out", j])), 2);
    assert_eq!(code(&polydev(&["recognize"])), 2);
}

#[test]
fn validate_reports_clean_development() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "trapezohedron", 4, 0, false);
    let o = polydev(&["validate", &file(&p, ".dev.json")]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["issues"], serde_json::json!([]));
}

#[test]
fn mismatched_combinatorics_exit_2() {
    let dir = TempDir::new().unwrap();
    let a = gen(dir.path(), "cube", 4, 0, false);
    let b = gen(dir.path(), "prism", 5, 0, false);
    assert_eq!(code(&polydev(&["recognize", &file(&a, ".dev.json"), &file(&b, ".dev.json")])), 2);
}

#[test]
fn generate_is_seeded_and_checks_sizes() {
    let (d1, d2) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let a = gen(d1.path(), "suspension", 6, 42, true);
    let b = gen(d2.path(), "suspension", 6, 42, true);
    for s in [".poly.json", ".dev.json", ".image.poly.json", ".image.dev.json"] {
        assert_eq!(std::fs::read(file(&a, s)).unwrap(), std::fs::read(file(&b, s)).unwrap(), "{s}");
    }
    let out = d1.path().join("bad");
    assert_eq!(code(&polydev(&["generate", "bipyramid", "-n", "2", "--out", out.to_str().unwrap()])), 2);
}
