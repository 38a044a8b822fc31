//! End-to-end checks of the binary: exit codes, output determinism,
//! cache behaviour and the universal-extension file round trip.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_relext")
}

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn q8_to_klein(dir: &Path) -> std::path::PathBuf {
    write(
        dir,
        "q8v4.json",
        r#"{"source": {"type": "named", "name": "quaternion:8"},
            "target": {"type": "named", "name": "klein"},
            "gens": [2, 4], "images": [1, 2]}"#,
    )
}

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("RELEXT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

#[test]
fn multiplier_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let hom = q8_to_klein(dir.path());
    let out = run_in(&cache, &["multiplier", hom.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"h1_rel":[],"method":"hopf","relative_h2":[2]}"#
    );

    // parse failure: unknown field
    let bad = write(dir.path(), "bad.json", r#"{"source": 1, "bogus": true}"#);
    let out = run_in(&cache, &["multiplier", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // hypothesis failure under --require-ab-surjective
    let inc = write(
        dir.path(),
        "inc.json",
        r#"{"source": {"type": "named", "name": "cyclic:2"},
            "target": {"type": "named", "name": "cyclic:4"},
            "gens": [1], "images": [2]}"#,
    );
    let out = run_in(&cache, &["--require-ab-surjective", "multiplier", inc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // budget failure: order cap below the group order
    let out = run_in(&cache, &["--budget-order", "4", "multiplier", hom.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn universal_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let hom = q8_to_klein(dir.path());
    let out_file = dir.path().join("u.json");
    let out = run_in(
        &cache,
        &["--no-cache", "universal", hom.to_str().unwrap(), out_file.to_str().unwrap()],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"kernel":[2],"u_order":8}"#
    );

    // the written extension re-parses into a valid FExtension: the
    // five-term command performs the full validation on load
    let out = run_in(&cache, &["--no-cache", "five-term", out_file.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains(r#""exact":true"#));
    assert!(text.contains(r#""connecting_iso":true"#));

    // obstruction commands accept the extension file directly
    let out = run_in(
        &cache,
        &["--no-cache", "obstruction", out_file.to_str().unwrap(), "--order", "1"],
    );
    assert!(out.status.success());
}

#[test]
fn outputs_are_deterministic_across_cache_states() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let hom = q8_to_klein(dir.path());
    let args = ["tower", hom.to_str().unwrap()];

    let cold = run_in(&cache, &args);
    assert!(cold.status.success());
    let warm = run_in(&cache, &args);
    assert!(warm.status.success());
    let bypass = run_in(&cache, &["--no-cache", "tower", hom.to_str().unwrap()]);
    assert!(bypass.status.success());
    assert_eq!(cold.stdout, warm.stdout, "cache hit changed the bytes");
    assert_eq!(cold.stdout, bypass.stdout, "cache bypass changed the bytes");

    // reformatting the input (whitespace, key order) still hits the cache
    let hom2 = write(
        dir.path(),
        "q8v4b.json",
        r#"{"target": {"name": "klein", "type": "named"},
            "images": [1, 2], "gens": [2, 4],
            "source": {"type": "named", "name": "quaternion:8"}}"#,
    );
    let reformatted = run_in(&cache, &["tower", hom2.to_str().unwrap()]);
    assert_eq!(cold.stdout, reformatted.stdout);
}

#[test]
fn classes_command_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    // Γ = Z/2 mapping to the trivial group: classes are homomorphisms
    // Γ → A
    let hom = write(
        dir.path(),
        "z2_to_1.json",
        r#"{"source": {"type": "named", "name": "cyclic:2"},
            "target": {"type": "named", "name": "trivial"},
            "gens": [1], "images": [0]}"#,
    );
    let out = run_in(&cache, &["--no-cache", "classes", hom.to_str().unwrap(), "--coeff", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains(r#""count":2"#), "expected 2 classes, got {text}");
}

#[test]
fn permutation_and_table_specs_parse() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    // S3 as a permutation group, sign map onto a table-specified C2
    let hom = write(
        dir.path(),
        "s3_perm.json",
        r#"{"source": {"type": "permutation", "degree": 3,
                       "generators": [[1, 0, 2], [1, 2, 0]]},
            "target": {"type": "table", "table": [[0, 1], [1, 0]]},
            "gens": [1, 2], "images": [1, 0]}"#,
    );
    let out = run_in(&cache, &["--no-cache", "multiplier", hom.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"h1_rel":[],"method":"hopf","relative_h2":[]}"#
    );
}
