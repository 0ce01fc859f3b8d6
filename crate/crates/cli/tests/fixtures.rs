//! Replays the regression corpus: every fixture's command is run against the
//! built binary and the JSON output must equal the frozen expectation.

use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::Command;

#[derive(Deserialize)]
struct Fixture {
    #[allow(dead_code)]
    version: u32,
    #[allow(dead_code)]
    kind: String,
    cmd: Vec<String>,
    #[serde(default)]
    input: Option<serde_json::Value>,
    expected: Option<serde_json::Value>,
}

fn fixtures_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("CANSUB_FIXTURES") {
        return PathBuf::from(dir);
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run_fixture(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let fx: Fixture = serde_json::from_str(&text).unwrap();
    let tmp = tempdir_file(path);
    if let Some(input) = &fx.input {
        std::fs::write(&tmp, serde_json::to_string(input).unwrap()).unwrap();
    }
    let args: Vec<String> = fx
        .cmd
        .iter()
        .map(|a| {
            if a == "{input}" {
                tmp.to_string_lossy().into_owned()
            } else {
                a.clone()
            }
        })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_cansub"))
        .args(&args)
        .output()
        .unwrap();
    assert!(
        out.status.code() == Some(0) || out.status.code() == Some(1),
        "{}: exited {:?}: {}",
        path.display(),
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let got: serde_json::Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{}: bad json: {e}", path.display()));
    let expected = fx.expected.expect("fixture without expectation");
    assert_eq!(
        got,
        expected,
        "{} diverged from its frozen output",
        path.display()
    );
}

fn tempdir_file(path: &Path) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!(
        "cansub_fixture_{}.json",
        path.file_stem().unwrap().to_string_lossy()
    ));
    p
}

#[test]
fn regression_corpus() {
    let dir = fixtures_dir();
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("fixture dir {}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    assert!(
        names.len() >= 20,
        "corpus unexpectedly small: {}",
        names.len()
    );
    for path in names {
        run_fixture(&path);
    }
}

#[test]
fn svg_is_byte_stable() {
    let frozen = fixtures_dir().join("square_p3.svg");
    let expected = std::fs::read(&frozen).unwrap();
    for _ in 0..2 {
        let out = Command::new(env!("CARGO_BIN_EXE_cansub"))
            .args(["hecke", "square", "--p", "3"])
            .output()
            .unwrap();
        assert!(out.status.success());
        assert_eq!(out.stdout, expected, "square rendering changed bytes");
    }
}

#[test]
fn exit_codes() {
    // input error: 2
    let out = Command::new(env!("CARGO_BIN_EXE_cansub"))
        .args(["bk", "degrees", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // failing check: 1 (slope at the strictness boundary)
    let tmp = std::env::temp_dir().join("cansub_boundary_cfg.json");
    std::fs::write(
        &tmp,
        r#"{"p":3,"primes":[{"f":"2","k":[5,5],"v":"3","eps":"7/8"}]}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cansub"))
        .args(["continuation", "check", "--config", tmp.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("tower-decay-coefficient"),
        "first failure must be named"
    );
}

#[test]
fn json_round_trip_of_emitted_points() {
    // every JSON the binary emits for a step re-parses to an equal value
    let tmp = std::env::temp_dir().join("cansub_rt_pt.json");
    std::fs::write(
        &tmp,
        r#"{"p":3,"point":{"primes":[{"f":"2","nu":["1/2","3/4"]}]}}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cansub"))
        .args(["hecke", "step", tmp.to_str().unwrap(), "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = serde_json::to_string(&v).unwrap();
    let v2: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v, v2);
}

#[test]
fn orbit_square_has_loop_and_fan() {
    // a superspecial start at full height: the s-branch loops at the vertex
    // while the circle branch fans out to (p/(p+1), p/(p+1))
    let tmp = std::env::temp_dir().join("cansub_ss_square.json");
    std::fs::write(
        &tmp,
        r#"{"p":3,"point":{"primes":[{"f":"2","nu":["0","1"],"flag":"superspecial","coords":{"m":"1","n":"2"}}]}}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cansub"))
        .args([
            "hecke",
            "square",
            tmp.to_str().unwrap(),
            "--orbit-depth",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("stroke=\"crimson\" stroke-width=\"1\"/>"),
        "loop marker missing"
    );
    assert!(
        text.contains("marker-end=\"url(#arr)\""),
        "fan arrows missing"
    );
    // deterministic: a second render is byte-identical
    let again = Command::new(env!("CARGO_BIN_EXE_cansub"))
        .args([
            "hecke",
            "square",
            tmp.to_str().unwrap(),
            "--orbit-depth",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(text.as_bytes(), &again.stdout[..]);
}
