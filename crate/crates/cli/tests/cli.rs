use std::path::PathBuf;
use std::process::{Command, Output};

use delpezzo_core::format::parse_surface;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn plane_report_has_all_klt_classes() {
    let json: Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "analyze",
        &fixture("p2.json"),
    ]))
    .unwrap();
    let classes = json["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 10);
    assert!(classes.iter().all(|c| c["member"] == true));
    assert_eq!(json["decomposition"]["positive_square"], "9");
    assert_eq!(json["caveat"], "(relative to declared catalog)");
}

#[test]
fn star4_is_weak_lc_only() {
    let path = fixture("star4.json");
    let json: Value =
        serde_json::from_str(&stdout(&["--format", "json", "analyze", &path])).unwrap();
    for c in json["classes"].as_array().unwrap() {
        let klt = ["LD", "ES", "NS", "EP", "NP"].contains(&c["class"].as_str().unwrap());
        assert_eq!(c["member"], !klt, "{c}");
    }
    assert_eq!(
        run(&["--assert", "klt", "analyze", &path]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["--assert", "weak-lc", "analyze", &path])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["--format", "json", "analyze"],
        vec!["analyze"],
        vec!["--format", "dot", "classify"],
        vec!["witness", "--method", "cone"],
    ] {
        let mut a = args.clone();
        let path = fixture("f4_crossing.json");
        a.push(&path);
        assert_eq!(stdout(&a), stdout(&a));
    }
}

#[test]
fn analyze_input_round_trips() {
    for name in ["dp6.json", "example_ex.json", "elliptic_case2.json"] {
        let path = fixture(name);
        let json: Value =
            serde_json::from_str(&stdout(&["--format", "json", "analyze", &path])).unwrap();
        let reparsed = parse_surface(&json["input"].to_string()).unwrap();
        let original = parse_surface(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(reparsed, original);
    }
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = std::env::temp_dir().join(format!("delpezzo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("truncated.json", "{\"base\": {\"kind\": \"projective_plane\"},\n"),
        ("unknown.json", "{\"base\": {\"kind\": \"projective_plane\"}, \"colour\": 1}"),
        ("genus.json", "{\"base\": {\"kind\": \"projective_plane\"}, \"curves\": [{\"id\": \"Q\", \"class\": [\"2\"], \"genus\": 4}]}"),
    ];
    for (name, text) in cases {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        let out = run(&["analyze", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["analyze", &dir.join("missing.json").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr =
        String::from_utf8(run(&["analyze", dir.join("truncated.json").to_str().unwrap()]).stderr)
            .unwrap();
    assert!(stderr.contains("line"), "{stderr}");
}

#[test]
fn rank_cap_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .env("DELPEZZO_MAX_RANK", "5")
        .args(["analyze", &fixture("dp6.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
}

#[test]
fn decompose_with_divisor() {
    let text = stdout(&[
        "--format",
        "json",
        "decompose",
        &fixture("f3.json"),
        "--divisor",
        "[1,0]",
    ]);
    let json: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["negative"][0][0], "C0");
    assert_eq!(json["negative"][0][1], "1");
    assert_eq!(json["positive_square"], "0");
    assert_eq!(
        run(&["decompose", &fixture("f3.json"), "--divisor", "[1]"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn blowup_emits_a_loadable_surface() {
    let text = stdout(&[
        "--format",
        "json",
        "blowup",
        &fixture("f4_crossing.json"),
        "--at",
        "crossing:C0,F",
    ]);
    let desc = parse_surface(&text).unwrap();
    assert_eq!(desc.surface.rank(), 7);
    assert_eq!(
        run(&["blowup", &fixture("p2.json"), "--at", "free"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn empty_corpus() {
    let text = stdout(&["corpus", "--seed", "4", "--count", "0"]);
    assert!(text.contains("surfaces: 0"));
    assert_eq!(text, stdout(&["corpus", "--seed", "4", "--count", "0"]));
}

#[test]
fn dot_output() {
    let dot = stdout(&["--format", "dot", "analyze", &fixture("star4.json")]);
    assert!(dot.starts_with("graph"));
    assert!(dot.contains("H(-3,0)"));
    assert_eq!(
        run(&["--format", "dot", "corpus", "--count", "1"])
            .status
            .code(),
        Some(2)
    );
}
