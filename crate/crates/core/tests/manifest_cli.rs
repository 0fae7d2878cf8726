//! Manifest serialization round trips and the exit codes of the binary.

use std::path::PathBuf;
use std::process::Command as Process;

use idpv::cli::{run_text, Command, Format};
use idpv::manifest::{parse_manifest, Overrides};
use idpv::{FieldSpec, Poly};
use proptest::prelude::*;
use serde_json::json;

fn manifests_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/manifests")
}

fn poly_text(c: &[i64]) -> String {
    Poly::from_ints(FieldSpec::rationals(), c).to_string()
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("idpv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_idpv")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn manifest_round_trip(
        d in prop::collection::vec(prop::collection::vec(-5i64..=5, 1..=3), 1..=4),
        localized in prop::bool::ANY,
        point in -3i64..=3,
        n in 8usize..=30,
        k in 2usize..=10,
        deg in 1u32..=4,
        e in 0usize..=3,
    ) {
        let r = (d.len() as f64).sqrt() as usize;
        let entries: Vec<Vec<String>> = (0..r).map(|i| (0..r).map(|j| poly_text(&d[i * r + j])).collect()).collect();
        let base = if localized {
            json!({"kind": "localized", "inverted": ["t", "t - 7"]})
        } else {
            json!({"kind": "poly"})
        };
        let text = json!({
            "field": {"char": 0},
            "base": base,
            "module": {"D": entries},
            "point": point.to_string(),
            "bounds": {"N": n, "K": k, "d": deg, "e": e, "d_z": deg},
        })
        .to_string();
        let m = parse_manifest(&text).unwrap();
        let canonical = m.to_canonical_json();
        let again = parse_manifest(&canonical).unwrap();
        prop_assert_eq!(&again, &m);
        prop_assert_eq!(again.to_canonical_json(), canonical);
        prop_assert!(m.build().is_ok());
    }
}

#[test]
fn example_manifests_round_trip() {
    for entry in std::fs::read_dir(manifests_dir()).unwrap() {
        let path = entry.unwrap().path();
        let m = parse_manifest(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parse_manifest(&m.to_canonical_json()).unwrap(), m, "{}", path.display());
    }
}

#[test]
fn passing_manifest_exits_zero() {
    let exp = manifests_dir().join("exp.json");
    for cmd in ["check", "solve", "pv", "galois"] {
        let (code, out) = run_bin(&[cmd, exp.to_str().unwrap()]);
        assert_eq!(code, 0, "{cmd}: {out}");
    }
    let (code, out) = run_bin(&["check", exp.to_str().unwrap(), "--format", "structured", "--tdeg", "4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["inputs"]["bounds"]["K"], json!(4));
}

#[test]
fn failing_law_exits_one() {
    // A = 1 + T is not a cocycle: A(T + U) lacks the TU term of A(T)A(U).
    let text = r#"{"field": {"char": 0}, "base": {"kind": "poly"}, "module": {"A": [[["1", "1"]]]}}"#;
    let path = write_temp("broken.json", text);
    let (code, out) = run_bin(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(run_text(Command::Check, text, &Overrides::default()).exit_code, 1);
}

#[test]
fn input_errors_exit_two() {
    let cases = [
        ("syntax.json", "{\"field\": "),
        ("unknown.json", r#"{"field": {"char": 0}, "base": {"kind": "poly"}, "module": {"D": [["1"]]}, "colour": 1}"#),
        ("nonprime.json", r#"{"field": {"char": 6}, "base": {"kind": "poly"}, "module": {"D": [["1"]]}}"#),
        ("badpoly.json", r#"{"field": {"char": 0}, "base": {"kind": "poly"}, "module": {"D": [["t^"]]}}"#),
    ];
    for (name, text) in cases {
        let path = write_temp(name, text);
        let (code, out) = run_bin(&["check", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}: {out}");
        let outcome = run_text(Command::Check, text, &Overrides::default());
        assert_eq!(outcome.exit_code, 2);
        assert!(outcome.render(Format::Structured).contains("\"passed\": false"), "{name}");
    }
    let bad_point = manifests_dir().join("bad_point.json");
    assert_eq!(run_bin(&["pv", bad_point.to_str().unwrap()]).0, 2);
    assert_eq!(run_bin(&["check", "/nonexistent/manifest.json"]).0, 2);
    assert_eq!(run_bin(&["frobnicate", "x.json"]).0, 2);
}

#[test]
fn flags_override_manifest_bounds() {
    let exp = manifests_dir().join("exp.json");
    let (code, out) = run_bin(&[
        "solve", exp.to_str().unwrap(), "--format", "structured", "--order", "10", "--point", "-1",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["inputs"]["bounds"]["N"], json!(10));
    assert_eq!(v["inputs"]["point"], json!("-1"));
}
