use std::path::{Path, PathBuf};
use std::process::Command;

use lrkit_cli::schema::{self, Model};
use lrkit_cli::{run, Command as Cmd, Options};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn fixture_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "model"))
        .collect();
    paths.sort();
    paths
}

fn lrkit(args: &[&str], model: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lrkit"))
        .args(args)
        .arg(model)
        .arg("--no-timing")
        .env("LRKIT_THREADS", "2")
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lrkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn duality_holds_on_every_fixture() {
    for path in fixture_paths() {
        let (code, out, err) = lrkit(&["duality"], &path);
        assert_eq!(code, 0, "{}: {out}{err}", path.display());
    }
}

#[test]
fn every_fixture_validates_and_round_trips() {
    for path in fixture_paths() {
        for command in ["validate", "roundtrip"] {
            let (code, out, err) = lrkit(&[command], &path);
            assert_eq!(code, 0, "{command} {}: {out}{err}", path.display());
        }
        assert!(lrkit(&["roundtrip"], &path).1.contains("input is canonical"));
    }
}

#[test]
fn fixture_files_are_canonical() {
    for path in fixture_paths() {
        let text = std::fs::read_to_string(&path).unwrap();
        let file = schema::parse_str(&text).unwrap();
        let model = schema::build_model(&file, file.caps).unwrap();
        let again = schema::to_canonical_string(&schema::export_model(&model, file.caps, file.description.clone()));
        assert_eq!(again, text, "{}", path.display());
    }
}

#[test]
fn square_report_exit_codes() {
    let (code, out, _) = lrkit(&["frakd-square"], &fixture("trivial.model"));
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = lrkit(&["frakd-square"], &fixture("epsilon_nilpotent.model"));
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = lrkit(&["frakd-square"], &fixture("nonintegrable.model"));
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("lowest violating weight shift 1"), "{out}");
    assert!(out.contains("result: residuals found"));
}

#[test]
fn identities_fail_on_the_nonintegrable_algebroid() {
    let (code, out, _) = lrkit(&["jacobi"], &fixture("nonintegrable_algebroid.model"));
    assert_eq!(code, 1, "{out}");
    let (code, out, _) = lrkit(&["jacobi", "--arity", "1"], &fixture("nonintegrable_algebroid.model"));
    assert_eq!(code, 0, "{out}");
    for command in ["jacobi", "leibniz", "anchor"] {
        let (code, out, _) = lrkit(&[command], &fixture("conjugated_algebroid.model"));
        assert_eq!(code, 0, "{command}: {out}");
    }
}

#[test]
fn lemmas_and_kapranov_on_geometric_fixtures() {
    for name in ["trivial.model", "curved_rank1.model", "sheared_splitting.model", "full_curvature.model"] {
        let (code, out, _) = lrkit(&["lemmas"], &fixture(name));
        assert_eq!(code, 0, "{name}: {out}");
    }
    let (code, out, _) = lrkit(&["kapranov"], &fixture("diagonal.model"));
    assert!(out.contains("PASS diagonal regime: 𝔇 equals the Kapranov differential"), "{out}");
    assert!(out.contains("PASS diagonal regime: anchors vanish"), "{out}");
    assert_eq!(code, 1, "the random normal curvature is not integrable on its own");
}

#[test]
fn malformed_input_exits_with_two() {
    let text = std::fs::read_to_string(fixture("trivial.model")).unwrap();
    let truncated = scratch("truncated.model");
    std::fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let (code, _, err) = lrkit(&["validate"], &truncated);
    assert_eq!(code, 2);
    assert!(err.contains("line") && err.contains("column"), "{err}");

    let unknown = scratch("unknown.model");
    std::fs::write(&unknown, text.replacen("\"caps\"", "\"extra\": 1,\n  \"caps\"", 1)).unwrap();
    assert_eq!(lrkit(&["validate"], &unknown).0, 2);

    let (code, _, err) = lrkit(&["lemmas"], &fixture("conjugated.model"));
    assert_eq!(code, 2);
    assert!(err.contains("needs a geometry model"), "{err}");
}

#[test]
fn ce_build_and_extract_round_trip_through_files() {
    let derivation = scratch("ce.model");
    let (code, out, _) = lrkit(&["ce-build", "--out", derivation.to_str().unwrap()], &fixture("conjugated_algebroid.model"));
    assert_eq!(code, 0, "{out}");
    let algebroid = scratch("extracted.model");
    let (code, out, _) = lrkit(&["ce-extract", "--out", algebroid.to_str().unwrap()], &derivation);
    assert_eq!(code, 0, "{out}");
    let a = schema::parse_file(&algebroid).unwrap();
    let b = schema::parse_file(&fixture("conjugated_algebroid.model")).unwrap();
    let (Model::Algebroid(x), Model::Algebroid(y)) =
        (schema::build_model(&a, a.caps).unwrap(), schema::build_model(&b, b.caps).unwrap())
    else {
        panic!("expected algebroids");
    };
    assert_eq!(x, y);
}

#[test]
fn frakd_build_writes_the_duality_partner() {
    let out_path = scratch("frakd.model");
    let (code, out, _) = lrkit(&["frakd-build", "--out", out_path.to_str().unwrap()], &fixture("curved_rank2.model"));
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = lrkit(&["duality"], &out_path);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn caps_flags_override_the_file() {
    let report = run(&Cmd::FrakdSquare, &fixture("nonintegrable.model"), &Options { weight: Some(1), ..Options::default() }).unwrap();
    assert_eq!(report.effective_caps.weight, 1);
    assert!(report.passed(), "{}", report.to_text());
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    for command in [Cmd::Lemmas, Cmd::Jacobi { arity: None }, Cmd::Mc { seed: 3, samples: 4 }] {
        let render = |threads| {
            let mut r = run(&command, &fixture("curved_rank2.model"), &Options { threads, ..Options::default() }).unwrap();
            r.strip_timing();
            r.to_json()
        };
        assert_eq!(render(1), render(4), "{command:?}");
    }
}

#[test]
fn json_report_is_parseable() {
    let (code, out, _) = lrkit(&["frakd-square", "--json"], &fixture("nonintegrable.model"));
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "frakd-square");
    assert_eq!(v["checks"][0]["passed"], false);
    assert!(v["checks"][0]["residuals"].as_array().is_some_and(|r| !r.is_empty()));
}

#[test]
fn hand_written_files_use_presets_and_quadruple_defaults() {
    let text = r#"{
      "schema": "lrkit-model/1",
      "caps": {"weight": 2, "arity": 2},
      "algebra": {"preset": "exterior", "generators": ["e"]},
      "algebroid": {
        "carrier": {"names": ["u"], "degrees": [0]},
        "anchors": [{"tuple": [0], "images": [{"basis": 0, "value": [{"basis": 1, "c": {"num": 3, "den": 6}}]}]}]
      }
    }"#;
    let file = schema::parse_str(text).unwrap();
    let Model::Algebroid(s) = schema::build_model(&file, file.caps).unwrap() else { panic!("expected an algebroid") };
    // {u | 1} = e/2 is not a derivation: the anchor of the unit must vanish.
    assert_eq!(s.anchor_on_generators(&[0]).images[0], lrkit::graded::AlgebraElement::term(1, lrkit::graded::Scalar::ratio(1, 2).unwrap()));
    let path = scratch("hand.model");
    std::fs::write(&path, text).unwrap();
    assert_eq!(lrkit(&["leibniz"], &path).0, 1);
    let (code, out, _) = lrkit(&["roundtrip"], &path);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("input is not canonical"), "{out}");

    let bad = text.replace("\"exterior\"", "\"unknown\"");
    assert!(schema::build_model(&schema::parse_str(&bad).unwrap(), file.caps).is_err());
    let bad = text.replace("\"den\": 6", "\"den\": 0");
    assert!(schema::parse_str(&bad).and_then(|f| schema::build_model(&f, f.caps)).is_err());
}
