use clap::Parser;
use octant::cli::{run, Cli};
use std::path::PathBuf;

const UB2: &str = r#"{"e":[1,1,1],"k":[1,1,1],"omega_units":3}"#;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("octant").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("")
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("octant-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn classify_worked_example() {
    let (code, out, _) = invoke(&["classify", "--json", UB2]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "nonconformal, Delta=2, energy=7 pi");
    let report: serde_json::Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
    assert_eq!(report["infimum_energy_units_pi"], 7);
    assert_eq!(report["wrapping"]["w"]["+++"], 1);
}

#[test]
fn classify_from_wrapping_and_file() {
    let dir = scratch_dir("classify");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    let w = r#"{"w":{"+++":1,"++-":1,"+-+":1,"+--":0,"-++":1,"-+-":0,"--+":0,"---":-1}}"#;
    std::fs::write(&path, w).unwrap();
    let (code, out, _) = invoke(&["classify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "nonconformal, Delta=2, energy=7 pi");
}

#[test]
fn classify_rejects_bad_input() {
    let zero = r#"{"w":{"+++":0,"++-":0,"+-+":0,"+--":0,"-++":0,"-+-":0,"--+":0,"---":0}}"#;
    let (code, out, err) = invoke(&["classify", "--json", zero]);
    assert_eq!(code, 2);
    assert_eq!(first_line(&out), "conformal, energy=0 pi");
    assert!(err.is_empty());

    let (code, _, err) = invoke(&["classify", "--json", r#"{"e":[1,1,1],"k":[1,1,1],"omega_units":2}"#]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    assert_eq!(invoke(&["classify", "--json", "{"]).0, 2);
    assert_eq!(invoke(&["classify"]).0, 2);
    assert_eq!(invoke(&["classify", "--json", UB2, "--epsilon", "0.2"]).0, 2);
}

#[test]
fn classify_prism_bounds() {
    let with = r#"{"e":[1,1,1],"k":[1,1,1],"omega_units":3,"lengths":[3.0,2.0,1.0]}"#;
    let (code, out, _) = invoke(&["classify", "--json", with]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
    let lo = report["prism_bounds"]["lower"].as_f64().unwrap();
    let hi = report["prism_bounds"]["upper"].as_f64().unwrap();
    assert!(0.0 < lo && lo <= hi);
}

#[test]
fn spelling_subcommand() {
    let (code, out, _) = invoke(&["spelling", "--word", "a b a' b'"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "lambda=2, pairing={{1,3}}");

    let (code, out, _) = invoke(&["spelling", "--json", UB2]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "bound=7 pi, infimum=7 pi, matches infimum");

    let mixed = r#"{"e":[1,1,1],"k":[1,-1,1],"omega_units":3}"#;
    assert_eq!(invoke(&["spelling", "--json", mixed]).0, 3);
    assert_eq!(invoke(&["spelling", "--word", "a ?"]).0, 2);
}

#[test]
fn construct_writes_artifacts() {
    let dir = scratch_dir("construct");
    let (code, out, _) =
        invoke(&["construct", "--json", UB2, "--out", dir.to_str().unwrap(), "--format", "json,csv,svg"]);
    assert_eq!(code, 0);
    let line = first_line(&out);
    assert!(line.starts_with("case 1f M=[1, 0, 0], energy=7.28"), "{line}");
    assert!(line.ends_with("invariants pass"));
    for f in ["patchwork_spec.json", "degrees.json", "energy.json", "report.json", "field.csv", "sectors.svg"] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.join("field.csv")).unwrap();
    assert!(csv.lines().count() > 1);
    assert!(std::fs::read_to_string(dir.join("sectors.svg")).unwrap().contains("<svg"));

    // The written spec verifies on its own.
    let spec = dir.join("patchwork_spec.json");
    let (code, out, _) = invoke(&["verify", spec.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), line);
}

#[test]
fn construct_conformal_and_unsupported() {
    let dir = scratch_dir("conformal");
    let conformal = r#"{"e":[1,1,1],"k":[0,0,0],"omega_units":-1}"#;
    let (code, out, _) = invoke(&["construct", "--json", conformal, "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(first_line(&out).starts_with("rational"));
    assert!(dir.join("rational_spec.json").is_file());
    let (code, _, _) = invoke(&["verify", dir.join("rational_spec.json").to_str().unwrap()]);
    assert_eq!(code, 0);

    let mixed = r#"{"e":[1,1,1],"k":[1,-1,1],"omega_units":3}"#;
    assert_eq!(invoke(&["construct", "--json", mixed]).0, 4);
    assert_eq!(invoke(&["construct", "--json", UB2, "--epsilon", "0.05", "--epsilon", "0.025"]).0, 2);
}

#[test]
fn construct_is_deterministic() {
    let a = invoke(&["construct", "--json", UB2, "--grid-level", "2"]);
    let b = invoke(&["construct", "--json", UB2, "--grid-level", "2"]);
    assert_eq!(a, b);
}

#[test]
fn sweep_small_family() {
    let family = r#"{"classes":[{"e":[1,1,1],"k":[1,1,1],"omega_units":3},{"e":[1,1,1],"k":[1,-1,1],"omega_units":3}]}"#;
    let dir = scratch_dir("sweep");
    let (code, out, _) = invoke(&["sweep", "--json", family, "--epsilon", "0.05", "--grid-level", "2", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert_eq!(first_line(&out), "2 classes, 2 runs, 1 unsupported, 0 failing invariants");
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("unsupported"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(report["unsupported"].as_array().unwrap().len(), 1);
}

#[test]
fn argument_errors_are_parse_errors() {
    assert!(Cli::try_parse_from(["octant", "bogus"]).is_err());
    assert!(Cli::try_parse_from(["octant", "construct", "--format", "pdf"]).is_err());
}
