use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn soergel(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_soergel")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let r = soergel(&all);
    assert_eq!(r.code, 0, "{}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_dihedral_five() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"system": {"generators": ["s", "r"], "bond": [[1, 5], [5, 1]]}}"#);
    let v = json(&["--config", &cfg, "group", "validate"]);
    assert_eq!(v["result"]["rank"], 2);
    assert!(v["result"]["cos_pi_over"]["5"].is_string());
    assert_eq!(v["provenance"]["config"]["system"]["bond"][0][1], 5);
}

#[test]
fn validate_rejects_bond_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"system": {"generators": ["s", "r"], "bond": [[1, 3], [3, 1]]}}"#);
    let r = soergel(&["--config", &cfg, "group", "validate"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not extra-large"), "{}", r.stderr);
}

#[test]
fn validate_reports_missing_cosine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"system": {"generators": ["s", "r"], "bond": [[1, 8], [8, 1]],
            "field": {"minpoly": [-2, 0, 1], "cos": {"4": "θ/2"}}}}"#,
    );
    let r = soergel(&["--config", &cfg, "group", "validate"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("cos(pi/8)"), "{}", r.stderr);
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"truncaton": 3}"#);
    assert_eq!(soergel(&["--config", &cfg, "group", "validate"]).code, 2);
}

#[test]
fn cores_of_small_words() {
    let v = json(&["cores", "srsr"]);
    assert_eq!(v["result"]["cores"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["classification"][0]["kind"], "filled");

    let v = json(&["cores", "srs"]);
    assert_eq!(v["result"]["gcores"].as_array().unwrap().len(), 1);
    assert!(v["result"]["cores"].as_array().unwrap().is_empty());

    let r = soergel(&["cores", "e"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("0 cores, 0 gcores"));

    let r = soergel(&["cores", "ss"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("not reduced"), "{}", r.stderr);
}

#[test]
fn rex_emits_dot() {
    let r = soergel(&["rex", "srsr", "--format", "dot"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("graph rex {"));
    assert!(r.stdout.contains("\"srsr\" -- \"rsrs\""));
    let v = json(&["rex", "srs"]);
    assert_eq!(v["result"]["reduced_words"], serde_json::json!(["srs"]));
}

#[test]
fn dot_is_refused_for_tables() {
    let r = soergel(&["basis", "kl", "--format", "dot"]);
    assert_eq!(r.code, 2);
}

#[test]
fn morphisms_pass_their_checks() {
    let v = json(&["morphism", "fsr", "s", "r"]);
    assert_eq!(v["result"]["morphism"]["source"], "srsr");
    assert!(v["result"]["checks"].as_object().unwrap().values().all(|b| b == true));
    let v = json(&["morphism", "f2", "r", "s", "3"]);
    assert_eq!(v["result"]["morphism"]["degree"], 0);
    assert!(v["result"]["checks"].as_object().unwrap().values().all(|b| b == true));
    assert_eq!(soergel(&["morphism", "f2", "s", "r", "5"]).code, 2);
}

fn kl_coords(v: &Value, w: &str) -> Value {
    v["result"]["elements"].as_array().unwrap().iter().find(|e| e["w"] == w).unwrap()["kl"].clone()
}

#[test]
fn e_basis_examples() {
    let v = json(&["basis", "e", "--up-to", "4"]);
    assert_eq!(v["result"]["elements"].as_array().unwrap().len(), 8);
    assert_eq!(kl_coords(&v, "srs"), serde_json::json!({"s": "v^-3", "srs": "v^-3"}));
    assert_eq!(kl_coords(&v, "srsr"), serde_json::json!({"srsr": "v^-4"}));
}

#[test]
fn bs_and_kl_tables_agree_below_length_three() {
    let bs = json(&["basis", "bs", "--up-to", "2"]);
    let kl = json(&["basis", "kl", "--up-to", "2"]);
    assert_eq!(bs["result"]["elements"], kl["result"]["elements"]);
    let bs = json(&["basis", "bs", "--up-to", "3"]);
    assert_eq!(kl_coords(&bs, "srs"), serde_json::json!({"s": "1", "srs": "1"}));
}

#[test]
fn csv_table() {
    let r = soergel(&["basis", "kl", "--up-to", "1", "--format", "csv"]);
    assert_eq!(r.code, 0);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("w,standard basis,KL basis"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn compare_reports_the_chain() {
    let v = json(&["compare", "--up-to", "3"]);
    assert_eq!(v["result"]["chain_positive"], true);
    assert_eq!(v["ok"], true);
}

#[test]
fn verify_passes_on_dihedral_four() {
    let r = soergel(&["verify", "all", "--up-to", "3", "--seed", "11"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains(" 0 failed"));
}

#[test]
fn verify_catches_a_corrupted_fsr() {
    let r = soergel(&["verify", "fsr", "--inject-fault", "fsr"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("counterexample [fsr] f_sr is a bimodule map"));
    assert!(r.stdout.contains("dump: {"));
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "basis", "d", "--format", "json"];
    let first = soergel(&args);
    let second = soergel(&args);
    let fresh = soergel(&["--no-cache", "--cache-dir", d, "basis", "d", "--format", "json"]);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, fresh.stdout);

    let jobs = soergel(&["--cache-dir", d, "--no-cache", "--jobs", "1", "basis", "d", "--format", "json"]);
    let strip = |s: &str| s.replace("\"jobs\": 1", "\"jobs\": null");
    assert_eq!(strip(&jobs.stdout), first.stdout);
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for sub in fs::read_dir(dir).unwrap() {
        for f in fs::read_dir(sub.unwrap().path()).unwrap() {
            out.push(f.unwrap().path());
        }
    }
    out
}

#[test]
fn corrupted_or_stale_cache_is_invalidated() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "basis", "e", "--up-to", "3", "--format", "json"];
    let good = soergel(&args).stdout;
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1);

    fs::write(&files[0], "not json").unwrap();
    assert_eq!(soergel(&args).stdout, good);

    let mut entry: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
    entry["version"] = "soergel-cache/0.0.0/0".into();
    entry["payload"]["data"] = Value::Null;
    fs::write(&files[0], entry.to_string()).unwrap();
    assert_eq!(soergel(&args).stdout, good);
    let entry: Value = serde_json::from_str(&fs::read_to_string(&files[0]).unwrap()).unwrap();
    assert_ne!(entry["version"], "soergel-cache/0.0.0/0");
}
