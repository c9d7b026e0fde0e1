use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_strichartz"));
    c.env_remove("STRICHARTZ_OUT");
    c
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn plancherel_gaussian_family() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["plancherel", "--n", "1", "--family", "gaussian"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&dir.path().join("plancherel.json"));
    assert_eq!(r["schema"], 1);
    assert_eq!(r["pass"], true);
    let err = r["report"]["recorded"]["max_relative_error"].as_f64().unwrap();
    assert!(err < 1e-6, "{err}");
    assert_eq!(r["report"]["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn power_weight_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["power-weights", "--n", "1", "--p", "2", "--q", "2", "--alpha", "1", "--rho", "1.25"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("PASS"));
    let o = run(&["power-weights", "--n", "1", "--alpha", "1", "--rho", "2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("balance"), "{}", stderr(&o));
    let o = run(&["power-weights", "--n", "1", "--alpha", "1", "--rho", "1.25", "--mode", "both"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn constants_bc_product() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["constants", "--n", "3", "--s", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&dir.path().join("constants.json"));
    let bc = r["report"]["recorded"]["constants"]["bc_product"].as_f64().unwrap();
    assert!((bc - 10.0 / 3.0).abs() < 1e-10, "{bc}");
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("bad.ini");
    std::fs::write(&ini, "n = 1\nalphaa = 2\n").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["plancherel".into(), "--tol".into(), "2".into()],
        vec!["plancherel".into(), "--n".into(), "0".into()],
        vec!["power-weights".into(), "--alpha".into(), "one".into()],
        vec!["hardy".into(), "--variant".into(), "nope".into()],
        vec!["power-weights".into(), "--config".into(), ini.display().to_string()],
        vec!["power-weights".into(), "--config".into(), dir.path().join("missing.ini").display().to_string()],
        vec!["sweep".into(), "--command".into(), "nope".into()],
        vec!["plancherel".into(), "--bogus".into(), "1".into()],
    ];
    for c in cases {
        let args: Vec<&str> = c.iter().map(|s| s.as_str()).collect();
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{c:?}: {}", stderr(&o));
    }
}

#[test]
fn failed_inequality_names_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["hardy", "--n", "2", "--s", "0.05", "--variant", "macdonald", "--a", "1", "--b", "1", "--mode", "hardy"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("margin >= 0"), "{}", stderr(&o));
    assert_eq!(report(&dir.path().join("hardy.json"))["pass"], false);
}

fn strip_timestamp(v: &mut Value) -> String {
    v.as_object_mut().unwrap().remove("timestamp");
    serde_json::to_string_pretty(v).unwrap()
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["paley", "--n", "1", "--p", "1.5", "--format", "csv"];
    assert_eq!(run(&args, a.path()).status.code(), Some(0));
    assert_eq!(run(&args, b.path()).status.code(), Some(0));
    let mut ra = report(&a.path().join("paley.json"));
    let mut rb = report(&b.path().join("paley.json"));
    assert!(ra["timestamp"].is_u64());
    let cfg = ra["config"].clone();
    let sa = strip_timestamp(&mut ra);
    assert_eq!(sa, strip_timestamp(&mut rb));
    for f in ["paley_checks.csv", "layer_cake.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    // the header alone reproduces the run
    let c = tempfile::tempdir().unwrap();
    let ini = c.path().join("run.ini");
    let body: String = cfg.as_object().unwrap().iter().map(|(k, v)| format!("{k} = {}\n", v.as_str().unwrap())).collect();
    std::fs::write(&ini, body).unwrap();
    let o = run(&["paley", "--config", ini.to_str().unwrap()], c.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rc = report(&c.path().join("paley.json"));
    assert_eq!(sa, strip_timestamp(&mut rc));
}

#[test]
fn config_sections_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let ini = dir.path().join("run.ini");
    std::fs::write(&ini, "n = 1\nrho = 2\n\n[power-weights]\nalpha = 1\n").unwrap();
    let o = run(&["power-weights", "--config", ini.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["power-weights", "--config", ini.to_str().unwrap(), "--rho", "1.25"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&dir.path().join("power_weights.json"));
    assert_eq!(r["config"]["rho"], "1.25");
    assert_eq!(r["config"]["alpha"], "1");
}

#[test]
fn output_directory_precedence() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let cfg_dir = tempfile::tempdir().unwrap();
    let ini = cfg_dir.path().join("run.ini");
    std::fs::write(&ini, format!("out = {}\n", cfg_dir.path().join("from_config").display())).unwrap();
    let o = bin().args(["constants", "--n", "2", "--s", "0.3", "--config", ini.to_str().unwrap()]).env("STRICHARTZ_OUT", env_dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(env_dir.path().join("constants.json").exists());
    assert!(!cfg_dir.path().join("from_config").exists());
    let o = bin().args(["constants", "--n", "2", "--s", "0.3", "--out"]).arg(flag_dir.path()).env("STRICHARTZ_OUT", env_dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.path().join("constants.json").exists());
    let o = bin().args(["constants", "--n", "2", "--s", "0.3", "--config", ini.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(cfg_dir.path().join("from_config/constants.json").exists());
    // nothing but finished files is left behind
    let names: Vec<String> = std::fs::read_dir(flag_dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert_eq!(names, vec!["constants.json".to_string()]);
}

#[test]
fn sweep_runs_the_cartesian_product() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep", "--command", "power-weights", "--n", "1", "--alpha", "0.5,1", "--rho", "1,1.25", "--format", "csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let r = report(&dir.path().join("sweep.json"));
    assert_eq!(r["report"]["recorded"]["runs"], 4);
    assert_eq!(r["config"]["alpha"], "0.5,1");
    let csv = std::fs::read_to_string(dir.path().join("sweep_power_weights.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "run,alpha,rho,pass");
    // only α = 1, ρ = 1.25 balances at n = 1, p = q = 2
    assert_eq!(lines[1..].iter().filter(|l| l.ends_with("true")).copied().collect::<Vec<_>>(), vec!["3,1,1.25,true"]);
    let o = run(&["sweep", "--command", "power-weights", "--n", "1", "--alpha", "1", "--rho", "1.25"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["sweep", "--command", "power-weights", "--s", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn remaining_subcommands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &["inversion", "--n", "1", "--a", "1", "--b", "1", "--points", "6"],
        &["pitt-sufficient", "--n", "1", "--alpha", "1", "--rho", "1.25", "--format", "csv"],
        &["pitt-necessary", "--n", "1", "--alpha", "1", "--rho", "1.25", "--s-count", "30"],
        &["rearrange", "--n", "2", "--weight", "valpha", "--alpha", "1", "--format", "csv"],
        &["uncertainty", "--n", "1", "--a", "1", "--b", "1"],
        &["hardy", "--n", "2", "--s", "0.4", "--variant", "trace_hardy", "--a", "1", "--b", "1"],
    ];
    for args in runs {
        let o = run(args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    }
    assert!(dir.path().join("pitt_sufficient_trace.csv").exists());
    let table = std::fs::read_to_string(dir.path().join("rearrangement.csv")).unwrap();
    assert!(table.starts_with("t,value\n") && table.lines().count() == 122);
    let o = run(&["pitt-sufficient", "--n", "1", "--alpha", "1", "--rho", "2"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("supremum finite"));
}
