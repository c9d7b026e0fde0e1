mod commands;
mod config;

use clap::{Arg, ArgAction, ArgMatches};
use commands::{Command, Outcome, RunError, COMMANDS};
use config::{normalize, ConfigError, Params, COMMON_KEYS, GRID_KEYS};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use strichartz::report::{Check, VerificationReport, SCHEMA};

const SWEEP_HELP: &str = "cartesian sweep: give comma-separated values for any key of --command";

fn value_arg(key: &str) -> Arg {
    let long = key.replace('_', "-");
    let mut a = Arg::new(key.to_string()).long(long.clone()).value_name("VALUE").action(ArgAction::Set);
    if long != key {
        a = a.alias(key.to_string());
    }
    a
}

fn key_help() -> BTreeMap<&'static str, &'static str> {
    COMMON_KEYS.iter().chain(GRID_KEYS).copied().collect()
}

fn with_keys(mut cmd: clap::Command, keys: &[&str]) -> clap::Command {
    let help = key_help();
    cmd = cmd.arg(Arg::new("config").long("config").value_name("FILE").help("INI-style key = value file; flags override it"));
    for k in keys {
        let mut a = value_arg(k);
        if let Some(h) = help.get(k) {
            a = a.help(*h);
        }
        cmd = cmd.arg(a);
    }
    cmd
}

fn shared_keys() -> Vec<&'static str> {
    COMMON_KEYS.iter().chain(GRID_KEYS).map(|(k, _)| *k).collect()
}

fn allowed(c: &Command) -> Vec<&'static str> {
    let mut v = shared_keys();
    v.extend(c.keys());
    v.sort();
    v.dedup();
    v
}

fn sweep_keys() -> Vec<&'static str> {
    let mut v = shared_keys();
    for c in COMMANDS {
        v.extend(c.keys());
    }
    v.sort();
    v.dedup();
    v
}

fn cli() -> clap::Command {
    let mut app = clap::Command::new("strichartz")
        .about("Verification runs for the Strichartz transform on the Heisenberg group")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for c in COMMANDS {
        app = app.subcommand(with_keys(clap::Command::new(c.name).about(c.about), &allowed(c)));
    }
    let sweep = with_keys(clap::Command::new("sweep").about(SWEEP_HELP), &sweep_keys()).arg(Arg::new("command").long("command").value_name("NAME").help("subcommand to sweep"));
    app.subcommand(sweep)
}

fn flags(m: &ArgMatches, keys: &[&str]) -> BTreeMap<String, String> {
    keys.iter().filter_map(|k| m.get_one::<String>(k).map(|v| (normalize(k), v.trim().to_string()))).collect()
}

fn timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Temp file in the target directory, then rename over the destination.
fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn checks_csv(rep: &VerificationReport) -> String {
    let mut s = String::from("name,value,bound,pass\n");
    for c in &rep.checks {
        s.push_str(&format!("\"{}\",{:.17e},{:.17e},{}\n", c.name.replace('"', "'"), c.value, c.bound, c.pass));
    }
    s
}

fn document(command: &str, header: &BTreeMap<String, String>, report: &VerificationReport) -> Value {
    let mut cfg = serde_json::Map::new();
    for (k, v) in header {
        if k != "out" {
            cfg.insert(k.clone(), Value::String(v.clone()));
        }
    }
    json!({
        "schema": SCHEMA,
        "command": command,
        "config": cfg,
        "pass": report.pass(),
        "report": report.to_json(),
        "timestamp": timestamp(),
    })
}

fn emit(out: &Path, command: &str, header: &BTreeMap<String, String>, outcome: &Outcome, csv: bool) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(out)?;
    let stem = command.replace('-', "_");
    let path = out.join(format!("{stem}.json"));
    let body = serde_json::to_string_pretty(&document(command, header, &outcome.report)).expect("report serialises");
    write_atomic(&path, &(body + "\n"))?;
    if csv {
        write_atomic(&out.join(format!("{stem}_checks.csv")), &checks_csv(&outcome.report))?;
        for (name, body) in &outcome.curves {
            write_atomic(&out.join(format!("{name}.csv")), body)?;
        }
    }
    Ok(path)
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// Every combination of the comma-separated values, in key order.
fn cartesian(base: &BTreeMap<String, String>) -> Vec<BTreeMap<String, String>> {
    let mut runs = vec![BTreeMap::new()];
    for (k, v) in base {
        let vals = split_list(v);
        let vals = if vals.is_empty() { vec![v.clone()] } else { vals };
        runs = runs
            .into_iter()
            .flat_map(|r| {
                vals.iter().map(move |x| {
                    let mut r = r.clone();
                    r.insert(k.clone(), x.clone());
                    r
                })
            })
            .collect();
    }
    runs
}

fn sweep(p: &Params) -> Result<(Outcome, BTreeMap<String, String>), RunError> {
    let name = p.raw().get("command").cloned().ok_or_else(|| ConfigError("sweep needs --command".into()))?;
    let target = commands::find(&name).ok_or_else(|| ConfigError(format!("unknown sweep command '{name}'")))?;
    let ok = allowed(target);
    let mut base = BTreeMap::new();
    for (k, v) in p.raw() {
        if k == "command" || k == "out" {
            continue;
        }
        if !ok.contains(&k.as_str()) {
            return Err(ConfigError(format!("key '{k}' does not apply to '{name}'")).into());
        }
        base.insert(k.clone(), v.clone());
    }
    let mut rep = VerificationReport::new("sweep");
    let varying: Vec<String> = base.iter().filter(|(_, v)| split_list(v).len() > 1).map(|(k, _)| k.clone()).collect();
    let mut summary = format!("run,{},pass\n", varying.join(","));
    let runs = cartesian(&base);
    let mut header = BTreeMap::new();
    header.insert("command".to_string(), name.clone());
    for (k, v) in &base {
        header.insert(k.clone(), v.clone());
    }
    for (i, run) in runs.iter().enumerate() {
        let sub = Params::new(run.clone(), None);
        let label = format!("run{i}");
        let pass = match target.run(&sub) {
            Ok(o) => {
                let pass = o.report.pass();
                let mut r = o.report;
                r.name = label.clone();
                rep.merge(r);
                pass
            }
            Err(RunError::Numerical(e)) => {
                rep.check(Check::flag(format!("{label}: finite result"), false).with_detail(e.to_string()));
                false
            }
            Err(e) => return Err(e),
        };
        rep.record(&format!("{label}/config"), sub.header());
        let vals: Vec<String> = varying.iter().map(|k| run[k].clone()).collect();
        summary.push_str(&format!("{i},{},{pass}\n", vals.join(",")));
    }
    rep.record("runs", runs.len());
    Ok((Outcome { report: rep, curves: vec![(format!("sweep_{}", name.replace('-', "_")), summary)] }, header))
}

fn run(m: &ArgMatches) -> Result<(String, Outcome, BTreeMap<String, String>, PathBuf, bool), RunError> {
    let (name, sub) = m.subcommand().expect("subcommand required");
    let config = sub.get_one::<String>("config").map(PathBuf::from);
    if name == "sweep" {
        let keys = sweep_keys();
        let mut fl = flags(sub, &keys);
        if let Some(c) = sub.get_one::<String>("command") {
            fl.insert("command".into(), c.clone());
        }
        let mut allowed_keys = keys.clone();
        allowed_keys.push("command");
        let p = Params::load(config.as_deref(), name, fl, &allowed_keys)?;
        let csv = p.format()? == "csv";
        let (outcome, header) = sweep(&p)?;
        return Ok((name.to_string(), outcome, header, p.out_dir(), csv));
    }
    let cmd = commands::find(name).expect("registered subcommand");
    let keys = allowed(cmd);
    let p = Params::load(config.as_deref(), name, flags(sub, &keys), &keys)?;
    let csv = p.format()? == "csv";
    let outcome = cmd.run(&p)?;
    Ok((name.to_string(), outcome, p.header(), p.out_dir(), csv))
}

fn main() -> ExitCode {
    let m = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&m) {
        Err(RunError::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(RunError::Numerical(e)) => {
            eprintln!("FAIL: {e}");
            ExitCode::from(1)
        }
        Ok((name, outcome, header, out, csv)) => {
            let path = match emit(&out, &name, &header, &outcome, csv) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("config error: cannot write to {}: {e}", out.display());
                    return ExitCode::from(2);
                }
            };
            if outcome.report.pass() {
                println!("PASS {name} -> {}", path.display());
                ExitCode::SUCCESS
            } else {
                for c in outcome.report.failures() {
                    eprintln!("FAIL {name}: {} (value {:e}, bound {:e}){}", c.name, c.value, c.bound, c.detail.as_ref().map(|d| format!(" [{d}]")).unwrap_or_default());
                }
                println!("FAIL {name} -> {}", path.display());
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartesian_expands_lists() {
        let mut base = BTreeMap::new();
        base.insert("alpha".to_string(), "0.5, 1".to_string());
        base.insert("rho".to_string(), "1,2,3".to_string());
        base.insert("n".to_string(), "1".to_string());
        let runs = cartesian(&base);
        assert_eq!(runs.len(), 6);
        assert_eq!(runs[0]["alpha"], "0.5");
        assert_eq!(runs[5]["rho"], "3");
    }

    #[test]
    fn cli_is_well_formed() {
        cli().debug_assert();
    }
}
