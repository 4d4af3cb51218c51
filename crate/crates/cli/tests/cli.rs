//! End-to-end runs of the `blowuplab` binary: exit codes, run artifacts,
//! the manifest contract, and bit-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

use blowuplab_cli::presets::PRESET_NAMES;

fn blowuplab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowuplab"))
        .args(args)
        .current_dir(dir)
        .env_remove("BLOWUPLAB_OUT")
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn dir_entries(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

fn manifest_files(manifest: &str) -> Vec<String> {
    let mut names: Vec<String> = manifest
        .lines()
        .filter_map(|l| l.strip_prefix("file,"))
        .map(|rest| rest.trim_end_matches(',').to_string())
        .collect();
    names.sort();
    names
}

#[test]
fn bad_value_exits_two_and_names_key_and_line() {
    let tmp = tempfile::tempdir().unwrap();
    write(&tmp.path().join("lab.cfg"), "dimension = 2.5\n");
    let out = blowuplab(&["simulate", "--config", "lab.cfg", "--out", "runs"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("dimension") && err.contains("line 1"), "{err}");
    assert!(!tmp.path().join("runs").join("simulate").exists());
}

#[test]
fn unknown_key_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    write(&tmp.path().join("lab.cfg"), "radius = 1\nbogus_key = 3\n");
    let out = blowuplab(&["zeros", "--config", "lab.cfg"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("unknown key `bogus_key`") && err.contains("line 2"), "{err}");
}

#[test]
fn missing_config_file_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blowuplab(&["zeros", "--config", "absent.cfg"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_two_and_leaves_no_run_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blowuplab(&["preset", "no-such", "--out", "runs"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown preset"), "{}", stderr(&out));
    assert!(!tmp.path().join("runs").join("preset-no-such").exists());
}

#[test]
fn preset_list_prints_every_name_without_a_run_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blowuplab(&["preset", "list"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let listed: Vec<&str> = text.lines().map(str::trim).collect();
    for name in PRESET_NAMES {
        assert!(listed.contains(&name), "missing `{name}` in {listed:?}");
    }
    assert!(dir_entries(tmp.path()).is_empty());
}

#[test]
fn run_writes_manifest_matching_directory_contents() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blowuplab(&["zeros", "--out", "runs", "--emit-gnuplot"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let run = tmp.path().join("runs").join("zeros");
    let files = manifest_files(&read(&run.join("manifest.csv")));
    assert_eq!(dir_entries(&run), files);
    for name in ["zeros.csv", "crossings.csv", "config.txt", "run.log", "manifest.csv", "plot.gp"] {
        assert!(files.contains(&name.to_string()), "manifest misses {name}: {files:?}");
    }

    // Check outcomes echo to stdout, one line each.
    assert!(stdout(&out).contains("zeros: zero_number value"), "{}", stdout(&out));

    // The stored config is the canonical dump: floats carry 17 significant
    // digits so reparsing reproduces the value bit for bit.
    let config = read(&run.join("config.txt"));
    assert!(config.contains("radius = 1.0000000000000000e0"), "{config}");
}

#[test]
fn identical_config_and_seed_reproduce_output_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    write(&tmp.path().join("lab.cfg"), "horizon = 0.002\n");
    let args = |out: &'static str| ["classify", "--config", "lab.cfg", "--out", out];
    let first = blowuplab(&args("a"), tmp.path());
    let second = blowuplab(&args("b"), tmp.path());
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    assert_eq!(second.status.code(), Some(0), "stderr: {}", stderr(&second));

    let run_a = tmp.path().join("a").join("classify");
    let run_b = tmp.path().join("b").join("classify");
    assert_eq!(dir_entries(&run_a), dir_entries(&run_b));
    for name in dir_entries(&run_a) {
        if name == "run.log" {
            continue; // wall-clock timestamps live here by design
        }
        let bytes_a = std::fs::read(run_a.join(&name)).unwrap();
        let bytes_b = std::fs::read(run_b.join(&name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{name} differs between identical reruns");
    }
}

#[test]
fn out_env_var_is_the_default_out_root() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_blowuplab"))
        .arg("zeros")
        .current_dir(tmp.path())
        .env("BLOWUPLAB_OUT", tmp.path().join("envruns"))
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(tmp.path().join("envruns").join("zeros").join("manifest.csv").exists());
    assert!(!tmp.path().join("runs").exists());
}

#[test]
fn seed_flag_overrides_config_seed() {
    let tmp = tempfile::tempdir().unwrap();
    write(&tmp.path().join("lab.cfg"), "trials = 5\nseed = 3\n");
    let out = blowuplab(
        &["harness-sturm", "--config", "lab.cfg", "--seed", "12345", "--out", "runs"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let manifest = read(&tmp.path().join("runs").join("harness-sturm").join("manifest.csv"));
    assert!(manifest.contains("meta,seed,,12345"), "{manifest}");
    assert!(manifest.contains("check,no_violations,pass"), "{manifest}");
}

#[test]
fn failed_gate_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    // Final-time profile of capped-singular data is pure-log; expecting
    // loglog must fail the gate, expecting purelog must pass it.
    let base = "nodes = 300\ngrading_ratio = 50\ninitial = capped-singular:0.5\n\
                initial_cap = 13.815510557964274\nhorizon = 0.02\n\
                output_times = 0.001,0.006,0.02\n";
    write(&tmp.path().join("pure.cfg"), &format!("{base}fit_expect = purelog\n"));
    write(&tmp.path().join("loglog.cfg"), &format!("{base}fit_expect = loglog\n"));

    let pass = blowuplab(&["profile-fit", "--config", "pure.cfg", "--out", "a"], tmp.path());
    assert_eq!(pass.status.code(), Some(0), "stderr: {}", stderr(&pass));
    assert!(stdout(&pass).contains("expected_model_wins pass"), "{}", stdout(&pass));

    let fail = blowuplab(&["profile-fit", "--config", "loglog.cfg", "--out", "b"], tmp.path());
    assert_eq!(fail.status.code(), Some(1), "stderr: {}", stderr(&fail));
    assert!(stdout(&fail).contains("expected_model_wins fail"), "{}", stdout(&fail));
    // A failed gate is still a completed run: artifacts and manifest exist.
    assert!(tmp.path().join("b").join("profile-fit").join("manifest.csv").exists());
}

#[test]
fn help_shows_config_key_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = blowuplab(&["--help"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Config keys"), "{text}");
    assert!(text.contains("truncation_levels"), "{text}");
}
