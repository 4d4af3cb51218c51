//! Acceptance suite: one test per laboratory-level guarantee, each driving
//! the preset that covers it and printing a single pass/fail line.
//!
//! Run `cargo test --test acceptance -- --nocapture` to see the lines.

use blowuplab_cli::manifest::{Check, CheckStatus};
use blowuplab_cli::presets;
use blowuplab_cli::run::{unix_now, RunWriter};

fn run_preset(name: &str) -> Vec<Check> {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path().join(name);
    let started = unix_now();
    let mut writer = RunWriter::create(dir.clone(), false).expect("run directory");
    let (cfg, checks) = presets::run(name, 7, &mut writer).expect("preset completes");
    let manifest = writer
        .finish(&format!("preset-{name}"), &cfg, checks.clone(), started)
        .expect("manifest written");

    let mut on_disk: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    on_disk.sort();
    let mut listed = manifest.files;
    listed.sort();
    assert_eq!(on_disk, listed, "manifest does not match {name} run directory");
    checks
}

/// The named check must exist and be a gate, not a recorded value.
fn gate<'a>(checks: &'a [Check], name: &str) -> &'a Check {
    let check = checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("missing check `{name}`"));
    assert!(check.status != CheckStatus::Value, "`{name}` is not a gate");
    check
}

fn num(checks: &[Check], name: &str) -> f64 {
    let check = checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("missing value `{name}`"));
    check
        .value
        .parse()
        .unwrap_or_else(|_| panic!("`{name}` is not numeric: {}", check.value))
}

fn conclude(criterion: &str, checks: &[Check], required_gates: &[&str]) {
    for name in required_gates {
        gate(checks, name);
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        println!("{criterion}: PASS");
    } else {
        println!("{criterion}: FAIL ({})", failed.join(", "));
        panic!("{criterion} failed gates: {}", failed.join(", "));
    }
}

#[test]
fn criterion_01_ode_mode_recovers_exact_blowup_times() {
    let checks = run_preset("ode-oracle");
    for label in ["a0", "a1", "am1"] {
        let ms = num(&checks, &format!("runtime_ms_{label}"));
        assert!(ms < 1000.0, "constant-data run {label} took {ms} ms, budget 1000");
    }
    conclude(
        "criterion 1 (ode-oracle)",
        &checks,
        &["t_error_a0", "t_error_a1", "t_error_am1"],
    );
}

#[test]
fn criterion_02_steady_closed_forms_and_singular_residual_order() {
    let checks = run_preset("steady-closed-forms");
    conclude(
        "criterion 2 (steady-closed-forms)",
        &checks,
        &[
            "steady_n1_max_dev",
            "steady_n2_max_dev",
            "singular_residual_rate_backward_1",
            "singular_residual_rate_backward_2",
            "singular_residual_rate_forward_1",
            "singular_residual_rate_forward_2",
            "singular_residual_rate_steady_1",
            "singular_residual_rate_steady_2",
        ],
    );
}

#[test]
fn criterion_03_laplacian_is_second_order_on_both_gradings() {
    let checks = run_preset("laplacian-order");
    let ms = num(&checks, "runtime_ms");
    assert!(ms < 5000.0, "refinement study took {ms} ms, budget 5000");
    conclude(
        "criterion 3 (laplacian-order)",
        &checks,
        &[
            "rate_uniform_1",
            "rate_uniform_2",
            "rate_uniform_3",
            "rate_geometric_1",
            "rate_geometric_2",
            "rate_geometric_3",
        ],
    );
}

#[test]
fn criterion_04_generic_blowups_classify_type_one() {
    let checks = run_preset("type-one-rates");
    for label in ["n3", "n2"] {
        let ms = num(&checks, &format!("runtime_ms_{label}"));
        assert!(ms < 60_000.0, "blow-up run {label} took {ms} ms, budget 60000");
    }
    conclude(
        "criterion 4 (type-one-rates)",
        &checks,
        &[
            "classification_n3",
            "band_width_n3",
            "classification_n2",
            "band_width_n2",
            "synthetic_type_two",
        ],
    );
}

#[test]
fn criterion_05_backward_frame_settles_near_the_origin() {
    let checks = run_preset("backward-convergence");
    conclude("criterion 5 (backward-convergence)", &checks, &["drift_per_unit_s"]);
}

#[test]
fn criterion_06_final_profile_discriminates_log_models() {
    let checks = run_preset("final-profile");
    conclude(
        "criterion 6 (final-profile)",
        &checks,
        &[
            "purelog_wins_at_final_time",
            "purelog_constant_stable",
            "loglog_wins_for_vanishing_frame",
        ],
    );
}

#[test]
fn criterion_07_continuation_regularizes_below_threshold_only() {
    let checks = run_preset("regularization");
    conclude(
        "criterion 7 (regularization)",
        &checks,
        &[
            "below_threshold_regularizes",
            "forward_frame_matches_shot",
            "above_threshold_complete",
        ],
    );
}

#[test]
fn criterion_08_threshold_bracket_sits_above_log_two() {
    let checks = run_preset("csharp-threshold");
    conclude(
        "criterion 8 (csharp-threshold)",
        &checks,
        &["c_lo_above_log2", "bracket_stable_under_rho_doubling"],
    );
}

#[test]
fn criterion_09_zero_numbers_never_increase() {
    let checks = run_preset("sturm-suite");
    conclude(
        "criterion 9 (sturm-suite)",
        &checks,
        &[
            "harness_violations",
            "event_bound_bump",
            "event_bound_capped_below",
            "event_bound_capped_above",
            "steady_pairs_intersect_once",
        ],
    );
}

#[test]
fn criterion_10_truncated_runs_stay_ordered() {
    let checks = run_preset("comparison-monotonicity");
    conclude(
        "criterion 10 (comparison-monotonicity)",
        &checks,
        &["ordering_bump", "ordering_capped_below", "ordering_capped_above"],
    );
}
