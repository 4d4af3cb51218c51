//! Config text behavior: defaults, overrides, rejection messages, and the
//! canonical dump the run hash is computed from.

use blowuplab_cli::config::{keys_help, FitExpect, InitialData, LabConfig, ZeroReference};
use blowuplab_core::profiles::FamilyKind;

#[test]
fn empty_text_is_the_default_config() {
    assert_eq!(LabConfig::parse("").unwrap(), LabConfig::default());
}

#[test]
fn comments_and_blank_lines_are_skipped() {
    let cfg = LabConfig::parse("# full-line comment\n\n  dimension = 2  # trailing\n").unwrap();
    assert_eq!(cfg.dimension, 2);
    assert_eq!(cfg.radius, LabConfig::default().radius);
}

#[test]
fn partial_override_keeps_remaining_defaults() {
    let cfg = LabConfig::parse("nodes = 64\nhorizon = 0.5\n").unwrap();
    assert_eq!(cfg.nodes, 64);
    assert_eq!(cfg.horizon, 0.5);
    assert_eq!(cfg.seed, LabConfig::default().seed);
    assert_eq!(cfg.initial, InitialData::Bump(7.0));
}

#[test]
fn labeled_values_parse() {
    let text = "initial = capped-singular:0.5\nfamily = steady\nfit_expect = loglog\n\
                reference = scaled-steady:1.5\ntruncation_levels = 1e2, 1e3\noutput_times = \n";
    let cfg = LabConfig::parse(text).unwrap();
    assert_eq!(cfg.initial, InitialData::CappedSingular(0.5));
    assert_eq!(cfg.family, FamilyKind::Steady);
    assert_eq!(cfg.fit_expect, FitExpect::LogLog);
    assert_eq!(cfg.reference, ZeroReference::ScaledSteady { a: 1.5 });
    assert_eq!(cfg.truncation_levels, vec![100.0, 1000.0]);
    assert!(cfg.output_times.is_empty());
}

#[test]
fn fractional_dimension_names_key_and_line() {
    let err = LabConfig::parse("dimension = 2.5").unwrap_err().to_string();
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains("dimension"), "{err}");
    assert!(err.contains("2.5"), "{err}");
}

#[test]
fn unknown_key_names_key_and_line() {
    let err = LabConfig::parse("radius = 1\nbogus_key = 3\n").unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("unknown key `bogus_key`"), "{err}");
}

#[test]
fn line_without_equals_is_rejected() {
    let err = LabConfig::parse("just words\n").unwrap_err().to_string();
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains("key = value"), "{err}");
}

#[test]
fn bad_values_name_the_expected_shape() {
    for (text, want) in [
        ("radius = fast", "a number"),
        ("dimension = -3", "a positive integer"),
        ("disable_diffusion = yes", "true or false"),
        ("alphas = 1;2", "comma-separated numbers"),
        ("family = sideways", "backward, forward, or steady"),
        ("initial = spike:3", "constant:<a>, bump:<a>, or capped-singular:<c>"),
        ("fit_expect = maybe", "none, purelog, or loglog"),
        ("reference = mirror", "scaled-steady:<a>"),
    ] {
        let err = LabConfig::parse(text).unwrap_err().to_string();
        assert!(err.contains(want), "`{text}` -> {err}");
    }
}

#[test]
fn canonical_dump_reparses_to_the_same_config() {
    let cfg = LabConfig {
        dimension: 2,
        grading_ratio: 50.0,
        initial: InitialData::CappedSingular(0.5),
        fit_expect: FitExpect::PureLog,
        reference: ZeroReference::ScaledSteady { a: -1.0 },
        output_times: vec![1e-3, 6e-3, 2e-2],
        alphas: Vec::new(),
        ..LabConfig::default()
    };
    assert_eq!(LabConfig::parse(&cfg.canonical()).unwrap(), cfg);
}

#[test]
fn hash_depends_on_values_not_formatting() {
    let a = LabConfig::parse("dimension = 2\nradius = 2.0\n").unwrap();
    let b = LabConfig::parse("# layout differs\nradius   = 2 \n\ndimension=2\n").unwrap();
    assert_eq!(a.hash(), b.hash());
    let c = LabConfig::parse("dimension = 2\nradius = 2.5\n").unwrap();
    assert_ne!(a.hash(), c.hash());
}

#[test]
fn help_table_names_every_key() {
    let help = keys_help();
    for line in LabConfig::default().canonical().lines() {
        let key = line.split('=').next().unwrap().trim();
        assert!(help.contains(key), "help table missing `{key}`");
    }
}
