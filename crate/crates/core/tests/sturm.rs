use std::sync::Arc;

use blowuplab_core::continuation::{continue_past_blowup, ContinuationOptions, LimitSnapshot};
use blowuplab_core::evolution::{EvolutionState, Nonlinearity, RunOutcome, StepControls};
use blowuplab_core::grid::{Grading, RadialField, RadialGrid};
use blowuplab_core::profiles::steady_exact_n2;
use blowuplab_core::sturm::{
    count_blowup_events_vs_bound, interior_zero_number, intersections_with,
    monotone_near_origin_check, strict_sign_changes, zero_number,
    zero_number_monotonicity_harness, HarnessConfig, MonotoneOriginOutcome, Reference,
    ZeroPolicy,
};

#[test]
fn sign_change_counting_skips_exact_zeros() {
    assert_eq!(strict_sign_changes(&[1.0, -1.0, 1.0]), 2);
    assert_eq!(strict_sign_changes(&[1.0, 0.0, 1.0]), 0);
    assert_eq!(strict_sign_changes(&[1.0, 0.0, -2.0, 0.0, -3.0]), 1);
    assert_eq!(strict_sign_changes(&[0.0, 0.0]), 0);

    let count = zero_number(&[2.0, 0.0, -1.0, 3.0], ZeroPolicy::SkipExactZeros).unwrap();
    assert_eq!(count.count, 2);
    assert_eq!(count.crossing_locations, vec![(0, 2), (2, 3)]);
    assert!(!count.degenerate);

    let flat = zero_number(&[0.0, 0.0, 0.0], ZeroPolicy::SkipExactZeros).unwrap();
    assert_eq!(flat.count, 0);
    assert!(flat.degenerate);

    assert!(zero_number(&[1.0], ZeroPolicy::SkipExactZeros).is_err());
}

#[test]
fn oscillatory_field_counts_its_known_zeros() {
    // cos(5r) on [0, 3] crosses zero at (2k+1)π/10 for k = 0..4: five times.
    let grid = Arc::new(RadialGrid::build(3, 3.0, 256, Grading::Uniform).unwrap());
    let field = RadialField::from_fn(&grid, |r| (5.0 * r).cos()).unwrap();
    let count = interior_zero_number(&field).unwrap();
    assert_eq!(count.count, 5);
    assert!(!count.degenerate);
}

#[test]
fn linear_flow_harness_never_sees_the_zero_number_grow() {
    let report = zero_number_monotonicity_harness(7, 100, &HarnessConfig::default()).unwrap();
    assert_eq!(report.trials, 100);
    assert_eq!(report.transitions_checked, 5000);
    assert!(
        report.violations.is_empty(),
        "monotonicity violations: {:?}",
        report.violations
    );
    assert!(report.max_initial_count >= 1, "trials should start with crossings");
}

#[test]
fn harness_is_deterministic_per_seed() {
    let config = HarnessConfig {
        nodes: 64,
        output_times: 10,
        ..HarnessConfig::default()
    };
    let a = zero_number_monotonicity_harness(11, 20, &config).unwrap();
    let b = zero_number_monotonicity_harness(11, 20, &config).unwrap();
    assert_eq!(a.max_initial_count, b.max_initial_count);
    assert_eq!(a.violations.len(), b.violations.len());
    assert!(zero_number_monotonicity_harness(11, 20, &HarnessConfig {
        nodes: 8,
        ..HarnessConfig::default()
    })
    .is_err());
}

#[test]
fn distinct_steady_states_intersect() {
    // ψ_a - ψ_b changes sign once: a - b near the origin, b - a in the far
    // field. Every scaled pair must report at least one crossing.
    let grid = Arc::new(RadialGrid::build(2, 4.0, 512, Grading::Uniform).unwrap());
    for (a, b) in [(0.0, 1.0), (0.0, 2.0), (1.0, 2.0), (-1.0, 1.0), (0.5, 1.5)] {
        let field =
            RadialField::from_fn(&grid, |r| a + steady_exact_n2((0.5f64 * a).exp() * r))
                .unwrap();
        let reference = Reference::ScaledSteady { a: b, dimension: 2 };
        let count = intersections_with(&field, &reference, (0.01, 4.0)).unwrap();
        assert_eq!(count.count, 1, "ψ_{a} vs ψ_{b} reported {}", count.count);
    }
}

#[test]
fn intersection_windows_are_validated() {
    let grid = Arc::new(RadialGrid::build(3, 1.0, 64, Grading::Uniform).unwrap());
    let field = RadialField::constant(&grid, 0.0).unwrap();
    let omega = Reference::OmegaC { c: 1.0 };
    assert!(intersections_with(&field, &omega, (0.1, 1.5)).is_err());
    assert!(intersections_with(&field, &omega, (0.1, 0.9)).is_ok());
    assert!(intersections_with(&field, &omega, (-0.1, 0.5)).is_err());
    let steady = Reference::ScaledSteady { a: 0.0, dimension: 3 };
    assert!(intersections_with(&field, &steady, (0.1, 0.9)).is_err());
}

#[test]
fn blowup_events_stay_under_the_intersection_bound() {
    // Bump data crosses Φ* twice (below near 0, above in the middle, below
    // again at the edge), so at most 2 blow-up events are admissible; the
    // run produces exactly one.
    let grid = Arc::new(RadialGrid::build(3, 1.0, 128, Grading::Uniform).unwrap());
    let u0 = RadialField::from_fn(&grid, |r| 7.0 * (1.0 - r * r)).unwrap();
    let mut state = EvolutionState::new(u0.clone(), Nonlinearity::Exponential);
    let RunOutcome::Blowup(estimate) = state
        .run_until_blowup(&StepControls::default(), 5.0)
        .unwrap()
    else {
        panic!("bump run must blow up");
    };
    let t_blowup = estimate.t_estimate;
    let outputs = vec![0.5 * t_blowup, t_blowup, 1.5 * t_blowup];
    let opts = ContinuationOptions::new(StepControls::default(), outputs);
    let continuation =
        continue_past_blowup(&u0, &[1e4, 1e5], 1.5 * t_blowup, &opts).unwrap();

    let report = count_blowup_events_vs_bound(&continuation, &u0).unwrap();
    assert_eq!(report.m0, 2);
    assert!(!report.m0_degenerate);
    assert_eq!(report.events, 1);
    assert!((report.bound - 2.0).abs() < 1e-15);
    assert!(report.pass);
}

#[test]
fn event_bound_requires_a_singular_profile() {
    let grid = Arc::new(RadialGrid::build(2, 1.0, 64, Grading::Uniform).unwrap());
    let u0 = RadialField::constant(&grid, 1.0).unwrap();
    let opts = ContinuationOptions::new(StepControls::default(), vec![1e-4]);
    let continuation = continue_past_blowup(&u0, &[1e3, 1e4], 1e-4, &opts).unwrap();
    assert!(count_blowup_events_vs_bound(&continuation, &u0).is_err());
}

#[test]
fn monotone_origin_check_reads_singular_windows() {
    let nodes = [0.0, 0.1, 0.2, 0.3, 0.4];
    let singular_snapshot = LimitSnapshot {
        t: 0.01,
        values: vec![5.0, 4.0, 3.0, 3.0, 2.0],
        singular: vec![true, false, false, false, false],
    };
    let outcome = monotone_near_origin_check(&[singular_snapshot], &nodes).unwrap();
    let MonotoneOriginOutcome::Applicable { delta } = outcome else {
        panic!("singular snapshot must be applicable");
    };
    assert!((delta - 0.2).abs() < 1e-15);

    let regular_snapshot = LimitSnapshot {
        t: 0.01,
        values: vec![1.0, 2.0, 1.0, 0.5, 0.0],
        singular: vec![false; 5],
    };
    let outcome = monotone_near_origin_check(&[regular_snapshot], &nodes).unwrap();
    assert_eq!(outcome, MonotoneOriginOutcome::NotApplicable);

    assert!(monotone_near_origin_check(&[], &nodes[..2]).is_err());
}
