use std::sync::Arc;

use blowuplab_core::evolution::{EvolutionState, Nonlinearity, RunOutcome, Sample, StepControls};
use blowuplab_core::grid::{Grading, RadialField, RadialGrid};
use blowuplab_core::profiles::steady_exact_n2;
use blowuplab_core::similarity::{
    check_regularization_rate, classify_rate, default_fit_window, fit_field_final_profile,
    fit_final_profile, max_frame_deviation, origin_drift, to_backward, to_forward, to_intrinsic,
    FrameKind, ProfileModel, RateClass, RegularizationOutcome, SimilarityFrame,
};
use blowuplab_core::continuation::LimitSnapshot;

#[test]
fn backward_frame_applies_the_rescaling_identity() {
    // Linear data keeps the interpolation exact: w(y) = log δ + u(y√δ).
    let grid = Arc::new(RadialGrid::build(3, 1.0, 256, Grading::Uniform).unwrap());
    let field = RadialField::from_fn(&grid, |r| 3.0 - r).unwrap();
    let t_blowup = 0.01;
    let t = 0.0075;
    let delta: f64 = t_blowup - t;
    let frame = to_backward(&field, t, t_blowup, 2.0, 41).unwrap();

    assert_eq!(frame.kind, FrameKind::Backward);
    assert_eq!(frame.anchor, t_blowup);
    assert!((frame.s_or_tau + delta.ln()).abs() < 1e-14);
    assert_eq!(frame.y_nodes.len(), 41);
    for (&y, &w) in frame.y_nodes.iter().zip(&frame.w_values) {
        let expect = delta.ln() + 3.0 - y * delta.sqrt();
        assert!((w - expect).abs() < 1e-10, "y={y}: {w} vs {expect}");
    }

    let radii = frame.unscaled_radii().unwrap();
    let values = frame.unscaled_values().unwrap();
    for ((&y, &r), &u) in frame.y_nodes.iter().zip(&radii).zip(&values) {
        assert!((r - y * delta.sqrt()).abs() < 1e-15);
        assert!((u - (3.0 - r)).abs() < 1e-10);
    }
}

#[test]
fn forward_frame_mirrors_the_backward_one_past_blowup() {
    let grid = Arc::new(RadialGrid::build(3, 1.0, 256, Grading::Uniform).unwrap());
    let field = RadialField::from_fn(&grid, |r| 1.0 - 2.0 * r).unwrap();
    let t_blowup = 0.01;
    let t = 0.014;
    let delta: f64 = t - t_blowup;
    let frame = to_forward(&field, t, t_blowup, 2.0, 33).unwrap();
    assert_eq!(frame.kind, FrameKind::Forward);
    for (&y, &w) in frame.y_nodes.iter().zip(&frame.w_values) {
        let expect = delta.ln() + 1.0 - 2.0 * y * delta.sqrt();
        assert!((w - expect).abs() < 1e-10);
    }
}

#[test]
fn frames_reject_times_on_the_wrong_side_of_blowup() {
    let grid = Arc::new(RadialGrid::build(3, 1.0, 64, Grading::Uniform).unwrap());
    let field = RadialField::constant(&grid, 1.0).unwrap();
    assert!(to_backward(&field, 0.02, 0.01, 1.0, 11).is_err());
    assert!(to_forward(&field, 0.005, 0.01, 1.0, 11).is_err());
}

#[test]
fn intrinsic_frame_recovers_the_steady_profile_it_was_built_from() {
    // u(r) = a + ψ(e^{a/2} r) rescales back to w(ρ) = ψ(ρ) exactly.
    let a = 4.0f64;
    let grid = Arc::new(RadialGrid::build(2, 1.0, 512, Grading::Uniform).unwrap());
    let field = RadialField::from_fn(&grid, |r| a + steady_exact_n2((0.5 * a).exp() * r)).unwrap();
    let frame = to_intrinsic(&field, 0.3, 4.0, 81).unwrap();
    assert_eq!(frame.anchor, 0.3);
    assert_eq!(frame.s_or_tau, 0.0);
    for (&rho, &w) in frame.y_nodes.iter().zip(&frame.w_values) {
        let expect = steady_exact_n2(rho);
        assert!((w - expect).abs() < 1e-5, "rho={rho}: {w} vs {expect}");
    }
}

#[test]
fn intrinsic_frame_requires_the_peak_at_the_origin_and_room_to_unscale() {
    let grid = Arc::new(RadialGrid::build(2, 1.0, 64, Grading::Uniform).unwrap());
    let off_center = RadialField::from_fn(&grid, |r| -(r - 0.5) * (r - 0.5)).unwrap();
    assert!(to_intrinsic(&off_center, 0.1, 1.0, 11).is_err());
    let flat = RadialField::constant(&grid, 0.0).unwrap();
    assert!(to_intrinsic(&flat, 0.1, 2.0, 11).is_err());
    let frame = to_intrinsic(&flat, 0.1, 1.0, 11).unwrap();
    assert!(frame.w_values.iter().all(|&w| w.abs() < 1e-14));
}

#[test]
fn intrinsic_frames_of_a_planar_run_never_approach_the_steady_state() {
    // The N=2 type I run flattens in the intrinsic scale: fixed ρ unscales
    // to r → 0 where the solution is flat near its peak, so w_i hugs 0 and
    // stays far from the steady profile with the same center value. No
    // subsequence converges to a steady state.
    let grid =
        Arc::new(RadialGrid::build(2, 1.0, 400, Grading::Geometric { ratio: 10.0 }).unwrap());
    let u0 = RadialField::from_fn(&grid, |r| 8.0 * (1.0 - r * r)).unwrap();
    let mut state = EvolutionState::new(u0, Nonlinearity::Exponential).with_snapshot_du(0.5);
    state
        .run_until_blowup(&StepControls::default(), 5.0)
        .unwrap();

    let psi0_at_4 = steady_exact_n2(4.0);
    let mut frames = 0usize;
    for snapshot in state.snapshots() {
        if snapshot.field.values()[0] < 16.0 {
            continue;
        }
        let Ok(frame) = to_intrinsic(&snapshot.field, snapshot.t, 4.0, 81) else {
            continue;
        };
        let w4 = frame.w_values[80];
        assert!(
            (w4 - psi0_at_4).abs() >= 1.5,
            "frame at peak {} sits near the steady profile: w(4)={w4} vs {psi0_at_4}",
            snapshot.field.values()[0]
        );
        assert!(w4.abs() < 0.5, "the frame should flatten toward 0, got {w4}");
        frames += 1;
    }
    assert!(frames >= 5, "only {frames} intrinsic frames were usable");
}

fn constant_frame(s: f64, c: f64) -> SimilarityFrame {
    SimilarityFrame {
        kind: FrameKind::Backward,
        anchor: 1.0,
        s_or_tau: s,
        y_nodes: vec![0.0, 1.0, 2.0],
        w_values: vec![c; 3],
    }
}

#[test]
fn frame_diagnostics_measure_drift_and_deviation() {
    let frames: Vec<SimilarityFrame> = [0.0, 0.0, 1.0, 1.0, 2.0]
        .iter()
        .enumerate()
        .map(|(k, &c)| constant_frame(k as f64, c))
        .collect();
    // Last half of s ∈ [0, 4] starts at s = 2: secant (2 - 1)/(4 - 2).
    assert!((origin_drift(&frames).unwrap() - 0.5).abs() < 1e-14);
    assert!((max_frame_deviation(&frames).unwrap() - 1.0).abs() < 1e-14);
    assert!(origin_drift(&frames[..1]).is_err());
}

fn synthetic_history(t_blowup: f64, g: impl Fn(f64) -> f64) -> Vec<Sample> {
    // Samples uniform in s = -log(T - t), so every e-folding is covered.
    (0..400)
        .map(|i| {
            let s = 0.5 + 29.5 * i as f64 / 399.0;
            let t = t_blowup - (-s).exp();
            Sample {
                t,
                max_u: -(t_blowup - t).ln() + g(s),
                dt: 1e-4,
            }
        })
        .collect()
}

#[test]
fn rate_classifier_separates_type_one_from_type_two() {
    let t_blowup = 1.0;
    let type_one = synthetic_history(t_blowup, |s| 0.1 * (3.0 * s).sin());
    let report = classify_rate(&type_one, t_blowup);
    assert_eq!(report.classification, RateClass::TypeI);
    assert!(report.band.1 - report.band.0 <= 0.25);

    // g(s) = s: log(T-t) + max u climbs one unit per e-folding, the
    // hallmark of a faster-than-ODE rate.
    let type_two = synthetic_history(t_blowup, |s| s);
    let report = classify_rate(&type_two, t_blowup);
    assert_eq!(report.classification, RateClass::TypeII);

    let short = &type_one[..10];
    assert_eq!(
        classify_rate(short, t_blowup).classification,
        RateClass::Undetermined
    );
}

#[test]
fn planar_bump_run_blows_up_at_the_ode_rate() {
    let grid = Arc::new(RadialGrid::build(2, 1.0, 200, Grading::Uniform).unwrap());
    let u0 = RadialField::from_fn(&grid, |r| 8.0 * (1.0 - r * r)).unwrap();
    let mut state = EvolutionState::new(u0, Nonlinearity::Exponential);
    let RunOutcome::Blowup(estimate) = state
        .run_until_blowup(&StepControls::default(), 5.0)
        .unwrap()
    else {
        panic!("bump run must blow up");
    };
    let report = classify_rate(state.history(), estimate.t_estimate);
    assert_eq!(report.classification, RateClass::TypeI);
    assert!(report.band.1 - report.band.0 <= 1.0);
}

#[test]
fn profile_fits_recover_their_own_models() {
    let rs: Vec<f64> = (0..120).map(|i| 0.01 + 0.39 * i as f64 / 119.0).collect();
    let window = (0.005, 0.5);

    let pure: Vec<f64> = rs.iter().map(|&r| -2.0 * r.ln() + 3.0).collect();
    let fit = fit_final_profile(&rs, &pure, window, ProfileModel::PureLog).unwrap();
    assert!((fit.constant - 3.0).abs() < 1e-12);
    assert!(fit.residual < 1e-12);
    let cross = fit_final_profile(&rs, &pure, window, ProfileModel::LogLog).unwrap();
    assert!(cross.residual > 0.1, "wrong model must not fit: {}", cross.residual);

    let loglog: Vec<f64> = rs
        .iter()
        .map(|&r| -2.0 * r.ln() + r.ln().abs().ln() + 1.0)
        .collect();
    let fit = fit_final_profile(&rs, &loglog, window, ProfileModel::LogLog).unwrap();
    assert!((fit.constant - 1.0).abs() < 1e-12);
    assert!(fit.residual < 1e-12);
    let cross = fit_final_profile(&rs, &loglog, window, ProfileModel::PureLog).unwrap();
    assert!(cross.residual > 0.1);
}

#[test]
fn profile_fit_needs_usable_nodes() {
    let rs = [0.6, 0.7, 0.8];
    let us = [1.0, 1.0, 1.0];
    assert!(fit_final_profile(&rs, &us, (0.01, 0.5), ProfileModel::PureLog).is_err());
}

#[test]
fn field_fit_uses_the_default_window() {
    let grid = Arc::new(RadialGrid::build(3, 1.0, 256, Grading::Uniform).unwrap());
    let window = default_fit_window(&grid);
    assert!((window.0 - 3.0 * grid.origin_spacing()).abs() < 1e-15);
    assert_eq!(window.1, 0.5);

    let field =
        RadialField::from_fn(&grid, |r| if r > 0.0 { -2.0 * r.ln() + 1.0 } else { 30.0 })
            .unwrap();
    let fit = fit_field_final_profile(&field, ProfileModel::PureLog).unwrap();
    assert!((fit.constant - 1.0).abs() < 1e-10);
    assert!(fit.fit_window.0 >= window.0 - 1e-15);
    assert!(fit.fit_window.1 <= window.1 + 1e-15);
}

#[test]
fn regularization_check_reads_the_post_blowup_band() {
    let t_blowup = 0.01;
    let still_singular = LimitSnapshot {
        t: 0.012,
        values: vec![0.0; 4],
        singular: vec![false, true, false, false],
    };
    let recovered = LimitSnapshot {
        t: 0.02,
        values: vec![3.0, 2.0, 1.0, 0.0],
        singular: vec![false; 4],
    };
    let later = LimitSnapshot {
        t: 0.03,
        values: vec![2.5, 2.0, 1.0, 0.0],
        singular: vec![false; 4],
    };

    let report = check_regularization_rate(
        &[still_singular.clone(), recovered.clone(), later.clone()],
        t_blowup,
    );
    assert_eq!(report.snapshots_used, 2);
    let RegularizationOutcome::Bounded { sup, window } = report.outcome else {
        panic!("two regular snapshots must produce a bound");
    };
    let expect = ((0.02f64 - t_blowup).ln() + 3.0).max((0.03f64 - t_blowup).ln() + 2.5);
    assert!((sup - expect).abs() < 1e-12);
    assert_eq!(window, (0.02, 0.03));

    let report = check_regularization_rate(&[still_singular], t_blowup);
    assert!(matches!(report.outcome, RegularizationOutcome::NotRegularized));
}
