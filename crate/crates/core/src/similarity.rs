//! Similarity-variable views of trajectories, blow-up rate classification,
//! and profile fits at the singular time.
//!
//! Frames use monotone cubic interpolation from the physical grid, so
//! singular monotone profiles transform without overshoot. A frame is one
//! time slice; sequences of frames (increasing s) carry the convergence
//! diagnostics.

use crate::continuation::LimitSnapshot;
use crate::error::{Error, Result};
use crate::evolution::Sample;
use crate::grid::{RadialField, RadialGrid};
use crate::interp::MonotoneCubic;

pub const DEFAULT_BAND_TOL: f64 = 1.0;
pub const DEFAULT_DRIFT_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameKind {
    Backward,
    Forward,
    Intrinsic,
}

/// One rescaled time slice.
///
/// Backward: w(y,s) = log(T-t) + u(y√(T-t), t) with s = -log(T-t), t < T.
/// Forward:  w(y,s) = log(t-T) + u(y√(t-T), t) with s = -log(t-T), t > T
/// (s grows as t decreases toward T, where the frames converge).
/// Intrinsic: w(ρ,τ) = -u(0,t_i) + U(e^{-u(0,t_i)/2}ρ, t_i + e^{-u(0,t_i)}τ),
/// recorded here at τ = 0.
#[derive(Debug, Clone)]
pub struct SimilarityFrame {
    pub kind: FrameKind,
    /// T for Backward/Forward; t_i for Intrinsic.
    pub anchor: f64,
    pub s_or_tau: f64,
    pub y_nodes: Vec<f64>,
    pub w_values: Vec<f64>,
}

impl SimilarityFrame {
    pub fn origin_value(&self) -> f64 {
        self.w_values[0]
    }

    /// Physical radii the frame nodes came from.
    pub fn unscaled_radii(&self) -> Result<Vec<f64>> {
        let delta = self.time_offset()?;
        Ok(self.y_nodes.iter().map(|&y| y * delta.sqrt()).collect())
    }

    /// Physical field values at the frame nodes.
    pub fn unscaled_values(&self) -> Result<Vec<f64>> {
        let _ = self.time_offset()?;
        let s = self.s_or_tau;
        Ok(self.w_values.iter().map(|&w| w + s).collect())
    }

    fn time_offset(&self) -> Result<f64> {
        match self.kind {
            FrameKind::Backward | FrameKind::Forward => Ok((-self.s_or_tau).exp()),
            FrameKind::Intrinsic => Err(Error::Precondition(
                "intrinsic frames do not carry enough data to unscale; keep the source snapshot".into(),
            )),
        }
    }
}

fn uniform_targets(y_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(y_max.is_finite() && y_max > 0.0) {
        return Err(Error::Config(format!("y_max must be positive, got {y_max}")));
    }
    if samples < 2 {
        return Err(Error::Config(format!("need at least 2 frame samples, got {samples}")));
    }
    Ok((0..samples)
        .map(|j| y_max * j as f64 / (samples - 1) as f64)
        .collect())
}

fn frame_from_field(
    field: &RadialField,
    kind: FrameKind,
    anchor: f64,
    delta: f64,
    y_max: f64,
    samples: usize,
) -> Result<SimilarityFrame> {
    let radius = field.grid().radius();
    let scale = delta.sqrt();
    if y_max * scale > radius * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "frame window y_max = {y_max} unscales to r = {} beyond the domain radius {radius}",
            y_max * scale
        )));
    }
    let y_nodes = uniform_targets(y_max, samples)?;
    let interp = MonotoneCubic::fit(field.grid().nodes(), field.values())?;
    let log_delta = delta.ln();
    let w_values = y_nodes
        .iter()
        .map(|&y| log_delta + interp.eval((y * scale).min(radius)))
        .collect();
    Ok(SimilarityFrame {
        kind,
        anchor,
        s_or_tau: -log_delta,
        y_nodes,
        w_values,
    })
}

/// Backward frame of a pre-blow-up snapshot taken at time `t`.
pub fn to_backward(
    field: &RadialField,
    t: f64,
    t_blowup: f64,
    y_max: f64,
    samples: usize,
) -> Result<SimilarityFrame> {
    if !(t < t_blowup) {
        return Err(Error::Precondition(format!(
            "backward frame needs t < T, got t = {t}, T = {t_blowup}"
        )));
    }
    frame_from_field(field, FrameKind::Backward, t_blowup, t_blowup - t, y_max, samples)
}

/// Forward frame of a post-blow-up (continuation) snapshot at time `t`.
pub fn to_forward(
    field: &RadialField,
    t: f64,
    t_blowup: f64,
    y_max: f64,
    samples: usize,
) -> Result<SimilarityFrame> {
    if !(t > t_blowup) {
        return Err(Error::Precondition(format!(
            "forward frame needs t > T, got t = {t}, T = {t_blowup}"
        )));
    }
    frame_from_field(field, FrameKind::Forward, t_blowup, t - t_blowup, y_max, samples)
}

/// Intrinsic frame at τ = 0 anchored at the snapshot's own peak; requires
/// the maximum at the origin.
pub fn to_intrinsic(
    field: &RadialField,
    t_i: f64,
    rho_max: f64,
    samples: usize,
) -> Result<SimilarityFrame> {
    let values = field.values();
    let peak = values[0];
    if let Some((node, &v)) = values
        .iter()
        .enumerate()
        .find(|(_, &v)| v > peak)
        .map(|(i, v)| (i, v))
    {
        return Err(Error::Precondition(format!(
            "intrinsic frame needs the maximum at the origin; node {node} holds {v} > {peak}"
        )));
    }
    let radius = field.grid().radius();
    let scale = (-0.5 * peak).exp();
    if rho_max * scale > radius * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "rho_max = {rho_max} unscales to r = {} beyond the domain radius {radius}",
            rho_max * scale
        )));
    }
    let y_nodes = uniform_targets(rho_max, samples)?;
    let interp = MonotoneCubic::fit(field.grid().nodes(), values)?;
    let w_values = y_nodes
        .iter()
        .map(|&rho| -peak + interp.eval((rho * scale).min(radius)))
        .collect();
    Ok(SimilarityFrame {
        kind: FrameKind::Intrinsic,
        anchor: t_i,
        s_or_tau: 0.0,
        y_nodes,
        w_values,
    })
}

fn check_comparable(frames: &[SimilarityFrame]) -> Result<()> {
    if frames.len() < 2 {
        return Err(Error::Precondition(format!(
            "frame diagnostics need at least 2 frames, got {}",
            frames.len()
        )));
    }
    let first = &frames[0];
    for f in &frames[1..] {
        if f.kind != first.kind || f.y_nodes.len() != first.y_nodes.len() {
            return Err(Error::Precondition(
                "frame diagnostics need frames of one kind on one y-grid".into(),
            ));
        }
    }
    Ok(())
}

/// Secant slope of w(0, s) over the last half of the s-range; small values
/// mean the origin value has stabilized.
pub fn origin_drift(frames: &[SimilarityFrame]) -> Result<f64> {
    check_comparable(frames)?;
    let s_last = frames.last().unwrap().s_or_tau;
    let s_first = frames[0].s_or_tau;
    let s_mid = 0.5 * (s_first + s_last);
    let window: Vec<&SimilarityFrame> =
        frames.iter().filter(|f| f.s_or_tau >= s_mid).collect();
    if window.len() < 2 {
        return Err(Error::Precondition(
            "origin drift needs at least 2 frames in the final half-window".into(),
        ));
    }
    let a = window[0];
    let b = window[window.len() - 1];
    let ds = b.s_or_tau - a.s_or_tau;
    if ds <= 0.0 {
        return Err(Error::Precondition("frames must have increasing s".into()));
    }
    Ok(((b.origin_value() - a.origin_value()) / ds).abs())
}

/// Max over consecutive frame pairs of the sup-norm deviation; zero for an
/// exactly self-similar sequence.
pub fn max_frame_deviation(frames: &[SimilarityFrame]) -> Result<f64> {
    check_comparable(frames)?;
    let mut worst = 0.0f64;
    for pair in frames.windows(2) {
        for (&a, &b) in pair[0].w_values.iter().zip(&pair[1].w_values) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateClass {
    TypeI,
    TypeII,
    Undetermined,
}

#[derive(Debug, Clone, Copy)]
pub struct RateReport {
    pub classification: RateClass,
    /// (inf, sup) of g(t) = log(T-t) + max u over the observation window.
    pub band: (f64, f64),
    pub window: (f64, f64),
}

/// Classifies the blow-up rate from the max-u history against the fitted T.
///
/// The observation window is the last 3 e-foldings of T-t. Type I means the
/// band of g = log(T-t) + max u is narrower than `DEFAULT_BAND_TOL` and the
/// last-half oscillation does not exceed the full-window one; a monotone
/// rise of g by more than 2 means type II; anything else (including fewer
/// than 20 window samples) is undetermined.
pub fn classify_rate(history: &[Sample], t_blowup: f64) -> RateReport {
    let undetermined = RateReport {
        classification: RateClass::Undetermined,
        band: (0.0, 0.0),
        window: (0.0, 0.0),
    };
    let pre: Vec<&Sample> = history.iter().filter(|smp| smp.t < t_blowup).collect();
    if pre.len() < 20 {
        return undetermined;
    }
    let s_of = |t: f64| -(t_blowup - t).ln();
    let s_max = s_of(pre.last().unwrap().t);
    let window: Vec<&Sample> = pre
        .iter()
        .copied()
        .filter(|smp| s_of(smp.t) >= s_max - 3.0)
        .collect();
    if window.len() < 20 {
        return undetermined;
    }
    let g: Vec<f64> = window
        .iter()
        .map(|smp| (t_blowup - smp.t).ln() + smp.max_u)
        .collect();
    let band = (
        g.iter().copied().fold(f64::INFINITY, f64::min),
        g.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let t_window = (window[0].t, window[window.len() - 1].t);
    let osc_full = band.1 - band.0;

    let half: Vec<f64> = window
        .iter()
        .zip(&g)
        .filter(|(smp, _)| s_of(smp.t) >= s_max - 1.5)
        .map(|(_, &gi)| gi)
        .collect();
    let osc_half = half.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - half.iter().copied().fold(f64::INFINITY, f64::min);

    let classification = if osc_full <= DEFAULT_BAND_TOL && osc_half <= osc_full + 1e-12 {
        RateClass::TypeI
    } else if g[g.len() - 1] - g[0] > 2.0 && g.windows(2).all(|w| w[1] >= w[0] - 1e-9) {
        RateClass::TypeII
    } else {
        RateClass::Undetermined
    };
    RateReport {
        classification,
        band,
        window: t_window,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileModel {
    /// u + 2 log r → C
    PureLog,
    /// u + 2 log r − log|log r| → C
    LogLog,
}

/// Where the fitted field came from, recorded alongside fit results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitSource {
    TruncationLimit,
    PreOverflowSnapshot,
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileFit {
    pub model: ProfileModel,
    pub constant: f64,
    /// Radii of the first and last node actually used.
    pub fit_window: (f64, f64),
    pub residual: f64,
    pub source: Option<FitSource>,
}

impl ProfileFit {
    pub fn with_source(mut self, source: FitSource) -> Self {
        self.source = Some(source);
        self
    }
}

/// Least-squares constant of the chosen singular-profile model over the
/// nodes with r in [window.0, window.1]. The residual is the RMS deviation.
pub fn fit_final_profile(
    rs: &[f64],
    us: &[f64],
    window: (f64, f64),
    model: ProfileModel,
) -> Result<ProfileFit> {
    if rs.len() != us.len() {
        return Err(Error::Config(format!(
            "profile fit got {} radii and {} values",
            rs.len(),
            us.len()
        )));
    }
    if !(window.0 > 0.0 && window.0 < window.1) {
        return Err(Error::Config(format!(
            "fit window must satisfy 0 < r_lo < r_hi, got ({}, {})",
            window.0, window.1
        )));
    }
    let transform = |r: f64, u: f64| match model {
        ProfileModel::PureLog => u + 2.0 * r.ln(),
        ProfileModel::LogLog => u + 2.0 * r.ln() - r.ln().abs().ln(),
    };
    let mut g = Vec::new();
    let mut r_used = (f64::INFINITY, f64::NEG_INFINITY);
    for (&r, &u) in rs.iter().zip(us) {
        if r < window.0 || r > window.1 {
            continue;
        }
        if model == ProfileModel::LogLog && r.ln().abs() < 1e-6 {
            // log|log r| is singular at r = 1.
            continue;
        }
        g.push(transform(r, u));
        r_used.0 = r_used.0.min(r);
        r_used.1 = r_used.1.max(r);
    }
    if g.len() < 2 {
        return Err(Error::Domain(format!(
            "profile fit window ({}, {}) holds {} usable nodes, needs at least 2",
            window.0,
            window.1,
            g.len()
        )));
    }
    let constant = g.iter().sum::<f64>() / g.len() as f64;
    let ss: f64 = g.iter().map(|v| (v - constant) * (v - constant)).sum();
    Ok(ProfileFit {
        model,
        constant,
        fit_window: r_used,
        residual: (ss / g.len() as f64).sqrt(),
        source: None,
    })
}

/// Default fit window: excludes the 3 origin spacings where the mesh cannot
/// resolve the singular cap, and stays below r = 1/2 so both profile models
/// are well defined on the same nodes.
pub fn default_fit_window(grid: &RadialGrid) -> (f64, f64) {
    let r_lo = 3.0 * grid.origin_spacing();
    let r_hi = (0.5f64).min(0.9 * grid.radius());
    (r_lo, r_hi)
}

/// Fits a whole-field snapshot with the default window.
pub fn fit_field_final_profile(field: &RadialField, model: ProfileModel) -> Result<ProfileFit> {
    fit_final_profile(
        field.grid().nodes(),
        field.values(),
        default_fit_window(field.grid()),
        model,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegularizationOutcome {
    /// sup over the window of log(t-T) + max u, with the window itself.
    Bounded { sup: f64, window: (f64, f64) },
    NotRegularized,
}

#[derive(Debug, Clone, Copy)]
pub struct RegularizationReport {
    pub outcome: RegularizationOutcome,
    pub snapshots_used: usize,
}

/// Checks the post-blow-up bound max u ≤ -log(t-T) + C on the continuation
/// limit. Snapshots that are still singular (non-Cauchy anywhere) are not
/// usable; if none is regular the trajectory has not regularized.
pub fn check_regularization_rate(limits: &[LimitSnapshot], t_blowup: f64) -> RegularizationReport {
    let mut sup = f64::NEG_INFINITY;
    let mut window = (f64::INFINITY, f64::NEG_INFINITY);
    let mut used = 0;
    for snap in limits {
        if snap.t <= t_blowup {
            continue;
        }
        let Some(max_u) = snap.max_value_if_regular() else {
            continue;
        };
        sup = sup.max((snap.t - t_blowup).ln() + max_u);
        window.0 = window.0.min(snap.t);
        window.1 = window.1.max(snap.t);
        used += 1;
    }
    if used == 0 {
        return RegularizationReport {
            outcome: RegularizationOutcome::NotRegularized,
            snapshots_used: 0,
        };
    }
    RegularizationReport {
        outcome: RegularizationOutcome::Bounded { sup, window },
        snapshots_used: used,
    }
}
