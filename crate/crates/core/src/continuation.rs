//! Continuation past blow-up via truncated nonlinearities.
//!
//! Each truncation level n_k yields a global trajectory; the family is
//! pointwise nondecreasing in k, and its node-by-node limit approximates
//! the minimal continuation. The finest level runs first with adaptive
//! stepping and records its accepted dt sequence; every coarser level is
//! replayed on that identical time grid, so the pointwise ordering and the
//! Cauchy extrapolation compare values at exactly matching times. The
//! finest level has the strictest dt constraint, which makes its grid
//! admissible for all coarser levels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{EvolutionState, Nonlinearity, Sample, Snapshot, StepControls};
use crate::grid::RadialField;

pub const DEFAULT_CAUCHY_TOL: f64 = 1e-4;
pub const DEFAULT_ORDERING_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ContinuationOptions {
    pub controls: StepControls,
    /// Times at which the level family is compared and the limit extracted.
    /// All must lie in (0, horizon].
    pub output_times: Vec<f64>,
    /// Per-node Cauchy tolerance: the last successive difference across
    /// levels must fall below this for the node to count as converged.
    pub cauchy_tol: f64,
    /// Allowed pointwise ordering slack between consecutive levels.
    pub ordering_tol: f64,
}

impl ContinuationOptions {
    pub fn new(controls: StepControls, output_times: Vec<f64>) -> Self {
        Self {
            controls,
            output_times,
            cauchy_tol: DEFAULT_CAUCHY_TOL,
            ordering_tol: DEFAULT_ORDERING_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelTrajectory {
    pub level: f64,
    pub snapshots: Vec<Snapshot>,
    pub history: Vec<Sample>,
}

/// Extrapolated limit field at one output time. `values` holds the
/// finest-level value at every node; `singular` marks nodes where the level
/// family is not Cauchy, i.e. where the limit is unbounded.
#[derive(Debug, Clone)]
pub struct LimitSnapshot {
    pub t: f64,
    pub values: Vec<f64>,
    pub singular: Vec<bool>,
}

impl LimitSnapshot {
    pub fn any_singular(&self) -> bool {
        self.singular.iter().any(|&s| s)
    }

    /// Fraction of non-boundary nodes flagged singular.
    pub fn singular_fraction(&self) -> f64 {
        let n = self.singular.len().saturating_sub(1);
        if n == 0 {
            return 0.0;
        }
        self.singular[..n].iter().filter(|&&s| s).count() as f64 / n as f64
    }

    /// Max of the limit field when every node converged.
    pub fn max_value_if_regular(&self) -> Option<f64> {
        if self.any_singular() {
            None
        } else {
            Some(self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)))
        }
    }
}

/// Worst pointwise ordering discrepancy across consecutive levels:
/// positive means a lower level exceeded a higher one somewhere.
#[derive(Debug, Clone, Copy)]
pub struct OrderingReport {
    pub max_discrepancy: f64,
    pub worst_time: f64,
    pub worst_node: usize,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct Continuation {
    pub trajectories: Vec<LevelTrajectory>,
    pub limit: Vec<LimitSnapshot>,
    pub ordering: OrderingReport,
    /// Set when the limit at the final output time is singular on at least
    /// half of the interior nodes: no bounded continuation is emerging.
    pub complete_blowup: bool,
}

impl Continuation {
    /// Per-output-time singularity flags, for zero-number event counting.
    pub fn singular_flags(&self) -> Vec<bool> {
        self.limit.iter().map(|s| s.any_singular()).collect()
    }

    pub fn limit_at(&self, t: f64) -> Option<&LimitSnapshot> {
        self.limit
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Runs the truncation family and extracts the extrapolated limit.
///
/// The schedule must be strictly increasing with at least two levels; the
/// horizon should lie beyond the (estimated) blow-up time for the
/// continuation to show anything beyond the classical range.
pub fn continue_past_blowup(
    u0: &RadialField,
    levels: &[f64],
    horizon: f64,
    opts: &ContinuationOptions,
) -> Result<Continuation> {
    if levels.len() < 2 {
        return Err(Error::Config(format!(
            "truncation schedule needs at least 2 levels, got {}",
            levels.len()
        )));
    }
    if levels.windows(2).any(|w| !(w[1] > w[0])) || levels[0] <= 0.0 {
        return Err(Error::Config(
            "truncation levels must be positive and strictly increasing".into(),
        ));
    }
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::Config(format!("horizon must be positive, got {horizon}")));
    }
    let mut output_times = opts.output_times.clone();
    output_times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    output_times.dedup();
    if output_times.is_empty() {
        output_times.push(horizon);
    }
    if output_times[0] <= 0.0 || *output_times.last().unwrap() > horizon {
        return Err(Error::Config(
            "output times must lie in (0, horizon]".into(),
        ));
    }

    // Each level evolves the data capped at log(level): where the reaction
    // saturates, so does the admissible data, and the caps stay pointwise
    // ordered across levels. Unbounded initial data enters as its cap under
    // the finest level; regular data with max below every cap is untouched.
    let capped = |level: f64| -> Result<RadialField> {
        let cap = level.ln();
        RadialField::new(
            std::sync::Arc::clone(u0.grid_arc()),
            u0.values().iter().map(|&v| v.min(cap)).collect(),
        )
    };

    // Finest level first: its adaptive grid binds for the whole family.
    let finest = *levels.last().unwrap();
    let mut dts = Vec::new();
    let mut finest_state = EvolutionState::new(capped(finest)?, Nonlinearity::truncated(finest)?)
        .with_snapshot_times(output_times.clone());
    finest_state.run_to_horizon(&opts.controls, horizon, Some(&mut dts))?;
    let finest_traj = LevelTrajectory {
        level: finest,
        snapshots: finest_state.snapshots().to_vec(),
        history: finest_state.history().to_vec(),
    };

    let coarse: Result<Vec<LevelTrajectory>> = levels[..levels.len() - 1]
        .par_iter()
        .map(|&level| {
            let mut state = EvolutionState::new(capped(level)?, Nonlinearity::truncated(level)?)
                .with_snapshot_times(output_times.clone());
            state.replay(&opts.controls, &dts, horizon)?;
            Ok(LevelTrajectory {
                level,
                snapshots: state.snapshots().to_vec(),
                history: state.history().to_vec(),
            })
        })
        .collect();
    let mut trajectories = coarse?;
    trajectories.push(finest_traj);

    let n_snaps = trajectories[0].snapshots.len();
    if trajectories.iter().any(|tr| tr.snapshots.len() != n_snaps) {
        return Err(Error::InternalConsistency(
            "truncation levels produced differing snapshot counts".into(),
        ));
    }

    let mut ordering = OrderingReport {
        max_discrepancy: f64::NEG_INFINITY,
        worst_time: 0.0,
        worst_node: 0,
        tol: opts.ordering_tol,
    };
    for pair in trajectories.windows(2) {
        for (lo_snap, hi_snap) in pair[0].snapshots.iter().zip(&pair[1].snapshots) {
            for (i, (&lo, &hi)) in lo_snap
                .field
                .values()
                .iter()
                .zip(hi_snap.field.values())
                .enumerate()
            {
                let d = lo - hi;
                if d > ordering.max_discrepancy {
                    ordering.max_discrepancy = d;
                    ordering.worst_time = lo_snap.t;
                    ordering.worst_node = i;
                }
            }
        }
    }
    if ordering.max_discrepancy > opts.ordering_tol {
        return Err(Error::InternalConsistency(format!(
            "truncation family lost pointwise ordering: level overshoot {:.3e} at t = {}, node {} (tol {:.1e})",
            ordering.max_discrepancy, ordering.worst_time, ordering.worst_node, opts.ordering_tol
        )));
    }

    let n_nodes = u0.values().len();
    let mut limit = Vec::with_capacity(n_snaps);
    for s in 0..n_snaps {
        let t = trajectories[0].snapshots[s].t;
        let last = trajectories[trajectories.len() - 1].snapshots[s].field.values();
        let prev = trajectories[trajectories.len() - 2].snapshots[s].field.values();
        let mut values = Vec::with_capacity(n_nodes);
        let mut singular = Vec::with_capacity(n_nodes);
        for i in 0..n_nodes {
            let diff = (last[i] - prev[i]).abs();
            values.push(last[i]);
            singular.push(!(diff < opts.cauchy_tol));
        }
        limit.push(LimitSnapshot { t, values, singular });
    }

    let complete_blowup = limit
        .last()
        .map(|s| s.singular_fraction() >= 0.5)
        .unwrap_or(false);

    Ok(Continuation {
        trajectories,
        limit,
        ordering,
        complete_blowup,
    })
}
