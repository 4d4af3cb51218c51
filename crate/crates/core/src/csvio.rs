//! CSV serialization for every artifact the laboratory emits.
//!
//! One output format, fixed headers, 17-significant-digit decimals: enough
//! digits to round-trip an f64 exactly, so identical runs produce
//! bit-identical files.

use std::fmt::Write as _;

use crate::continuation::{Continuation, LimitSnapshot};
use crate::error::Result;
use crate::evolution::{Sample, Snapshot};
use crate::grid::RadialField;
use crate::profiles::{AlphaRow, CSharpBracket, ProfileSolution, ShotOutcome};
use crate::similarity::SimilarityFrame;

/// 17 significant digits: round-trip exact for f64.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return "0.0000000000000000e0".into();
    }
    format!("{v:.16e}")
}

pub fn outcome_label(outcome: ShotOutcome) -> &'static str {
    match outcome {
        ShotOutcome::GlobalDecay => "global_decay",
        ShotOutcome::BlowupInRho => "blowup_in_rho",
        ShotOutcome::Oscillatory => "oscillatory",
        ShotOutcome::Truncated => "truncated",
    }
}

/// Header `r,value`, one row per node.
pub fn field_csv(field: &RadialField) -> String {
    let mut out = String::from("r,value\n");
    for (&r, &v) in field.grid().nodes().iter().zip(field.values()) {
        let _ = writeln!(out, "{},{}", fmt_f64(r), fmt_f64(v));
    }
    out
}

/// Header `t,r,value`, snapshots concatenated in time order.
pub fn snapshots_csv(snapshots: &[Snapshot]) -> String {
    let mut out = String::from("t,r,value\n");
    for snap in snapshots {
        for (&r, &v) in snap.field.grid().nodes().iter().zip(snap.field.values()) {
            let _ = writeln!(out, "{},{},{}", fmt_f64(snap.t), fmt_f64(r), fmt_f64(v));
        }
    }
    out
}

/// Header `t,maxu,dt`, one row per history sample.
pub fn history_csv(history: &[Sample]) -> String {
    let mut out = String::from("t,maxu,dt\n");
    for s in history {
        let _ = writeln!(out, "{},{},{}", fmt_f64(s.t), fmt_f64(s.max_u), fmt_f64(s.dt));
    }
    out
}

/// Header `s_or_tau,y,w`, frames concatenated.
pub fn frames_csv(frames: &[SimilarityFrame]) -> String {
    let mut out = String::from("s_or_tau,y,w\n");
    for f in frames {
        for (&y, &w) in f.y_nodes.iter().zip(&f.w_values) {
            let _ = writeln!(out, "{},{},{}", fmt_f64(f.s_or_tau), fmt_f64(y), fmt_f64(w));
        }
    }
    out
}

/// Header `rho,value,derivative`, one row per sampled node.
pub fn profile_csv(solution: &ProfileSolution) -> String {
    let mut out = String::from("rho,value,derivative\n");
    for i in 0..solution.rho_nodes.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(solution.rho_nodes[i]),
            fmt_f64(solution.values[i]),
            fmt_f64(solution.derivatives[i])
        );
    }
    out
}

/// Header `alpha,C_alpha,residual,outcome`; missing constants are empty.
pub fn alpha_map_csv(rows: &[AlphaRow]) -> String {
    let mut out = String::from("alpha,C_alpha,residual,outcome\n");
    for row in rows {
        let c = row.c_alpha.map(fmt_f64).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(row.alpha),
            c,
            fmt_f64(row.residual),
            outcome_label(row.outcome)
        );
    }
    out
}

/// Single-row bracket report with named columns.
pub fn bracket_csv(bracket: &CSharpBracket) -> String {
    let mut out = String::from("dimension,c_lo,c_hi,rho_max,nonmonotone,floor\n");
    let floor = (2.0 * (bracket.dimension as f64 - 2.0)).ln();
    let _ = writeln!(
        out,
        "{},{},{},{},{},{}",
        bracket.dimension,
        fmt_f64(bracket.c_lo),
        fmt_f64(bracket.c_hi),
        fmt_f64(bracket.rho_max),
        bracket.nonmonotone,
        fmt_f64(floor)
    );
    out
}

/// Header `t,r,value,singular` for the extrapolated continuation limit.
pub fn limit_csv(limits: &[LimitSnapshot], nodes: &[f64]) -> String {
    let mut out = String::from("t,r,value,singular\n");
    for snap in limits {
        for i in 0..snap.values.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(snap.t),
                fmt_f64(nodes[i]),
                fmt_f64(snap.values[i]),
                snap.singular[i] as u8
            );
        }
    }
    out
}

/// Per-level trajectory snapshots: header `level,t,r,value`.
pub fn continuation_levels_csv(continuation: &Continuation) -> String {
    let mut out = String::from("level,t,r,value\n");
    for traj in &continuation.trajectories {
        for snap in &traj.snapshots {
            for (&r, &v) in snap.field.grid().nodes().iter().zip(snap.field.values()) {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(traj.level),
                    fmt_f64(snap.t),
                    fmt_f64(r),
                    fmt_f64(v)
                );
            }
        }
    }
    out
}

pub fn write_file(path: &std::path::Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, content)?;
    Ok(())
}
