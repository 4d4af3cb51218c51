//! Shooting solver for the three radial profile ODE families
//!
//!   backward:  v'' + (N-1)/ρ v' - (ρ/2) v' + e^v - 1 = 0
//!   forward:   v'' + (N-1)/ρ v' + (ρ/2) v' + e^v + 1 = 0
//!   steady:    v'' + (N-1)/ρ v' + e^v = 0
//!
//! with v(0) = center, v'(0) = 0, plus tail-asymptote fitting against
//! v + 2 log ρ = C + b/ρ² and bisection bracketing of the threshold tail
//! constant for the forward family.
//!
//! The ODEs are singular at ρ = 0, so integration launches at a small ε
//! from the series v ≈ center - F ρ²/(2N), F the forcing at the center.
//! The launch radius shrinks when the forcing is large so the quadratic
//! term stays uniformly small. The integrator is an embedded
//! Dormand-Prince 5(4) pair with error measured per unit step, so the
//! global error tracks the requested tolerance.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sturm::strict_sign_changes;

pub const DEFAULT_SHOOT_TOL: f64 = 1e-10;
/// RMS ceiling for accepting a fitted tail constant.
pub const TAIL_RESIDUAL_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Backward,
    Forward,
    Steady,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileFamily {
    pub kind: FamilyKind,
    pub dimension: u32,
}

impl ProfileFamily {
    pub fn new(kind: FamilyKind, dimension: u32) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        Ok(Self { kind, dimension })
    }

    pub fn backward(dimension: u32) -> Result<Self> {
        Self::new(FamilyKind::Backward, dimension)
    }

    pub fn forward(dimension: u32) -> Result<Self> {
        Self::new(FamilyKind::Forward, dimension)
    }

    pub fn steady(dimension: u32) -> Result<Self> {
        Self::new(FamilyKind::Steady, dimension)
    }

    /// Forcing term F(v): the ODE reads v'' + (N-1)/ρ v' + drift·(ρ/2)v' + F(v) = 0.
    pub fn forcing(&self, v: f64) -> f64 {
        match self.kind {
            FamilyKind::Backward => v.exp() - 1.0,
            FamilyKind::Forward => v.exp() + 1.0,
            FamilyKind::Steady => v.exp(),
        }
    }

    /// Coefficient of (ρ/2) v' on the left-hand side.
    fn drift(&self) -> f64 {
        match self.kind {
            FamilyKind::Backward => -1.0,
            FamilyKind::Forward => 1.0,
            FamilyKind::Steady => 0.0,
        }
    }

    fn rhs(&self, rho: f64, v: f64, dv: f64) -> f64 {
        let n = self.dimension as f64;
        -(n - 1.0) / rho * dv - self.drift() * 0.5 * rho * dv - self.forcing(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotOutcome {
    GlobalDecay,
    BlowupInRho,
    Oscillatory,
    Truncated,
}

#[derive(Debug, Clone)]
pub struct ProfileSolution {
    pub family: ProfileFamily,
    pub center_value: f64,
    pub rho_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// Fitted C in v + 2 log ρ → C; present only for GlobalDecay shots whose
    /// tail fit meets `TAIL_RESIDUAL_TOL`.
    pub tail_constant: Option<f64>,
    pub tail_residual: f64,
    pub outcome: ShotOutcome,
}

/// Value at which a shot is declared blown up in ρ.
const BLOWUP_VALUE: f64 = 50.0;
/// Sign changes of v + 2 log ρ in the tail window beyond which the shot is
/// classified oscillatory.
const OSCILLATION_CHANGES: usize = 4;

fn launch_radius(forcing: f64) -> f64 {
    (1e-6f64).min(1e-3 / (1.0 + forcing.abs()).sqrt())
}

/// Dormand-Prince 5(4) step: returns (v5, dv5, |v5-v4|, |dv5-dv4|).
#[allow(clippy::too_many_arguments)]
fn dp45_step(family: &ProfileFamily, rho: f64, v: f64, dv: f64, h: f64) -> (f64, f64, f64, f64) {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let mut kv = [0.0f64; 7];
    let mut kd = [0.0f64; 7];
    kv[0] = dv;
    kd[0] = family.rhs(rho, v, dv);
    for i in 0..6 {
        let mut sv = 0.0;
        let mut sd = 0.0;
        for j in 0..=i {
            sv += A[i][j] * kv[j];
            sd += A[i][j] * kd[j];
        }
        let vi = v + h * sv;
        let di = dv + h * sd;
        kv[i + 1] = di;
        kd[i + 1] = family.rhs(rho + C[i] * h, vi, di);
    }
    let mut v5 = v;
    let mut d5 = dv;
    let mut v4 = v;
    let mut d4 = dv;
    for i in 0..7 {
        v5 += h * B5[i] * kv[i];
        d5 += h * B5[i] * kd[i];
        v4 += h * B4[i] * kv[i];
        d4 += h * B4[i] * kd[i];
    }
    (v5, d5, (v5 - v4).abs(), (d5 - d4).abs())
}

/// Shoots the family from the center value and samples at `outputs`
/// (strictly increasing, all ≤ rho_max; a leading 0 is reported from the
/// series data). Integration stops early on blow-up in ρ or step underflow.
pub fn shoot_with_outputs(
    family: ProfileFamily,
    center_value: f64,
    rho_max: f64,
    tol: f64,
    outputs: &[f64],
) -> Result<ProfileSolution> {
    if !(rho_max.is_finite() && rho_max > 0.0) {
        return Err(Error::Config(format!("rho_max must be positive, got {rho_max}")));
    }
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(Error::Config(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    if !center_value.is_finite() {
        return Err(Error::Config(format!("center value must be finite, got {center_value}")));
    }
    if outputs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("output nodes must be strictly increasing".into()));
    }
    if outputs.last().is_some_and(|&last| last > rho_max * (1.0 + 1e-12)) {
        return Err(Error::Config("output nodes must not exceed rho_max".into()));
    }

    let n = family.dimension as f64;
    let f0 = family.forcing(center_value);
    let eps = launch_radius(f0);

    let mut rho_nodes = Vec::with_capacity(outputs.len());
    let mut values = Vec::with_capacity(outputs.len());
    let mut derivatives = Vec::with_capacity(outputs.len());
    let mut out_idx = 0;
    while out_idx < outputs.len() && outputs[out_idx] <= eps {
        // Nodes inside the launch radius come from the series itself.
        let r = outputs[out_idx];
        rho_nodes.push(r);
        values.push(center_value - f0 * r * r / (2.0 * n));
        derivatives.push(-f0 * r / n);
        out_idx += 1;
    }

    let mut rho = eps;
    let mut v = center_value - f0 * eps * eps / (2.0 * n);
    let mut dv = -f0 * eps / n;
    // Step-size proposal; landing clips use a trial copy so an output node
    // just ahead cannot collapse the proposal.
    let mut h = eps;
    let mut outcome = None;

    while rho < rho_max {
        let mut target = rho_max;
        if out_idx < outputs.len() {
            target = target.min(outputs[out_idx]);
        }
        let mut h_try = h;
        let mut landed = false;
        if rho + h_try >= target {
            h_try = target - rho;
            landed = true;
        }
        if h_try <= rho * 1e-14 {
            // The gap to the target is below resolution: snap to it.
            rho = target;
        } else {
            let (v5, d5, ev, ed) = dp45_step(&family, rho, v, dv, h_try);
            // Normalized error: accept when within atol + rtol * |y| per
            // component. Scaling by the solution keeps the acceptance test
            // clear of the f64 rounding floor of the embedded estimate.
            let scale_v = tol + tol * v.abs().max(v5.abs());
            let scale_d = tol + tol * dv.abs().max(d5.abs());
            let err = (ev / scale_v).max(ed / scale_d);
            if !err.is_finite() {
                outcome = Some(ShotOutcome::Truncated);
                break;
            }
            if err > 1.0 {
                h = h_try * (0.9 * err.powf(-0.2)).max(0.2);
                if h < rho.max(eps) * 1e-13 {
                    outcome = Some(ShotOutcome::Truncated);
                    break;
                }
                continue;
            }
            rho = if landed { target } else { rho + h_try };
            v = v5;
            dv = d5;
            if !landed {
                let grow = if err > 0.0 { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) } else { 5.0 };
                h = h_try * grow;
            }
        }
        if landed && out_idx < outputs.len() && (rho - outputs[out_idx]).abs() <= rho * 1e-12 {
            rho_nodes.push(outputs[out_idx]);
            values.push(v);
            derivatives.push(dv);
            out_idx += 1;
        }
        if v > BLOWUP_VALUE {
            outcome = Some(ShotOutcome::BlowupInRho);
            break;
        }
    }

    let outcome = outcome.unwrap_or_else(|| {
        let tail: Vec<f64> = rho_nodes
            .iter()
            .zip(&values)
            .filter(|(&r, _)| r >= 0.5 * rho_max && r > 0.0)
            .map(|(&r, &u)| u + 2.0 * r.ln())
            .collect();
        if strict_sign_changes(&tail) > OSCILLATION_CHANGES {
            ShotOutcome::Oscillatory
        } else {
            ShotOutcome::GlobalDecay
        }
    });

    let (tail_constant, tail_residual) =
        fit_tail(&rho_nodes, &values, rho_max, outcome == ShotOutcome::GlobalDecay);

    Ok(ProfileSolution {
        family,
        center_value,
        rho_nodes,
        values,
        derivatives,
        tail_constant,
        tail_residual,
        outcome,
    })
}

/// Least squares of v + 2 log ρ = C + b/ρ² over [rho_max/2, rho_max].
fn fit_tail(rho: &[f64], values: &[f64], rho_max: f64, eligible: bool) -> (Option<f64>, f64) {
    let pts: Vec<(f64, f64)> = rho
        .iter()
        .zip(values)
        .filter(|(&r, _)| r >= 0.5 * rho_max && r > 0.0)
        .map(|(&r, &u)| (1.0 / (r * r), u + 2.0 * r.ln()))
        .collect();
    if pts.len() < 4 {
        return (None, f64::INFINITY);
    }
    let n = pts.len() as f64;
    let x_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in &pts {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return (None, f64::INFINITY);
    }
    let b = sxy / sxx;
    let c = y_mean - b * x_mean;
    let mut ss = 0.0;
    for &(x, y) in &pts {
        let e = y - (c + b * x);
        ss += e * e;
    }
    let rms = (ss / n).sqrt();
    let constant = if eligible && rms < TAIL_RESIDUAL_TOL {
        Some(c)
    } else {
        None
    };
    (constant, rms)
}

/// Shoots with a default uniform output grid of 201 nodes on [0, rho_max].
pub fn shoot(
    family: ProfileFamily,
    center_value: f64,
    rho_max: f64,
    tol: f64,
) -> Result<ProfileSolution> {
    let outputs: Vec<f64> = (0..=200).map(|j| rho_max * j as f64 / 200.0).collect();
    shoot_with_outputs(family, center_value, rho_max, tol, &outputs)
}

/// Max pointwise ODE residual of a sampled function, derivatives by
/// nonuniform central differences; endpoints are skipped.
pub fn residual_on_samples(family: ProfileFamily, rho: &[f64], values: &[f64]) -> Result<f64> {
    if rho.len() != values.len() {
        return Err(Error::Config(format!(
            "residual got {} nodes and {} values",
            rho.len(),
            values.len()
        )));
    }
    if rho.len() < 3 {
        return Err(Error::Config("residual needs at least 3 samples".into()));
    }
    if rho.iter().any(|&r| r <= 0.0) {
        return Err(Error::Domain(
            "residual window must stay at ρ > 0 where the ODE coefficients are finite".into(),
        ));
    }
    let n = family.dimension as f64;
    let mut worst = 0.0f64;
    for i in 1..rho.len() - 1 {
        let hm = rho[i] - rho[i - 1];
        let hp = rho[i + 1] - rho[i];
        let d1 = (-values[i - 1] * hp / hm + values[i] * (hp / hm - hm / hp)
            + values[i + 1] * hm / hp)
            / (hm + hp);
        let d2 = 2.0 * (values[i - 1] / (hm * (hm + hp)) - values[i] / (hm * hp)
            + values[i + 1] / (hp * (hm + hp)));
        let lhs = d2
            + (n - 1.0) / rho[i] * d1
            + family.drift() * 0.5 * rho[i] * d1
            + family.forcing(values[i]);
        worst = worst.max(lhs.abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy)]
pub struct AlphaRow {
    pub alpha: f64,
    pub c_alpha: Option<f64>,
    pub residual: f64,
    pub outcome: ShotOutcome,
    /// α = 0 solves the backward family identically; it has no log tail.
    pub trivial: bool,
}

/// Per-α backward shot and tail fit. Dimensions outside [3, 9] are allowed
/// but marked exploratory in the returned flag.
pub fn map_alpha_to_c(
    alphas: &[f64],
    dimension: u32,
    rho_max: f64,
    tol: f64,
) -> Result<(Vec<AlphaRow>, bool)> {
    let family = ProfileFamily::backward(dimension)?;
    let exploratory = !(3..=9).contains(&dimension);
    let rows: Result<Vec<AlphaRow>> = alphas
        .par_iter()
        .map(|&alpha| {
            let sol = shoot(family, alpha, rho_max, tol)?;
            Ok(AlphaRow {
                alpha,
                c_alpha: sol.tail_constant,
                residual: sol.tail_residual,
                outcome: sol.outcome,
                trivial: alpha == 0.0,
            })
        })
        .collect();
    Ok((rows?, exploratory))
}

/// Singular profile Φ*(ρ) = -2 log ρ + log(2(N-2)); a solution of all three
/// families for N ≥ 3.
#[derive(Debug, Clone, Copy)]
pub struct SingularProfile {
    pub dimension: u32,
}

impl SingularProfile {
    pub fn new(dimension: u32) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::Config(format!(
                "the singular profile needs dimension ≥ 3, got {dimension}"
            )));
        }
        Ok(Self { dimension })
    }

    pub fn tail_constant(&self) -> f64 {
        (2.0 * (self.dimension as f64 - 2.0)).ln()
    }

    pub fn eval(&self, rho: f64) -> f64 {
        -2.0 * rho.ln() + self.tail_constant()
    }
}

/// Steady closed form for N = 1: -2 log(cosh(ρ/√2)).
pub fn steady_exact_n1(rho: f64) -> f64 {
    -2.0 * (rho / std::f64::consts::SQRT_2).cosh().ln()
}

/// Steady closed form for N = 2: -2 log(1 + ρ²/8).
pub fn steady_exact_n2(rho: f64) -> f64 {
    -2.0 * (1.0 + rho * rho / 8.0).ln()
}

#[derive(Debug, Clone)]
pub struct CSharpBracket {
    pub c_lo: f64,
    pub c_hi: f64,
    pub dimension: u32,
    pub rho_max: f64,
    /// Set when the existence predicate showed inversions near the edge;
    /// the interval is then widened to cover every observed flip.
    pub nonmonotone: bool,
    /// β-scan table (β, fitted tail constant) behind the predicate.
    pub scan: Vec<(f64, f64)>,
}

const BETA_SCAN_LO: f64 = -6.0;
const BETA_SCAN_HI: f64 = 26.0;
const BETA_SCAN_STEP: f64 = 0.5;

fn forward_tail(dimension: u32, beta: f64, rho_max: f64, tol: f64) -> Result<Option<f64>> {
    let family = ProfileFamily::forward(dimension)?;
    // Only the tail window matters; sample it densely and skip the interior.
    let mut outputs: Vec<f64> = (0..=80)
        .map(|j| 0.5 * rho_max + 0.5 * rho_max * j as f64 / 80.0)
        .collect();
    outputs.insert(0, 0.25 * rho_max);
    let sol = shoot_with_outputs(family, beta, rho_max, tol, &outputs)?;
    if sol.outcome != ShotOutcome::GlobalDecay {
        return Ok(None);
    }
    Ok(sol.tail_constant)
}

/// Finds a forward-family profile whose tail constant matches `c` within
/// `tol`, by scanning β and bisecting a straddling pair. The returned shot
/// is sampled like [`shoot`]. Fails when no scanned β attains the constant.
pub fn forward_profile_with_tail(
    dimension: u32,
    c: f64,
    rho_max: f64,
    tol: f64,
    shot_tol: f64,
) -> Result<ProfileSolution> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let steps = ((BETA_SCAN_HI - BETA_SCAN_LO) / BETA_SCAN_STEP).round() as usize;
    let betas: Vec<f64> = (0..=steps)
        .map(|i| BETA_SCAN_LO + BETA_SCAN_STEP * i as f64)
        .collect();
    let scan_res: Result<Vec<(f64, Option<f64>)>> = betas
        .par_iter()
        .map(|&b| Ok((b, forward_tail(dimension, b, rho_max, shot_tol)?)))
        .collect();
    let scan: Vec<(f64, f64)> = scan_res?
        .into_iter()
        .filter_map(|(b, t)| t.map(|t| (b, t)))
        .collect();
    let family = ProfileFamily::forward(dimension)?;
    for w in scan.windows(2) {
        let (b_lo, c_lo) = w[0];
        let (b_hi, c_hi) = w[1];
        if (c_lo - c) * (c_hi - c) <= 0.0 {
            let (mut blo, mut bhi) = (b_lo, b_hi);
            let mut flo = c_lo - c;
            let mut best = None;
            for _ in 0..80 {
                let bm = 0.5 * (blo + bhi);
                let cm = match forward_tail(dimension, bm, rho_max, shot_tol)? {
                    Some(cm) => cm,
                    None => break,
                };
                if (cm - c).abs() <= tol {
                    best = Some(bm);
                    break;
                }
                if flo * (cm - c) <= 0.0 {
                    bhi = bm;
                } else {
                    blo = bm;
                    flo = cm - c;
                }
                if bhi - blo < 1e-12 {
                    break;
                }
            }
            if let Some(beta) = best {
                return shoot(family, beta, rho_max, shot_tol);
            }
        }
    }
    Err(Error::Domain(format!(
        "no forward profile with tail constant {c} found in the β scan"
    )))
}

/// Brackets the threshold tail constant of the forward family by bisection
/// of the predicate "some center value β produces tail constant c".
///
/// The predicate is evaluated against a β-scan of the attained tail
/// constants, refined by β-bisection near the target. Requires N in [3, 9].
pub fn bracket_c_sharp(
    dimension: u32,
    search: (f64, f64),
    tol: f64,
    rho_max: f64,
    shot_tol: f64,
) -> Result<CSharpBracket> {
    if !(3..=9).contains(&dimension) {
        return Err(Error::Config(format!(
            "threshold bracketing needs dimension in [3, 9], got {dimension}"
        )));
    }
    if !(search.0 < search.1) {
        return Err(Error::Config(format!(
            "search range must be increasing, got ({}, {})",
            search.0, search.1
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }

    let steps = ((BETA_SCAN_HI - BETA_SCAN_LO) / BETA_SCAN_STEP).round() as usize;
    let betas: Vec<f64> = (0..=steps)
        .map(|i| BETA_SCAN_LO + BETA_SCAN_STEP * i as f64)
        .collect();
    let scan_res: Result<Vec<(f64, Option<f64>)>> = betas
        .par_iter()
        .map(|&b| Ok((b, forward_tail(dimension, b, rho_max, shot_tol)?)))
        .collect();
    let scan: Vec<(f64, f64)> = scan_res?
        .into_iter()
        .filter_map(|(b, c)| c.map(|c| (b, c)))
        .collect();
    if scan.len() < 4 {
        return Err(Error::Domain(
            "β-scan produced too few fitted tails to drive the predicate".into(),
        ));
    }

    let exists = |c: f64| -> Result<bool> {
        // A bracketing pair in the scan pins a matching β by bisection.
        for w in scan.windows(2) {
            let (b_lo, c_lo) = w[0];
            let (b_hi, c_hi) = w[1];
            if (c_lo - c) * (c_hi - c) <= 0.0 {
                let (mut blo, mut bhi) = (b_lo, b_hi);
                let mut flo = c_lo - c;
                for _ in 0..80 {
                    let bm = 0.5 * (blo + bhi);
                    let cm = match forward_tail(dimension, bm, rho_max, shot_tol)? {
                        Some(cm) => cm,
                        None => return Ok(false),
                    };
                    if (cm - c).abs() <= 0.25 * tol {
                        return Ok(true);
                    }
                    if flo * (cm - c) <= 0.0 {
                        bhi = bm;
                    } else {
                        blo = bm;
                        flo = cm - c;
                    }
                    if bhi - blo < 1e-12 {
                        break;
                    }
                }
                return Ok((forward_tail(dimension, 0.5 * (blo + bhi), rho_max, shot_tol)?
                    .map(|cm| (cm - c).abs() <= tol))
                .unwrap_or(false));
            }
        }
        Ok(false)
    };

    if !exists(search.0)? {
        return Err(Error::Domain(format!(
            "no forward profile found with tail constant {} (search range too high?)",
            search.0
        )));
    }
    if exists(search.1)? {
        return Err(Error::Domain(format!(
            "a forward profile still exists at tail constant {} (search range too low?)",
            search.1
        )));
    }

    let (mut c_lo, mut c_hi) = search;
    while c_hi - c_lo > tol {
        let mid = 0.5 * (c_lo + c_hi);
        if exists(mid)? {
            c_lo = mid;
        } else {
            c_hi = mid;
        }
    }

    // Probe around the bracket for predicate inversions; widen over any.
    let mut nonmonotone = false;
    let probes = 6usize;
    let lo_edge = c_lo - 2.0 * tol;
    let hi_edge = c_hi + 2.0 * tol;
    let mut flips = Vec::new();
    let mut prev: Option<bool> = None;
    for i in 0..=probes {
        let c = lo_edge + (hi_edge - lo_edge) * i as f64 / probes as f64;
        let e = exists(c)?;
        if let Some(p) = prev {
            if p != e {
                flips.push(c);
            }
        }
        prev = Some(e);
    }
    if flips.len() > 1 {
        nonmonotone = true;
        c_lo = c_lo.min(flips[0] - (hi_edge - lo_edge) / probes as f64);
        c_hi = c_hi.max(*flips.last().unwrap());
    }

    let floor = (2.0 * (dimension as f64 - 2.0)).ln();
    if !(c_lo > floor) {
        return Err(Error::InternalConsistency(format!(
            "bracket lower end {c_lo} fell below the singular-profile constant {floor}"
        )));
    }

    Ok(CSharpBracket {
        c_lo,
        c_hi,
        dimension,
        rho_max,
        nonmonotone,
        scan,
    })
}
