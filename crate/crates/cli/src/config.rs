//! Plain-text `key = value` configuration.
//!
//! Every key has a default; an empty file is a valid config. Unknown keys
//! and malformed values are errors naming the key and the line, so a typo
//! cannot silently fall back to a default. The canonical dump (fixed key
//! order, round-trip float formatting) feeds the config hash recorded in
//! each run manifest.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use blowuplab_core::csvio::fmt_f64;
use blowuplab_core::error::{Error, Result};
use blowuplab_core::evolution::{DEFAULT_DT_MAX, DEFAULT_SIGMA, DEFAULT_U_STOP};
use blowuplab_core::evolution::StepControls;
use blowuplab_core::grid::{Grading, RadialField, RadialGrid};
use blowuplab_core::profiles::{FamilyKind, ProfileFamily};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    Constant(f64),
    /// a (1 - (r/R)^2): peak `a` at the origin, zero on the boundary.
    Bump(f64),
    /// min(-2 log r + c, cap): the singular tail with constant `c`, capped
    /// so the field stays finite at the origin.
    CappedSingular(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitExpect {
    None,
    PureLog,
    LogLog,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroReference {
    None,
    /// ψ_a from the scaled steady family (N = 1 or 2).
    ScaledSteady { a: f64 },
    /// -2 log r + c on a unit-radius window.
    Omega,
    /// Φ* = -2 log r + log(2(N-2)).
    Singular,
}

/// Effective configuration: file overrides on top of the defaults below.
#[derive(Debug, Clone, PartialEq)]
pub struct LabConfig {
    pub dimension: u32,
    pub radius: f64,
    /// Grid intervals; node count is this plus one.
    pub nodes: usize,
    /// boundary spacing / origin spacing; 1 means uniform.
    pub grading_ratio: f64,
    pub sigma: f64,
    pub dt_max: f64,
    pub u_stop: f64,
    pub truncation_levels: Vec<f64>,
    pub horizon: f64,
    pub disable_diffusion: bool,
    pub disable_reaction: bool,
    pub seed: u64,
    pub trials: usize,
    pub q_bound: f64,
    pub initial: InitialData,
    pub initial_cap: f64,
    pub family: FamilyKind,
    pub center: f64,
    pub rho_max: f64,
    pub shot_tol: f64,
    pub alphas: Vec<f64>,
    /// Tail constant target: forward-shot selection and the omega reference.
    pub c: f64,
    pub search_lo: f64,
    pub search_hi: f64,
    pub bracket_tol: f64,
    /// Continuation comparison times; empty means six uniform times up to
    /// the horizon.
    pub output_times: Vec<f64>,
    /// Upper radius of the final-profile fit window; the lower edge is
    /// three origin spacings.
    pub fit_hi: f64,
    pub fit_expect: FitExpect,
    pub reference: ZeroReference,
    pub window_lo: f64,
    /// Upper radius for zero-number windows; 0 means the domain radius.
    pub window_hi: f64,
}

impl Default for LabConfig {
    fn default() -> Self {
        Self {
            dimension: 3,
            radius: 1.0,
            nodes: 256,
            grading_ratio: 1.0,
            sigma: DEFAULT_SIGMA,
            dt_max: DEFAULT_DT_MAX,
            u_stop: DEFAULT_U_STOP,
            truncation_levels: vec![1e4, 1e5, 1e6],
            horizon: 0.01,
            disable_diffusion: false,
            disable_reaction: false,
            seed: 7,
            trials: 100,
            q_bound: 4.0,
            initial: InitialData::Bump(7.0),
            initial_cap: 50.0,
            family: FamilyKind::Backward,
            center: 0.0,
            rho_max: 10.0,
            shot_tol: 1e-10,
            alphas: vec![-5.0, -1.0, 0.0, 1.0, 3.0],
            c: 0.5,
            search_lo: 0.75,
            search_hi: 1.5,
            bracket_tol: 1e-3,
            output_times: Vec::new(),
            fit_hi: 0.5,
            fit_expect: FitExpect::None,
            reference: ZeroReference::None,
            window_lo: 0.01,
            window_hi: 0.0,
        }
    }
}

fn parse_err(line: usize, key: &str, want: &str, got: &str) -> Error {
    Error::Config(format!("line {line}: key `{key}` expects {want}, got `{got}`"))
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| parse_err(line, key, "a number", v))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(parse_err(line, key, "true or false", v)),
    }
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| s.trim().parse().map_err(|_| parse_err(line, key, "comma-separated numbers", v)))
        .collect()
}

impl LabConfig {
    /// Parses a config file over the defaults. Lines are `key = value`;
    /// blank lines and `#` comments are skipped.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {line}: expected `key = value`, got `{stripped}`"
                )));
            };
            let key = key.trim();
            let v = value.trim();
            match key {
                "dimension" => {
                    cfg.dimension = v
                        .parse()
                        .map_err(|_| parse_err(line, "dimension", "a positive integer", v))?;
                }
                "radius" => cfg.radius = parse_f64(line, key, v)?,
                "nodes" => {
                    cfg.nodes =
                        v.parse().map_err(|_| parse_err(line, "nodes", "a positive integer", v))?;
                }
                "grading_ratio" => cfg.grading_ratio = parse_f64(line, key, v)?,
                "sigma" => cfg.sigma = parse_f64(line, key, v)?,
                "dt_max" => cfg.dt_max = parse_f64(line, key, v)?,
                "u_stop" => cfg.u_stop = parse_f64(line, key, v)?,
                "truncation_levels" => cfg.truncation_levels = parse_list(line, key, v)?,
                "horizon" => cfg.horizon = parse_f64(line, key, v)?,
                "disable_diffusion" => cfg.disable_diffusion = parse_bool(line, key, v)?,
                "disable_reaction" => cfg.disable_reaction = parse_bool(line, key, v)?,
                "seed" => {
                    cfg.seed = v
                        .parse()
                        .map_err(|_| parse_err(line, "seed", "a nonnegative integer", v))?;
                }
                "trials" => {
                    cfg.trials = v
                        .parse()
                        .map_err(|_| parse_err(line, "trials", "a positive integer", v))?;
                }
                "q_bound" => cfg.q_bound = parse_f64(line, key, v)?,
                "initial" => cfg.initial = Self::parse_initial(line, v)?,
                "initial_cap" => cfg.initial_cap = parse_f64(line, key, v)?,
                "family" => {
                    cfg.family = match v {
                        "backward" => FamilyKind::Backward,
                        "forward" => FamilyKind::Forward,
                        "steady" => FamilyKind::Steady,
                        _ => return Err(parse_err(line, key, "backward, forward, or steady", v)),
                    };
                }
                "center" => cfg.center = parse_f64(line, key, v)?,
                "rho_max" => cfg.rho_max = parse_f64(line, key, v)?,
                "shot_tol" => cfg.shot_tol = parse_f64(line, key, v)?,
                "alphas" => cfg.alphas = parse_list(line, key, v)?,
                "c" => cfg.c = parse_f64(line, key, v)?,
                "search_lo" => cfg.search_lo = parse_f64(line, key, v)?,
                "search_hi" => cfg.search_hi = parse_f64(line, key, v)?,
                "bracket_tol" => cfg.bracket_tol = parse_f64(line, key, v)?,
                "output_times" => cfg.output_times = parse_list(line, key, v)?,
                "fit_hi" => cfg.fit_hi = parse_f64(line, key, v)?,
                "fit_expect" => {
                    cfg.fit_expect = match v {
                        "none" => FitExpect::None,
                        "purelog" => FitExpect::PureLog,
                        "loglog" => FitExpect::LogLog,
                        _ => return Err(parse_err(line, key, "none, purelog, or loglog", v)),
                    };
                }
                "reference" => {
                    cfg.reference = match v {
                        "none" => ZeroReference::None,
                        "omega" => ZeroReference::Omega,
                        "singular" => ZeroReference::Singular,
                        _ => match v.strip_prefix("scaled-steady:") {
                            Some(a) => ZeroReference::ScaledSteady {
                                a: parse_f64(line, key, a)?,
                            },
                            None => {
                                return Err(parse_err(
                                    line,
                                    key,
                                    "none, omega, singular, or scaled-steady:<a>",
                                    v,
                                ))
                            }
                        },
                    };
                }
                "window_lo" => cfg.window_lo = parse_f64(line, key, v)?,
                "window_hi" => cfg.window_hi = parse_f64(line, key, v)?,
                _ => {
                    return Err(Error::Config(format!("line {line}: unknown key `{key}`")));
                }
            }
        }
        Ok(cfg)
    }

    fn parse_initial(line: usize, v: &str) -> Result<InitialData> {
        let (kind, amp) = v.split_once(':').unwrap_or((v, ""));
        let amp_f = || parse_f64(line, "initial", amp);
        match kind {
            "constant" => Ok(InitialData::Constant(amp_f()?)),
            "bump" => Ok(InitialData::Bump(amp_f()?)),
            "capped-singular" => Ok(InitialData::CappedSingular(amp_f()?)),
            _ => Err(parse_err(
                line,
                "initial",
                "constant:<a>, bump:<a>, or capped-singular:<c>",
                v,
            )),
        }
    }

    fn initial_label(&self) -> String {
        match self.initial {
            InitialData::Constant(a) => format!("constant:{}", fmt_f64(a)),
            InitialData::Bump(a) => format!("bump:{}", fmt_f64(a)),
            InitialData::CappedSingular(c) => format!("capped-singular:{}", fmt_f64(c)),
        }
    }

    fn reference_label(&self) -> String {
        match self.reference {
            ZeroReference::None => "none".into(),
            ZeroReference::Omega => "omega".into(),
            ZeroReference::Singular => "singular".into(),
            ZeroReference::ScaledSteady { a } => format!("scaled-steady:{}", fmt_f64(a)),
        }
    }

    /// Canonical dump: every key in fixed order, floats in round-trip
    /// notation. Identical effective configs dump identically no matter how
    /// the source file was formatted.
    pub fn canonical(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let _ = writeln!(out, "dimension = {}", self.dimension);
        let _ = writeln!(out, "radius = {}", fmt_f64(self.radius));
        let _ = writeln!(out, "nodes = {}", self.nodes);
        let _ = writeln!(out, "grading_ratio = {}", fmt_f64(self.grading_ratio));
        let _ = writeln!(out, "sigma = {}", fmt_f64(self.sigma));
        let _ = writeln!(out, "dt_max = {}", fmt_f64(self.dt_max));
        let _ = writeln!(out, "u_stop = {}", fmt_f64(self.u_stop));
        let _ = writeln!(out, "truncation_levels = {}", list(&self.truncation_levels));
        let _ = writeln!(out, "horizon = {}", fmt_f64(self.horizon));
        let _ = writeln!(out, "disable_diffusion = {}", self.disable_diffusion);
        let _ = writeln!(out, "disable_reaction = {}", self.disable_reaction);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "trials = {}", self.trials);
        let _ = writeln!(out, "q_bound = {}", fmt_f64(self.q_bound));
        let _ = writeln!(out, "initial = {}", self.initial_label());
        let _ = writeln!(out, "initial_cap = {}", fmt_f64(self.initial_cap));
        let family = match self.family {
            FamilyKind::Backward => "backward",
            FamilyKind::Forward => "forward",
            FamilyKind::Steady => "steady",
        };
        let _ = writeln!(out, "family = {family}");
        let _ = writeln!(out, "center = {}", fmt_f64(self.center));
        let _ = writeln!(out, "rho_max = {}", fmt_f64(self.rho_max));
        let _ = writeln!(out, "shot_tol = {}", fmt_f64(self.shot_tol));
        let _ = writeln!(out, "alphas = {}", list(&self.alphas));
        let _ = writeln!(out, "c = {}", fmt_f64(self.c));
        let _ = writeln!(out, "search_lo = {}", fmt_f64(self.search_lo));
        let _ = writeln!(out, "search_hi = {}", fmt_f64(self.search_hi));
        let _ = writeln!(out, "bracket_tol = {}", fmt_f64(self.bracket_tol));
        let _ = writeln!(out, "output_times = {}", list(&self.output_times));
        let _ = writeln!(out, "fit_hi = {}", fmt_f64(self.fit_hi));
        let expect = match self.fit_expect {
            FitExpect::None => "none",
            FitExpect::PureLog => "purelog",
            FitExpect::LogLog => "loglog",
        };
        let _ = writeln!(out, "fit_expect = {expect}");
        let _ = writeln!(out, "reference = {}", self.reference_label());
        let _ = writeln!(out, "window_lo = {}", fmt_f64(self.window_lo));
        let _ = writeln!(out, "window_hi = {}", fmt_f64(self.window_hi));
        out
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut out = String::with_capacity(64);
        for b in digest {
            let _ = write!(out, "{b:02x}");
        }
        out
    }

    pub fn grading(&self) -> Grading {
        if self.grading_ratio == 1.0 {
            Grading::Uniform
        } else {
            Grading::Geometric {
                ratio: self.grading_ratio,
            }
        }
    }

    pub fn build_grid(&self) -> Result<Arc<RadialGrid>> {
        Ok(Arc::new(RadialGrid::build(
            self.dimension,
            self.radius,
            self.nodes,
            self.grading(),
        )?))
    }

    pub fn build_initial(&self, grid: &Arc<RadialGrid>) -> Result<RadialField> {
        let radius = grid.radius();
        match self.initial {
            InitialData::Constant(a) => RadialField::constant(grid, a),
            InitialData::Bump(a) => {
                RadialField::from_fn(grid, |r| a * (1.0 - (r / radius) * (r / radius)))
            }
            InitialData::CappedSingular(c) => {
                let cap = self.initial_cap;
                RadialField::from_fn(grid, |r| {
                    if r <= 0.0 {
                        cap
                    } else {
                        (-2.0 * r.ln() + c).min(cap)
                    }
                })
            }
        }
    }

    pub fn step_controls(&self) -> StepControls {
        StepControls {
            sigma: self.sigma,
            dt_max: self.dt_max,
            u_stop: self.u_stop,
            disable_diffusion: self.disable_diffusion,
            disable_reaction: self.disable_reaction,
        }
    }

    pub fn profile_family(&self) -> Result<ProfileFamily> {
        ProfileFamily::new(self.family, self.dimension)
    }

    /// Continuation comparison times: the configured list, or six uniform
    /// times ending at the horizon.
    pub fn continuation_times(&self) -> Vec<f64> {
        if !self.output_times.is_empty() {
            return self.output_times.clone();
        }
        (1..=6).map(|i| self.horizon * i as f64 / 6.0).collect()
    }

    /// Zero-number window, with 0 as "up to the domain radius".
    pub fn window(&self) -> (f64, f64) {
        let hi = if self.window_hi == 0.0 { self.radius } else { self.window_hi };
        (self.window_lo, hi)
    }
}

/// Key table for `--help`: one line per key with its default.
pub fn keys_help() -> String {
    let d = LabConfig::default();
    let rows: Vec<(&str, String, &str)> = vec![
        ("dimension", d.dimension.to_string(), "spatial dimension N"),
        ("radius", d.radius.to_string(), "domain radius R"),
        ("nodes", d.nodes.to_string(), "grid intervals"),
        ("grading_ratio", d.grading_ratio.to_string(), "boundary/origin spacing; 1 = uniform"),
        ("sigma", d.sigma.to_string(), "reaction step-size safety factor"),
        ("dt_max", d.dt_max.to_string(), "hard step-size cap"),
        ("u_stop", d.u_stop.to_string(), "max-u threshold declaring blow-up"),
        ("truncation_levels", "1e4,1e5,1e6".into(), "continuation truncation levels"),
        ("horizon", d.horizon.to_string(), "final time of the run"),
        ("disable_diffusion", "false".into(), "ODE mode: drop the Laplacian"),
        ("disable_reaction", "false".into(), "heat mode: drop e^u"),
        ("seed", d.seed.to_string(), "RNG seed (Sturm harness)"),
        ("trials", d.trials.to_string(), "Sturm harness trial count"),
        ("q_bound", d.q_bound.to_string(), "Sturm harness potential bound"),
        ("initial", "bump:7".into(), "constant:<a> | bump:<a> | capped-singular:<c>"),
        ("initial_cap", d.initial_cap.to_string(), "origin cap for capped-singular data"),
        ("family", "backward".into(), "profile family: backward | forward | steady"),
        ("center", d.center.to_string(), "shot center value"),
        ("rho_max", d.rho_max.to_string(), "shot integration radius"),
        ("shot_tol", "1e-10".into(), "shot integrator tolerance"),
        ("alphas", "-5,-1,0,1,3".into(), "centers for map-alpha"),
        ("c", d.c.to_string(), "target tail constant"),
        ("search_lo", d.search_lo.to_string(), "threshold search lower edge"),
        ("search_hi", d.search_hi.to_string(), "threshold search upper edge"),
        ("bracket_tol", "1e-3".into(), "threshold bracket width target"),
        ("output_times", "(six uniform)".into(), "continuation comparison times"),
        ("fit_hi", d.fit_hi.to_string(), "final-profile fit window upper radius"),
        ("fit_expect", "none".into(), "gate: none | purelog | loglog"),
        ("reference", "none".into(), "zeros reference: none | omega | singular | scaled-steady:<a>"),
        ("window_lo", d.window_lo.to_string(), "zeros window lower radius"),
        ("window_hi", "0 (= radius)".into(), "zeros window upper radius"),
    ];
    let mut out = String::from("Config keys (plain text `key = value`, `#` comments):\n");
    for (key, default, what) in rows {
        let _ = writeln!(out, "  {key:<18} default {default:<14} {what}");
    }
    out
}
