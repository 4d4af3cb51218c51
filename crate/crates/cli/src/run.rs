//! Run directories, the per-run writer, and the config-driven subcommands.
//!
//! Every run writes CSV artifacts plus `config.txt` (the canonical
//! effective config), `manifest.csv`, and `run.log` into its own directory.
//! One writer owns a run directory at a time, so file lists and contents
//! are deterministic.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use blowuplab_core::continuation::{continue_past_blowup, ContinuationOptions};
use blowuplab_core::csvio::{
    self, alpha_map_csv, bracket_csv, continuation_levels_csv, field_csv, fmt_f64, history_csv,
    limit_csv, outcome_label, profile_csv, snapshots_csv,
};
use blowuplab_core::error::{Error, Result};
use blowuplab_core::evolution::{EvolutionState, Nonlinearity, RunEvent, RunOutcome};
use blowuplab_core::profiles::{bracket_c_sharp, map_alpha_to_c, shoot, SingularProfile};
use blowuplab_core::similarity::{classify_rate, fit_final_profile, ProfileModel, RateClass};
use blowuplab_core::sturm::{
    interior_zero_number, intersections_with, zero_number_monotonicity_harness, HarnessConfig,
    Reference,
};

use crate::cli::{Cli, Command};
use crate::config::{FitExpect, LabConfig, ZeroReference};
use crate::manifest::{any_failed, Check, RunManifest};
use crate::presets;

pub struct RunWriter {
    dir: PathBuf,
    files: Vec<String>,
    emit_gnuplot: bool,
    /// (file name, header line) of each CSV, for plot script generation.
    csv_headers: Vec<(String, String)>,
}

impl RunWriter {
    pub fn create(dir: PathBuf, emit_gnuplot: bool) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            files: Vec::new(),
            emit_gnuplot,
            csv_headers: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<()> {
        csvio::write_file(&self.dir.join(name), content)?;
        if name.ends_with(".csv") {
            let header = content.lines().next().unwrap_or("").to_string();
            self.csv_headers.push((name.to_string(), header));
        }
        self.files.push(name.to_string());
        Ok(())
    }

    fn plot_script(&self) -> String {
        let mut out = String::from("set datafile separator \",\"\nset key autotitle columnhead\n");
        for (name, header) in &self.csv_headers {
            // Radial artifacts plot value against r, skipping the leading
            // time column; everything else plots the first two columns.
            let using = match header.as_str() {
                "t,r,value" | "t,r,value,singular" | "s_or_tau,y,w" => "2:3",
                "level,t,r,value" => "3:4",
                _ => "1:2",
            };
            let _ = writeln!(out, "\nset title \"{name}\"");
            let _ = writeln!(out, "plot \"{name}\" using {using} with lines");
            let _ = writeln!(out, "pause -1");
        }
        out
    }

    /// Writes the trailing artifacts (plot script, canonical config, log,
    /// manifest), prints the check lines, and seals the run.
    pub fn finish(
        mut self,
        name: &str,
        cfg: &LabConfig,
        checks: Vec<Check>,
        started_unix: f64,
    ) -> Result<RunManifest> {
        if self.emit_gnuplot {
            let script = self.plot_script();
            csvio::write_file(&self.dir.join("plot.gp"), &script)?;
            self.files.push("plot.gp".into());
        }
        csvio::write_file(&self.dir.join("config.txt"), &cfg.canonical())?;
        self.files.push("config.txt".into());
        self.files.push("run.log".into());
        self.files.push("manifest.csv".into());
        let manifest = RunManifest {
            name: name.into(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            checks,
            files: self.files,
            started_unix,
            finished_unix: unix_now(),
        };
        csvio::write_file(&self.dir.join("run.log"), &manifest.run_log())?;
        csvio::write_file(&self.dir.join("manifest.csv"), &manifest.manifest_csv())?;
        for c in &manifest.checks {
            println!("{name}: {} {} {}", c.name, c.status.label(), c.value);
        }
        Ok(manifest)
    }
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Executes a parsed invocation; the returned code is the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(path) => LabConfig::load(path)?,
        None => LabConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    if let Command::Preset { name } = &cli.command {
        if name == "list" {
            for p in presets::PRESET_NAMES {
                println!("{p}");
            }
            return Ok(0);
        }
    }

    let out_root = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("BLOWUPLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"));
    let run_name = cli.command.run_name();
    let started = unix_now();
    let mut writer = RunWriter::create(out_root.join(&run_name), cli.emit_gnuplot)?;

    let result = match &cli.command {
        Command::Simulate => simulate(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::Continue => continue_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::Shoot => shoot_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::MapAlpha => map_alpha_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::BracketCsharp => bracket_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::Classify => classify_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::ProfileFit => profile_fit_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::Zeros => zeros_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::HarnessSturm => harness_cmd(&cfg, &mut writer).map(|c| (cfg.clone(), c)),
        Command::Preset { name } => presets::run(name, cfg.seed, &mut writer),
    };
    let (effective, checks) = match result {
        Ok(v) => v,
        Err(e) => {
            // A run that failed before writing anything leaves no directory
            // behind; remove_dir refuses once artifacts exist.
            let _ = std::fs::remove_dir(writer.dir());
            return Err(e);
        }
    };

    let manifest = writer.finish(&run_name, &effective, checks, started)?;
    Ok(if any_failed(&manifest.checks) { 1 } else { 0 })
}

fn event_label(event: &RunEvent) -> &'static str {
    match event {
        RunEvent::BlowupDetected { .. } => "blowup_detected",
        RunEvent::BlowupOverflow { .. } => "blowup_overflow",
        RunEvent::HorizonReached { .. } => "horizon_reached",
        RunEvent::NegativeInitialData { .. } => "negative_initial_data",
    }
}

pub fn rate_label(class: RateClass) -> &'static str {
    match class {
        RateClass::TypeI => "type_one",
        RateClass::TypeII => "type_two",
        RateClass::Undetermined => "undetermined",
    }
}

fn simulate(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let grid = cfg.build_grid()?;
    let u0 = cfg.build_initial(&grid)?;
    let controls = cfg.step_controls();
    let times: Vec<f64> = (1..=9).map(|i| cfg.horizon * i as f64 / 10.0).collect();
    let mut state = EvolutionState::new(u0, Nonlinearity::Exponential).with_snapshot_times(times);
    let outcome = state.run_until_blowup(&controls, cfg.horizon)?;
    state.record_snapshot();

    w.write("history.csv", &history_csv(state.history()))?;
    w.write("snapshots.csv", &snapshots_csv(state.snapshots()))?;
    w.write("final.csv", &field_csv(state.field()))?;

    let mut checks = Vec::new();
    match outcome {
        RunOutcome::Blowup(est) => {
            checks.push(Check::value("outcome", "blowup"));
            checks.push(Check::value("t_estimate", fmt_f64(est.t_estimate)));
            checks.push(Check::value("estimate_residual", fmt_f64(est.residual)));
            checks.push(Check::value("estimate_determined", est.determined.to_string()));
        }
        RunOutcome::NoBlowup { horizon } => {
            checks.push(Check::value("outcome", "no_blowup"));
            checks.push(Check::value("horizon", fmt_f64(horizon)));
        }
    }
    let events: Vec<&str> = state.events().iter().map(event_label).collect();
    checks.push(Check::value("events", events.join(";")));
    Ok(checks)
}

fn continue_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let grid = cfg.build_grid()?;
    let u0 = cfg.build_initial(&grid)?;
    let opts = ContinuationOptions::new(cfg.step_controls(), cfg.continuation_times());
    let cont = continue_past_blowup(&u0, &cfg.truncation_levels, cfg.horizon, &opts)?;

    w.write("limit.csv", &limit_csv(&cont.limit, grid.nodes()))?;
    w.write("levels.csv", &continuation_levels_csv(&cont))?;

    let last = cont.limit.last().ok_or_else(|| {
        Error::InternalConsistency("continuation produced no limit snapshots".into())
    })?;
    Ok(vec![
        Check::gate(
            "ordering_within_tol",
            cont.ordering.max_discrepancy <= cont.ordering.tol,
            fmt_f64(cont.ordering.max_discrepancy),
        ),
        Check::value("complete_blowup", cont.complete_blowup.to_string()),
        Check::value("final_singular_fraction", fmt_f64(last.singular_fraction())),
    ])
}

fn shoot_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let family = cfg.profile_family()?;
    let sol = shoot(family, cfg.center, cfg.rho_max, cfg.shot_tol)?;
    w.write("profile.csv", &profile_csv(&sol))?;
    Ok(vec![
        Check::value("outcome", outcome_label(sol.outcome)),
        Check::value(
            "tail_constant",
            sol.tail_constant.map(fmt_f64).unwrap_or_else(|| "none".into()),
        ),
        Check::value("tail_residual", fmt_f64(sol.tail_residual)),
    ])
}

fn map_alpha_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let (rows, exploratory) =
        map_alpha_to_c(&cfg.alphas, cfg.dimension, cfg.rho_max, cfg.shot_tol)?;
    w.write("map.csv", &alpha_map_csv(&rows))?;
    let fitted = rows.iter().filter(|r| r.c_alpha.is_some()).count();
    Ok(vec![
        Check::value("exploratory_dimension", exploratory.to_string()),
        Check::value("fitted_tails", fitted.to_string()),
    ])
}

fn bracket_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let bracket = bracket_c_sharp(
        cfg.dimension,
        (cfg.search_lo, cfg.search_hi),
        cfg.bracket_tol,
        cfg.rho_max,
        cfg.shot_tol,
    )?;
    w.write("bracket.csv", &bracket_csv(&bracket))?;
    let mut scan = String::from("beta,tail\n");
    for &(beta, tail) in &bracket.scan {
        let _ = writeln!(scan, "{},{}", fmt_f64(beta), fmt_f64(tail));
    }
    w.write("scan.csv", &scan)?;

    let floor = (2.0 * (cfg.dimension as f64 - 2.0)).ln();
    Ok(vec![
        Check::gate(
            "width_within_tol",
            bracket.c_hi - bracket.c_lo <= cfg.bracket_tol * (1.0 + 1e-9),
            fmt_f64(bracket.c_hi - bracket.c_lo),
        ),
        Check::gate("above_singular_floor", bracket.c_lo > floor, fmt_f64(bracket.c_lo)),
        Check::value("c_hi", fmt_f64(bracket.c_hi)),
        Check::value("nonmonotone", bracket.nonmonotone.to_string()),
    ])
}

fn classify_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let grid = cfg.build_grid()?;
    let u0 = cfg.build_initial(&grid)?;
    let mut state = EvolutionState::new(u0, Nonlinearity::Exponential);
    let outcome = state.run_until_blowup(&cfg.step_controls(), cfg.horizon)?;
    w.write("history.csv", &history_csv(state.history()))?;

    let RunOutcome::Blowup(est) = outcome else {
        return Ok(vec![
            Check::value("outcome", "no_blowup"),
            Check::value("classification", "undetermined"),
        ]);
    };
    let report = classify_rate(state.history(), est.t_estimate);
    let mut rate = String::from("classification,band_lo,band_hi,window_lo,window_hi,t_estimate\n");
    let _ = writeln!(
        rate,
        "{},{},{},{},{},{}",
        rate_label(report.classification),
        fmt_f64(report.band.0),
        fmt_f64(report.band.1),
        fmt_f64(report.window.0),
        fmt_f64(report.window.1),
        fmt_f64(est.t_estimate)
    );
    w.write("rate.csv", &rate)?;
    Ok(vec![
        Check::value("classification", rate_label(report.classification)),
        Check::value("band_width", fmt_f64(report.band.1 - report.band.0)),
        Check::value("t_estimate", fmt_f64(est.t_estimate)),
    ])
}

fn profile_fit_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let grid = cfg.build_grid()?;
    let u0 = cfg.build_initial(&grid)?;
    let opts = ContinuationOptions::new(cfg.step_controls(), cfg.continuation_times());
    let cont = continue_past_blowup(&u0, &cfg.truncation_levels, cfg.horizon, &opts)?;
    w.write("limit.csv", &limit_csv(&cont.limit, grid.nodes()))?;

    // Fit at the first singular output time (the final-time profile); when
    // nothing is singular the last snapshot serves.
    let snap = cont
        .limit
        .iter()
        .find(|s| s.any_singular())
        .or_else(|| cont.limit.last())
        .ok_or_else(|| {
            Error::InternalConsistency("continuation produced no limit snapshots".into())
        })?;
    let mut rs = Vec::new();
    let mut us = Vec::new();
    for (i, &r) in grid.nodes().iter().enumerate() {
        if !snap.singular[i] {
            rs.push(r);
            us.push(snap.values[i]);
        }
    }
    let window = (3.0 * grid.origin_spacing(), cfg.fit_hi);
    let pure = fit_final_profile(&rs, &us, window, ProfileModel::PureLog)?;
    let loglog = fit_final_profile(&rs, &us, window, ProfileModel::LogLog)?;

    let mut fits = String::from("model,constant,residual,window_lo,window_hi,fit_time\n");
    for (label, fit) in [("purelog", &pure), ("loglog", &loglog)] {
        let _ = writeln!(
            fits,
            "{label},{},{},{},{},{}",
            fmt_f64(fit.constant),
            fmt_f64(fit.residual),
            fmt_f64(fit.fit_window.0),
            fmt_f64(fit.fit_window.1),
            fmt_f64(snap.t)
        );
    }
    w.write("fits.csv", &fits)?;

    let winner = if pure.residual < loglog.residual { "purelog" } else { "loglog" };
    let mut checks = vec![
        Check::value("purelog_constant", fmt_f64(pure.constant)),
        Check::value("purelog_residual", fmt_f64(pure.residual)),
        Check::value("loglog_constant", fmt_f64(loglog.constant)),
        Check::value("loglog_residual", fmt_f64(loglog.residual)),
        Check::value("winner", winner),
    ];
    match cfg.fit_expect {
        FitExpect::None => {}
        FitExpect::PureLog => {
            checks.push(Check::gate("expected_model_wins", winner == "purelog", winner));
        }
        FitExpect::LogLog => {
            checks.push(Check::gate("expected_model_wins", winner == "loglog", winner));
        }
    }
    Ok(checks)
}

fn zeros_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let grid = cfg.build_grid()?;
    let u0 = cfg.build_initial(&grid)?;
    let count = interior_zero_number(&u0)?;

    let mut zeros = String::from("count,degenerate\n");
    let _ = writeln!(zeros, "{},{}", count.count, count.degenerate);
    w.write("zeros.csv", &zeros)?;
    let mut crossings = String::from("node_lo,node_hi\n");
    for &(lo, hi) in &count.crossing_locations {
        let _ = writeln!(crossings, "{lo},{hi}");
    }
    w.write("crossings.csv", &crossings)?;

    let mut checks = vec![
        Check::value("zero_number", count.count.to_string()),
        Check::value("degenerate", count.degenerate.to_string()),
    ];
    let reference = match cfg.reference {
        ZeroReference::None => None,
        ZeroReference::Omega => Some(Reference::OmegaC { c: cfg.c }),
        ZeroReference::Singular => {
            Some(Reference::Singular(SingularProfile::new(cfg.dimension)?))
        }
        ZeroReference::ScaledSteady { a } => Some(Reference::ScaledSteady {
            a,
            dimension: cfg.dimension,
        }),
    };
    if let Some(reference) = reference {
        let ic = intersections_with(&u0, &reference, cfg.window())?;
        checks.push(Check::value("intersections", ic.count.to_string()));
        checks.push(Check::value("intersections_degenerate", ic.degenerate.to_string()));
    }
    Ok(checks)
}

fn harness_cmd(cfg: &LabConfig, w: &mut RunWriter) -> Result<Vec<Check>> {
    let config = HarnessConfig {
        nodes: cfg.nodes,
        q_bound: cfg.q_bound,
        ..HarnessConfig::default()
    };
    let report = zero_number_monotonicity_harness(cfg.seed, cfg.trials as u64, &config)?;

    let mut harness = String::from("seed,trials,transitions_checked,max_initial_count,violations\n");
    let _ = writeln!(
        harness,
        "{},{},{},{},{}",
        cfg.seed,
        report.trials,
        report.transitions_checked,
        report.max_initial_count,
        report.violations.len()
    );
    w.write("harness.csv", &harness)?;
    if !report.violations.is_empty() {
        let mut rows = String::from("trial,t_from,t_to,count_from,count_to\n");
        for v in &report.violations {
            let _ = writeln!(
                rows,
                "{},{},{},{},{}",
                v.trial,
                fmt_f64(v.t_from),
                fmt_f64(v.t_to),
                v.count_from,
                v.count_to
            );
        }
        w.write("violations.csv", &rows)?;
    }
    Ok(vec![
        Check::gate(
            "no_violations",
            report.violations.is_empty(),
            report.violations.len().to_string(),
        ),
        Check::value("transitions_checked", report.transitions_checked.to_string()),
        Check::value("max_initial_count", report.max_initial_count.to_string()),
    ])
}
