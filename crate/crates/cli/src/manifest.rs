//! Run manifests: one CSV naming the run, its config hash, every check
//! outcome, and every file in the run directory.
//!
//! The manifest itself is deterministic for a given config and seed; wall
//! clock timestamps go to `run.log` instead so reruns stay bit-identical.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A measured quantity recorded for the report, not a gate.
    Value,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Value => "value",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub value: String,
}

impl Check {
    pub fn gate(name: &str, ok: bool, value: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            value: value.into(),
        }
    }

    pub fn value(name: &str, value: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: CheckStatus::Value,
            value: value.into(),
        }
    }
}

pub fn any_failed(checks: &[Check]) -> bool {
    checks.iter().any(|c| c.status == CheckStatus::Fail)
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub name: String,
    pub config_hash: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Every file in the run directory, the manifest itself included.
    pub files: Vec<String>,
    pub started_unix: f64,
    pub finished_unix: f64,
}

impl RunManifest {
    /// Header `record,name,status,value`; `meta` rows carry the identity,
    /// `check` rows the outcomes, `file` rows the directory contents.
    pub fn manifest_csv(&self) -> String {
        let mut out = String::from("record,name,status,value\n");
        let _ = writeln!(out, "meta,name,,{}", self.name);
        let _ = writeln!(out, "meta,config_hash,,{}", self.config_hash);
        let _ = writeln!(out, "meta,seed,,{}", self.seed);
        for c in &self.checks {
            let _ = writeln!(out, "check,{},{},{}", c.name, c.status.label(), c.value);
        }
        let mut files = self.files.clone();
        files.sort();
        for f in &files {
            let _ = writeln!(out, "file,{f},,");
        }
        out
    }

    /// Wall-clock record; the one file whose bytes may differ across reruns.
    pub fn run_log(&self) -> String {
        format!(
            "name {}\nconfig_hash {}\nstarted_unix {:.3}\nfinished_unix {:.3}\n",
            self.name, self.config_hash, self.started_unix, self.finished_unix
        )
    }
}
