use std::fmt::Write as _;

use evalrep_core::{BSubscript, ELambdaTerm};
use serde::Serialize;
use serde_json::Value;

use crate::config::{Command, RunConfig};

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Conventions {
    pub f0_b_subscript: BSubscript,
    pub e_theta_lambda_term: ELambdaTerm,
    pub iso_condition: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            f0_b_subscript: BSubscript::RESOLVED,
            e_theta_lambda_term: ELambdaTerm::RESOLVED,
            iso_condition: "a_+ = a_- eps^{2(lambda^(i)+i)} for i in supp(lambda)",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
}

/// What a command hands back before it is wrapped in a report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Vec<Value>,
    pub lines: Vec<String>,
    pub checks: usize,
    pub failures: usize,
    pub sweep: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: Tool,
    pub command: &'static str,
    pub config: RunConfig,
    pub conventions: Conventions,
    pub notes: Vec<String>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Value>,
    pub results: Vec<Value>,
    #[serde(skip)]
    lines: Vec<String>,
}

impl RunReport {
    pub fn new(cmd: Command, config: RunConfig, notes: Vec<String>, outcome: Outcome) -> Self {
        RunReport {
            tool: Tool {
                name: env!("CARGO_BIN_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            command: cmd.name(),
            config,
            conventions: Conventions::default(),
            notes,
            summary: Summary {
                passed: outcome.failures == 0,
                checks: outcome.checks,
                failures: outcome.failures,
            },
            sweep: outcome.sweep,
            results: outcome.results,
            lines: outcome.lines,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.passed
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {} n={} l={} backend={}",
            self.tool.name, self.tool.version, self.command, c.n, c.l, c.backend.name()
        );
        for note in &self.notes {
            let _ = writeln!(s, "note: {note}");
        }
        for line in &self.lines {
            let _ = writeln!(s, "{line}");
        }
        let _ = writeln!(
            s,
            "summary: {} ({} checks, {} failures)",
            if self.summary.passed { "PASS" } else { "FAIL" },
            self.summary.checks,
            self.summary.failures
        );
        s
    }
}

pub fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
