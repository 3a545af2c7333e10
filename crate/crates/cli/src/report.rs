use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use kdirac::tableau::CartanReport;
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// One expected-versus-actual comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub criterion: Option<u8>,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl Check {
    pub fn eq(name: impl Into<String>, expected: impl Serialize, actual: impl Serialize) -> Check {
        let expected = serde_json::to_value(expected).expect("plain data serializes");
        let actual = serde_json::to_value(actual).expect("plain data serializes");
        let pass = expected == actual;
        Check { name: name.into(), criterion: None, expected, actual, pass }
    }

    /// Passes when `actual > bound`.
    pub fn greater(name: impl Into<String>, bound: usize, actual: usize) -> Check {
        Check {
            name: name.into(),
            criterion: None,
            expected: Value::String(format!("> {bound}")),
            actual: actual.into(),
            pass: actual > bound,
        }
    }

    /// A computation that errored where a value was expected.
    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
        Check {
            name: name.into(),
            criterion: None,
            expected: Value::String("success".into()),
            actual: Value::String(format!("error: {err}")),
            pass: false,
        }
    }

    pub fn for_criterion(mut self, c: u8) -> Check {
        self.criterion = Some(c);
        self
    }
}

/// A Cartan test in the fixed report field names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanSection {
    pub label: String,
    pub ordering: String,
    pub dim_tableau: usize,
    pub characters: Vec<usize>,
    pub filtration_dims: Vec<usize>,
    pub rhs_cartan_test: usize,
    pub dim_prolongation: usize,
    pub involutive: bool,
}

impl CartanSection {
    pub fn new(label: impl Into<String>, r: CartanReport) -> Self {
        CartanSection {
            label: label.into(),
            ordering: r.ordering_label,
            dim_tableau: r.dim_a,
            characters: r.characters,
            filtration_dims: r.filtration_dims,
            rhs_cartan_test: r.rhs,
            dim_prolongation: r.dim_prolongation,
            involutive: r.involutive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionSummary {
    pub criterion: u8,
    pub title: String,
    pub checks: usize,
    pub failed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: Option<RunConfig>,
    pub cartan: Vec<CartanSection>,
    pub dims: BTreeMap<String, u64>,
    pub component_dims: BTreeMap<String, Vec<u64>>,
    pub checks: Vec<Check>,
    pub criteria: Vec<CriterionSummary>,
    /// Wall-clock time per stage, shown in text output only.
    #[serde(skip)]
    pub timing: Vec<(String, Duration)>,
}

impl Report {
    pub fn new(config: Option<RunConfig>) -> Self {
        Report { schema_version: SCHEMA_VERSION, config, ..Default::default() }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// Canonical JSON: sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.config {
            Some(cfg) => writeln!(out, "kdirac report: {cfg}").unwrap(),
            None => writeln!(out, "kdirac verification matrix").unwrap(),
        }
        for c in &self.cartan {
            writeln!(
                out,
                "cartan {} [{}]: dim {} characters {:?} rhs {} prolongation {} -> {}",
                c.label,
                c.ordering,
                c.dim_tableau,
                c.characters,
                c.rhs_cartan_test,
                c.dim_prolongation,
                if c.involutive { "involutive" } else { "not involutive" }
            )
            .unwrap();
        }
        for (name, d) in &self.dims {
            writeln!(out, "dim {name} = {d}").unwrap();
        }
        for (name, d) in &self.component_dims {
            writeln!(out, "components {name} = {d:?}").unwrap();
        }
        for s in &self.criteria {
            let verdict = if s.pass { "PASS" } else { "FAIL" };
            writeln!(out, "criterion {:>2}: {verdict} {} ({} checks, {} failed)", s.criterion, s.title, s.checks, s.failed).unwrap();
        }
        for c in &self.checks {
            if self.config.is_some() || !c.pass {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{verdict} {}: expected {}, got {}", c.name, c.expected, c.actual).unwrap();
            }
        }
        for (stage, t) in &self.timing {
            writeln!(out, "time {stage}: {:.1} ms", t.as_secs_f64() * 1e3).unwrap();
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        writeln!(out, "{} checks, {failed} failed", self.checks.len()).unwrap();
        out
    }
}
