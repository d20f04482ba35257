use std::collections::BTreeMap;
use std::fmt::Display;
use std::fmt::Write as _;

use serde::Serialize;

use residue_symbols::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// One randomized or enumerated instance of a suite.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub index: usize,
    pub inputs: BTreeMap<String, String>,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Collects the inputs and checks of a case while it runs, so that a case
/// that errors half way still reports what it was given.
pub struct Case {
    index: usize,
    inputs: BTreeMap<String, String>,
    expected: Vec<String>,
    actual: Vec<String>,
    pass: bool,
}

impl Case {
    pub fn new(index: usize) -> Case {
        Case {
            index,
            inputs: BTreeMap::new(),
            expected: Vec::new(),
            actual: Vec::new(),
            pass: true,
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn input(&mut self, name: &str, value: impl Display) {
        self.inputs.insert(name.to_string(), value.to_string());
    }

    /// Record a named comparison.
    pub fn check<T: PartialEq + Display>(&mut self, name: &str, expected: &T, actual: &T) {
        self.expected.push(format!("{name}: {expected}"));
        self.actual.push(format!("{name}: {actual}"));
        self.pass &= expected == actual;
    }

    /// Record a named predicate.
    pub fn holds(&mut self, name: &str, ok: bool, detail: impl Display) {
        self.expected.push(format!("{name}: true"));
        self.actual.push(format!("{name}: {ok} ({detail})"));
        self.pass &= ok;
    }

    pub fn fail(&mut self, e: &Error) {
        self.actual.push(format!("error: {e}"));
        self.pass = false;
    }

    pub fn finish(self) -> CaseRecord {
        CaseRecord {
            index: self.index,
            inputs: self.inputs,
            expected: self.expected.join("; "),
            actual: self.actual.join("; "),
            pass: self.pass && !self.expected.is_empty(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub config: serde_json::Value,
    pub cases: Vec<CaseRecord>,
    pub failures: usize,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    pub fn new(suite: &str, config: serde_json::Value, cases: Vec<CaseRecord>, elapsed_ms: Option<u128>) -> Report {
        let failures = cases.iter().filter(|c| !c.pass).count();
        Report {
            suite: suite.to_string(),
            config,
            cases,
            failures,
            elapsed_ms,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let total = self.cases.len();
        let _ = write!(
            out,
            "suite {}: {} of {} cases passed",
            self.suite,
            total - self.failures,
            total
        );
        if let Some(ms) = self.elapsed_ms {
            let _ = write!(out, " in {ms} ms");
        }
        out.push('\n');
        let _ = writeln!(out, "config: {}", self.config);
        for c in self.cases.iter().filter(|c| !c.pass) {
            let _ = writeln!(out, "FAIL case {}", c.index);
            for (k, v) in &c.inputs {
                let _ = writeln!(out, "  {k} = {v}");
            }
            let _ = writeln!(out, "  expected {}", c.expected);
            let _ = writeln!(out, "  actual   {}", c.actual);
        }
        out
    }
}
