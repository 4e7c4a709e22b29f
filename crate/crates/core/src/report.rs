//! Verification reports: a list of named checks, each pass or fail with a
//! witness, rendered as plain text or as a JSON tree. Both renderings start
//! with the header line `hopfkit-report v1`.

use serde::Serialize;

use crate::element::{AlgebraElement, Element, TensorElement};
use crate::scalar::Scalar;

pub const REPORT_HEADER: &str = "hopfkit-report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    /// Truncation order the check was decided at.
    pub order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Lowest power of `h` carried by a failing residue.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(id: impl Into<String>, order: u32) -> Self {
        Check {
            id: id.into(),
            status: Status::Pass,
            order,
            witness: None,
            residue_order: None,
            detail: None,
        }
    }

    pub fn fail(id: impl Into<String>, order: u32, witness: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Fail,
            order,
            witness: Some(witness.into()),
            residue_order: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Passes iff `residue` is zero; otherwise the rendered residue is the
    /// witness.
    pub fn from_residue<W: Witness>(id: impl Into<String>, residue: &W, names: &[String]) -> Self {
        if residue.is_zero_residue() {
            Check::pass(id, residue.order())
        } else {
            let mut c = Check::fail(id, residue.order(), residue.render_witness(names));
            c.residue_order = residue.lowest_h();
            c
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Anything that can serve as the residue of an equality check.
pub trait Witness {
    fn is_zero_residue(&self) -> bool;
    fn render_witness(&self, names: &[String]) -> String;
    fn lowest_h(&self) -> Option<u32>;
    fn order(&self) -> u32;
}

impl Witness for AlgebraElement {
    fn is_zero_residue(&self) -> bool {
        self.is_zero()
    }
    fn render_witness(&self, names: &[String]) -> String {
        self.render(names)
    }
    fn lowest_h(&self) -> Option<u32> {
        self.min_h_order()
    }
    fn order(&self) -> u32 {
        self.effective_order()
    }
}

impl Witness for TensorElement {
    fn is_zero_residue(&self) -> bool {
        self.is_zero()
    }
    fn render_witness(&self, names: &[String]) -> String {
        self.render(names)
    }
    fn lowest_h(&self) -> Option<u32> {
        self.min_h_order()
    }
    fn order(&self) -> u32 {
        self.effective_order()
    }
}

impl Witness for Scalar {
    fn is_zero_residue(&self) -> bool {
        self.is_zero()
    }
    fn render_witness(&self, _names: &[String]) -> String {
        self.to_string()
    }
    fn lowest_h(&self) -> Option<u32> {
        self.min_h_order()
    }
    fn order(&self) -> u32 {
        self.effective_order()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    /// Kind of verification, e.g. `hopf` or `consistency`.
    pub kind: String,
    pub subject: String,
    pub checks: Vec<Check>,
    /// Known deviations; shown but never failing.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
    /// Measured values reported without a pass/fail verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub info: Vec<(String, String)>,
}

impl Report {
    pub fn new(kind: impl Into<String>, subject: impl Into<String>) -> Self {
        Report {
            kind: kind.into(),
            subject: subject.into(),
            ..Report::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn annotate(&mut self, text: impl Into<String>) {
        self.annotations.push(text.into());
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.info.push((key.into(), value.into()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Sorts checks by id so output is independent of evaluation order.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self.annotations.sort();
        self.annotations.dedup();
        self.info.sort();
        self
    }

    fn render_text_into(&self, out: &mut String) {
        out.push_str(&format!("[{} {}]\n", self.kind, self.subject));
        for c in &self.checks {
            out.push_str(&format!("{} {} order={}", c.status.as_str(), c.id, c.order));
            if let Some(k) = c.residue_order {
                out.push_str(&format!(" residue-order={k}"));
            }
            out.push('\n');
            if let Some(d) = &c.detail {
                out.push_str(&format!("  detail: {d}\n"));
            }
            if let Some(w) = &c.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
        }
        for a in &self.annotations {
            out.push_str(&format!("annotation: {a}\n"));
        }
        for (k, v) in &self.info {
            out.push_str(&format!("info: {k} = {v}\n"));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "summary: {} ({} checks, {} failed)\n",
            if failed == 0 { "pass" } else { "fail" },
            self.checks.len(),
            failed
        ));
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Tree,
}

/// A complete run: configuration echo plus one report per verification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Document {
    pub config: Vec<(String, String)>,
    pub reports: Vec<Report>,
}

impl Document {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Tree => self.render_tree(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for (k, v) in &self.config {
            out.push_str(&format!("config: {k} = {v}\n"));
        }
        for r in &self.reports {
            r.render_text_into(&mut out);
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed() { "pass" } else { "fail" }
        ));
        out
    }

    pub fn render_tree(&self) -> String {
        #[derive(Serialize)]
        struct Tree<'a> {
            config: &'a [(String, String)],
            reports: &'a [Report],
            overall: Status,
        }
        let tree = Tree {
            config: &self.config,
            reports: &self.reports,
            overall: if self.passed() {
                Status::Pass
            } else {
                Status::Fail
            },
        };
        let body = serde_json::to_string_pretty(&tree).expect("report tree is serializable");
        format!("{REPORT_HEADER}\n{body}\n")
    }
}
