//! Shared JSON envelope for verification reports:
//! `{check, target:{family,r,s}, verdict, failures:[..], elapsed_ms}`.

use serde::{Deserialize, Serialize};

use crate::rewrite::{ConfluenceReport, Presentation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub family: String,
    pub r: Option<usize>,
    pub s: Option<usize>,
}

impl Target {
    pub fn of(p: &Presentation) -> Target {
        match &p.meta {
            Some(m) => Target { family: m.family.clone(), r: m.r, s: m.s },
            None => Target { family: "custom".into(), r: None, s: None },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// which item failed, e.g. a relation, a triple or an axiom instance
    pub item: String,
    /// residue polynomial in literal syntax, when one exists
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub target: Target,
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
    /// informational notes that are not failures (e.g. which bracket
    /// orientation an action table matched)
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub info: Vec<String>,
    pub elapsed_ms: u64,
}

/// Aggregate output of the full verification pipeline: the confluence
/// verdict followed by the relation-level and axiom-level reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub target: Target,
    pub verdict: Verdict,
    pub confluence: ConfluenceReport,
    pub checks: Vec<Report>,
}

impl Report {
    pub fn new(check: impl Into<String>, target: Target) -> Report {
        Report {
            check: check.into(),
            target,
            verdict: Verdict::Pass,
            failures: Vec::new(),
            info: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn fail(&mut self, item: impl Into<String>, residue: Option<String>) {
        self.verdict = Verdict::Fail;
        self.failures.push(Failure { item: item.into(), residue });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.info.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
