//! JSON and text reports of one configured analysis run.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::analyzers::{cross_check_with, quotient_by_orbit_closure, EquivalenceReport, QuotientSystem, Violation};
use crate::config::{condition_by_name, AnalysisConfig};
use crate::verdict::{Budget, Outcome, Verdict, Witness};
use crate::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct VerdictEntry {
    pub condition: String,
    pub outcome: Outcome,
    pub exact: bool,
    pub witness: Witness,
    pub budget: Budget,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl VerdictEntry {
    fn new(condition: String, v: &Verdict) -> Self {
        VerdictEntry {
            condition,
            outcome: v.outcome,
            exact: v.exact,
            witness: v.witness.clone(),
            budget: v.budget,
            note: v.note.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Consistency {
    pub consistent: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum QuotientEntry {
    Built(QuotientSystem),
    Refused { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: AnalysisConfig,
    pub system: String,
    pub verdicts: Vec<VerdictEntry>,
    pub consistency: Consistency,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientEntry>,
    pub equivalence: EquivalenceReport,
    pub version: String,
    pub timing: Timing,
}

/// Builds the system, runs the cross-checker and assembles the report. An
/// inconsistent run still yields a report; callers inspect `consistency`.
pub fn run(config: &AnalysisConfig) -> Result<Report> {
    let start = Instant::now();
    let sys = config.system.build(config.seed)?;
    let budget = config.analysis_budget(sys.as_ref())?;
    let flip = config.fault.as_ref().and_then(|f| condition_by_name(&f.flip));
    let hook = |c, mut v: Verdict| {
        if Some(c) == flip {
            v.outcome = match v.outcome {
                Outcome::True => Outcome::False,
                Outcome::False => Outcome::True,
                Outcome::Unknown => Outcome::False,
            };
            v.exact = true;
            v.note = format!("injected fault; original note: {}", v.note);
        }
        v
    };
    let equivalence = cross_check_with(&sys, &budget, &hook)?;

    let mut verdicts: Vec<VerdictEntry> = equivalence
        .conditions
        .iter()
        .filter(|c| config.selects(c.condition.name()))
        .map(|c| VerdictEntry::new(c.condition.to_string(), &c.verdict))
        .collect();
    if config.selects("equicontinuous") {
        verdicts.push(VerdictEntry::new("equicontinuous".into(), &equivalence.equicontinuous));
    }
    if config.selects("distal") {
        verdicts.push(VerdictEntry::new("distal".into(), &equivalence.distal));
    }
    let quotient = config.selects("quotient").then(|| match quotient_by_orbit_closure(sys.as_ref()) {
        Ok(q) => QuotientEntry::Built(q),
        Err(e) => QuotientEntry::Refused { reason: e.to_string() },
    });

    Ok(Report {
        config: config.clone(),
        system: equivalence.system.clone(),
        verdicts,
        consistency: Consistency { consistent: equivalence.consistent, violations: equivalence.violations.clone() },
        quotient,
        equivalence,
        version: VERSION.to_string(),
        timing: Timing { elapsed_ms: start.elapsed().as_millis() as u64 },
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON report with the timing block removed, for reproducibility
    /// comparisons.
    pub fn content_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("reports serialize");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string_pretty(&value).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "system: {}", self.system);
        let b = &self.equivalence.budget;
        let level = b.level.map_or("-".to_string(), |l| l.to_string());
        let _ = writeln!(out, "budget: level {level}, radius {}, {} points", b.radius, b.samples);
        for v in &self.verdicts {
            let exact = if v.exact { " (exact)" } else { "" };
            let note = if v.note.is_empty() { String::new() } else { format!("  [{}]", v.note) };
            let _ = writeln!(out, "{:<32} {}{exact}{note}", v.condition, v.outcome);
        }
        match &self.quotient {
            Some(QuotientEntry::Built(q)) => {
                let _ = writeln!(out, "quotient: {} classes, verified = {}", q.classes.len(), q.verified());
            }
            Some(QuotientEntry::Refused { reason }) => {
                let _ = writeln!(out, "quotient: refused ({reason})");
            }
            None => {}
        }
        let _ = writeln!(out, "consistent: {}", self.consistency.consistent);
        for v in &self.consistency.violations {
            let _ = writeln!(out, "  violation: {} ({})", v.rule, v.detail);
        }
        let _ = writeln!(out, "version {} in {} ms", self.version, self.timing.elapsed_ms);
        out
    }
}
