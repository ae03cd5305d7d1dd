//! Report data model and rendering. JSON is the machine format; Markdown is a
//! rendering of the same data. Field order is fixed so identical runs produce
//! byte-identical JSON.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

use chenricci_core::inequality::{Direction, InequalityVerdict};
use chenricci_core::submersion::SignProfile;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct VerdictRecord {
    pub theorem_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub direction: String,
    pub holds: bool,
    pub equality: bool,
    pub conditions_met: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerdictRecord {
    pub fn from_core(v: InequalityVerdict<f64>) -> Self {
        Self {
            theorem_id: v.theorem_id,
            case: v.case,
            point: v.point,
            lhs: v.lhs,
            rhs: v.rhs,
            slack: v.slack,
            direction: match v.direction {
                Direction::Ge => ">=".into(),
                Direction::Le => "<=".into(),
            },
            holds: v.holds,
            equality: v.equality,
            conditions_met: v.conditions_met,
            notes: v.notes,
        }
    }
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct SignProfileRecord {
    pub s23: i8,
    pub s24: i8,
    pub s25: i8,
    pub residuals: [f64; 3],
    pub determined: [bool; 3],
}

impl SignProfileRecord {
    pub fn from_core(p: &SignProfile<f64>) -> Self {
        Self {
            s23: p.s23,
            s24: p.s24,
            s25: p.s25,
            residuals: p.residuals,
            determined: p.determined,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformanceRecord {
    pub kind: String,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub max_residual: f64,
    pub tuples_per_point: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifierRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub slant_deviation: f64,
    pub p_sq: f64,
    pub ph1_sq: f64,
    pub qv1_sq: f64,
    pub xi_position: String,
    pub eta_v1_sq: f64,
    pub eta_h1_sq: f64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Summary {
    pub checked: usize,
    pub held: usize,
    pub equalities: usize,
    pub violations: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_profile: Option<SignProfileRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conformance: Vec<ConformanceRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifier: Option<ClassifierRecord>,
    pub verdicts: Vec<VerdictRecord>,
    pub summary: Summary,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Report {
    pub fn summarize(&mut self) {
        let mut s = Summary::default();
        for v in &self.verdicts {
            s.checked += 1;
            if v.holds {
                s.held += 1;
            } else {
                s.violations += 1;
            }
            if v.equality {
                s.equalities += 1;
            }
        }
        self.summary = s;
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        md.push_str("# Verification report\n\n");
        if let Some(ts) = &self.timestamp {
            md.push_str(&format!("generated: {ts}\n\n"));
        }
        md.push_str(&format!("seed: {}\n\n", self.seed));
        if let Some(sp) = &self.sign_profile {
            md.push_str("## Sign audit\n\n");
            md.push_str("| relation | sign | residual | determined |\n|---|---|---|---|\n");
            for (i, label) in ["total-vs-fiber", "total-vs-base", "mixed"].iter().enumerate() {
                let sign = [sp.s23, sp.s24, sp.s25][i];
                md.push_str(&format!(
                    "| {label} | {sign:+} | {:.3e} | {} |\n",
                    sp.residuals[i], sp.determined[i]
                ));
            }
            md.push('\n');
        }
        if !self.conformance.is_empty() {
            md.push_str("## Space-form conformance\n\n");
            md.push_str("| kind | c1 | c2 | c3 | max residual | passed |\n|---|---|---|---|---|---|\n");
            for c in &self.conformance {
                md.push_str(&format!(
                    "| {} | {} | {} | {} | {:.3e} | {} |\n",
                    c.kind, c.c1, c.c2, c.c3, c.max_residual, c.passed
                ));
            }
            md.push('\n');
        }
        if let Some(cl) = &self.classifier {
            md.push_str("## Structure class\n\n");
            md.push_str(&format!(
                "kind: {}; theta: {}; xi: {}\n\n",
                cl.kind,
                cl.theta.map(|t| format!("{t:.9}")).unwrap_or_else(|| "-".into()),
                cl.xi_position
            ));
        }
        if !self.verdicts.is_empty() {
            md.push_str("## Verdicts\n\n");
            md.push_str(
                "| theorem | case | point | lhs | rhs | slack | holds | equality | conditions |\n",
            );
            md.push_str("|---|---|---|---|---|---|---|---|---|\n");
            for v in &self.verdicts {
                md.push_str(&format!(
                    "| {} | {} | {:?} | {:.9} | {:.9} | {:+.3e} | {} | {} | {} |\n",
                    v.theorem_id,
                    v.case.as_deref().unwrap_or("-"),
                    v.point,
                    v.lhs,
                    v.rhs,
                    v.slack,
                    v.holds,
                    v.equality,
                    v.conditions_met.map(|b| b.to_string()).unwrap_or_else(|| "n/a".into()),
                ));
            }
            md.push('\n');
        }
        md.push_str(&format!(
            "## Summary\n\nchecked: {}; held: {}; equalities: {}; violations: {}\n",
            self.summary.checked, self.summary.held, self.summary.equalities, self.summary.violations
        ));
        if !self.notes.is_empty() {
            md.push_str("\n## Notes\n\n");
            for n in &self.notes {
                md.push_str(&format!("- {n}\n"));
            }
        }
        md
    }

    /// Atomic write: temp file in the same directory, then rename.
    pub fn write_atomic(&self, path: &Path, format: &str) -> std::io::Result<()> {
        let body = match format {
            "md" | "markdown" => self.to_markdown(),
            _ => self.to_json(),
        };
        let tmp = path.with_extension("tmp");
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(body.as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)
    }
}
