use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactnum::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Process exit code for a set of verdicts: 1 if any failed, else 2 if
    /// any was inconclusive, else 0.
    pub fn exit_code<'a, I: IntoIterator<Item = &'a Verdict>>(verdicts: I) -> i32 {
        let mut code = 0;
        for v in verdicts {
            match v {
                Verdict::Fail => return 1,
                Verdict::Inconclusive => code = 2,
                Verdict::Pass => {}
            }
        }
        code
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
    /// Recorded for context; never asserted.
    #[serde(rename = "info")]
    Info,
}

/// One checked inequality: `lhs <relation> rhs` up to `slack`, with the slack
/// always on the side that weakens the claim.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvidenceRow {
    pub input: String,
    pub relation: Relation,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub slack: Scalar,
    pub holds: bool,
}

impl EvidenceRow {
    /// `lhs <= rhs + slack`, exact when all three are exact.
    pub fn le(input: impl Into<String>, lhs: Scalar, rhs: Scalar, slack: Scalar) -> Self {
        let holds = lhs <= &rhs + &slack;
        EvidenceRow { input: input.into(), relation: Relation::Le, lhs, rhs, slack, holds }
    }

    /// `lhs >= rhs - slack`.
    pub fn ge(input: impl Into<String>, lhs: Scalar, rhs: Scalar, slack: Scalar) -> Self {
        let holds = &lhs + &slack >= rhs;
        EvidenceRow { input: input.into(), relation: Relation::Ge, lhs, rhs, slack, holds }
    }

    /// `|lhs - rhs| <= slack`; with zero slack on exact values this is exact
    /// equality.
    pub fn eq(input: impl Into<String>, lhs: Scalar, rhs: Scalar, slack: Scalar) -> Self {
        let holds = (&lhs - &rhs).abs() <= slack;
        EvidenceRow { input: input.into(), relation: Relation::Eq, lhs, rhs, slack, holds }
    }

    pub fn check(input: impl Into<String>, ok: bool) -> Self {
        let v = if ok { Scalar::one() } else { Scalar::zero() };
        EvidenceRow::eq(input, v, Scalar::one(), Scalar::zero())
    }

    pub fn info(input: impl Into<String>, lhs: Scalar, rhs: Scalar) -> Self {
        EvidenceRow {
            input: input.into(),
            relation: Relation::Info,
            lhs,
            rhs,
            slack: Scalar::zero(),
            holds: true,
        }
    }

    pub fn violated(&self) -> bool {
        self.relation != Relation::Info && !self.holds
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    #[serde(rename = "paper_anchor")]
    pub anchor: String,
    pub parameters: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub evidence: Vec<EvidenceRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub runtime_ms: u64,
}

/// Accumulates evidence while a claim runs.
pub struct ReportBuilder {
    claim_id: String,
    anchor: String,
    parameters: BTreeMap<String, String>,
    evidence: Vec<EvidenceRow>,
    notes: Vec<String>,
    inconclusive: bool,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(claim_id: &str, anchor: &str) -> Self {
        ReportBuilder {
            claim_id: claim_id.into(),
            anchor: anchor.into(),
            parameters: BTreeMap::new(),
            evidence: Vec::new(),
            notes: Vec::new(),
            inconclusive: false,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn row(&mut self, row: EvidenceRow) -> &mut Self {
        self.evidence.push(row);
        self
    }

    pub fn rows<I: IntoIterator<Item = EvidenceRow>>(&mut self, rows: I) -> &mut Self {
        self.evidence.extend(rows);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    /// Marks the outcome as inconclusive unless some row fails.
    pub fn inconclusive(&mut self, reason: impl Into<String>) -> &mut Self {
        self.inconclusive = true;
        self.notes.push(reason.into());
        self
    }

    pub fn finish(self) -> VerificationReport {
        let verdict = if self.evidence.iter().any(EvidenceRow::violated) {
            Verdict::Fail
        } else if self.inconclusive {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        VerificationReport {
            claim_id: self.claim_id,
            anchor: self.anchor,
            parameters: self.parameters,
            verdict,
            evidence: self.evidence,
            notes: self.notes,
            runtime_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

impl VerificationReport {
    pub fn violations(&self) -> usize {
        self.evidence.iter().filter(|r| r.violated()).count()
    }

    /// Evidence rows as CSV with a leading `claim_id` column.
    pub fn write_csv<W: std::io::Write>(reports: &[VerificationReport], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| crate::error::Error::Io(e.to_string());
        w.write_record(["claim_id", "input", "relation", "lhs", "rhs", "slack", "holds"])
            .map_err(io)?;
        for r in reports {
            for row in &r.evidence {
                let rel = match row.relation {
                    Relation::Le => "<=",
                    Relation::Ge => ">=",
                    Relation::Eq => "==",
                    Relation::Info => "info",
                };
                w.write_record([
                    r.claim_id.as_str(),
                    row.input.as_str(),
                    rel,
                    &csv_scalar(&row.lhs),
                    &csv_scalar(&row.rhs),
                    &csv_scalar(&row.slack),
                    if row.holds { "true" } else { "false" },
                ])
                .map_err(io)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_scalar(x: &Scalar) -> String {
    match x {
        Scalar::Exact(r) => r.to_string(),
        Scalar::Approx(v) => format!("{v:e}"),
    }
}
