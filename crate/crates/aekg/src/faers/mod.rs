//! FAERS quarterly XML ingestion: streaming parse into [`SafetyReport`]
//! records, the completeness filter, and the canonical nested JSON form.

mod json;
mod xml;

pub use json::{read_canonical_json, write_canonical_json, JsonError};
pub use xml::{parse_faers_xml, FaersXmlReader, XmlError};

use crate::model::{validate_report, RejectReason, SafetyReport};
use serde::{Deserialize, Serialize};

/// One excluded report: its id (or `#<ordinal>` when the id was empty) and
/// the reasons it was dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropEntry {
    pub report: String,
    pub reasons: Vec<String>,
}

/// A filtered batch: only kept reports, plus a drop log accounting for
/// every excluded source report. `reports.len() + drop_log.len()` always
/// equals the number of report elements encountered in the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalBatch {
    pub source_label: String,
    #[serde(rename = "safetyreports")]
    pub reports: Vec<SafetyReport>,
    #[serde(rename = "droplog", default)]
    pub drop_log: Vec<DropEntry>,
}

impl CanonicalBatch {
    pub fn empty(source_label: impl Into<String>) -> Self {
        CanonicalBatch {
            source_label: source_label.into(),
            reports: Vec::new(),
            drop_log: Vec::new(),
        }
    }
}

/// Applies the completeness rule to every report, in order. Kept reports
/// preserve input order; every exclusion lands in the drop log with its
/// reasons.
pub fn filter_reports(
    source_label: impl Into<String>,
    raw: impl IntoIterator<Item = SafetyReport>,
) -> CanonicalBatch {
    let mut batch = CanonicalBatch::empty(source_label);
    for (idx, report) in raw.into_iter().enumerate() {
        let outcome = validate_report(&report);
        if outcome.kept {
            batch.reports.push(report);
        } else {
            let label = if report.report_id.trim().is_empty() {
                format!("#{}", idx + 1)
            } else {
                report.report_id.clone()
            };
            batch.drop_log.push(DropEntry {
                report: label,
                reasons: outcome
                    .reasons
                    .iter()
                    .map(|r| r.as_str().to_string())
                    .collect(),
            });
        }
    }
    batch
}

impl DropEntry {
    pub fn reason_tags(&self) -> Vec<RejectReason> {
        self.reasons
            .iter()
            .filter_map(|r| RejectReason::parse(r))
            .collect()
    }
}
