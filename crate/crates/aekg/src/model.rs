//! Domain types for adverse-event case reports and decoding of coded
//! vocabulary values into standardized terms.
//!
//! Field names mirror the source XML element names lowercased
//! (`safetyreportid`, `medicinalproduct`, `reactionmeddrapt`,
//! `activesubstancename`) so every value stays traceable to the source
//! schema. Numeric fields that arrive as text (`receivedate`,
//! `patientonsetage`) are kept as validated source text rather than parsed
//! into calendar or numeric objects, which would silently corrupt partial
//! values.

use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

/// One individual case report: identifier, receipt metadata, and the
/// patient with their drugs and reactions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafetyReport {
    #[serde(rename = "safetyreportid")]
    pub report_id: String,
    /// Receipt date as YYYYMMDD source text.
    #[serde(
        rename = "receivedate",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub receive_date: Option<String>,
    #[serde(rename = "serious", skip_serializing_if = "Option::is_none", default)]
    pub serious: Option<String>,
    pub patient: PatientRecord,
}

/// Patient demographics plus the administered drugs and reported reactions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatientRecord {
    /// Non-negative number as source text.
    #[serde(
        rename = "patientonsetage",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub onset_age: Option<String>,
    #[serde(
        rename = "patientonsetageunit",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub onset_age_unit: Option<String>,
    /// Coded age group; when present the code is an integer 1-6.
    #[serde(
        rename = "patientagegroup",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub age_group: Option<String>,
    #[serde(
        rename = "patientsex",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub sex: Option<String>,
    pub drugs: Vec<DrugRecord>,
    pub reactions: Vec<ReactionRecord>,
}

/// One drug entry within a report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrugRecord {
    /// Reported drug name; non-empty after trimming.
    #[serde(rename = "medicinalproduct")]
    pub medicinal_product: String,
    #[serde(
        rename = "drugcharacterization",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub characterization: Option<String>,
    #[serde(rename = "activesubstances", default)]
    pub active_substances: Vec<String>,
}

/// One reported reaction, identified by its MedDRA preferred term text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionRecord {
    #[serde(rename = "reactionmeddrapt")]
    pub term: String,
}

/// Why a report was excluded by the completeness filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RejectReason {
    MissingDrug,
    MissingReaction,
    MissingReportId,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::MissingDrug => "missing_drug",
            RejectReason::MissingReaction => "missing_reaction",
            RejectReason::MissingReportId => "missing_report_id",
        }
    }

    pub fn parse(s: &str) -> Option<RejectReason> {
        match s {
            "missing_drug" => Some(RejectReason::MissingDrug),
            "missing_reaction" => Some(RejectReason::MissingReaction),
            "missing_report_id" => Some(RejectReason::MissingReportId),
            _ => None,
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of the completeness check for one report.
///
/// `kept` is true exactly when `reasons` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationOutcome {
    pub kept: bool,
    pub reasons: Vec<RejectReason>,
}

/// Checks the completeness rule: a usable report names at least one drug
/// and at least one reaction, and carries a report id.
///
/// Total function; reasons accumulate in the order drug, reaction, id.
pub fn validate_report(report: &SafetyReport) -> ValidationOutcome {
    let mut reasons = Vec::new();
    if report.patient.drugs.is_empty() {
        reasons.push(RejectReason::MissingDrug);
    }
    if report.patient.reactions.is_empty() {
        reasons.push(RejectReason::MissingReaction);
    }
    if report.report_id.trim().is_empty() {
        reasons.push(RejectReason::MissingReportId);
    }
    ValidationOutcome {
        kept: reasons.is_empty(),
        reasons,
    }
}

/// Errors from vocabulary table construction and lookup.
#[derive(Debug, thiserror::Error)]
pub enum VocabError {
    #[error("duplicate code {code:?} in vocabulary table for field {field:?}")]
    DuplicateCode { field: String, code: String },
    #[error("malformed vocabulary line {line}: expected `code<TAB>term`")]
    MalformedLine { line: usize },
    #[error("i/o error reading vocabulary file: {0}")]
    Io(#[from] std::io::Error),
}

/// Warning-level record for a code that has a table but no entry in it.
/// Never aborts a batch.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown code {code:?} for field {field:?}")]
pub struct UnknownCode {
    pub field: String,
    pub code: String,
}

/// A code-to-term mapping for one coded field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabularyTable {
    field_name: String,
    entries: BTreeMap<String, String>,
}

impl VocabularyTable {
    pub fn new(field_name: impl Into<String>) -> Self {
        VocabularyTable {
            field_name: field_name.into(),
            entries: BTreeMap::new(),
        }
    }

    /// The built-in age-group table: codes 1-6 for Neonate through Elderly.
    pub fn age_groups() -> Self {
        let mut t = VocabularyTable::new("patientagegroup");
        for (code, term) in [
            ("1", "Neonate"),
            ("2", "Infant"),
            ("3", "Child"),
            ("4", "Adolescent"),
            ("5", "Adult"),
            ("6", "Elderly"),
        ] {
            t.entries.insert(code.to_string(), term.to_string());
        }
        t
    }

    pub fn field_name(&self) -> &str {
        &self.field_name
    }

    /// Adds one code-to-term entry; codes are unique within a table.
    pub fn insert(
        &mut self,
        code: impl Into<String>,
        term: impl Into<String>,
    ) -> Result<(), VocabError> {
        let code = code.into();
        if self.entries.contains_key(&code) {
            return Err(VocabError::DuplicateCode {
                field: self.field_name.clone(),
                code,
            });
        }
        self.entries.insert(code, term.into());
        Ok(())
    }

    pub fn get(&self, code: &str) -> Option<&str> {
        self.entries.get(code).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads a table from the `code<TAB>term` file format. Lines starting
    /// with `#` and blank lines are ignored.
    pub fn from_reader(
        field_name: impl Into<String>,
        reader: impl BufRead,
    ) -> Result<Self, VocabError> {
        let mut table = VocabularyTable::new(field_name);
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (code, term) = trimmed
                .split_once('\t')
                .ok_or(VocabError::MalformedLine { line: idx + 1 })?;
            let (code, term) = (code.trim(), term.trim());
            if code.is_empty() || term.is_empty() {
                return Err(VocabError::MalformedLine { line: idx + 1 });
            }
            table.insert(code, term)?;
        }
        Ok(table)
    }
}

/// The set of vocabulary tables in effect for a batch, keyed by field name
/// (lowercased). At most one table exists per field.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VocabularySet {
    tables: BTreeMap<String, VocabularyTable>,
}

impl VocabularySet {
    /// No tables at all; every decode passes through.
    pub fn empty() -> Self {
        VocabularySet::default()
    }

    /// The compiled-in defaults: just the six-entry age-group table.
    /// Every other coded field is user-suppliable.
    pub fn builtin() -> Self {
        let mut set = VocabularySet::default();
        set.add_table(VocabularyTable::age_groups());
        set
    }

    /// Installs a table, replacing any previous table for the same field.
    pub fn add_table(&mut self, table: VocabularyTable) {
        self.tables
            .insert(table.field_name.to_ascii_lowercase(), table);
    }

    pub fn table(&self, field_name: &str) -> Option<&VocabularyTable> {
        self.tables.get(&field_name.to_ascii_lowercase())
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Loads every file in `dir` as one vocabulary table; the field name is
    /// the file stem lowercased. Files are installed on top of whatever the
    /// set already holds.
    pub fn load_dir(&mut self, dir: &Path) -> Result<usize, VocabError> {
        let mut loaded = 0;
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        for path in paths {
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let file = std::fs::File::open(&path)?;
            let table = VocabularyTable::from_reader(
                stem.to_ascii_lowercase(),
                std::io::BufReader::new(file),
            )?;
            self.add_table(table);
            loaded += 1;
        }
        Ok(loaded)
    }

    /// Decodes `code` for `field_name`.
    ///
    /// With a table that knows the code, returns the mapped term. With a
    /// table that lacks the code, returns [`UnknownCode`] so callers can log
    /// a warning and keep the raw value. Without a table for the field, the
    /// code passes through unchanged.
    pub fn decode<'a>(
        &'a self,
        field_name: &str,
        code: &'a str,
    ) -> Result<Cow<'a, str>, UnknownCode> {
        match self.table(field_name) {
            None => Ok(Cow::Borrowed(code)),
            Some(table) => match table.get(code) {
                Some(term) => Ok(Cow::Borrowed(term)),
                None => Err(UnknownCode {
                    field: field_name.to_string(),
                    code: code.to_string(),
                }),
            },
        }
    }
}

/// Free-function form of [`VocabularySet::decode`].
pub fn decode_code<'a>(
    field_name: &str,
    code: &'a str,
    tables: &'a VocabularySet,
) -> Result<Cow<'a, str>, UnknownCode> {
    tables.decode(field_name, code)
}
