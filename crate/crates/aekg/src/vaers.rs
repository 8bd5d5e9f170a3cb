//! VAERS annual CSV ingestion: the data, symptoms, and vaccine files are
//! joined into per-patient cases keyed by VAERS ID.
//!
//! The join is an outer join: IDs that appear only in the symptoms or
//! vaccine file still yield cases, flagged as orphans in the join report,
//! because silently dropping rows would contradict the completeness aims
//! of the pipeline. Rows whose cell count disagrees with the header are
//! skipped and counted, never fatal; a file without its ID column is.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

#[derive(Debug, thiserror::Error)]
pub enum VaersError {
    #[error("{file} file is missing its id column {column:?}")]
    MissingIdColumn { file: &'static str, column: String },
    #[error("unknown text encoding label {0:?}")]
    UnknownEncoding(String),
    #[error("csv error in {file} file: {source}")]
    Csv {
        file: &'static str,
        source: csv::Error,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// One joined patient record. Symptoms and vaccines are sets: listing the
/// same value twice in the source collapses to one entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VaersCase {
    pub vaers_id: String,
    pub symptoms: BTreeSet<String>,
    pub vaccines: BTreeSet<String>,
}

impl VaersCase {
    pub fn new<S: Into<String>>(
        vaers_id: impl Into<String>,
        symptoms: impl IntoIterator<Item = S>,
        vaccines: impl IntoIterator<Item = S>,
    ) -> Self {
        VaersCase {
            vaers_id: vaers_id.into(),
            symptoms: symptoms.into_iter().map(Into::into).collect(),
            vaccines: vaccines.into_iter().map(Into::into).collect(),
        }
    }

    fn bare(vaers_id: String) -> Self {
        VaersCase {
            vaers_id,
            symptoms: BTreeSet::new(),
            vaccines: BTreeSet::new(),
        }
    }
}

/// Column names, resolved case-insensitively against each file's header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VaersColumns {
    pub id_column: String,
    pub symptom_columns: Vec<String>,
    pub vaccine_column: String,
}

impl Default for VaersColumns {
    fn default() -> Self {
        VaersColumns {
            id_column: "VAERS_ID".into(),
            symptom_columns: (1..=5).map(|i| format!("SYMPTOM{i}")).collect(),
            vaccine_column: "VAX_TYPE".into(),
        }
    }
}

/// Per-file orphan and skip accounting from one join.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JoinStats {
    /// Distinct IDs seen in the symptoms file but not the data file.
    pub orphan_symptom_ids: usize,
    /// Distinct IDs seen in the vaccine file but not the data file.
    pub orphan_vaccine_ids: usize,
    pub skipped_rows_data: usize,
    pub skipped_rows_symptoms: usize,
    pub skipped_rows_vaccines: usize,
}

impl JoinStats {
    pub fn orphans(&self) -> usize {
        self.orphan_symptom_ids + self.orphan_vaccine_ids
    }

    pub fn skipped(&self) -> usize {
        self.skipped_rows_data + self.skipped_rows_symptoms + self.skipped_rows_vaccines
    }
}

/// Joined cases plus the join accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VaersJoin {
    pub cases: Vec<VaersCase>,
    pub stats: JoinStats,
}

/// Decodes raw CSV bytes to text. UTF-8 input falls back to the given
/// single-byte encoding when invalid; any other label decodes directly.
pub fn decode_csv_bytes(
    bytes: &[u8],
    encoding: &str,
    fallback: &str,
) -> Result<String, VaersError> {
    let primary = encoding_rs::Encoding::for_label(encoding.as_bytes())
        .ok_or_else(|| VaersError::UnknownEncoding(encoding.to_string()))?;
    if primary == encoding_rs::UTF_8 {
        match std::str::from_utf8(bytes) {
            Ok(text) => Ok(text.to_string()),
            Err(_) => {
                let secondary = encoding_rs::Encoding::for_label(fallback.as_bytes())
                    .ok_or_else(|| VaersError::UnknownEncoding(fallback.to_string()))?;
                let (text, _, _) = secondary.decode(bytes);
                Ok(text.into_owned())
            }
        }
    } else {
        let (text, _, _) = primary.decode(bytes);
        Ok(text.into_owned())
    }
}

struct CsvFile {
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
    skipped: usize,
}

fn read_csv(input: impl Read, file: &'static str) -> Result<CsvFile, VaersError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|source| VaersError::Csv { file, source })?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    let mut skipped = 0;
    for record in reader.records() {
        let record = record.map_err(|source| VaersError::Csv { file, source })?;
        if record.len() != headers.len() {
            skipped += 1;
            continue;
        }
        rows.push(record);
    }
    Ok(CsvFile {
        headers,
        rows,
        skipped,
    })
}

fn find_column(headers: &[String], wanted: &str) -> Option<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(wanted.trim()))
}

/// Parses and joins the three annual files. Streams must already be
/// decoded text; see [`decode_csv_bytes`] for the encoding step.
pub fn parse_vaers_files(
    data_csv: impl Read,
    symptoms_csv: impl Read,
    vaccine_csv: impl Read,
    columns: &VaersColumns,
) -> Result<VaersJoin, VaersError> {
    let data = read_csv(data_csv, "data")?;
    let symptoms = read_csv(symptoms_csv, "symptoms")?;
    let vaccines = read_csv(vaccine_csv, "vaccines")?;

    let data_id = find_column(&data.headers, &columns.id_column).ok_or_else(|| {
        VaersError::MissingIdColumn {
            file: "data",
            column: columns.id_column.clone(),
        }
    })?;
    let symptoms_id = find_column(&symptoms.headers, &columns.id_column).ok_or_else(|| {
        VaersError::MissingIdColumn {
            file: "symptoms",
            column: columns.id_column.clone(),
        }
    })?;
    let vaccines_id = find_column(&vaccines.headers, &columns.id_column).ok_or_else(|| {
        VaersError::MissingIdColumn {
            file: "vaccines",
            column: columns.id_column.clone(),
        }
    })?;

    let symptom_cols: Vec<usize> = columns
        .symptom_columns
        .iter()
        .filter_map(|c| find_column(&symptoms.headers, c))
        .collect();
    let vaccine_col = find_column(&vaccines.headers, &columns.vaccine_column);

    let mut stats = JoinStats {
        skipped_rows_data: data.skipped,
        skipped_rows_symptoms: symptoms.skipped,
        skipped_rows_vaccines: vaccines.skipped,
        ..Default::default()
    };

    // BTreeMap keys give a deterministic, permutation-insensitive case
    // order.
    let mut cases: BTreeMap<String, VaersCase> = BTreeMap::new();
    let mut data_ids: BTreeSet<String> = BTreeSet::new();
    for row in &data.rows {
        let id = row.get(data_id).unwrap_or("").trim().to_string();
        if id.is_empty() {
            stats.skipped_rows_data += 1;
            continue;
        }
        data_ids.insert(id.clone());
        cases
            .entry(id.clone())
            .or_insert_with(|| VaersCase::bare(id));
    }

    let mut orphan_symptoms: BTreeSet<String> = BTreeSet::new();
    for row in &symptoms.rows {
        let id = row.get(symptoms_id).unwrap_or("").trim().to_string();
        if id.is_empty() {
            stats.skipped_rows_symptoms += 1;
            continue;
        }
        if !data_ids.contains(&id) {
            orphan_symptoms.insert(id.clone());
        }
        let case = cases
            .entry(id.clone())
            .or_insert_with(|| VaersCase::bare(id));
        for &col in &symptom_cols {
            let value = row.get(col).unwrap_or("").trim();
            if !value.is_empty() {
                case.symptoms.insert(value.to_string());
            }
        }
    }

    let mut orphan_vaccines: BTreeSet<String> = BTreeSet::new();
    for row in &vaccines.rows {
        let id = row.get(vaccines_id).unwrap_or("").trim().to_string();
        if id.is_empty() {
            stats.skipped_rows_vaccines += 1;
            continue;
        }
        if !data_ids.contains(&id) {
            orphan_vaccines.insert(id.clone());
        }
        let case = cases
            .entry(id.clone())
            .or_insert_with(|| VaersCase::bare(id));
        if let Some(col) = vaccine_col {
            let value = row.get(col).unwrap_or("").trim();
            if !value.is_empty() {
                case.vaccines.insert(value.to_string());
            }
        }
    }

    stats.orphan_symptom_ids = orphan_symptoms.len();
    stats.orphan_vaccine_ids = orphan_vaccines.len();
    Ok(VaersJoin {
        cases: cases.into_values().collect(),
        stats,
    })
}

/// Human-readable join summary: case count, orphan IDs per file, and
/// skipped-row counts.
pub fn join_report(cases: &[VaersCase], stats: &JoinStats) -> String {
    format!(
        "{} cases, {} orphans (symptoms {}, vaccines {}); skipped={} (data {}, symptoms {}, vaccines {})",
        cases.len(),
        stats.orphans(),
        stats.orphan_symptom_ids,
        stats.orphan_vaccine_ids,
        stats.skipped(),
        stats.skipped_rows_data,
        stats.skipped_rows_symptoms,
        stats.skipped_rows_vaccines,
    )
}
