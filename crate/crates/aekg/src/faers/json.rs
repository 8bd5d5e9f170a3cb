//! Canonical nested JSON form of a filtered batch.
//!
//! Writing serializes the batch with keys in fixed schema order and
//! optional fields omitted, so equal batches always produce identical
//! bytes. Reading validates the document against the schema and the
//! domain invariants, naming the offending path (`$.safetyreports[0]...`)
//! on any violation; it is the exact inverse of writing.

use super::{CanonicalBatch, DropEntry};
use crate::model::{DrugRecord, PatientRecord, ReactionRecord, SafetyReport};
use serde_json::Value;
use std::io::{Read, Write};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("schema violation at {path}: expected {expected}, found {found}")]
    SchemaViolation {
        path: String,
        expected: String,
        found: String,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl JsonError {
    fn violation(path: &str, expected: impl Into<String>, found: impl Into<String>) -> Self {
        JsonError::SchemaViolation {
            path: path.to_string(),
            expected: expected.into(),
            found: found.into(),
        }
    }
}

/// Writes the canonical JSON document; returns the byte count. Output is
/// byte-identical across runs for equal batches.
pub fn write_canonical_json<W: Write>(batch: &CanonicalBatch, sink: W) -> Result<u64, JsonError> {
    let mut w = crate::rdf::CountingWriter::new(sink);
    serde_json::to_writer_pretty(&mut w, batch)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(w.count())
}

/// Reads and validates a canonical JSON document.
pub fn read_canonical_json<R: Read>(mut input: R) -> Result<CanonicalBatch, JsonError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let value: Value = serde_json::from_str(&text)?;
    parse_batch(&value)
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn as_object<'a>(
    v: &'a Value,
    path: &str,
) -> Result<&'a serde_json::Map<String, Value>, JsonError> {
    v.as_object()
        .ok_or_else(|| JsonError::violation(path, "object", type_name(v)))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array()
        .ok_or_else(|| JsonError::violation(path, "array", type_name(v)))
}

fn as_string(v: &Value, path: &str) -> Result<String, JsonError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| JsonError::violation(path, "string", type_name(v)))
}

fn required<'a>(
    obj: &'a serde_json::Map<String, Value>,
    parent: &str,
    key: &str,
) -> Result<&'a Value, JsonError> {
    obj.get(key)
        .ok_or_else(|| JsonError::violation(&format!("{parent}.{key}"), "present key", "missing"))
}

fn optional_string(
    obj: &serde_json::Map<String, Value>,
    parent: &str,
    key: &str,
) -> Result<Option<String>, JsonError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => as_string(v, &format!("{parent}.{key}")).map(Some),
    }
}

fn reject_unknown_keys(
    obj: &serde_json::Map<String, Value>,
    parent: &str,
    allowed: &[&str],
) -> Result<(), JsonError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(JsonError::violation(
                &format!("{parent}.{key}"),
                "a canonical schema key",
                "unknown key",
            ));
        }
    }
    Ok(())
}

fn parse_batch(value: &Value) -> Result<CanonicalBatch, JsonError> {
    let obj = as_object(value, "$")?;
    reject_unknown_keys(obj, "$", &["source_label", "safetyreports", "droplog"])?;
    let source_label = as_string(required(obj, "$", "source_label")?, "$.source_label")?;
    let reports_value = required(obj, "$", "safetyreports")?;
    let reports_array = as_array(reports_value, "$.safetyreports")?;
    let mut reports = Vec::with_capacity(reports_array.len());
    for (i, item) in reports_array.iter().enumerate() {
        reports.push(parse_report(item, &format!("$.safetyreports[{i}]"))?);
    }
    let mut drop_log = Vec::new();
    if let Some(log_value) = obj.get("droplog") {
        let log_array = as_array(log_value, "$.droplog")?;
        for (i, item) in log_array.iter().enumerate() {
            let path = format!("$.droplog[{i}]");
            let entry = as_object(item, &path)?;
            reject_unknown_keys(entry, &path, &["report", "reasons"])?;
            let report = as_string(required(entry, &path, "report")?, &format!("{path}.report"))?;
            let reasons_path = format!("{path}.reasons");
            let reasons = as_array(required(entry, &path, "reasons")?, &reasons_path)?
                .iter()
                .enumerate()
                .map(|(j, r)| as_string(r, &format!("{reasons_path}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            drop_log.push(DropEntry { report, reasons });
        }
    }
    Ok(CanonicalBatch {
        source_label,
        reports,
        drop_log,
    })
}

fn parse_report(value: &Value, path: &str) -> Result<SafetyReport, JsonError> {
    let obj = as_object(value, path)?;
    reject_unknown_keys(
        obj,
        path,
        &["safetyreportid", "receivedate", "serious", "patient"],
    )?;
    let report_id = as_string(
        required(obj, path, "safetyreportid")?,
        &format!("{path}.safetyreportid"),
    )?;
    if report_id.trim().is_empty() {
        return Err(JsonError::violation(
            &format!("{path}.safetyreportid"),
            "non-empty string",
            "empty string",
        ));
    }
    let receive_date = optional_string(obj, path, "receivedate")?;
    let serious = optional_string(obj, path, "serious")?;
    let patient_path = format!("{path}.patient");
    let patient = parse_patient(required(obj, path, "patient")?, &patient_path)?;
    if patient.drugs.is_empty() {
        return Err(JsonError::violation(
            &format!("{patient_path}.drugs"),
            "at least one drug",
            "empty array",
        ));
    }
    if patient.reactions.is_empty() {
        return Err(JsonError::violation(
            &format!("{patient_path}.reactions"),
            "at least one reaction",
            "empty array",
        ));
    }
    Ok(SafetyReport {
        report_id,
        receive_date,
        serious,
        patient,
    })
}

fn parse_patient(value: &Value, path: &str) -> Result<PatientRecord, JsonError> {
    let obj = as_object(value, path)?;
    reject_unknown_keys(
        obj,
        path,
        &[
            "patientonsetage",
            "patientonsetageunit",
            "patientagegroup",
            "patientsex",
            "drugs",
            "reactions",
        ],
    )?;
    let onset_age = optional_string(obj, path, "patientonsetage")?;
    if let Some(age) = &onset_age {
        if !age
            .parse::<f64>()
            .map(|n| n >= 0.0 && n.is_finite())
            .unwrap_or(false)
        {
            return Err(JsonError::violation(
                &format!("{path}.patientonsetage"),
                "non-negative number as string",
                format!("{age:?}"),
            ));
        }
    }
    let onset_age_unit = optional_string(obj, path, "patientonsetageunit")?;
    let age_group = optional_string(obj, path, "patientagegroup")?;
    if let Some(code) = &age_group {
        if !matches!(code.as_str(), "1" | "2" | "3" | "4" | "5" | "6") {
            return Err(JsonError::violation(
                &format!("{path}.patientagegroup"),
                "integer code 1-6 as string",
                format!("{code:?}"),
            ));
        }
    }
    let sex = optional_string(obj, path, "patientsex")?;

    let drugs_path = format!("{path}.drugs");
    let drugs = as_array(required(obj, path, "drugs")?, &drugs_path)?
        .iter()
        .enumerate()
        .map(|(i, d)| parse_drug(d, &format!("{drugs_path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;

    let reactions_path = format!("{path}.reactions");
    let reactions = as_array(required(obj, path, "reactions")?, &reactions_path)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_reaction(r, &format!("{reactions_path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(PatientRecord {
        onset_age,
        onset_age_unit,
        age_group,
        sex,
        drugs,
        reactions,
    })
}

fn parse_drug(value: &Value, path: &str) -> Result<DrugRecord, JsonError> {
    let obj = as_object(value, path)?;
    reject_unknown_keys(
        obj,
        path,
        &[
            "medicinalproduct",
            "drugcharacterization",
            "activesubstances",
        ],
    )?;
    let medicinal_product = as_string(
        required(obj, path, "medicinalproduct")?,
        &format!("{path}.medicinalproduct"),
    )?;
    if medicinal_product.trim().is_empty() {
        return Err(JsonError::violation(
            &format!("{path}.medicinalproduct"),
            "non-empty string",
            "empty string",
        ));
    }
    let characterization = optional_string(obj, path, "drugcharacterization")?;
    let substances_path = format!("{path}.activesubstances");
    let active_substances = as_array(required(obj, path, "activesubstances")?, &substances_path)?
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{substances_path}[{i}]");
            let s = as_string(s, &p)?;
            if s.trim().is_empty() {
                return Err(JsonError::violation(&p, "non-empty string", "empty string"));
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DrugRecord {
        medicinal_product,
        characterization,
        active_substances,
    })
}

fn parse_reaction(value: &Value, path: &str) -> Result<ReactionRecord, JsonError> {
    let obj = as_object(value, path)?;
    reject_unknown_keys(obj, path, &["reactionmeddrapt"])?;
    let term = as_string(
        required(obj, path, "reactionmeddrapt")?,
        &format!("{path}.reactionmeddrapt"),
    )?;
    if term.trim().is_empty() {
        return Err(JsonError::violation(
            &format!("{path}.reactionmeddrapt"),
            "non-empty string",
            "empty string",
        ));
    }
    Ok(ReactionRecord { term })
}
