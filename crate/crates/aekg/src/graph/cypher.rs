//! Cypher import-script emission.
//!
//! The batch emitter writes one self-contained statement per batch: the
//! report maps are embedded literally in an `UNWIND`, node roles are
//! `MERGE`d on their key properties, properties applied with `SET`, and
//! the per-report drug and reaction lists walked with `FOREACH`. The
//! script runs against an empty database without any plugin and produces
//! the same graph as [`build_faers_graph`](super::build_faers_graph).
//!
//! Output is deterministic for a given batch: map keys are written in
//! schema order and the header carries only the source label and tool
//! version, never a timestamp.

use super::{Properties, PropertyGraph, PropertyValue};
use crate::faers::CanonicalBatch;
use crate::model::{SafetyReport, VocabularySet};
use std::io::{self, Write};

/// Escapes a string for a double-quoted Cypher literal: backslashes and
/// quotes are backslash-escaped, control characters use their short
/// escapes. Everything else, unicode included, passes through.
pub fn escape_cypher_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn write_header<W: Write>(w: &mut W, source_label: &str) -> io::Result<()> {
    writeln!(w, "// Cypher import script")?;
    writeln!(w, "// source: {source_label}")?;
    writeln!(w, "// tool: aekg {}", env!("CARGO_PKG_VERSION"))
}

fn render_value(value: &PropertyValue) -> String {
    match value {
        PropertyValue::Str(s) => format!("\"{}\"", escape_cypher_string(s)),
        PropertyValue::Int(i) => i.to_string(),
        PropertyValue::Bool(b) => b.to_string(),
        PropertyValue::StrList(items) => {
            let inner: Vec<String> = items
                .iter()
                .map(|s| format!("\"{}\"", escape_cypher_string(s)))
                .collect();
            format!("[{}]", inner.join(", "))
        }
    }
}

fn render_map(props: &Properties) -> String {
    let inner: Vec<String> = props
        .iter()
        .map(|(k, v)| format!("{k}: {}", render_value(v)))
        .collect();
    format!("{{{}}}", inner.join(", "))
}

fn render_report_map(report: &SafetyReport, vocab: &VocabularySet) -> String {
    let mut warnings = Vec::new();
    let report_props = super::report_node_props(report);
    let patient_props = super::patient_node_props(report, vocab, &mut warnings);
    let drugs: Vec<String> = report
        .patient
        .drugs
        .iter()
        .map(|d| {
            let (name, props) = super::drug_node_props(d);
            format!(
                "{{name: \"{}\", props: {}}}",
                escape_cypher_string(&name),
                render_map(&props)
            )
        })
        .collect();
    let reactions: Vec<String> = report
        .patient
        .reactions
        .iter()
        .map(|r| {
            let term = super::normalize_name(&r.term);
            format!(
                "{{term: \"{t}\", props: {{term: \"{t}\"}}}}",
                t = escape_cypher_string(&term)
            )
        })
        .collect();
    format!(
        "{{safetyreportid: \"{id}\", report_props: {rp}, patient_props: {pp}, drugs: [{ds}], reactions: [{rs}]}}",
        id = escape_cypher_string(&report.report_id),
        rp = render_map(&report_props),
        pp = render_map(&patient_props),
        ds = drugs.join(", "),
        rs = reactions.join(", "),
    )
}

/// Emits the batch import script; returns the number of `;`-terminated
/// statements. An empty batch yields a header-only script and zero
/// statements. Vocabulary decode warnings follow the same rules as the
/// graph builder but are not surfaced here; build the graph to collect
/// them.
pub fn emit_cypher_script<W: Write>(
    batch: &CanonicalBatch,
    vocab: &VocabularySet,
    mut sink: W,
) -> io::Result<usize> {
    write_header(&mut sink, &batch.source_label)?;
    if batch.reports.is_empty() {
        sink.flush()?;
        return Ok(0);
    }
    writeln!(sink, "UNWIND [")?;
    for (i, report) in batch.reports.iter().enumerate() {
        let sep = if i + 1 == batch.reports.len() {
            ""
        } else {
            ","
        };
        writeln!(sink, "  {}{sep}", render_report_map(report, vocab))?;
    }
    writeln!(sink, "] AS report")?;
    writeln!(
        sink,
        "MERGE (r:SafetyReport {{safetyreportid: report.safetyreportid}})"
    )?;
    writeln!(sink, "SET r += report.report_props")?;
    writeln!(
        sink,
        "MERGE (p:Patient {{safetyreportid: report.safetyreportid}})"
    )?;
    writeln!(sink, "SET p += report.patient_props")?;
    writeln!(sink, "MERGE (r)-[:HAS_PATIENT]->(p)")?;
    writeln!(sink, "FOREACH (drug IN report.drugs |")?;
    writeln!(sink, "  MERGE (d:Drug {{name: drug.name}})")?;
    writeln!(sink, "  SET d += drug.props")?;
    writeln!(sink, "  MERGE (p)-[:TOOK]->(d)")?;
    writeln!(sink, ")")?;
    writeln!(sink, "FOREACH (reaction IN report.reactions |")?;
    writeln!(sink, "  MERGE (e:AdverseEvent {{term: reaction.term}})")?;
    writeln!(sink, "  SET e += reaction.props")?;
    writeln!(sink, "  MERGE (p)-[:EXPERIENCED]->(e)")?;
    writeln!(sink, ")")?;
    writeln!(sink, ";")?;
    sink.flush()?;
    Ok(1)
}

/// Key property used to `MERGE` nodes of a given label when emitting a
/// graph built by this crate. `Patient` defaults to the case-report key;
/// use [`vaers_key_property`] for VAERS graphs.
pub fn default_key_property(label: &str) -> &'static str {
    match label {
        "SafetyReport" | "Patient" => "safetyreportid",
        "Symptom" | "Vaccine" | "Drug" => "name",
        "AdverseEvent" => "term",
        _ => "key",
    }
}

/// Emits a bulk-load script for an arbitrary property graph: one `MERGE`
/// statement per node (with `SET` for its non-key properties) and one
/// `MATCH`/`MERGE` statement per relationship. `key_property` names the
/// merge key per label. Returns the statement count.
pub fn emit_graph_script<W: Write>(
    graph: &PropertyGraph,
    source_label: &str,
    key_property: impl Fn(&str) -> &'static str,
    mut sink: W,
) -> io::Result<usize> {
    write_header(&mut sink, source_label)?;
    let mut statements = 0;
    for (key, props) in graph.nodes() {
        let key_prop = key_property(&key.label);
        write!(
            sink,
            "MERGE (n:{} {{{}: \"{}\"}})",
            key.label,
            key_prop,
            escape_cypher_string(&key.key_value)
        )?;
        let extra: Vec<String> = props
            .iter()
            .filter(|(k, _)| k.as_str() != key_prop)
            .map(|(k, v)| format!("n.{k} = {}", render_value(v)))
            .collect();
        if !extra.is_empty() {
            write!(sink, " SET {}", extra.join(", "))?;
        }
        writeln!(sink, ";")?;
        statements += 1;
    }
    for rel in graph.relationships() {
        writeln!(
            sink,
            "MATCH (a:{sl} {{{sk}: \"{sv}\"}}) MATCH (b:{tl} {{{tk}: \"{tv}\"}}) MERGE (a)-[:{ty}]->(b);",
            sl = rel.source.label,
            sk = key_property(&rel.source.label),
            sv = escape_cypher_string(&rel.source.key_value),
            tl = rel.target.label,
            tk = key_property(&rel.target.label),
            tv = escape_cypher_string(&rel.target.key_value),
            ty = rel.rel_type,
        )?;
        statements += 1;
    }
    sink.flush()?;
    Ok(statements)
}

/// Key property for nodes of the VAERS graph.
pub fn vaers_key_property(label: &str) -> &'static str {
    match label {
        "Patient" => "vaersid",
        other => default_key_property(other),
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_vaers_graph;
    use super::*;
    use crate::faers::filter_reports;
    use crate::model::{DrugRecord, PatientRecord, ReactionRecord};
    use crate::vaers::VaersCase;

    fn fixture_batch(drug_names: &[&str], reaction_terms: &[&str]) -> CanonicalBatch {
        let report = SafetyReport {
            report_id: "R1".into(),
            patient: PatientRecord {
                drugs: drug_names
                    .iter()
                    .map(|d| DrugRecord {
                        medicinal_product: d.to_string(),
                        ..Default::default()
                    })
                    .collect(),
                reactions: reaction_terms
                    .iter()
                    .map(|t| ReactionRecord {
                        term: t.to_string(),
                    })
                    .collect(),
                ..Default::default()
            },
            ..Default::default()
        };
        filter_reports("fixture", vec![report])
    }

    // Independent string-literal scanner: walks the script and checks
    // every double-quoted literal is terminated and uses only the escapes
    // the Cypher grammar allows.
    fn scan_string_literals(script: &str) -> Result<usize, String> {
        let mut chars = script.chars().peekable();
        let mut literals = 0;
        while let Some(c) = chars.next() {
            if c != '"' {
                continue;
            }
            literals += 1;
            loop {
                match chars.next() {
                    None => return Err("unterminated string literal".into()),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some('\\' | '"' | '\'' | 'n' | 'r' | 't' | 'b' | 'f') => {}
                        Some('u') => {
                            for _ in 0..4 {
                                match chars.next() {
                                    Some(h) if h.is_ascii_hexdigit() => {}
                                    _ => return Err("bad unicode escape".into()),
                                }
                            }
                        }
                        other => return Err(format!("bad escape: {other:?}")),
                    },
                    Some('\n') => return Err("raw newline in string literal".into()),
                    Some(_) => {}
                }
            }
        }
        Ok(literals)
    }

    #[test]
    fn empty_batch_emits_header_only() {
        let batch = filter_reports("faers-empty", vec![]);
        let mut out = Vec::new();
        let n = emit_cypher_script(&batch, &VocabularySet::builtin(), &mut out).unwrap();
        assert_eq!(n, 0);
        let text = String::from_utf8(out).unwrap();
        assert!(text.lines().all(|l| l.starts_with("//")));
        assert!(text.contains("source: faers-empty"));
        assert!(text.contains(env!("CARGO_PKG_VERSION")));
    }

    #[test]
    fn one_report_script_has_four_node_merges() {
        let batch = fixture_batch(&["ASPIRIN"], &["NAUSEA"]);
        let mut out = Vec::new();
        let n = emit_cypher_script(&batch, &VocabularySet::builtin(), &mut out).unwrap();
        assert_eq!(n, 1);
        let text = String::from_utf8(out).unwrap();
        let node_merges = [
            "MERGE (r:SafetyReport",
            "MERGE (p:Patient",
            "MERGE (d:Drug",
            "MERGE (e:AdverseEvent",
        ];
        for clause in node_merges {
            assert_eq!(text.matches(clause).count(), 1, "missing {clause}");
        }
        assert_eq!(
            text.matches("MERGE (").count(),
            7,
            "4 node + 3 relationship merges"
        );
        scan_string_literals(&text).unwrap();
    }

    #[test]
    fn awkward_names_escape_cleanly() {
        let batch = fixture_batch(&[r#"O'Brien's 5" \ "quoted""#], &["naïve 反応"]);
        let mut out = Vec::new();
        emit_cypher_script(&batch, &VocabularySet::builtin(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        scan_string_literals(&text).unwrap();
        assert!(text.contains("反応"));
    }

    #[test]
    fn emission_is_deterministic() {
        let batch = fixture_batch(&["A", "B"], &["X"]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_cypher_script(&batch, &VocabularySet::builtin(), &mut a).unwrap();
        emit_cypher_script(&batch, &VocabularySet::builtin(), &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn graph_script_counts_nodes_plus_relationships() {
        let cases = vec![
            VaersCase::new("A", ["Headache"], ["FLU"]),
            VaersCase::new("B", ["Headache"], []),
        ];
        let graph = build_vaers_graph(&cases);
        let mut out = Vec::new();
        let n = emit_graph_script(&graph, "vaers-fixture", vaers_key_property, &mut out).unwrap();
        assert_eq!(n, graph.node_count() + graph.relationship_count());
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.matches(';').count(), n);
        scan_string_literals(&text).unwrap();
        assert!(text.contains("MERGE (n:Symptom {name: \"HEADACHE\"})"));
        assert!(text.contains("[:EXPERIENCED]"));
    }

    #[test]
    fn escape_rules() {
        assert_eq!(escape_cypher_string(r#"a"b"#), r#"a\"b"#);
        assert_eq!(escape_cypher_string(r"a\b"), r"a\\b");
        assert_eq!(escape_cypher_string("a\nb"), r"a\nb");
        assert_eq!(escape_cypher_string("ünïcode"), "ünïcode");
    }
}
