//! In-memory property graph with merge (upsert) semantics, builders for
//! the FAERS and VAERS data models, and graph statistics.
//!
//! Merge semantics mirror a graph database: nodes are keyed by
//! `(label, key_value)`, merging an existing key updates properties
//! without creating a duplicate, and at most one relationship exists per
//! `(type, source, target)` triple. Referential integrity is enforced on
//! every relationship insert and checkable after the fact with
//! [`PropertyGraph::audit`].

mod cypher;

pub use cypher::{
    default_key_property, emit_cypher_script, emit_graph_script, escape_cypher_string,
    vaers_key_property,
};

use crate::faers::CanonicalBatch;
use crate::model::{SafetyReport, VocabularySet};
use crate::vaers::VaersCase;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("node label and key value must be non-empty")]
    EmptyKey,
    #[error("relationship endpoint {0} does not exist in the graph")]
    DanglingEndpoint(NodeKey),
}

/// Warnings collected while building a graph from a batch; none of these
/// abort the build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    DuplicateReportId(String),
    UnknownCode { field: String, code: String },
}

impl fmt::Display for BuildWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildWarning::DuplicateReportId(id) => {
                write!(f, "duplicate report id {id:?}: later properties win")
            }
            BuildWarning::UnknownCode { field, code } => {
                write!(
                    f,
                    "unknown code {code:?} for field {field:?}: raw value kept"
                )
            }
        }
    }
}

/// Unique node identity: label plus normalized key value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeKey {
    pub label: String,
    pub key_value: String,
}

impl NodeKey {
    pub fn new(label: impl Into<String>, key_value: impl Into<String>) -> Self {
        NodeKey {
            label: label.into(),
            key_value: key_value.into(),
        }
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(:{} {{{}}})", self.label, self.key_value)
    }
}

/// A property value. Strings, integers, booleans, and lists of strings
/// (the shape a graph database stores for multi-valued attributes like
/// active substances).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PropertyValue {
    Str(String),
    Int(i64),
    Bool(bool),
    StrList(Vec<String>),
}

impl From<&str> for PropertyValue {
    fn from(value: &str) -> Self {
        PropertyValue::Str(value.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(value: String) -> Self {
        PropertyValue::Str(value)
    }
}

pub type Properties = BTreeMap<String, PropertyValue>;

/// A typed, directed relationship; `(rel_type, source, target)` is the
/// full identity, so re-merging the same triple is a no-op.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relationship {
    pub rel_type: String,
    pub source: NodeKey,
    pub target: NodeKey,
}

/// Whether a merge created something new or matched an existing entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOutcome {
    Created,
    Matched,
}

/// Labeled nodes with properties plus typed relationships.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyGraph {
    nodes: BTreeMap<NodeKey, Properties>,
    relationships: BTreeSet<Relationship>,
}

impl PropertyGraph {
    pub fn new() -> Self {
        PropertyGraph::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn relationship_count(&self) -> usize {
        self.relationships.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeKey, &Properties)> {
        self.nodes.iter()
    }

    pub fn relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter()
    }

    pub fn properties(&self, key: &NodeKey) -> Option<&Properties> {
        self.nodes.get(key)
    }

    pub fn contains_node(&self, key: &NodeKey) -> bool {
        self.nodes.contains_key(key)
    }

    /// Creates the node if absent, otherwise merges `properties` into the
    /// existing node (new keys added, existing keys overwritten). The key
    /// never changes.
    pub fn merge_node(
        &mut self,
        label: &str,
        key_value: &str,
        properties: impl IntoIterator<Item = (String, PropertyValue)>,
    ) -> Result<MergeOutcome, GraphError> {
        if label.is_empty() || key_value.is_empty() {
            return Err(GraphError::EmptyKey);
        }
        let key = NodeKey::new(label, key_value);
        let outcome = if self.nodes.contains_key(&key) {
            MergeOutcome::Matched
        } else {
            MergeOutcome::Created
        };
        let entry = self.nodes.entry(key).or_default();
        for (k, v) in properties {
            entry.insert(k, v);
        }
        Ok(outcome)
    }

    /// Ensures the relationship exists exactly once. Both endpoints must
    /// already be present.
    pub fn merge_relationship(
        &mut self,
        rel_type: &str,
        source: &NodeKey,
        target: &NodeKey,
    ) -> Result<MergeOutcome, GraphError> {
        if !self.nodes.contains_key(source) {
            return Err(GraphError::DanglingEndpoint(source.clone()));
        }
        if !self.nodes.contains_key(target) {
            return Err(GraphError::DanglingEndpoint(target.clone()));
        }
        let rel = Relationship {
            rel_type: rel_type.to_string(),
            source: source.clone(),
            target: target.clone(),
        };
        Ok(if self.relationships.insert(rel) {
            MergeOutcome::Created
        } else {
            MergeOutcome::Matched
        })
    }

    /// Total degree (in + out) of a node.
    pub fn degree(&self, key: &NodeKey) -> usize {
        self.relationships
            .iter()
            .filter(|r| r.source == *key || r.target == *key)
            .count()
    }

    /// Replays every node and relationship of `other` into `self`.
    ///
    /// This is the combine step for concurrent builds (one graph per
    /// worker, merged afterwards): replay is associative and commutative
    /// up to property overwrites, which follow merge semantics (later
    /// values win per key).
    pub fn merge_from(&mut self, other: &PropertyGraph) {
        for (key, props) in other.nodes() {
            self.merge_node(&key.label, &key.key_value, props.clone())
                .expect("existing keys are non-empty");
        }
        for rel in other.relationships() {
            self.merge_relationship(&rel.rel_type, &rel.source, &rel.target)
                .expect("endpoints merged above");
        }
    }

    /// Full referential-integrity audit: every relationship endpoint must
    /// resolve to a node. Returns the violating keys (empty when sound).
    pub fn audit(&self) -> Vec<NodeKey> {
        let mut bad = Vec::new();
        for rel in &self.relationships {
            if !self.nodes.contains_key(&rel.source) {
                bad.push(rel.source.clone());
            }
            if !self.nodes.contains_key(&rel.target) {
                bad.push(rel.target.clone());
            }
        }
        bad
    }
}

/// Key normalization for name-identified nodes: trim, uppercase, collapse
/// internal whitespace runs to single spaces.
pub fn normalize_name(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

/// Builds the case-report graph: per report a `SafetyReport` and a
/// `Patient` node (keyed by report id) joined by `HAS_PATIENT`; `Drug`
/// nodes keyed by normalized product name with `TOOK` edges from the
/// patient; `AdverseEvent` nodes keyed by normalized reaction term with
/// `EXPERIENCED` edges. Coded demographic values are decoded through
/// `vocab` where a table exists.
pub fn build_faers_graph(
    batch: &CanonicalBatch,
    vocab: &VocabularySet,
) -> (PropertyGraph, Vec<BuildWarning>) {
    let mut graph = PropertyGraph::new();
    let mut warnings = Vec::new();
    let mut seen_ids = BTreeSet::new();
    for report in &batch.reports {
        if !seen_ids.insert(report.report_id.clone()) {
            warnings.push(BuildWarning::DuplicateReportId(report.report_id.clone()));
        }
        merge_report(&mut graph, report, vocab, &mut warnings);
    }
    (graph, warnings)
}

pub(crate) fn report_node_props(report: &SafetyReport) -> Properties {
    let mut props = Properties::new();
    props.insert("safetyreportid".into(), report.report_id.as_str().into());
    if let Some(v) = &report.receive_date {
        props.insert("receivedate".into(), v.as_str().into());
    }
    if let Some(v) = &report.serious {
        props.insert("serious".into(), v.as_str().into());
    }
    props
}

pub(crate) fn patient_node_props(
    report: &SafetyReport,
    vocab: &VocabularySet,
    warnings: &mut Vec<BuildWarning>,
) -> Properties {
    let mut decode = |field: &str, value: &Option<String>| -> Option<String> {
        value.as_ref().map(|code| match vocab.decode(field, code) {
            Ok(term) => term.into_owned(),
            Err(unknown) => {
                warnings.push(BuildWarning::UnknownCode {
                    field: unknown.field,
                    code: unknown.code,
                });
                code.clone()
            }
        })
    };
    let patient = &report.patient;
    let mut props = Properties::new();
    props.insert("safetyreportid".into(), report.report_id.as_str().into());
    for (field, value) in [
        (
            "patientonsetage",
            decode("patientonsetage", &patient.onset_age),
        ),
        (
            "patientonsetageunit",
            decode("patientonsetageunit", &patient.onset_age_unit),
        ),
        (
            "patientagegroup",
            decode("patientagegroup", &patient.age_group),
        ),
        ("patientsex", decode("patientsex", &patient.sex)),
    ] {
        if let Some(v) = value {
            props.insert(field.into(), v.into());
        }
    }
    props
}

pub(crate) fn drug_node_props(drug: &crate::model::DrugRecord) -> (String, Properties) {
    let name = normalize_name(&drug.medicinal_product);
    let substances: Vec<String> = drug
        .active_substances
        .iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    let mut props = Properties::new();
    props.insert("name".into(), name.as_str().into());
    props.insert(
        "activesubstances".into(),
        PropertyValue::StrList(substances),
    );
    if let Some(c) = &drug.characterization {
        props.insert("drugcharacterization".into(), c.as_str().into());
    }
    (name, props)
}

fn merge_report(
    graph: &mut PropertyGraph,
    report: &SafetyReport,
    vocab: &VocabularySet,
    warnings: &mut Vec<BuildWarning>,
) {
    graph
        .merge_node("SafetyReport", &report.report_id, report_node_props(report))
        .expect("filtered reports carry non-empty ids");
    graph
        .merge_node(
            "Patient",
            &report.report_id,
            patient_node_props(report, vocab, warnings),
        )
        .expect("filtered reports carry non-empty ids");

    let report_key = NodeKey::new("SafetyReport", &report.report_id);
    let patient_key = NodeKey::new("Patient", &report.report_id);
    graph
        .merge_relationship("HAS_PATIENT", &report_key, &patient_key)
        .expect("endpoints merged above");

    for drug in &report.patient.drugs {
        let (name, props) = drug_node_props(drug);
        graph
            .merge_node("Drug", &name, props)
            .expect("drug names validated non-empty");
        graph
            .merge_relationship("TOOK", &patient_key, &NodeKey::new("Drug", &name))
            .expect("endpoints merged above");
    }

    for reaction in &report.patient.reactions {
        let term = normalize_name(&reaction.term);
        let props = [("term".to_string(), PropertyValue::Str(term.clone()))];
        graph
            .merge_node("AdverseEvent", &term, props)
            .expect("terms validated non-empty");
        graph
            .merge_relationship(
                "EXPERIENCED",
                &patient_key,
                &NodeKey::new("AdverseEvent", &term),
            )
            .expect("endpoints merged above");
    }
}

/// Builds the vaccine graph: a `Patient` node per case keyed by VAERS ID,
/// shared `Symptom` and `Vaccine` nodes keyed by normalized text, with
/// `EXPERIENCED` and `RECEIVED` edges.
pub fn build_vaers_graph(cases: &[VaersCase]) -> PropertyGraph {
    let mut graph = PropertyGraph::new();
    for case in cases {
        let patient_props = [(
            "vaersid".to_string(),
            PropertyValue::Str(case.vaers_id.clone()),
        )];
        graph
            .merge_node("Patient", &case.vaers_id, patient_props)
            .expect("case ids validated non-empty");
        let patient_key = NodeKey::new("Patient", &case.vaers_id);
        for symptom in &case.symptoms {
            let name = normalize_name(symptom);
            if name.is_empty() {
                continue;
            }
            let props = [("name".to_string(), PropertyValue::Str(name.clone()))];
            graph
                .merge_node("Symptom", &name, props)
                .expect("non-empty");
            graph
                .merge_relationship("EXPERIENCED", &patient_key, &NodeKey::new("Symptom", &name))
                .expect("endpoints merged above");
        }
        for vaccine in &case.vaccines {
            let name = normalize_name(vaccine);
            if name.is_empty() {
                continue;
            }
            let props = [("name".to_string(), PropertyValue::Str(name.clone()))];
            graph
                .merge_node("Vaccine", &name, props)
                .expect("non-empty");
            graph
                .merge_relationship("RECEIVED", &patient_key, &NodeKey::new("Vaccine", &name))
                .expect("endpoints merged above");
        }
    }
    graph
}

/// Exact node/edge counts plus the highest-degree nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub node_counts: BTreeMap<String, usize>,
    pub relationship_counts: BTreeMap<String, usize>,
    /// Highest-degree nodes, ties broken by key value then label.
    pub top_degree: Vec<(NodeKey, usize)>,
}

impl GraphStats {
    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str("nodes:\n");
        for (label, n) in &self.node_counts {
            out.push_str(&format!("  {label}: {n}\n"));
        }
        out.push_str("relationships:\n");
        for (ty, n) in &self.relationship_counts {
            out.push_str(&format!("  {ty}: {n}\n"));
        }
        out.push_str("top degree:\n");
        for (key, degree) in &self.top_degree {
            out.push_str(&format!(
                "  {}:{} degree={}\n",
                key.label, key.key_value, degree
            ));
        }
        out
    }
}

/// Computes per-label node counts, per-type edge counts, and the `top`
/// highest-degree nodes with deterministic tie-breaking.
pub fn graph_stats(graph: &PropertyGraph, top: usize) -> GraphStats {
    let mut node_counts: BTreeMap<String, usize> = BTreeMap::new();
    for (key, _) in graph.nodes() {
        *node_counts.entry(key.label.clone()).or_default() += 1;
    }
    let mut relationship_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut degrees: BTreeMap<NodeKey, usize> =
        graph.nodes().map(|(k, _)| (k.clone(), 0)).collect();
    for rel in graph.relationships() {
        *relationship_counts.entry(rel.rel_type.clone()).or_default() += 1;
        *degrees.get_mut(&rel.source).expect("audited") += 1;
        *degrees.get_mut(&rel.target).expect("audited") += 1;
    }
    let mut by_degree: Vec<(NodeKey, usize)> = degrees.into_iter().collect();
    by_degree.sort_by(|(ka, da), (kb, db)| {
        db.cmp(da)
            .then_with(|| ka.key_value.cmp(&kb.key_value))
            .then_with(|| ka.label.cmp(&kb.label))
    });
    by_degree.truncate(top);
    GraphStats {
        node_counts,
        relationship_counts,
        top_degree: by_degree,
    }
}
