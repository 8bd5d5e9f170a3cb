//! Ontology construction: class and property declarations with domain and
//! range axioms, instance population from a filtered batch, and OWL
//! restrictions built from blank nodes.
//!
//! The schema covers four classes (`SafetyReport`, `Patient`, `Drug`,
//! `AdverseEvent`), four object properties (`has_patient`, `took`,
//! `has_reported`, `is_partOf_causing`), and one datatype property
//! (`has_activesubstance`). Instances are minted as
//! `{base}{Kind}_{sanitized-id}` IRIs where sanitization percent-encodes
//! every character outside `[A-Za-z0-9_-]`, which keeps distinct
//! identifiers distinct.

use crate::faers::CanonicalBatch;
use crate::graph::normalize_name;
use crate::rdf::BlankNode;
use crate::rdf::{vocab, Iri, Literal, RdfError, Term, TripleGraph};
use std::fmt;

pub const DEFAULT_BASE_IRI: &str = "http://example.org/graph-aid#";

#[derive(Debug, thiserror::Error)]
pub enum OntologyError {
    #[error("instance identifier must be non-empty")]
    EmptyIdentifier,
    #[error("base IRI {0:?} must be absolute and end with '#' or '/'")]
    InvalidBaseIri(String),
    #[error("property {0} is not declared in the schema")]
    UndeclaredProperty(String),
    #[error("filler class {0} is not declared in the schema")]
    UndeclaredFiller(String),
    #[error(transparent)]
    Rdf(#[from] RdfError),
}

/// The four entity classes of the ontology and the graph model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntityKind {
    SafetyReport,
    Patient,
    Drug,
    AdverseEvent,
}

impl EntityKind {
    pub const ALL: [EntityKind; 4] = [
        EntityKind::SafetyReport,
        EntityKind::Patient,
        EntityKind::Drug,
        EntityKind::AdverseEvent,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EntityKind::SafetyReport => "SafetyReport",
            EntityKind::Patient => "Patient",
            EntityKind::Drug => "Drug",
            EntityKind::AdverseEvent => "AdverseEvent",
        }
    }

    pub fn parse(s: &str) -> Option<EntityKind> {
        EntityKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The declared properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    HasPatient,
    Took,
    HasReported,
    IsPartOfCausing,
    HasActiveSubstance,
}

impl PropertyKind {
    pub const OBJECT_PROPERTIES: [PropertyKind; 4] = [
        PropertyKind::HasPatient,
        PropertyKind::Took,
        PropertyKind::HasReported,
        PropertyKind::IsPartOfCausing,
    ];

    pub fn local_name(self) -> &'static str {
        match self {
            PropertyKind::HasPatient => "has_patient",
            PropertyKind::Took => "took",
            PropertyKind::HasReported => "has_reported",
            PropertyKind::IsPartOfCausing => "is_partOf_causing",
            PropertyKind::HasActiveSubstance => "has_activesubstance",
        }
    }

    pub fn parse(s: &str) -> Option<PropertyKind> {
        [
            PropertyKind::HasPatient,
            PropertyKind::Took,
            PropertyKind::HasReported,
            PropertyKind::IsPartOfCausing,
            PropertyKind::HasActiveSubstance,
        ]
        .into_iter()
        .find(|p| p.local_name().eq_ignore_ascii_case(s))
    }

    /// Declared domain and range. The range of the datatype property is
    /// `xsd:string`, expressed separately in the schema.
    pub fn domain(self) -> EntityKind {
        match self {
            PropertyKind::HasPatient => EntityKind::SafetyReport,
            PropertyKind::Took | PropertyKind::HasReported => EntityKind::Patient,
            PropertyKind::IsPartOfCausing | PropertyKind::HasActiveSubstance => EntityKind::Drug,
        }
    }

    pub fn object_range(self) -> Option<EntityKind> {
        match self {
            PropertyKind::HasPatient => Some(EntityKind::Patient),
            PropertyKind::Took => Some(EntityKind::Drug),
            PropertyKind::HasReported | PropertyKind::IsPartOfCausing => {
                Some(EntityKind::AdverseEvent)
            }
            PropertyKind::HasActiveSubstance => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    AllValuesFrom,
    SomeValuesFrom,
}

impl Quantifier {
    fn iri(self) -> Iri {
        match self {
            Quantifier::AllValuesFrom => Iri::known(vocab::OWL_ALL_VALUES_FROM),
            Quantifier::SomeValuesFrom => Iri::known(vocab::OWL_SOME_VALUES_FROM),
        }
    }

    pub fn parse(s: &str) -> Option<Quantifier> {
        match s.to_ascii_lowercase().as_str() {
            "allvaluesfrom" => Some(Quantifier::AllValuesFrom),
            "somevaluesfrom" => Some(Quantifier::SomeValuesFrom),
            _ => None,
        }
    }
}

/// Whether to assert a causal-hypothesis link for every drug and reaction
/// co-occurring in one report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CausalLinkPolicy {
    #[default]
    Pairwise,
    None,
}

/// One restriction to attach: `on_class ⊑ quantifier(property, filler)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionSpec {
    pub on_class: EntityKind,
    pub property: PropertyKind,
    pub quantifier: Quantifier,
    pub filler: EntityKind,
}

/// The default restrictions attached by [`build_ontology`].
pub fn default_restrictions() -> Vec<RestrictionSpec> {
    vec![
        RestrictionSpec {
            on_class: EntityKind::Drug,
            property: PropertyKind::IsPartOfCausing,
            quantifier: Quantifier::AllValuesFrom,
            filler: EntityKind::AdverseEvent,
        },
        RestrictionSpec {
            on_class: EntityKind::Patient,
            property: PropertyKind::Took,
            quantifier: Quantifier::AllValuesFrom,
            filler: EntityKind::Drug,
        },
        RestrictionSpec {
            on_class: EntityKind::Patient,
            property: PropertyKind::HasReported,
            quantifier: Quantifier::AllValuesFrom,
            filler: EntityKind::AdverseEvent,
        },
        RestrictionSpec {
            on_class: EntityKind::SafetyReport,
            property: PropertyKind::HasPatient,
            quantifier: Quantifier::SomeValuesFrom,
            filler: EntityKind::Patient,
        },
    ]
}

/// Namespace, typing, and restriction choices for one ontology build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyConfig {
    base_iri: String,
    /// Also type classes as `owl:Class` (besides `rdfs:Class`), which OWL
    /// DL tooling expects.
    pub emit_owl_class_typing: bool,
    pub causal_links: CausalLinkPolicy,
    pub restrictions: Vec<RestrictionSpec>,
}

impl Default for OntologyConfig {
    fn default() -> Self {
        OntologyConfig {
            base_iri: DEFAULT_BASE_IRI.to_string(),
            emit_owl_class_typing: true,
            causal_links: CausalLinkPolicy::Pairwise,
            restrictions: default_restrictions(),
        }
    }
}

impl OntologyConfig {
    pub fn with_base_iri(base_iri: impl Into<String>) -> Result<Self, OntologyError> {
        let base_iri = base_iri.into();
        if Iri::new(base_iri.clone()).is_err()
            || !(base_iri.ends_with('#') || base_iri.ends_with('/'))
        {
            return Err(OntologyError::InvalidBaseIri(base_iri));
        }
        Ok(OntologyConfig {
            base_iri,
            ..Default::default()
        })
    }

    pub fn base_iri(&self) -> &str {
        &self.base_iri
    }

    pub fn class_iri(&self, kind: EntityKind) -> Iri {
        Iri::known(&format!("{}{}", self.base_iri, kind.label()))
    }

    pub fn property_iri(&self, kind: PropertyKind) -> Iri {
        Iri::known(&format!("{}{}", self.base_iri, kind.local_name()))
    }

    /// The ontology header IRI: the namespace without its trailing
    /// separator.
    pub fn ontology_iri(&self) -> Iri {
        Iri::known(self.base_iri.trim_end_matches(['#', '/']))
    }
}

/// Percent-encodes every character outside `[A-Za-z0-9_-]` (UTF-8 bytes,
/// uppercase hex). Injective on identifiers: distinct inputs never
/// collide because '%' itself is always encoded.
pub fn sanitize_identifier(identifier: &str) -> String {
    let mut out = String::with_capacity(identifier.len());
    for c in identifier.chars() {
        if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for byte in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{byte:02X}"));
            }
        }
    }
    out
}

/// Mints the instance IRI `{base}{Kind}_{sanitized(identifier)}`.
pub fn mint_instance_iri(
    config: &OntologyConfig,
    kind: EntityKind,
    identifier: &str,
) -> Result<Iri, OntologyError> {
    if identifier.is_empty() {
        return Err(OntologyError::EmptyIdentifier);
    }
    Ok(Iri::known(&format!(
        "{}{}_{}",
        config.base_iri,
        kind.label(),
        sanitize_identifier(identifier)
    )))
}

fn rdf_type() -> Term {
    Term::Iri(Iri::known(vocab::RDF_TYPE))
}

/// Declares the schema: class typing triples, object properties with one
/// domain and one range axiom each, and the datatype property with domain
/// `Drug` and range `xsd:string`.
pub fn declare_schema(config: &OntologyConfig) -> TripleGraph {
    let mut g = TripleGraph::new();
    g.bind_prefix("ae", &config.base_iri)
        .expect("validated base IRI");

    for kind in EntityKind::ALL {
        let class: Term = config.class_iri(kind).into();
        g.add(
            class.clone(),
            rdf_type(),
            Term::Iri(Iri::known(vocab::RDFS_CLASS)),
        )
        .expect("schema terms are well-formed");
        if config.emit_owl_class_typing {
            g.add(class, rdf_type(), Term::Iri(Iri::known(vocab::OWL_CLASS)))
                .expect("schema terms are well-formed");
        }
    }

    for prop in PropertyKind::OBJECT_PROPERTIES {
        let p: Term = config.property_iri(prop).into();
        let domain: Term = config.class_iri(prop.domain()).into();
        let range: Term = config
            .class_iri(prop.object_range().expect("object property"))
            .into();
        g.add(
            p.clone(),
            rdf_type(),
            Term::Iri(Iri::known(vocab::OWL_OBJECT_PROPERTY)),
        )
        .expect("schema terms are well-formed");
        g.add(p.clone(), Term::Iri(Iri::known(vocab::RDFS_DOMAIN)), domain)
            .expect("schema terms are well-formed");
        g.add(p, Term::Iri(Iri::known(vocab::RDFS_RANGE)), range)
            .expect("schema terms are well-formed");
    }

    let dp: Term = config.property_iri(PropertyKind::HasActiveSubstance).into();
    g.add(
        dp.clone(),
        rdf_type(),
        Term::Iri(Iri::known(vocab::OWL_DATATYPE_PROPERTY)),
    )
    .expect("schema terms are well-formed");
    g.add(
        dp.clone(),
        Term::Iri(Iri::known(vocab::RDFS_DOMAIN)),
        config.class_iri(EntityKind::Drug).into(),
    )
    .expect("schema terms are well-formed");
    g.add(
        dp,
        Term::Iri(Iri::known(vocab::RDFS_RANGE)),
        Term::Iri(Iri::known(vocab::XSD_STRING)),
    )
    .expect("schema terms are well-formed");

    g
}

/// Attaches one OWL restriction as an anonymous class expression: a fresh
/// blank node typed `owl:Restriction`, pointed at the property with
/// `owl:onProperty`, constrained with the quantifier triple, and attached
/// to `on_class` via `rdfs:subClassOf`. Four triples per call; repeated
/// calls allocate distinct blank nodes, never merging structurally equal
/// restrictions.
pub fn add_class_restriction(
    graph: &mut TripleGraph,
    on_class: &Iri,
    property: &Iri,
    quantifier: Quantifier,
    filler: &Iri,
) -> Result<BlankNode, OntologyError> {
    let p_term = Term::Iri(property.clone());
    let declared_property = graph.has(
        &p_term,
        vocab::RDF_TYPE,
        &Term::Iri(Iri::known(vocab::OWL_OBJECT_PROPERTY)),
    ) || graph.has(
        &p_term,
        vocab::RDF_TYPE,
        &Term::Iri(Iri::known(vocab::OWL_DATATYPE_PROPERTY)),
    );
    if !declared_property {
        return Err(OntologyError::UndeclaredProperty(property.to_string()));
    }
    let f_term = Term::Iri(filler.clone());
    let declared_filler = graph.has(
        &f_term,
        vocab::RDF_TYPE,
        &Term::Iri(Iri::known(vocab::RDFS_CLASS)),
    ) || graph.has(
        &f_term,
        vocab::RDF_TYPE,
        &Term::Iri(Iri::known(vocab::OWL_CLASS)),
    );
    if !declared_filler {
        return Err(OntologyError::UndeclaredFiller(filler.to_string()));
    }

    let node = graph.new_blank_node();
    let b: Term = node.clone().into();
    graph.add(
        b.clone(),
        rdf_type(),
        Term::Iri(Iri::known(vocab::OWL_RESTRICTION)),
    )?;
    graph.add(
        b.clone(),
        Term::Iri(Iri::known(vocab::OWL_ON_PROPERTY)),
        Term::Iri(property.clone()),
    )?;
    graph.add(
        b.clone(),
        Term::Iri(quantifier.iri()),
        Term::Iri(filler.clone()),
    )?;
    graph.add(
        Term::Iri(on_class.clone()),
        Term::Iri(Iri::known(vocab::RDFS_SUBCLASSOF)),
        b,
    )?;
    Ok(node)
}

fn add_instances(graph: &mut TripleGraph, batch: &CanonicalBatch, config: &OntologyConfig) {
    for report in &batch.reports {
        let Ok(report_iri) = mint_instance_iri(config, EntityKind::SafetyReport, &report.report_id)
        else {
            continue;
        };
        let patient_iri = mint_instance_iri(config, EntityKind::Patient, &report.report_id)
            .expect("same identifier as the report");
        let add = |g: &mut TripleGraph, s: &Iri, p: Term, o: Term| {
            g.add(Term::Iri(s.clone()), p, o)
                .expect("instance terms are well-formed");
        };
        add(
            graph,
            &report_iri,
            rdf_type(),
            config.class_iri(EntityKind::SafetyReport).into(),
        );
        add(
            graph,
            &patient_iri,
            rdf_type(),
            config.class_iri(EntityKind::Patient).into(),
        );
        add(
            graph,
            &report_iri,
            config.property_iri(PropertyKind::HasPatient).into(),
            Term::Iri(patient_iri.clone()),
        );

        let mut drug_iris = Vec::new();
        for drug in &report.patient.drugs {
            let name = normalize_name(&drug.medicinal_product);
            let Ok(drug_iri) = mint_instance_iri(config, EntityKind::Drug, &name) else {
                continue;
            };
            add(
                graph,
                &drug_iri,
                rdf_type(),
                config.class_iri(EntityKind::Drug).into(),
            );
            add(
                graph,
                &patient_iri,
                config.property_iri(PropertyKind::Took).into(),
                Term::Iri(drug_iri.clone()),
            );
            for substance in &drug.active_substances {
                let substance = substance.trim();
                if substance.is_empty() {
                    continue;
                }
                add(
                    graph,
                    &drug_iri,
                    config.property_iri(PropertyKind::HasActiveSubstance).into(),
                    Literal::plain(substance).into(),
                );
            }
            drug_iris.push(drug_iri);
        }

        for reaction in &report.patient.reactions {
            let term = normalize_name(&reaction.term);
            let Ok(event_iri) = mint_instance_iri(config, EntityKind::AdverseEvent, &term) else {
                continue;
            };
            add(
                graph,
                &event_iri,
                rdf_type(),
                config.class_iri(EntityKind::AdverseEvent).into(),
            );
            add(
                graph,
                &patient_iri,
                config.property_iri(PropertyKind::HasReported).into(),
                Term::Iri(event_iri.clone()),
            );
            if config.causal_links == CausalLinkPolicy::Pairwise {
                for drug_iri in &drug_iris {
                    add(
                        graph,
                        drug_iri,
                        config.property_iri(PropertyKind::IsPartOfCausing).into(),
                        Term::Iri(event_iri.clone()),
                    );
                }
            }
        }
    }
}

/// Populates instances on top of a schema graph: typing triples for every
/// report, patient, deduplicated drug and adverse event, the object
/// property assertions linking them, one `has_activesubstance` literal per
/// drug substance, and (under the pairwise policy) one `is_partOf_causing`
/// assertion per drug and reaction co-occurring in a report.
pub fn populate_instances(
    schema: &TripleGraph,
    batch: &CanonicalBatch,
    config: &OntologyConfig,
) -> TripleGraph {
    let mut graph = schema.clone();
    add_instances(&mut graph, batch, config);
    graph
}

/// Populates instances from an already-built property graph instead of a
/// batch: `SafetyReport`, `Patient`, `Drug`, and `AdverseEvent` nodes map
/// to typed instances, `HAS_PATIENT`/`TOOK`/`EXPERIENCED` edges to the
/// corresponding property assertions, and each drug node's
/// `activesubstances` property to `has_activesubstance` literals. Nodes
/// with other labels are ignored. For a graph built from a batch, this
/// route yields the same triples as [`populate_instances`] whenever each
/// drug's substance list is consistent across reports (merge semantics
/// keep only the last list per drug node).
pub fn populate_instances_from_graph(
    schema: &TripleGraph,
    source: &crate::graph::PropertyGraph,
    config: &OntologyConfig,
) -> TripleGraph {
    use crate::graph::PropertyValue;

    let mut graph = schema.clone();
    let mut add = |s: &Iri, p: Term, o: Term| {
        graph
            .add(Term::Iri(s.clone()), p, o)
            .expect("instance terms are well-formed");
    };

    let mint = |kind: EntityKind, id: &str| mint_instance_iri(config, kind, id);
    for (key, props) in source.nodes() {
        let Some(kind) = EntityKind::parse(&key.label) else {
            continue;
        };
        let Ok(iri) = mint(kind, &key.key_value) else {
            continue;
        };
        add(&iri, rdf_type(), config.class_iri(kind).into());
        if kind == EntityKind::Drug {
            if let Some(PropertyValue::StrList(substances)) = props.get("activesubstances") {
                for substance in substances {
                    let substance = substance.trim();
                    if !substance.is_empty() {
                        add(
                            &iri,
                            config.property_iri(PropertyKind::HasActiveSubstance).into(),
                            Literal::plain(substance).into(),
                        );
                    }
                }
            }
        }
    }

    // Patient-centric adjacency for the pairwise causal links.
    let mut drugs_of: std::collections::BTreeMap<&str, Vec<Iri>> =
        std::collections::BTreeMap::new();
    let mut events_of: std::collections::BTreeMap<&str, Vec<Iri>> =
        std::collections::BTreeMap::new();
    for rel in source.relationships() {
        let (src, dst) = (&rel.source, &rel.target);
        match rel.rel_type.as_str() {
            "HAS_PATIENT" if src.label == "SafetyReport" && dst.label == "Patient" => {
                if let (Ok(report), Ok(patient)) = (
                    mint(EntityKind::SafetyReport, &src.key_value),
                    mint(EntityKind::Patient, &dst.key_value),
                ) {
                    add(
                        &report,
                        config.property_iri(PropertyKind::HasPatient).into(),
                        Term::Iri(patient),
                    );
                }
            }
            "TOOK" if src.label == "Patient" && dst.label == "Drug" => {
                if let (Ok(patient), Ok(drug)) = (
                    mint(EntityKind::Patient, &src.key_value),
                    mint(EntityKind::Drug, &dst.key_value),
                ) {
                    add(
                        &patient,
                        config.property_iri(PropertyKind::Took).into(),
                        Term::Iri(drug.clone()),
                    );
                    drugs_of.entry(&src.key_value).or_default().push(drug);
                }
            }
            "EXPERIENCED" if src.label == "Patient" && dst.label == "AdverseEvent" => {
                if let (Ok(patient), Ok(event)) = (
                    mint(EntityKind::Patient, &src.key_value),
                    mint(EntityKind::AdverseEvent, &dst.key_value),
                ) {
                    add(
                        &patient,
                        config.property_iri(PropertyKind::HasReported).into(),
                        Term::Iri(event.clone()),
                    );
                    events_of.entry(&src.key_value).or_default().push(event);
                }
            }
            _ => {}
        }
    }
    if config.causal_links == CausalLinkPolicy::Pairwise {
        for (patient, drugs) in &drugs_of {
            let Some(events) = events_of.get(patient) else {
                continue;
            };
            for drug in drugs {
                for event in events {
                    add(
                        drug,
                        config.property_iri(PropertyKind::IsPartOfCausing).into(),
                        Term::Iri(event.clone()),
                    );
                }
            }
        }
    }
    graph
}

/// Builds the complete ontology: schema, the ontology header triple, the
/// configured restrictions, and the instance population.
pub fn build_ontology(
    batch: &CanonicalBatch,
    config: &OntologyConfig,
) -> Result<TripleGraph, OntologyError> {
    let mut graph = declare_schema(config);
    graph.add(
        config.ontology_iri().into(),
        rdf_type(),
        Term::Iri(Iri::known(vocab::OWL_ONTOLOGY)),
    )?;
    for spec in &config.restrictions {
        add_class_restriction(
            &mut graph,
            &config.class_iri(spec.on_class),
            &config.property_iri(spec.property),
            spec.quantifier,
            &config.class_iri(spec.filler),
        )?;
    }
    add_instances(&mut graph, batch, config);
    Ok(graph)
}

/// One domain/range inconsistency found by [`audit_domain_range`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainRangeViolation {
    pub subject: String,
    pub property: String,
    pub expected_class: String,
    /// "domain" or "range".
    pub position: &'static str,
}

/// Checks every assertion of the declared properties: the subject must be
/// typed to the property's domain and the object to its range (literal for
/// the datatype property). Returns all violations; an empty result means
/// the instance data satisfies the declared axioms.
pub fn audit_domain_range(
    graph: &TripleGraph,
    config: &OntologyConfig,
) -> Vec<DomainRangeViolation> {
    let mut violations = Vec::new();
    let typed = |s: &Term, class: EntityKind| {
        graph.has(s, vocab::RDF_TYPE, &Term::Iri(config.class_iri(class)))
    };
    for triple in graph.triples() {
        let Term::Iri(pred) = &triple.predicate else {
            continue;
        };
        let Some(prop) = PropertyKind::OBJECT_PROPERTIES
            .into_iter()
            .chain([PropertyKind::HasActiveSubstance])
            .find(|p| config.property_iri(*p) == *pred)
        else {
            continue;
        };
        if !typed(&triple.subject, prop.domain()) {
            violations.push(DomainRangeViolation {
                subject: format!("{:?}", triple.subject),
                property: prop.local_name().to_string(),
                expected_class: prop.domain().label().to_string(),
                position: "domain",
            });
        }
        match prop.object_range() {
            Some(range) => {
                if !typed(&triple.object, range) {
                    violations.push(DomainRangeViolation {
                        subject: format!("{:?}", triple.object),
                        property: prop.local_name().to_string(),
                        expected_class: range.label().to_string(),
                        position: "range",
                    });
                }
            }
            None => {
                if !matches!(triple.object, Term::Literal(_)) {
                    violations.push(DomainRangeViolation {
                        subject: format!("{:?}", triple.object),
                        property: prop.local_name().to_string(),
                        expected_class: "literal".to_string(),
                        position: "range",
                    });
                }
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faers::filter_reports;
    use crate::model::{DrugRecord, PatientRecord, ReactionRecord, SafetyReport};

    fn fixture_report() -> SafetyReport {
        SafetyReport {
            report_id: "R1".into(),
            patient: PatientRecord {
                drugs: vec![
                    DrugRecord {
                        medicinal_product: "ASPIRIN".into(),
                        active_substances: vec!["ACETYLSALICYLIC ACID".into()],
                        ..Default::default()
                    },
                    DrugRecord {
                        medicinal_product: "WARFARIN".into(),
                        active_substances: vec!["WARFARIN SODIUM".into()],
                        ..Default::default()
                    },
                ],
                reactions: vec![ReactionRecord {
                    term: "GI BLEED".into(),
                }],
                ..Default::default()
            },
            ..Default::default()
        }
    }

    fn fixture_batch() -> CanonicalBatch {
        filter_reports("fixture", vec![fixture_report()])
    }

    #[test]
    fn default_schema_has_23_triples() {
        let g = declare_schema(&OntologyConfig::default());
        assert_eq!(g.len(), 23);
    }

    #[test]
    fn schema_without_owl_class_typing_has_19_triples() {
        let config = OntologyConfig {
            emit_owl_class_typing: false,
            ..Default::default()
        };
        let g = declare_schema(&config);
        assert_eq!(g.len(), 19);
    }

    #[test]
    fn has_patient_domain_and_range_are_fixed() {
        let config = OntologyConfig::default();
        let g = declare_schema(&config);
        let p: Term = config.property_iri(PropertyKind::HasPatient).into();
        assert!(g.has(
            &p,
            vocab::RDFS_DOMAIN,
            &config.class_iri(EntityKind::SafetyReport).into()
        ));
        assert!(g.has(
            &p,
            vocab::RDFS_RANGE,
            &config.class_iri(EntityKind::Patient).into()
        ));
    }

    #[test]
    fn datatype_property_is_declared_with_string_range() {
        let config = OntologyConfig::default();
        let g = declare_schema(&config);
        let p: Term = config.property_iri(PropertyKind::HasActiveSubstance).into();
        assert!(g.has(
            &p,
            vocab::RDF_TYPE,
            &Term::Iri(Iri::known(vocab::OWL_DATATYPE_PROPERTY))
        ));
        assert!(g.has(
            &p,
            vocab::RDFS_DOMAIN,
            &config.class_iri(EntityKind::Drug).into()
        ));
        assert!(g.has(
            &p,
            vocab::RDFS_RANGE,
            &Term::Iri(Iri::known(vocab::XSD_STRING))
        ));
    }

    #[test]
    fn mint_plain_identifier() {
        let config = OntologyConfig::default();
        let iri = mint_instance_iri(&config, EntityKind::Drug, "ASPIRIN").unwrap();
        assert_eq!(iri.as_str(), "http://example.org/graph-aid#Drug_ASPIRIN");
    }

    #[test]
    fn mint_encodes_spaces() {
        let config = OntologyConfig::default();
        let iri = mint_instance_iri(&config, EntityKind::AdverseEvent, "HEART ATTACK").unwrap();
        assert_eq!(
            iri.as_str(),
            "http://example.org/graph-aid#AdverseEvent_HEART%20ATTACK"
        );
    }

    #[test]
    fn mint_is_injective_on_lookalikes() {
        let config = OntologyConfig::default();
        let a = mint_instance_iri(&config, EntityKind::Drug, "A/B").unwrap();
        let b = mint_instance_iri(&config, EntityKind::Drug, "A_B").unwrap();
        assert_ne!(a, b);
        assert!(a.as_str().ends_with("Drug_A%2FB"));
        assert!(b.as_str().ends_with("Drug_A_B"));
    }

    #[test]
    fn mint_rejects_empty_identifier() {
        let config = OntologyConfig::default();
        assert!(matches!(
            mint_instance_iri(&config, EntityKind::Drug, ""),
            Err(OntologyError::EmptyIdentifier)
        ));
    }

    #[test]
    fn sanitize_multibyte_characters() {
        assert_eq!(sanitize_identifier("naïve"), "na%C3%AFve");
        assert_eq!(sanitize_identifier("a%b"), "a%25b");
    }

    #[test]
    fn populate_adds_13_instance_triples_for_fixture() {
        let config = OntologyConfig::default();
        let schema = declare_schema(&config);
        let populated = populate_instances(&schema, &fixture_batch(), &config);
        assert_eq!(populated.len() - schema.len(), 13);
    }

    #[test]
    fn populate_without_causal_links_adds_11() {
        let config = OntologyConfig {
            causal_links: CausalLinkPolicy::None,
            ..Default::default()
        };
        let schema = declare_schema(&config);
        let populated = populate_instances(&schema, &fixture_batch(), &config);
        assert_eq!(populated.len() - schema.len(), 11);
    }

    #[test]
    fn populate_on_empty_batch_is_identity() {
        let config = OntologyConfig::default();
        let schema = declare_schema(&config);
        let populated = populate_instances(&schema, &filter_reports("e", vec![]), &config);
        assert_eq!(populated, schema);
    }

    #[test]
    fn restriction_adds_four_triples_rooted_at_fresh_blank() {
        let config = OntologyConfig::default();
        let mut g = declare_schema(&config);
        let before = g.len();
        let node = add_class_restriction(
            &mut g,
            &config.class_iri(EntityKind::Drug),
            &config.property_iri(PropertyKind::IsPartOfCausing),
            Quantifier::AllValuesFrom,
            &config.class_iri(EntityKind::AdverseEvent),
        )
        .unwrap();
        assert_eq!(g.len(), before + 4);
        assert_eq!(node.label(), "b0");
        let b: Term = node.into();
        assert!(g.has(
            &b,
            vocab::RDF_TYPE,
            &Term::Iri(Iri::known(vocab::OWL_RESTRICTION))
        ));
    }

    #[test]
    fn same_restriction_twice_never_merges() {
        let config = OntologyConfig::default();
        let mut g = declare_schema(&config);
        let before = g.len();
        let add = |g: &mut TripleGraph| {
            add_class_restriction(
                g,
                &config.class_iri(EntityKind::Drug),
                &config.property_iri(PropertyKind::IsPartOfCausing),
                Quantifier::AllValuesFrom,
                &config.class_iri(EntityKind::AdverseEvent),
            )
            .unwrap()
        };
        let first = add(&mut g);
        let second = add(&mut g);
        assert_ne!(first, second);
        assert_eq!(g.len(), before + 8);
    }

    #[test]
    fn restriction_on_undeclared_property_fails() {
        let config = OntologyConfig::default();
        let mut g = TripleGraph::new();
        let err = add_class_restriction(
            &mut g,
            &config.class_iri(EntityKind::Drug),
            &config.property_iri(PropertyKind::Took),
            Quantifier::AllValuesFrom,
            &config.class_iri(EntityKind::Drug),
        )
        .unwrap_err();
        assert!(matches!(err, OntologyError::UndeclaredProperty(_)));
    }

    #[test]
    fn empty_batch_ontology_has_40_triples() {
        let g = build_ontology(&filter_reports("e", vec![]), &OntologyConfig::default()).unwrap();
        assert_eq!(g.len(), 40);
    }

    #[test]
    fn fixture_ontology_has_53_triples() {
        let g = build_ontology(&fixture_batch(), &OntologyConfig::default()).unwrap();
        assert_eq!(g.len(), 53);
    }

    #[test]
    fn ontology_header_present() {
        let config = OntologyConfig::default();
        let g = build_ontology(&filter_reports("e", vec![]), &config).unwrap();
        assert!(g.has(
            &config.ontology_iri().into(),
            vocab::RDF_TYPE,
            &Term::Iri(Iri::known(vocab::OWL_ONTOLOGY))
        ));
    }

    #[test]
    fn audit_passes_on_built_ontology() {
        let config = OntologyConfig::default();
        let g = build_ontology(&fixture_batch(), &config).unwrap();
        assert!(audit_domain_range(&g, &config).is_empty());
    }

    #[test]
    fn audit_flags_untyped_subject() {
        let config = OntologyConfig::default();
        let mut g = build_ontology(&filter_reports("e", vec![]), &config).unwrap();
        // Assertion whose subject and object lack typing triples.
        g.add(
            Term::Iri(Iri::known("http://example.org/graph-aid#Patient_GHOST")),
            config.property_iri(PropertyKind::Took).into(),
            Term::Iri(Iri::known("http://example.org/graph-aid#Drug_GHOST")),
        )
        .unwrap();
        let violations = audit_domain_range(&g, &config);
        assert_eq!(violations.len(), 2);
        assert_eq!(violations[0].position, "domain");
        assert_eq!(violations[1].position, "range");
    }

    #[test]
    fn graph_route_matches_batch_route() {
        // Same instances whether populated from the batch or from the
        // property graph built from it (substance lists are consistent
        // per drug here, so the two routes coincide exactly).
        let config = OntologyConfig::default();
        let schema = declare_schema(&config);
        let mut second = fixture_report();
        second.report_id = "R2".into();
        second.patient.reactions[0].term = "BRUISING".into();
        let batch = filter_reports("t", vec![fixture_report(), second]);

        let from_batch = populate_instances(&schema, &batch, &config);
        let (property_graph, _) =
            crate::graph::build_faers_graph(&batch, &crate::model::VocabularySet::builtin());
        let from_graph = populate_instances_from_graph(&schema, &property_graph, &config);
        assert_eq!(from_batch, from_graph);
    }

    #[test]
    fn graph_route_ignores_foreign_labels() {
        let config = OntologyConfig::default();
        let schema = declare_schema(&config);
        let mut g = crate::graph::PropertyGraph::new();
        g.merge_node("Symptom", "HEADACHE", []).unwrap();
        let populated = populate_instances_from_graph(&schema, &g, &config);
        assert_eq!(populated, schema);
    }

    #[test]
    fn union_of_disjoint_builds_matches_concatenated_build() {
        let mut report_b = fixture_report();
        report_b.report_id = "R2".into();
        report_b.patient.drugs[0].medicinal_product = "HEPARIN".into();
        let config = OntologyConfig::default();

        let schema = declare_schema(&config);
        let batch_a = filter_reports("a", vec![fixture_report()]);
        let batch_b = filter_reports("b", vec![report_b.clone()]);
        let combined = filter_reports("ab", vec![fixture_report(), report_b]);

        let mut unioned = populate_instances(&schema, &batch_a, &config);
        unioned.extend_from(&populate_instances(&schema, &batch_b, &config));
        let direct = populate_instances(&schema, &combined, &config);
        assert_eq!(unioned, direct);
    }

    #[test]
    fn base_iri_must_end_with_separator() {
        assert!(OntologyConfig::with_base_iri("http://example.org/onto#").is_ok());
        assert!(OntologyConfig::with_base_iri("http://example.org/onto/").is_ok());
        assert!(OntologyConfig::with_base_iri("http://example.org/onto").is_err());
        assert!(OntologyConfig::with_base_iri("not an iri#").is_err());
    }
}
