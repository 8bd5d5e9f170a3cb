//! Minimal RDF triple engine: terms, triple graphs with set semantics, and
//! deterministic Turtle / RDF/XML serialization.
//!
//! Determinism is a contract here, not a convenience. Equal graphs
//! serialize to byte-identical output in both formats: prefixes are
//! emitted sorted by prefix name and triples in a canonical order
//! (subject, predicate, object compared as expanded strings, with blank
//! nodes sorting after IRIs and literals after blank nodes). Blank node
//! labels are `b0`, `b1`, ... in allocation order.

mod turtle;
mod xml;

pub use turtle::{parse_turtle, TurtleParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

/// Well-known vocabulary IRIs.
pub mod vocab {
    pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
    pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";

    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const RDFS_SUBCLASSOF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
    pub const OWL_ONTOLOGY: &str = "http://www.w3.org/2002/07/owl#Ontology";
    pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
    pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
    pub const OWL_RESTRICTION: &str = "http://www.w3.org/2002/07/owl#Restriction";
    pub const OWL_ON_PROPERTY: &str = "http://www.w3.org/2002/07/owl#onProperty";
    pub const OWL_ALL_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#allValuesFrom";
    pub const OWL_SOME_VALUES_FROM: &str = "http://www.w3.org/2002/07/owl#someValuesFrom";
    pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
}

/// Errors raised by term construction, graph mutation, and serialization.
#[derive(Debug, thiserror::Error)]
pub enum RdfError {
    #[error("invalid IRI {0:?}: IRIs need a scheme and must not contain whitespace or <>\"")]
    InvalidIri(String),
    #[error("literal terms cannot be triple subjects")]
    LiteralAsSubject,
    #[error("triple predicates must be IRIs, got {0}")]
    NonIriPredicate(String),
    #[error("prefix {prefix:?} is reserved for {expected:?}")]
    ReservedPrefix { prefix: String, expected: String },
    #[error("predicate IRI {0:?} has no splittable local name for RDF/XML")]
    UnsplittablePredicate(String),
    #[error("write error: {0}")]
    Io(#[from] std::io::Error),
}

/// An absolute IRI. Construction validates that a scheme is present and
/// that the text carries no whitespace or angle-bracket characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if !has_scheme(&value)
            || value
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
        {
            return Err(RdfError::InvalidIri(value));
        }
        Ok(Iri(value))
    }

    /// For compiled-in vocabulary constants known to be valid.
    pub(crate) fn known(value: &str) -> Self {
        Iri(value.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn has_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An anonymous node, identified by a graph-local label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn label(&self) -> &str {
        &self.0
    }
}

/// A literal value: lexical form plus optional datatype IRI. Literals with
/// no datatype are plain strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Option<Iri>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Some(datatype),
        }
    }
}

/// An RDF term: IRI, blank node, or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: &str) -> Result<Term, RdfError> {
        Ok(Term::Iri(Iri::new(value)?))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Term::Iri(_) => 0,
            Term::Blank(_) => 1,
            Term::Literal(_) => 2,
        }
    }
}

impl From<Iri> for Term {
    fn from(value: Iri) -> Self {
        Term::Iri(value)
    }
}

impl From<BlankNode> for Term {
    fn from(value: BlankNode) -> Self {
        Term::Blank(value)
    }
}

impl From<Literal> for Term {
    fn from(value: Literal) -> Self {
        Term::Literal(value)
    }
}

// Canonical term order: IRIs, then blank nodes, then literals; string
// comparison of the expanded form within each kind.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then_with(|| match (self, other) {
                (Term::Iri(a), Term::Iri(b)) => a.cmp(b),
                (Term::Blank(a), Term::Blank(b)) => a.cmp(b),
                (Term::Literal(a), Term::Literal(b)) => a.cmp(b),
                _ => unreachable!("kind ranks matched"),
            })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// One RDF statement. The subject is an IRI or blank node and the
/// predicate is always an IRI; both are enforced at construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, RdfError> {
        if matches!(subject, Term::Literal(_)) {
            return Err(RdfError::LiteralAsSubject);
        }
        if !matches!(predicate, Term::Iri(_)) {
            return Err(RdfError::NonIriPredicate(format!("{predicate:?}")));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }
}

/// Prefix-to-namespace bindings, seeded with the standard rdf, rdfs, owl,
/// and xsd namespaces. Standard prefixes cannot be rebound to other IRIs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamespaceTable {
    bindings: BTreeMap<String, String>,
}

const STANDARD_PREFIXES: [(&str, &str); 4] = [
    ("rdf", vocab::RDF_NS),
    ("rdfs", vocab::RDFS_NS),
    ("owl", vocab::OWL_NS),
    ("xsd", vocab::XSD_NS),
];

impl Default for NamespaceTable {
    fn default() -> Self {
        let mut bindings = BTreeMap::new();
        for (prefix, iri) in STANDARD_PREFIXES {
            bindings.insert(prefix.to_string(), iri.to_string());
        }
        NamespaceTable { bindings }
    }
}

impl NamespaceTable {
    pub fn bind(&mut self, prefix: &str, iri: &str) -> Result<(), RdfError> {
        for (std_prefix, std_iri) in STANDARD_PREFIXES {
            if prefix == std_prefix && iri != std_iri {
                return Err(RdfError::ReservedPrefix {
                    prefix: prefix.to_string(),
                    expected: std_iri.to_string(),
                });
            }
        }
        self.bindings.insert(prefix.to_string(), iri.to_string());
        Ok(())
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.bindings.get(prefix).map(String::as_str)
    }

    /// Bindings sorted by prefix name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(p, i)| (p.as_str(), i.as_str()))
    }

    /// Longest-namespace match for `iri`, returning `(prefix, local)`.
    pub fn split<'s, 'i>(&'s self, iri: &'i str) -> Option<(&'s str, &'i str)> {
        self.bindings
            .iter()
            .filter_map(|(prefix, ns)| {
                iri.strip_prefix(ns.as_str())
                    .map(|local| (prefix.as_str(), ns.len(), local))
            })
            .max_by_key(|(_, len, _)| *len)
            .map(|(prefix, _, local)| (prefix, local))
    }
}

/// A set of triples plus namespace bindings.
///
/// Adding a duplicate triple is a no-op; iteration follows the canonical
/// term order, so two equal graphs always present their triples
/// identically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleGraph {
    triples: BTreeSet<Triple>,
    namespaces: NamespaceTable,
    blank_counter: u64,
}

impl TripleGraph {
    pub fn new() -> Self {
        TripleGraph::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn namespaces(&self) -> &NamespaceTable {
        &self.namespaces
    }

    pub fn bind_prefix(&mut self, prefix: &str, iri: &str) -> Result<(), RdfError> {
        self.namespaces.bind(prefix, iri)
    }

    /// Inserts the triple, returning false when it was already present.
    pub fn add(&mut self, subject: Term, predicate: Term, object: Term) -> Result<bool, RdfError> {
        let triple = Triple::new(subject, predicate, object)?;
        Ok(self.triples.insert(triple))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    /// True when the graph holds `(subject, predicate, object)`.
    pub fn has(&self, subject: &Term, predicate: &str, object: &Term) -> bool {
        self.triples.iter().any(|t| {
            t.subject == *subject
                && matches!(&t.predicate, Term::Iri(p) if p.as_str() == predicate)
                && t.object == *object
        })
    }

    /// Triples in canonical order.
    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Allocates the next blank node: `b0`, `b1`, ... per graph.
    pub fn new_blank_node(&mut self) -> BlankNode {
        let node = BlankNode(format!("b{}", self.blank_counter));
        self.blank_counter += 1;
        node
    }

    /// Copies every triple of `other` into `self` (set union). Blank node
    /// labels are taken verbatim, so only union graphs with disjoint or
    /// deliberately shared label spaces.
    pub fn extend_from(&mut self, other: &TripleGraph) {
        for t in &other.triples {
            self.triples.insert(t.clone());
        }
        self.blank_counter = self.blank_counter.max(other.blank_counter);
    }

    /// Serializes as Turtle; returns the number of bytes written. Equal
    /// graphs produce byte-identical output.
    pub fn serialize_turtle<W: Write>(&self, sink: W) -> Result<u64, RdfError> {
        turtle::serialize(self, sink)
    }

    /// Serializes as RDF/XML; returns the number of bytes written.
    pub fn serialize_rdfxml<W: Write>(&self, sink: W) -> Result<u64, RdfError> {
        xml::serialize(self, sink)
    }

    /// Structural equality up to a bijection of blank node labels.
    ///
    /// Ground triples must match exactly; blank-containing triples must
    /// match under some one-to-one relabeling. Search is signature-pruned
    /// backtracking, fine for the graph sizes this crate emits.
    pub fn isomorphic(&self, other: &TripleGraph) -> bool {
        if self.triples.len() != other.triples.len() {
            return false;
        }
        let ground_a: BTreeSet<&Triple> = self.triples.iter().filter(|t| is_ground(t)).collect();
        let ground_b: BTreeSet<&Triple> = other.triples.iter().filter(|t| is_ground(t)).collect();
        if ground_a != ground_b {
            return false;
        }
        let blank_a = blank_labels(self);
        let blank_b = blank_labels(other);
        if blank_a.len() != blank_b.len() {
            return false;
        }
        if blank_a.is_empty() {
            return true;
        }
        let pat_a: Vec<&Triple> = self.triples.iter().filter(|t| !is_ground(t)).collect();
        let pat_b: BTreeSet<Triple> = other
            .triples
            .iter()
            .filter(|t| !is_ground(t))
            .cloned()
            .collect();
        let sig_a = signatures(&pat_a, &blank_a);
        let pat_b_vec: Vec<&Triple> = other.triples.iter().filter(|t| !is_ground(t)).collect();
        let sig_b = signatures(&pat_b_vec, &blank_b);
        let mut mapping: BTreeMap<String, String> = BTreeMap::new();
        let mut used: BTreeSet<String> = BTreeSet::new();
        assign(
            &blank_a,
            0,
            &sig_a,
            &sig_b,
            &pat_a,
            &pat_b,
            &mut mapping,
            &mut used,
        )
    }
}

fn is_ground(t: &Triple) -> bool {
    !t.subject.is_blank() && !t.object.is_blank()
}

fn blank_labels(g: &TripleGraph) -> Vec<String> {
    let mut labels = BTreeSet::new();
    for t in g.triples() {
        if let Term::Blank(b) = &t.subject {
            labels.insert(b.label().to_string());
        }
        if let Term::Blank(b) = &t.object {
            labels.insert(b.label().to_string());
        }
    }
    labels.into_iter().collect()
}

// Signature of a blank node: the multiset of (position, predicate,
// other-side term with blanks wildcarded) entries it appears in. Bijection
// candidates must share signatures.
fn signatures(patterns: &[&Triple], labels: &[String]) -> BTreeMap<String, Vec<String>> {
    let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for label in labels {
        let mut sig = Vec::new();
        for t in patterns {
            let pred = match &t.predicate {
                Term::Iri(i) => i.as_str(),
                _ => unreachable!(),
            };
            let subj_is = matches!(&t.subject, Term::Blank(b) if b.label() == label);
            let obj_is = matches!(&t.object, Term::Blank(b) if b.label() == label);
            if subj_is {
                sig.push(format!("s|{pred}|{}", wildcard(&t.object)));
            }
            if obj_is {
                sig.push(format!("o|{pred}|{}", wildcard(&t.subject)));
            }
        }
        sig.sort();
        out.insert(label.clone(), sig);
    }
    out
}

fn wildcard(term: &Term) -> String {
    match term {
        Term::Blank(_) => "*".to_string(),
        Term::Iri(i) => format!("<{}>", i.as_str()),
        Term::Literal(l) => format!("{:?}^^{:?}", l.lexical, l.datatype),
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    labels_a: &[String],
    idx: usize,
    sig_a: &BTreeMap<String, Vec<String>>,
    sig_b: &BTreeMap<String, Vec<String>>,
    pat_a: &[&Triple],
    pat_b: &BTreeSet<Triple>,
    mapping: &mut BTreeMap<String, String>,
    used: &mut BTreeSet<String>,
) -> bool {
    if idx == labels_a.len() {
        return pat_a
            .iter()
            .all(|t| pat_b.contains(&substitute(t, mapping)));
    }
    let label = &labels_a[idx];
    let want = &sig_a[label];
    for (candidate, sig) in sig_b {
        if used.contains(candidate) || sig != want {
            continue;
        }
        mapping.insert(label.clone(), candidate.clone());
        used.insert(candidate.clone());
        if assign(labels_a, idx + 1, sig_a, sig_b, pat_a, pat_b, mapping, used) {
            return true;
        }
        mapping.remove(label);
        used.remove(candidate);
    }
    false
}

fn substitute(t: &Triple, mapping: &BTreeMap<String, String>) -> Triple {
    let map_term = |term: &Term| match term {
        Term::Blank(b) => Term::Blank(BlankNode(
            mapping
                .get(b.label())
                .cloned()
                .unwrap_or_else(|| b.label().to_string()),
        )),
        other => other.clone(),
    };
    Triple {
        subject: map_term(&t.subject),
        predicate: t.predicate.clone(),
        object: map_term(&t.object),
    }
}

/// Counts bytes written through to the inner sink.
pub(crate) struct CountingWriter<W: Write> {
    inner: W,
    count: u64,
}

impl<W: Write> CountingWriter<W> {
    pub(crate) fn new(inner: W) -> Self {
        CountingWriter { inner, count: 0 }
    }

    pub(crate) fn count(&self) -> u64 {
        self.count
    }
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.count += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}
