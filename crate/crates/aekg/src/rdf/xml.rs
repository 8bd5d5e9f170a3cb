//! RDF/XML serialization.
//!
//! Output is one `rdf:Description` element per subject in canonical order,
//! with predicates as namespaced child elements. Blank nodes use
//! `rdf:nodeID`. Every predicate IRI must split into a namespace and an
//! XML-name local part; IRIs that end at a separator are rejected.

use super::{CountingWriter, Iri, RdfError, Term, TripleGraph};
use std::collections::BTreeMap;
use std::io::Write;

pub(super) fn serialize<W: Write>(graph: &TripleGraph, sink: W) -> Result<u64, RdfError> {
    // Predicate namespaces must be declared on the root. Known prefixes are
    // reused, remaining namespaces get ns0, ns1, ... in sorted order.
    let mut ns_to_prefix: BTreeMap<String, String> = BTreeMap::new();
    for (prefix, ns) in graph.namespaces().iter() {
        if !prefix.is_empty() {
            ns_to_prefix
                .entry(ns.to_string())
                .or_insert_with(|| prefix.to_string());
        }
    }
    // Only predicates need declared prefixes; datatypes are written as
    // full IRIs in rdf:datatype attributes.
    let mut extra = Vec::new();
    for triple in graph.triples() {
        let pred = predicate_iri(&triple.predicate);
        let (ns, _) = split_predicate(pred)?;
        if !ns_to_prefix.contains_key(ns) {
            extra.push(ns.to_string());
        }
    }
    extra.sort();
    extra.dedup();
    for (i, ns) in extra.iter().enumerate() {
        ns_to_prefix.insert(ns.clone(), format!("ns{i}"));
    }

    let mut w = CountingWriter::new(sink);
    writeln!(w, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>")?;
    write!(w, "<rdf:RDF")?;
    let mut decls: Vec<(String, String)> = ns_to_prefix
        .iter()
        .map(|(ns, p)| (p.clone(), ns.clone()))
        .collect();
    decls.sort();
    for (prefix, ns) in &decls {
        write!(w, "\n    xmlns:{prefix}=\"{}\"", escape_attr(ns))?;
    }
    writeln!(w, ">")?;

    // Group triples by subject; BTreeSet iteration already delivers them
    // subject-major in canonical order.
    let mut current: Option<&Term> = None;
    for triple in graph.triples() {
        if current != Some(&triple.subject) {
            if current.is_some() {
                writeln!(w, "  </rdf:Description>")?;
            }
            match &triple.subject {
                Term::Iri(iri) => writeln!(
                    w,
                    "  <rdf:Description rdf:about=\"{}\">",
                    escape_attr(iri.as_str())
                )?,
                Term::Blank(b) => writeln!(
                    w,
                    "  <rdf:Description rdf:nodeID=\"{}\">",
                    escape_attr(b.label())
                )?,
                Term::Literal(_) => unreachable!("literal subjects rejected at insert"),
            }
            current = Some(&triple.subject);
        }
        let pred = predicate_iri(&triple.predicate);
        let (ns, local) = split_predicate(pred)?;
        let prefix = &ns_to_prefix[ns];
        match &triple.object {
            Term::Iri(iri) => writeln!(
                w,
                "    <{prefix}:{local} rdf:resource=\"{}\"/>",
                escape_attr(iri.as_str())
            )?,
            Term::Blank(b) => writeln!(
                w,
                "    <{prefix}:{local} rdf:nodeID=\"{}\"/>",
                escape_attr(b.label())
            )?,
            Term::Literal(lit) => match &lit.datatype {
                Some(dt) => writeln!(
                    w,
                    "    <{prefix}:{local} rdf:datatype=\"{}\">{}</{prefix}:{local}>",
                    escape_attr(dt.as_str()),
                    escape_text(&lit.lexical)
                )?,
                None => writeln!(
                    w,
                    "    <{prefix}:{local}>{}</{prefix}:{local}>",
                    escape_text(&lit.lexical)
                )?,
            },
        }
    }
    if current.is_some() {
        writeln!(w, "  </rdf:Description>")?;
    }
    writeln!(w, "</rdf:RDF>")?;
    w.flush()?;
    Ok(w.count())
}

fn predicate_iri(term: &Term) -> &Iri {
    match term {
        Term::Iri(iri) => iri,
        _ => unreachable!("non-IRI predicates rejected at insert"),
    }
}

// Split at the last '#' or '/' such that the local part is a valid XML
// NCName.
fn split_predicate(iri: &Iri) -> Result<(&str, &str), RdfError> {
    let s = iri.as_str();
    let split_at = s.rfind(['#', '/']).map(|i| i + 1);
    match split_at {
        Some(idx) if idx < s.len() && is_ncname(&s[idx..]) => Ok((&s[..idx], &s[idx..])),
        _ => Err(RdfError::UnsplittablePredicate(s.to_string())),
    }
}

fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
    out
}
