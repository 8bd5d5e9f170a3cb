//! Adverse-event knowledge graph toolkit.
//!
//! This crate turns public adverse-event datasets into three connected
//! representations:
//!
//! * a canonical nested JSON form of FAERS quarterly XML case reports,
//!   after a completeness filter (every kept report names at least one
//!   drug and one reaction);
//! * an in-memory property graph with Neo4j-style merge semantics, plus a
//!   self-contained Cypher import script and graph statistics;
//! * a formal OWL ontology (classes, object/datatype properties with
//!   domain and range axioms, instances, and OWL restrictions) serialized
//!   as Turtle and RDF/XML.
//!
//! VAERS annual CSV triples (data, symptoms, vaccines) are joined by
//! VAERS ID and flow into the same graph machinery.
//!
//! The `aekg` binary orchestrates the full pipeline:
//! fetch → convert → graph/cypher/stats → owl. See the book under `book/`
//! for a guided tour.

pub mod acquire;
pub mod config;
pub mod faers;
pub mod graph;
pub mod model;
pub mod ontology;
pub mod rdf;
pub mod vaers;
