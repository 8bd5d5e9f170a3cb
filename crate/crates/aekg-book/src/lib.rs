//! Test shim for the book under `book/`.
//!
//! mdbook cannot run example code against this workspace's crates, so
//! each chapter is included here as module documentation and
//! `cargo test --doc` executes every Rust code block. A chapter module
//! per file keeps test failures attributable to their chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/data-model.md")]
pub mod data_model {}

#[doc = include_str!("../../../book/src/faers.md")]
pub mod faers {}

#[doc = include_str!("../../../book/src/vaers.md")]
pub mod vaers {}

#[doc = include_str!("../../../book/src/graph.md")]
pub mod graph {}

#[doc = include_str!("../../../book/src/rdf.md")]
pub mod rdf {}

#[doc = include_str!("../../../book/src/ontology.md")]
pub mod ontology {}

#[doc = include_str!("../../../book/src/acquire.md")]
pub mod acquire {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
