//! Alternating transducer machines and output-span counting.
//!
//! An alternating transducer machine is an alternating Turing machine whose
//! transitions may emit output letters. Each accepting computation tree
//! projects to an ordered forest of labeled trees; the *span* of a machine on
//! an input is the number of distinct forests over all accepting trees within
//! a space bound and a tree-size budget. This crate implements the machine
//! model, the two normal-form transformations (binary universal branching and
//! an on-tape tree-size budget counter), bridges between machines and
//! context-free grammars in both directions, a sampling-based cardinality
//! estimator for grammar slices, and two applications built on the same
//! machinery: answer counting for acyclic conjunctive queries and counting
//! well-formed label strings of graph walks.
//!
//! The library is the primary interface. Each major capability has a runnable
//! example:
//!
//! - `cargo run --example machine_span` — build a machine, enumerate its
//!   accepting trees, compute span and tree count
//! - `cargo run --example normalize_pipeline` — binary branching and budget
//!   enforcement, with span preserved across both
//! - `cargo run --example machine_to_grammar` — compile a machine into a
//!   bracket grammar and count words instead of trees
//! - `cargo run --example grammar_to_machine` — turn a CNF grammar into a
//!   machine whose span is the number of length-k words
//! - `cargo run --example grammar_counting` — CNF conversion, membership,
//!   exact word/derivation counting, ambiguity probing
//! - `cargo run --example estimate_counts` — seeded sampling estimates with
//!   standard errors next to exact counts
//! - `cargo run --example acq_answers` — acyclic conjunctive query answers
//!   counted three ways
//! - `cargo run --example wellformed_walks` — well-formed walk strings
//!   counted by recursion, by machine span, and by brute force
//!
//! A thin `altspan` binary exposes the same operations as subcommands
//! (`machine`, `cfg`, `wfwalks`, `acq`) for use from scripts; see the README.

pub mod acq;
pub mod cli;
pub mod compile;
pub mod error;
pub mod estimator;
pub mod files;
pub mod grammar;
pub mod machine;
pub mod report;
pub mod wfwalks;

pub use error::Error;

/// Default ceiling for enumeration-style operations (word enumeration,
/// brute-force walk oracles, accepting-tree exploration). One "unit" is one
/// stored word, one inspected walk, or one visited tree node, respectively.
pub const DEFAULT_CAP: usize = 1_000_000;
