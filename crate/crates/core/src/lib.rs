//! Island-style tooling for Java lambda expressions.
//!
//! This crate finds lambda expressions in text that does not have to compile:
//! whole files, snippets, and unified diffs. For each expression it recovers
//! a metadata record (span, parameters, typing, comments), can render a
//! single-statement body as an English sentence, and can aggregate usage and
//! documentation statistics over a directory tree.
//!
//! The pipeline is split into small, independently usable modules:
//!
//! - [`scan`] finds `->` arrows and labels their lexical context,
//! - [`detect`] turns code arrows into [`detect::LambdaExpression`] records,
//! - [`docgen`] verbalizes single-statement lambdas,
//! - [`diff`] classifies arrow-bearing lines of unified diffs,
//! - [`corpus`] walks directory trees and aggregates [`corpus::CorpusStats`],
//! - [`report`] renders statistics as deterministic JSON or CSV.

pub mod corpus;
pub mod detect;
pub mod diff;
pub mod docgen;
pub mod report;
pub mod scan;

mod location;

pub use location::SourceLocation;
