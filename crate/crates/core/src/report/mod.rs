//! Relation grammar, terms files, run manifests, report documents and the
//! canned replications.

pub mod document;
pub mod grammar;
pub mod replicate;
pub mod terms;

pub use document::{
    ansatzes_for, run_guess, CrossCheck, GuessEntry, Input, ReportBody, ReportDocument, ReportHeader, RunManifest,
    TOOL_VERSION,
};
pub use grammar::{format_relation, parse_relation, parse_relation_document};
pub use replicate::{replicate, replicate_with_cap, Replication, REPLICATION_IDS};
pub use terms::{read_terms, write_atomic, write_terms};
