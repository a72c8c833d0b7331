//! Corpus generation, property suites and reports.

pub mod config;
pub mod corpus;
pub mod report;
pub mod suites;

pub use config::SuiteConfig;
pub use corpus::{gen_corpus, CorpusSpec, FamilyKind, FamilySpec};
pub use report::{emit_report, Case, ReportFormat, Summary, VerificationReport};
pub use suites::{run_configured, run_suite, Suite};
