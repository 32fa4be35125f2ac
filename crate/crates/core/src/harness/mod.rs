//! Lemma suites, theorem sweeps and their reports.

pub mod config;
pub mod corpus;
pub mod lemmas;
pub mod report;
pub mod theorems;

pub use config::Config;
pub use corpus::{corpus, CorpusEntry, SmoothnessClass};
pub use lemmas::run_lemma_suite;
pub use report::{emit_report, render_report, CaseResult, CheckKind, ReportFormat, Status, VerificationReport};
pub use theorems::{all_passed, run_theorem_sweep};
