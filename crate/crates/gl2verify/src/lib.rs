//! Verification suite for the double-coset operator toolkit: drives the
//! structural, character-theoretic, and determinant checks from
//! [`gl2cosets`] over a configurable set of odd primes, with text, JSON,
//! and CSV reporting.

pub mod checks;
pub mod config;
pub mod report;
pub mod session;
pub mod suite;

pub use config::{CheckKind, Mode, OutputFormat, SuiteConfig, DEFAULT_PRIMES};
pub use report::SuiteReport;
pub use suite::{run, THREADS_ENV};
