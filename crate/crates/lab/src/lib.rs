//! Verification reports over the `wavesym-core` catalog: symmetry
//! classification tables, transform and position checks, algebra closure
//! and irreducible content, as JSON or markdown.

pub mod commands;
pub mod config;
pub mod json;

pub use commands::{Outcome, Status};
pub use config::{Format, RunConfig};
