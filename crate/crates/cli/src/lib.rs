//! Command-line front end and sweep engine for the space-time Klein step
//! solver: single-point queries, figure-data regeneration, threshold
//! curves and verification runs, with deterministic CSV/JSON output.

pub mod figures;
pub mod output;
pub mod sample;
pub mod sweep;
pub mod verify;
