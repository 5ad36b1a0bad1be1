// Errors carry exact rationals for diagnostics; the size is deliberate.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod applications;
pub mod apportionment;
pub mod cli;
pub mod dominance;
pub mod error;
pub mod harness;
pub mod lottery;
pub mod poly;
pub mod rational;
pub mod repro;
pub mod valuation;
pub mod value;
pub mod weighting;
