//! Incremental reasoning over timestamped atom streams with sliding time
//! and tuple windows.
//!
//! * [`model`]: atoms, streams and window functions.
//! * [`parser`]: program and stream file formats, negation rewriting and
//!   stratification.
//! * [`oracle`]: direct, non-incremental evaluation of the semantics.
//! * [`engine`]: the annotation-based incremental evaluator.
//! * [`workload`]: random instances, differential checks and benchmark
//!   scenarios.
//! * [`fuzz`]: entry points shared by the fuzz targets.

pub mod engine;
pub mod fuzz;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod workload;
