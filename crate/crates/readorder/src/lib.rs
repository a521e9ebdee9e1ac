//! Batch tooling around [`readorder_core`]: annotation ingest, ordering
//! strategies, evaluation against reference orders, profile plots and
//! latency benchmarks. The `readorder` binary wraps [`cli::main_with`].

pub mod bench;
pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod strategy;
pub mod svg;
pub mod tensor;

pub use error::{Error, Result};
