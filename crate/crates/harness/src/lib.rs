//! Synthetic corpora with a documented seeded draw order, and naive
//! oracles that recompute collaboration counts, percentile ranks, output
//! and fractional strength straight from the data files.

mod oracle;
mod synth;

use std::path::PathBuf;

use thiserror::Error;

pub use oracle::{
    oracle_collab_counts, oracle_if_ranks, oracle_percentiles, oracle_researcher_metrics,
    OracleCollab, OracleScope,
};
pub use synth::{generate, write_grid_corpus, SynthConfig};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid synthetic corpus configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("empty sample")]
    EmptySample,
}
