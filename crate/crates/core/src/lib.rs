//! Bibliometric mapping of university-industry co-authorship.
//!
//! The crate is organised as a pipeline over an immutable [`corpus::Corpus`]:
//!
//! - [`corpus`] loads and validates the flat-file inputs,
//! - [`resolve`] consolidates raw organization names against an alias table,
//! - [`collab`] classifies publications by their institutional signature,
//! - [`indicators`] computes sector intensity, percentile ranks, researcher
//!   output and fractional strength, and the multidisciplinarity indices,
//! - [`stats`] holds the t-test kernel and the table-level comparisons,
//! - [`report`] assembles ranked and comparison tables and renders them.

pub mod collab;
pub mod corpus;
mod ids;
pub mod indicators;
pub mod report;
pub mod resolve;
pub mod stats;

pub use ids::{JournalId, OrgId, PubId, ResearcherId, SdsId, UdaId};

/// Country code used for the domestic-firm test unless configured otherwise.
pub const DEFAULT_HOME_COUNTRY: &str = "IT";

/// Settings shared by every corpus-level analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// Only private firms registered in this country count as industry.
    pub home_country: String,
    /// Sectors with fewer extramural publications are dropped from the
    /// all-vs-collaboration comparison.
    pub min_collab_pubs: usize,
    /// Units with fewer industry co-authored publications are dropped from
    /// every industry comparison.
    pub min_industry_pubs: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            home_country: DEFAULT_HOME_COUNTRY.to_string(),
            min_collab_pubs: 7,
            min_industry_pubs: 1,
        }
    }
}
