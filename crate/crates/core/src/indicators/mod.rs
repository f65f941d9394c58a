//! Quantitative indicators: sector collaboration intensity, impact-factor
//! percentile ranks, researcher output (O) and fractional scientific
//! strength (FSS), and the two multidisciplinarity indices.

mod intensity;
mod multidisc;
mod percentile;
mod performance;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::collab::{classify_publication, CollaborationProfile};
use crate::corpus::{Corpus, Publication};
use crate::SdsId;

pub(crate) use intensity::intensity_of;
pub use intensity::{sector_intensity, Level, SectorIntensityRow};
pub(crate) use multidisc::multidisc_of;
pub use multidisc::{multidisc_sci, multidisc_sds, multidisc_table, MultidiscIndex, ScopeKind};
pub use percentile::{
    article_ifpr, if_percentile_ranks, midrank_percentiles, IfRanks, JournalCategory,
    PercentileRanked,
};
pub use performance::{
    active_sectors, rank_within_sector, researcher_fss, researcher_output, researcher_performance,
    ResearcherPerformance,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndicatorError {
    #[error("journal {journal_id} has no impact factor usable for {year}")]
    MissingIf { journal_id: String, year: i32 },
    #[error("publication {pub_id}: journal {journal_id} is not ranked in any category")]
    UnrankedJournal { pub_id: String, journal_id: String },
    #[error("unknown researcher {0}")]
    UnknownResearcher(String),
    #[error("sector {0} has no researchers to rank")]
    EmptySector(String),
    #[error("researcher {0} has no value to rank")]
    MissingValue(String),
    #[error("empty publication set")]
    EmptySet,
    #[error("publication {0} has no roster-linked academic author")]
    NoAcademicAuthors(String),
    #[error("unknown sector level {0:?} (expected sds or uda)")]
    UnknownLevel(String),
}

/// What the analyses need to know about one publication.
#[derive(Debug, Clone)]
pub(crate) struct PubFacts<'c> {
    pub publication: &'c Publication,
    pub profile: CollaborationProfile,
    pub sectors: BTreeSet<&'c SdsId>,
}

/// Classification, sectors and journal ranks of a corpus, computed once and
/// shared by every table built from it.
pub struct Analysis<'c> {
    corpus: &'c Corpus,
    home_country: String,
    facts: Vec<PubFacts<'c>>,
    ranks: OnceLock<Result<IfRanks, IndicatorError>>,
    performance: OnceLock<Result<Vec<ResearcherPerformance>, IndicatorError>>,
}

impl<'c> Analysis<'c> {
    pub fn new(corpus: &'c Corpus, home_country: &str) -> Self {
        Self {
            corpus,
            home_country: home_country.to_string(),
            facts: pub_facts(corpus, home_country),
            ranks: OnceLock::new(),
            performance: OnceLock::new(),
        }
    }

    pub fn corpus(&self) -> &'c Corpus {
        self.corpus
    }

    pub fn home_country(&self) -> &str {
        &self.home_country
    }

    /// Collaboration profiles in publication-id order.
    pub fn profiles(&self) -> impl Iterator<Item = &CollaborationProfile> {
        self.facts.iter().map(|f| &f.profile)
    }

    pub(crate) fn facts(&self) -> &[PubFacts<'c>] {
        &self.facts
    }

    pub fn if_ranks(&self) -> Result<&IfRanks, IndicatorError> {
        self.ranks
            .get_or_init(|| IfRanks::build(self.corpus.journals(), self.corpus.window()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn performance(&self) -> Result<&[ResearcherPerformance], IndicatorError> {
        self.performance
            .get_or_init(|| {
                let ranks = self.if_ranks()?;
                performance::performance_of(self.corpus, &self.facts, ranks)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }
}

pub(crate) fn pub_facts<'c>(corpus: &'c Corpus, home_country: &str) -> Vec<PubFacts<'c>> {
    use rayon::prelude::*;
    corpus
        .publications()
        .par_iter()
        .map(|p| PubFacts {
            publication: p,
            profile: classify_publication(p, |id| corpus.organization(id), home_country),
            sectors: corpus.sectors_of(p),
        })
        .collect()
}
