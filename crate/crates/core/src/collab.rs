//! Institutional signature of each publication and collaboration counting.
//!
//! A publication with `m` universities and `n` domestic private firms in its
//! address field embeds `m * n` university-industry collaborations. Public
//! bodies, consortia, foundations, foreign organizations and foreign firms
//! never count on the industry side.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, OrgKind, Organization, Publication};
use crate::{OrgId, PubId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CollabError {
    #[error(
        "unknown publication subset {0:?} (expected all, extramural_collab or industry_coauthored)"
    )]
    UnknownSelector(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollabCase {
    None,
    OneOne,
    MOne,
    OneN,
    MN,
}

impl CollabCase {
    pub fn from_counts(m: usize, n: usize) -> Self {
        match (m, n) {
            (0, _) | (_, 0) => CollabCase::None,
            (1, 1) => CollabCase::OneOne,
            (_, 1) => CollabCase::MOne,
            (1, _) => CollabCase::OneN,
            _ => CollabCase::MN,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CollabCase::None => "none",
            CollabCase::OneOne => "one_one",
            CollabCase::MOne => "m_one",
            CollabCase::OneN => "one_n",
            CollabCase::MN => "m_n",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollaborationProfile {
    pub pub_id: PubId,
    pub universities: BTreeSet<OrgId>,
    pub domestic_firms: BTreeSet<OrgId>,
    pub other_orgs: BTreeSet<OrgId>,
    pub case: CollabCase,
    pub collab_count: u64,
}

impl CollaborationProfile {
    pub fn m(&self) -> usize {
        self.universities.len()
    }

    pub fn n(&self) -> usize {
        self.domestic_firms.len()
    }

    pub fn is_industry_coauthored(&self) -> bool {
        self.collab_count > 0
    }

    /// At least two distinct organizations, one of them a university.
    pub fn is_extramural(&self) -> bool {
        let distinct = self.universities.len() + self.domestic_firms.len() + self.other_orgs.len();
        !self.universities.is_empty() && distinct >= 2
    }
}

/// Splits the address field of `publication` by organization kind.
/// Address ids missing from `registry` land in `other_orgs`.
pub fn classify_publication<'a>(
    publication: &Publication,
    registry: impl Fn(&OrgId) -> Option<&'a Organization>,
    home_country: &str,
) -> CollaborationProfile {
    let mut universities = BTreeSet::new();
    let mut domestic_firms = BTreeSet::new();
    let mut other_orgs = BTreeSet::new();
    for id in &publication.address_org_ids {
        match registry(id) {
            Some(o) if o.kind == OrgKind::University => universities.insert(id.clone()),
            Some(o) if o.is_domestic_firm(home_country) => domestic_firms.insert(id.clone()),
            _ => other_orgs.insert(id.clone()),
        };
    }
    let case = CollabCase::from_counts(universities.len(), domestic_firms.len());
    let collab_count = (universities.len() * domestic_firms.len()) as u64;
    CollaborationProfile {
        pub_id: publication.pub_id.clone(),
        universities,
        domestic_firms,
        other_orgs,
        case,
        collab_count,
    }
}

/// Profiles of every corpus publication, in publication-id order.
pub fn profiles(corpus: &Corpus, home_country: &str) -> Vec<CollaborationProfile> {
    corpus
        .publications()
        .par_iter()
        .map(|p| classify_publication(p, |id| corpus.organization(id), home_country))
        .collect()
}

/// Per-case tallies for the four collaborating cases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CaseCounts {
    pub one_one: u64,
    pub m_one: u64,
    pub one_n: u64,
    pub m_n: u64,
}

impl CaseCounts {
    fn add(&mut self, case: CollabCase, amount: u64) {
        match case {
            CollabCase::None => {}
            CollabCase::OneOne => self.one_one += amount,
            CollabCase::MOne => self.m_one += amount,
            CollabCase::OneN => self.one_n += amount,
            CollabCase::MN => self.m_n += amount,
        }
    }

    pub fn get(&self, case: CollabCase) -> u64 {
        match case {
            CollabCase::None => 0,
            CollabCase::OneOne => self.one_one,
            CollabCase::MOne => self.m_one,
            CollabCase::OneN => self.one_n,
            CollabCase::MN => self.m_n,
        }
    }

    pub fn total(&self) -> u64 {
        self.one_one + self.m_one + self.one_n + self.m_n
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CollabSummary {
    pub publications: u64,
    pub industry_articles: u64,
    pub total_collaborations: u64,
    pub articles_by_case: CaseCounts,
    pub collaborations_by_case: CaseCounts,
}

pub fn summarize<'a>(
    profiles: impl IntoIterator<Item = &'a CollaborationProfile>,
) -> CollabSummary {
    let mut s = CollabSummary::default();
    for p in profiles {
        s.publications += 1;
        if p.is_industry_coauthored() {
            s.industry_articles += 1;
            s.total_collaborations += p.collab_count;
            s.articles_by_case.add(p.case, 1);
            s.collaborations_by_case.add(p.case, p.collab_count);
        }
    }
    s
}

pub fn count_collaborations(corpus: &Corpus, home_country: &str) -> CollabSummary {
    summarize(&profiles(corpus, home_country))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CollabEdge {
    pub pub_id: PubId,
    pub university_org_id: OrgId,
    pub firm_org_id: OrgId,
}

/// University x domestic-firm pairs of every publication, sorted by
/// (pub_id, university, firm).
pub fn extract_edges(corpus: &Corpus, home_country: &str) -> Vec<CollabEdge> {
    edges_of(&profiles(corpus, home_country))
}

/// Edges of already classified publications, sorted the same way.
pub fn edges_of<'a>(
    profiles: impl IntoIterator<Item = &'a CollaborationProfile>,
) -> Vec<CollabEdge> {
    let mut edges = Vec::new();
    for p in profiles {
        for u in &p.universities {
            for f in &p.domestic_firms {
                edges.push(CollabEdge {
                    pub_id: p.pub_id.clone(),
                    university_org_id: u.clone(),
                    firm_org_id: f.clone(),
                });
            }
        }
    }
    edges.sort();
    edges
}

/// `pub_id,university_org_id,firm_org_id` with LF line endings.
pub fn edges_to_csv(edges: &[CollabEdge]) -> String {
    let mut out = String::from("pub_id,university_org_id,firm_org_id\n");
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for e in edges {
        w.serialize(e).expect("write to Vec");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush Vec")).expect("utf-8"));
    out
}

/// Publication subsets compared throughout the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    All,
    ExtramuralCollab,
    IndustryCoauthored,
}

impl Selector {
    pub fn matches(self, profile: &CollaborationProfile) -> bool {
        match self {
            Selector::All => true,
            Selector::ExtramuralCollab => profile.is_extramural(),
            Selector::IndustryCoauthored => profile.is_industry_coauthored(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Selector::All => "all",
            Selector::ExtramuralCollab => "extramural_collab",
            Selector::IndustryCoauthored => "industry_coauthored",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Selector {
    type Err = CollabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Selector::All),
            "extramural_collab" | "collab" => Ok(Selector::ExtramuralCollab),
            "industry_coauthored" | "industry" => Ok(Selector::IndustryCoauthored),
            other => Err(CollabError::UnknownSelector(other.to_string())),
        }
    }
}

pub fn subset(corpus: &Corpus, selector: Selector, home_country: &str) -> BTreeSet<PubId> {
    profiles(corpus, home_country)
        .into_iter()
        .filter(|p| selector.matches(p))
        .map(|p| p.pub_id)
        .collect()
}
