use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{pub_facts, IndicatorError, PubFacts};
use crate::corpus::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Sds,
    Uda,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Sds => "sds",
            Level::Uda => "uda",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = IndicatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sds" => Ok(Level::Sds),
            "uda" => Ok(Level::Uda),
            _ => Err(IndicatorError::UnknownLevel(s.to_string())),
        }
    }
}

/// Collaboration intensity of one sector or area.
///
/// `pct_of_coauth` is absent when the sector has no extramural articles;
/// `per_researcher` is absent when the roster has nobody in the sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorIntensityRow {
    pub sector_id: String,
    pub n_industry_coauth: u64,
    pub pct_of_all: f64,
    pub pct_of_coauth: Option<f64>,
    pub per_researcher: Option<f64>,
    pub sector_name: String,
    pub uda_name: String,
    pub n_articles: u64,
    pub n_coauth: u64,
    pub headcount: u64,
}

#[derive(Default)]
struct Tally {
    all: u64,
    coauth: u64,
    industry: u64,
}

/// One row per sector (or area) with at least one article, ordered by id.
///
/// An article counts once for every distinct sector of its roster-linked
/// authors, so area totals can exceed the number of distinct articles.
pub fn sector_intensity(
    corpus: &Corpus,
    level: Level,
    home_country: &str,
) -> Vec<SectorIntensityRow> {
    intensity_of(corpus, &pub_facts(corpus, home_country), level)
}

pub(crate) fn intensity_of(
    corpus: &Corpus,
    facts: &[PubFacts<'_>],
    level: Level,
) -> Vec<SectorIntensityRow> {
    let taxonomy = corpus.taxonomy();
    let key_of = |sds: &crate::SdsId| -> String {
        match level {
            Level::Sds => sds.to_string(),
            Level::Uda => taxonomy
                .uda_of(sds)
                .map(|u| u.to_string())
                .unwrap_or_default(),
        }
    };

    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    for facts in facts {
        let keys: BTreeSet<String> = facts.sectors.iter().map(|s| key_of(s)).collect();
        for key in keys {
            let t = tallies.entry(key).or_default();
            t.all += 1;
            t.coauth += facts.profile.is_extramural() as u64;
            t.industry += facts.profile.is_industry_coauthored() as u64;
        }
    }

    let mut headcount: BTreeMap<String, u64> = BTreeMap::new();
    for (sds, n) in corpus.headcount_by_sds() {
        *headcount.entry(key_of(sds)).or_default() += n as u64;
    }
    let udas = taxonomy.udas();

    tallies
        .into_iter()
        .map(|(key, t)| {
            let (sector_name, uda_name) = match level {
                Level::Sds => {
                    let e = taxonomy.get(&crate::SdsId::new(key.as_str()));
                    (
                        e.map(|e| e.sds_name.clone()).unwrap_or_default(),
                        e.map(|e| e.uda_name.clone()).unwrap_or_default(),
                    )
                }
                Level::Uda => {
                    let name = udas
                        .get(&crate::UdaId::new(key.as_str()))
                        .cloned()
                        .unwrap_or_default();
                    (name.clone(), name)
                }
            };
            let staff = headcount.get(&key).copied().unwrap_or(0);
            SectorIntensityRow {
                n_industry_coauth: t.industry,
                pct_of_all: 100.0 * t.industry as f64 / t.all as f64,
                pct_of_coauth: (t.coauth > 0).then(|| 100.0 * t.industry as f64 / t.coauth as f64),
                per_researcher: (staff > 0).then(|| t.industry as f64 / staff as f64),
                sector_id: key,
                sector_name,
                uda_name,
                n_articles: t.all,
                n_coauth: t.coauth,
                headcount: staff,
            }
        })
        .collect()
}
