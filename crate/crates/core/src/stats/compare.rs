use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{paired_t, welch_t, Sample, StatsError, TestResult};
use crate::collab::Selector;
use crate::corpus::Corpus;
use crate::indicators::{article_ifpr, Analysis, IfRanks, IndicatorError, PubFacts};
use crate::AnalysisConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompareError {
    #[error("indicator {indicator} cannot be used with grouping {grouping}")]
    IncompatibleIndicator {
        grouping: Grouping,
        indicator: Indicator,
    },
    #[error("only {surviving} unit(s) left to compare; {note}")]
    InsufficientSectors { surviving: usize, note: String },
    #[error("unknown grouping {0:?}")]
    UnknownGrouping(String),
    #[error("unknown indicator {0:?} (expected ifpr, o, fss, ii_sds or ii_sci)")]
    UnknownIndicator(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    SdsAllVsCollab,
    SdsAllVsIndustry,
    ResearchersIndustryVsRest,
    MultidiscAllVsIndustry,
    MultidiscCollabVsIndustry,
}

impl Grouping {
    pub const ALL: [Grouping; 5] = [
        Grouping::SdsAllVsCollab,
        Grouping::SdsAllVsIndustry,
        Grouping::ResearchersIndustryVsRest,
        Grouping::MultidiscAllVsIndustry,
        Grouping::MultidiscCollabVsIndustry,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Grouping::SdsAllVsCollab => "sds_all_vs_collab",
            Grouping::SdsAllVsIndustry => "sds_all_vs_industry",
            Grouping::ResearchersIndustryVsRest => "researchers_industry_vs_rest",
            Grouping::MultidiscAllVsIndustry => "multidisc_all_vs_industry",
            Grouping::MultidiscCollabVsIndustry => "multidisc_collab_vs_industry",
        }
    }

    /// Indicators that can be compared under this grouping.
    pub fn indicators(self) -> &'static [Indicator] {
        match self {
            Grouping::SdsAllVsCollab | Grouping::SdsAllVsIndustry => &[Indicator::Ifpr],
            Grouping::ResearchersIndustryVsRest => &[Indicator::O, Indicator::Fss],
            Grouping::MultidiscAllVsIndustry | Grouping::MultidiscCollabVsIndustry => {
                &[Indicator::IiSds, Indicator::IiSci]
            }
        }
    }

    // (base subset, comparison subset) for the paired groupings
    fn subsets(self) -> Option<(Selector, Selector)> {
        match self {
            Grouping::SdsAllVsCollab => Some((Selector::All, Selector::ExtramuralCollab)),
            Grouping::SdsAllVsIndustry | Grouping::MultidiscAllVsIndustry => {
                Some((Selector::All, Selector::IndustryCoauthored))
            }
            Grouping::MultidiscCollabVsIndustry => {
                Some((Selector::ExtramuralCollab, Selector::IndustryCoauthored))
            }
            Grouping::ResearchersIndustryVsRest => None,
        }
    }
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Grouping {
    type Err = CompareError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Grouping::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| CompareError::UnknownGrouping(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Ifpr,
    O,
    Fss,
    IiSds,
    IiSci,
}

impl Indicator {
    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::Ifpr => "ifpr",
            Indicator::O => "o",
            Indicator::Fss => "fss",
            Indicator::IiSds => "ii_sds",
            Indicator::IiSci => "ii_sci",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Indicator {
    type Err = CompareError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Indicator::Ifpr,
            Indicator::O,
            Indicator::Fss,
            Indicator::IiSds,
            Indicator::IiSci,
        ]
        .into_iter()
        .find(|i| i.as_str() == s)
        .ok_or_else(|| CompareError::UnknownIndicator(s.to_string()))
    }
}

/// Units dropped before a paired comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    /// `sds` or `sci_category`.
    pub unit: &'static str,
    /// Subset whose publication count is checked against the threshold.
    pub subset: Selector,
    pub threshold: usize,
    /// Units with at least one publication in the base subset.
    pub considered: usize,
    pub excluded: usize,
}

impl Exclusion {
    pub fn note(&self) -> String {
        let unit = match self.unit {
            "sds" => "sectors",
            _ => "categories",
        };
        let subset = match self.subset {
            Selector::All => "",
            Selector::ExtramuralCollab => " extramural collaboration",
            Selector::IndustryCoauthored => " industry co-authored",
        };
        format!(
            "excluded {} of {} {unit} with fewer than {}{subset} publications",
            self.excluded, self.considered, self.threshold
        )
    }
}

/// Two aligned samples and the test run on them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub grouping: Grouping,
    pub indicator: Indicator,
    pub sample_a: Sample,
    pub sample_b: Sample,
    pub result: TestResult,
    /// Unit ids behind each paired observation, in sample order.
    pub units: Vec<String>,
    pub exclusion: Option<Exclusion>,
}

fn subset_label(s: Selector) -> &'static str {
    match s {
        Selector::All => "all publications",
        Selector::ExtramuralCollab => "extramural collaboration",
        Selector::IndustryCoauthored => "industry co-authored",
    }
}

/// Builds the two samples for `grouping` and runs the matching test.
///
/// Paired groupings average the indicator per unit (sector, or subject
/// category for `ii_sci`) in each subset; sample `a` is the broader subset
/// so `t` is positive when it scores higher. Units below the configured
/// publication floor in the narrower subset are dropped first.
pub fn compare(
    corpus: &Corpus,
    grouping: Grouping,
    indicator: Indicator,
    config: &AnalysisConfig,
) -> Result<Comparison, CompareError> {
    if !grouping.indicators().contains(&indicator) {
        return Err(CompareError::IncompatibleIndicator {
            grouping,
            indicator,
        });
    }
    compare_in(
        &Analysis::new(corpus, &config.home_country),
        grouping,
        indicator,
        config,
    )
}

/// [`compare`] over an already prepared analysis. Its home country wins
/// over the one in `config`.
pub fn compare_in(
    analysis: &Analysis<'_>,
    grouping: Grouping,
    indicator: Indicator,
    config: &AnalysisConfig,
) -> Result<Comparison, CompareError> {
    if !grouping.indicators().contains(&indicator) {
        return Err(CompareError::IncompatibleIndicator {
            grouping,
            indicator,
        });
    }
    match grouping.subsets() {
        Some((base, narrow)) => paired(analysis, grouping, indicator, base, narrow, config),
        None => researchers(analysis, indicator),
    }
}

#[derive(Default)]
struct UnitTally {
    base_sum: f64,
    base_n: usize,
    narrow_sum: f64,
    narrow_n: usize,
}

fn paired(
    analysis: &Analysis<'_>,
    grouping: Grouping,
    indicator: Indicator,
    base: Selector,
    narrow: Selector,
    config: &AnalysisConfig,
) -> Result<Comparison, CompareError> {
    let corpus = analysis.corpus();
    let facts = analysis.facts();
    let ranks = match indicator {
        Indicator::Ifpr => Some(analysis.if_ranks()?),
        _ => None,
    };
    // (value, units) per publication; None when outside the base subset
    let observations: Vec<Option<(f64, Vec<String>)>> = facts
        .par_iter()
        .map(|f| observe(corpus, f, indicator, ranks, base))
        .collect::<Result<_, IndicatorError>>()?;

    let mut tallies: BTreeMap<String, UnitTally> = BTreeMap::new();
    for (f, obs) in facts.iter().zip(observations) {
        let Some((value, units)) = obs else { continue };
        let in_narrow = narrow.matches(&f.profile);
        for unit in units {
            let t = tallies.entry(unit).or_default();
            t.base_sum += value;
            t.base_n += 1;
            if in_narrow {
                t.narrow_sum += value;
                t.narrow_n += 1;
            }
        }
    }

    let threshold = match narrow {
        Selector::ExtramuralCollab => config.min_collab_pubs,
        _ => config.min_industry_pubs,
    };
    let floor = threshold.max(1);
    let considered = tallies.len();
    let kept: Vec<(String, UnitTally)> = tallies
        .into_iter()
        .filter(|(_, t)| t.narrow_n >= floor)
        .collect();
    let exclusion = Exclusion {
        unit: if indicator == Indicator::IiSci {
            "sci_category"
        } else {
            "sds"
        },
        subset: narrow,
        threshold,
        considered,
        excluded: considered - kept.len(),
    };
    if kept.len() < 2 {
        return Err(CompareError::InsufficientSectors {
            surviving: kept.len(),
            note: exclusion.note(),
        });
    }

    let xs: Vec<f64> = kept
        .iter()
        .map(|(_, t)| t.base_sum / t.base_n as f64)
        .collect();
    let ys: Vec<f64> = kept
        .iter()
        .map(|(_, t)| t.narrow_sum / t.narrow_n as f64)
        .collect();
    let result = paired_t(&xs, &ys)?;
    Ok(Comparison {
        grouping,
        indicator,
        sample_a: Sample::new(subset_label(base), xs)?,
        sample_b: Sample::new(subset_label(narrow), ys)?,
        result,
        units: kept.into_iter().map(|(u, _)| u).collect(),
        exclusion: Some(exclusion),
    })
}

fn observe(
    corpus: &Corpus,
    f: &PubFacts<'_>,
    indicator: Indicator,
    ranks: Option<&IfRanks>,
    base: Selector,
) -> Result<Option<(f64, Vec<String>)>, IndicatorError> {
    if !base.matches(&f.profile) {
        return Ok(None);
    }
    let sectors = || f.sectors.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok(Some(match indicator {
        Indicator::Ifpr => {
            let ranks = ranks.expect("ranks built for ifpr");
            (article_ifpr(f.publication, ranks)?, sectors())
        }
        Indicator::IiSds => (f.sectors.len() as f64, sectors()),
        Indicator::IiSci => {
            let cats = &corpus
                .journal_of(f.publication)
                .ok_or_else(|| IndicatorError::MissingIf {
                    journal_id: f.publication.journal_id.to_string(),
                    year: f.publication.year,
                })?
                .sci_categories;
            (cats.len() as f64, cats.iter().cloned().collect())
        }
        Indicator::O | Indicator::Fss => unreachable!("researcher indicators are not paired"),
    }))
}

fn researchers(analysis: &Analysis<'_>, indicator: Indicator) -> Result<Comparison, CompareError> {
    let (mut with, mut rest) = (Vec::new(), Vec::new());
    for p in analysis.performance()? {
        let rank = match indicator {
            Indicator::O => p.output_pr,
            _ => p.fss_pr,
        };
        let Some(rank) = rank else { continue };
        if p.collaborated_with_industry {
            with.push(rank);
        } else {
            rest.push(rank);
        }
    }
    let sample_a = Sample::new("collaborated with industry", with)?;
    let sample_b = Sample::new("rest of population", rest)?;
    let result = welch_t(&sample_a, &sample_b)?;
    Ok(Comparison {
        grouping: Grouping::ResearchersIndustryVsRest,
        indicator,
        sample_a,
        sample_b,
        result,
        units: Vec::new(),
        exclusion: None,
    })
}
