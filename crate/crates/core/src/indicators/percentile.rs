use std::collections::BTreeMap;

use serde::Serialize;

use super::IndicatorError;
use crate::corpus::{JournalTable, Publication, Window};
use crate::JournalId;

/// Midrank percentile: `100 * (below + equal / 2) / n`, where `equal`
/// counts the value itself. The ranks of any group average exactly 50.
pub fn midrank_percentiles(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let v = values[order[start]];
        let mut end = start + 1;
        while end < n && values[order[end]] == v {
            end += 1;
        }
        let rank = 100.0 * (start as f64 + 0.5 * (end - start) as f64) / n as f64;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct JournalCategory {
    pub journal_id: JournalId,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercentileRanked<S> {
    pub subject: S,
    pub value: f64,
    pub rank_pct: f64,
}

/// Percentile rank of every journal's impact factor among the journals
/// sharing each of its subject categories, for one year. A journal listed
/// in k categories gets k ranks. Output is sorted by (journal, category).
pub fn if_percentile_ranks(
    journals: &JournalTable,
    year: i32,
    window: Window,
) -> Result<Vec<PercentileRanked<JournalCategory>>, IndicatorError> {
    let mut by_category: BTreeMap<&str, Vec<(&JournalId, f64)>> = BTreeMap::new();
    for id in journals.journal_ids() {
        let row =
            journals
                .effective(id, year, window)
                .ok_or_else(|| IndicatorError::MissingIf {
                    journal_id: id.to_string(),
                    year,
                })?;
        for cat in &row.sci_categories {
            by_category
                .entry(cat.as_str())
                .or_default()
                .push((id, row.impact_factor));
        }
    }
    let mut out = Vec::new();
    for (cat, members) in by_category {
        let values: Vec<f64> = members.iter().map(|(_, v)| *v).collect();
        let ranks = midrank_percentiles(&values);
        for ((id, value), rank_pct) in members.into_iter().zip(ranks) {
            out.push(PercentileRanked {
                subject: JournalCategory {
                    journal_id: id.clone(),
                    category: cat.to_string(),
                },
                value,
                rank_pct,
            });
        }
    }
    out.sort_by(|a, b| a.subject.cmp(&b.subject));
    Ok(out)
}

/// Impact-factor ranks for every year of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct IfRanks {
    // (year, journal) -> category -> rank
    ranks: BTreeMap<(i32, JournalId), BTreeMap<String, f64>>,
}

impl IfRanks {
    pub fn build(journals: &JournalTable, window: Window) -> Result<Self, IndicatorError> {
        let mut ranks: BTreeMap<(i32, JournalId), BTreeMap<String, f64>> = BTreeMap::new();
        for year in window.years() {
            for r in if_percentile_ranks(journals, year, window)? {
                ranks
                    .entry((year, r.subject.journal_id))
                    .or_default()
                    .insert(r.subject.category, r.rank_pct);
            }
        }
        Ok(Self { ranks })
    }

    /// Category ranks of a journal in a year, ordered by category.
    pub fn ranks_of(&self, journal: &JournalId, year: i32) -> Option<&BTreeMap<String, f64>> {
        self.ranks.get(&(year, journal.clone()))
    }
}

/// Mean of the journal's category ranks for the publication's year.
pub fn article_ifpr(publication: &Publication, ranks: &IfRanks) -> Result<f64, IndicatorError> {
    let unranked = || IndicatorError::UnrankedJournal {
        pub_id: publication.pub_id.to_string(),
        journal_id: publication.journal_id.to_string(),
    };
    let cats = ranks
        .ranks_of(&publication.journal_id, publication.year)
        .filter(|c| !c.is_empty())
        .ok_or_else(unranked)?;
    Ok(cats.values().sum::<f64>() / cats.len() as f64)
}
