use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{article_ifpr, midrank_percentiles, pub_facts, IfRanks, IndicatorError, PubFacts};
use crate::corpus::{Corpus, Researcher};
use crate::{ResearcherId, SdsId};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResearcherPerformance {
    pub researcher_id: ResearcherId,
    pub sds_id: SdsId,
    pub output: u64,
    pub fss: f64,
    /// Absent for researchers whose sector produced no articles.
    pub output_pr: Option<f64>,
    pub fss_pr: Option<f64>,
    pub collaborated_with_industry: bool,
}

fn check_known(researcher: &ResearcherId, corpus: &Corpus) -> Result<(), IndicatorError> {
    corpus
        .researcher(researcher)
        .map(|_| ())
        .ok_or_else(|| IndicatorError::UnknownResearcher(researcher.to_string()))
}

/// Number of corpus publications that list the researcher.
pub fn researcher_output(
    researcher: &ResearcherId,
    corpus: &Corpus,
) -> Result<u64, IndicatorError> {
    check_known(researcher, corpus)?;
    Ok(corpus
        .publications()
        .iter()
        .filter(|p| p.linked_researchers().any(|r| r == researcher))
        .count() as u64)
}

/// Sum over the researcher's publications of `ifpr / 100 * 1 / byline_length`.
pub fn researcher_fss(
    researcher: &ResearcherId,
    corpus: &Corpus,
    ranks: &IfRanks,
) -> Result<f64, IndicatorError> {
    check_known(researcher, corpus)?;
    let mut fss = 0.0;
    for p in corpus.publications() {
        if p.linked_researchers().any(|r| r == researcher) {
            fss += fss_term(article_ifpr(p, ranks)?, p.authors.len());
        }
    }
    Ok(fss)
}

fn fss_term(ifpr: f64, authors: usize) -> f64 {
    (ifpr / 100.0) * (1.0 / authors as f64)
}

/// Sectors with at least one attributed article.
pub fn active_sectors(corpus: &Corpus) -> BTreeSet<SdsId> {
    corpus
        .publications()
        .iter()
        .flat_map(|p| corpus.sectors_of(p))
        .cloned()
        .collect()
}

/// Midrank percentile of each researcher's value within their own sector.
///
/// The population of a sector is every roster member assigned to it; each
/// of them must have an entry in `values`.
pub fn rank_within_sector(
    values: &BTreeMap<ResearcherId, f64>,
    roster: &BTreeMap<ResearcherId, Researcher>,
    sectors: &BTreeSet<SdsId>,
) -> Result<BTreeMap<ResearcherId, f64>, IndicatorError> {
    let mut members: BTreeMap<&SdsId, Vec<&ResearcherId>> =
        sectors.iter().map(|s| (s, Vec::new())).collect();
    for r in roster.values() {
        if let Some(list) = members.get_mut(&r.sds_id) {
            list.push(&r.researcher_id);
        }
    }
    let mut out = BTreeMap::new();
    for (sds, ids) in members {
        if ids.is_empty() {
            return Err(IndicatorError::EmptySector(sds.to_string()));
        }
        let vals = ids
            .iter()
            .map(|id| {
                values
                    .get(*id)
                    .copied()
                    .ok_or_else(|| IndicatorError::MissingValue(id.to_string()))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        for (id, rank) in ids.into_iter().zip(midrank_percentiles(&vals)) {
            out.insert(id.clone(), rank);
        }
    }
    Ok(out)
}

/// O, FSS and their within-sector percentiles for the whole roster.
///
/// Percentiles are computed over the staff of sectors with at least one
/// article; researchers elsewhere keep absent ranks. Sums run in
/// publication-id order so the result does not depend on thread count.
pub fn researcher_performance(
    corpus: &Corpus,
    ranks: &IfRanks,
    home_country: &str,
) -> Result<Vec<ResearcherPerformance>, IndicatorError> {
    performance_of(corpus, &pub_facts(corpus, home_country), ranks)
}

pub(crate) fn performance_of(
    corpus: &Corpus,
    facts: &[PubFacts<'_>],
    ranks: &IfRanks,
) -> Result<Vec<ResearcherPerformance>, IndicatorError> {
    let terms: Vec<(f64, bool)> = facts
        .par_iter()
        .map(|f| {
            let ifpr = article_ifpr(f.publication, ranks)?;
            Ok((
                fss_term(ifpr, f.publication.authors.len()),
                f.profile.is_industry_coauthored(),
            ))
        })
        .collect::<Result<_, IndicatorError>>()?;

    let mut output: BTreeMap<&ResearcherId, u64> = BTreeMap::new();
    let mut fss: BTreeMap<&ResearcherId, f64> = BTreeMap::new();
    let mut industry: BTreeSet<&ResearcherId> = BTreeSet::new();
    for (f, (term, is_industry)) in facts.iter().zip(terms) {
        for r in f.publication.linked_researchers() {
            *output.entry(r).or_default() += 1;
            *fss.entry(r).or_default() += term;
            if is_industry {
                industry.insert(r);
            }
        }
    }

    let roster = corpus.researchers();
    let active: BTreeSet<SdsId> = facts
        .iter()
        .flat_map(|f| f.sectors.iter().map(|s| (*s).clone()))
        .collect();
    let o_values: BTreeMap<ResearcherId, f64> = roster
        .keys()
        .map(|id| (id.clone(), output.get(id).copied().unwrap_or(0) as f64))
        .collect();
    let fss_values: BTreeMap<ResearcherId, f64> = roster
        .keys()
        .map(|id| (id.clone(), fss.get(id).copied().unwrap_or(0.0)))
        .collect();
    let o_pr = rank_within_sector(&o_values, roster, &active)?;
    let fss_pr = rank_within_sector(&fss_values, roster, &active)?;

    Ok(roster
        .values()
        .map(|r| {
            let id = &r.researcher_id;
            ResearcherPerformance {
                researcher_id: id.clone(),
                sds_id: r.sds_id.clone(),
                output: output.get(id).copied().unwrap_or(0),
                fss: fss.get(id).copied().unwrap_or(0.0),
                output_pr: o_pr.get(id).copied(),
                fss_pr: fss_pr.get(id).copied(),
                collaborated_with_industry: industry.contains(id),
            }
        })
        .collect())
}
