use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{pub_facts, IndicatorError, PubFacts};
use crate::collab::Selector;
use crate::corpus::{Corpus, Publication};

/// Unit over which the indices are averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScopeKind {
    Sds,
    SciCategory,
}

impl ScopeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScopeKind::Sds => "sds",
            ScopeKind::SciCategory => "sci_category",
        }
    }
}

/// Both multidisciplinarity indices for the publications of one unit.
/// The indices are absent when the unit has no publications in the subset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultidiscIndex {
    pub scope: ScopeKind,
    pub scope_id: String,
    pub subset: Selector,
    pub ii_sds: Option<f64>,
    pub ii_sci: Option<f64>,
    pub n_pubs: u64,
}

/// Mean number of distinct author sectors per publication.
pub fn multidisc_sds(pubs: &[&Publication], corpus: &Corpus) -> Result<f64, IndicatorError> {
    if pubs.is_empty() {
        return Err(IndicatorError::EmptySet);
    }
    let mut total = 0usize;
    for p in pubs {
        let k = corpus.sectors_of(p).len();
        if k == 0 {
            return Err(IndicatorError::NoAcademicAuthors(p.pub_id.to_string()));
        }
        total += k;
    }
    Ok(total as f64 / pubs.len() as f64)
}

/// Mean number of subject categories of the publishing journal.
pub fn multidisc_sci(pubs: &[&Publication], corpus: &Corpus) -> Result<f64, IndicatorError> {
    if pubs.is_empty() {
        return Err(IndicatorError::EmptySet);
    }
    let mut total = 0usize;
    for p in pubs {
        total += categories_of(p, corpus)?.len();
    }
    Ok(total as f64 / pubs.len() as f64)
}

fn categories_of<'c>(
    p: &Publication,
    corpus: &'c Corpus,
) -> Result<&'c BTreeSet<String>, IndicatorError> {
    corpus
        .journal_of(p)
        .map(|j| &j.sci_categories)
        .ok_or_else(|| IndicatorError::MissingIf {
            journal_id: p.journal_id.to_string(),
            year: p.year,
        })
}

#[derive(Default)]
struct Acc {
    n: u64,
    // publications with at least one linked author
    n_linked: u64,
    sds: u64,
    sci: u64,
}

impl Acc {
    fn index(&self, subset: Selector, scope: ScopeKind, id: String) -> MultidiscIndex {
        let mean = |sum: u64, n: u64| (n > 0).then(|| sum as f64 / n as f64);
        MultidiscIndex {
            scope,
            scope_id: id,
            subset,
            ii_sds: mean(self.sds, self.n_linked),
            ii_sci: mean(self.sci, self.n),
            n_pubs: self.n,
        }
    }
}

/// Per-sector and per-category indices for one publication subset.
///
/// Every taxonomy sector and every category named by a journal gets a
/// row, sectors first, each group ordered by id. A publication belongs to
/// every sector of its linked authors and every category of its journal.
/// Publications without linked authors count toward `ii_sci` only.
pub fn multidisc_table(
    corpus: &Corpus,
    subset: Selector,
    home_country: &str,
) -> Result<Vec<MultidiscIndex>, IndicatorError> {
    multidisc_of(corpus, &pub_facts(corpus, home_country), subset)
}

pub(crate) fn multidisc_of(
    corpus: &Corpus,
    facts: &[PubFacts<'_>],
    subset: Selector,
) -> Result<Vec<MultidiscIndex>, IndicatorError> {
    let mut by_sds: BTreeMap<String, Acc> = corpus
        .taxonomy()
        .entries()
        .map(|e| (e.sds_id.to_string(), Acc::default()))
        .collect();
    let mut by_cat: BTreeMap<String, Acc> = corpus
        .journals()
        .rows()
        .flat_map(|j| j.sci_categories.iter())
        .map(|c| (c.clone(), Acc::default()))
        .collect();

    for f in facts {
        if !subset.matches(&f.profile) {
            continue;
        }
        let cats = categories_of(f.publication, corpus)?;
        let (k_sds, k_sci) = (f.sectors.len() as u64, cats.len() as u64);
        let bump = |acc: &mut Acc| {
            acc.n += 1;
            acc.n_linked += (k_sds > 0) as u64;
            acc.sds += k_sds;
            acc.sci += k_sci;
        };
        for s in &f.sectors {
            bump(by_sds.entry(s.to_string()).or_default());
        }
        for c in cats {
            bump(by_cat.entry(c.clone()).or_default());
        }
    }

    Ok(by_sds
        .into_iter()
        .map(|(id, a)| a.index(subset, ScopeKind::Sds, id))
        .chain(
            by_cat
                .into_iter()
                .map(|(id, a)| a.index(subset, ScopeKind::SciCategory, id)),
        )
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::*;
    use crate::corpus::{JournalTable, Window};

    fn corpus() -> Corpus {
        let journals = JournalTable::from_rows(vec![
            journal("J2", 2002, 1.0, &["C1", "C2"]),
            journal("J4", 2002, 1.0, &["C1", "C2", "C3", "C4"]),
        ])
        .unwrap();
        let pubs = vec![
            publication(
                "P1",
                2002,
                "J2",
                &[
                    ("a", Some("R1"), "UA"),
                    ("b", Some("R2"), "UA"),
                    ("c", Some("R3"), "UA"),
                ],
                &["UA", "FX"],
            ),
            publication("P2", 2002, "J4", &[("a", Some("R1"), "UA")], &["UA"]),
            publication("P3", 2002, "J2", &[("x", None, "UA")], &["UA"]),
        ];
        Corpus::from_parts(
            taxonomy(&[("S1", "A1"), ("S2", "A1"), ("S3", "A2"), ("S4", "A2")]),
            registry(),
            journals,
            vec![
                researcher("R1", "UA", "S1"),
                researcher("R2", "UA", "S2"),
                researcher("R3", "UA", "S3"),
            ],
            pubs,
            Window::default(),
        )
        .unwrap()
    }

    #[test]
    fn sds_index() {
        let c = corpus();
        let p = c.publications();
        assert_eq!(multidisc_sds(&[&p[0]], &c).unwrap(), 3.0);
        assert_eq!(multidisc_sds(&[&p[1]], &c).unwrap(), 1.0);
        assert_eq!(multidisc_sds(&[&p[0], &p[1]], &c).unwrap(), 2.0);
        assert_eq!(multidisc_sds(&[], &c), Err(IndicatorError::EmptySet));
        assert_eq!(
            multidisc_sds(&[&p[2]], &c),
            Err(IndicatorError::NoAcademicAuthors("P3".into()))
        );
    }

    #[test]
    fn sci_index() {
        let c = corpus();
        let p = c.publications();
        assert_eq!(multidisc_sci(&[&p[0], &p[1]], &c).unwrap(), 3.0);
        assert_eq!(multidisc_sci(&[&p[2]], &c).unwrap(), 2.0);
        assert_eq!(multidisc_sci(&[], &c), Err(IndicatorError::EmptySet));
    }

    #[test]
    fn table_rows() {
        let c = corpus();
        let rows = multidisc_table(&c, Selector::All, "IT").unwrap();
        let ids: Vec<_> = rows
            .iter()
            .map(|r| (r.scope, r.scope_id.as_str()))
            .collect();
        assert_eq!(ids.len(), 8);
        assert_eq!(ids[0], (ScopeKind::Sds, "S1"));
        assert_eq!(ids[4], (ScopeKind::SciCategory, "C1"));
        // S1 has P1 (3 sectors, 2 cats) and P2 (1 sector, 4 cats)
        assert_eq!(
            (rows[0].n_pubs, rows[0].ii_sds, rows[0].ii_sci),
            (2, Some(2.0), Some(3.0))
        );
        // S4 has no publications
        assert_eq!((rows[3].n_pubs, rows[3].ii_sds), (0, None));
        // C1 holds all three publications; P3 has no linked authors
        assert_eq!(rows[4].n_pubs, 3);
        assert_eq!(rows[4].ii_sds, Some(2.0));
        assert_eq!(rows[4].ii_sci, Some(8.0 / 3.0));
        assert_eq!(rows[6].ii_sci, Some(4.0));

        let ind = multidisc_table(&c, Selector::IndustryCoauthored, "IT").unwrap();
        assert_eq!(ind[0].n_pubs, 1);
        assert_eq!(ind[0].ii_sds, Some(3.0));
        assert_eq!(ind[6].n_pubs, 0);
    }
}
