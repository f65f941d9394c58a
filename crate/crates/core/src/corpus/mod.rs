//! Data model and input loading.
//!
//! A [`Corpus`] is built once, either from a data directory with
//! [`load_corpus`] or from in-memory rows with [`Corpus::from_parts`], and is
//! immutable afterwards. Construction checks referential closure, so every id
//! reachable from a publication resolves.

mod load;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{JournalId, OrgId, PubId, ResearcherId, SdsId, UdaId};

pub use load::{load_corpus, load_taxonomy};
pub use validate::{validate_corpus, Issue, IssueKind, ValidationReport};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing input file {0}")]
    MissingFile(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {file} at line {line}: {message}")]
    Parse {
        file: String,
        line: u64,
        message: String,
    },
    #[error("duplicate {entity} id {id}")]
    DuplicateId { entity: &'static str, id: String },
    #[error("sector {0} has no disciplinary area")]
    DanglingUda(String),
    #[error("unknown {entity} {id}")]
    DanglingReference { entity: &'static str, id: String },
    #[error("researcher {researcher_id} is attached to {org_id}, which is not a university")]
    NotAUniversity {
        researcher_id: String,
        org_id: String,
    },
    #[error("publication {pub_id}: university of researcher {researcher_id} is missing from the address field")]
    AffiliationNotInAddress {
        pub_id: String,
        researcher_id: String,
    },
    #[error("invalid {entity} {id}: {message}")]
    InvalidValue {
        entity: &'static str,
        id: String,
        message: String,
    },
    #[error("empty publication window [{min}, {max}]")]
    InvalidWindow { min: i32, max: i32 },
    #[error("no publications left inside the window")]
    EmptyCorpus,
}

/// Inclusive range of publication years kept at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min: i32,
    pub max: i32,
}

impl Window {
    pub fn new(min: i32, max: i32) -> Result<Self, CorpusError> {
        if min > max {
            return Err(CorpusError::InvalidWindow { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, year: i32) -> bool {
        self.min <= year && year <= self.max
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.min..=self.max
    }
}

impl Default for Window {
    fn default() -> Self {
        Self {
            min: 2001,
            max: 2003,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdsEntry {
    pub sds_id: SdsId,
    pub sds_name: String,
    pub uda_id: UdaId,
    pub uda_name: String,
}

/// Sectors and the areas they are grouped into.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Taxonomy {
    entries: BTreeMap<SdsId, SdsEntry>,
}

impl Taxonomy {
    pub fn from_entries(entries: Vec<SdsEntry>) -> Result<Self, CorpusError> {
        let mut map = BTreeMap::new();
        for entry in entries {
            if entry.uda_id.as_str().trim().is_empty() {
                return Err(CorpusError::DanglingUda(entry.sds_id.0));
            }
            if map.contains_key(&entry.sds_id) {
                return Err(CorpusError::DuplicateId {
                    entity: "sds",
                    id: entry.sds_id.0,
                });
            }
            map.insert(entry.sds_id.clone(), entry);
        }
        let taxonomy = Self { entries: map };
        // one display name per area
        let mut names: BTreeMap<&UdaId, &str> = BTreeMap::new();
        for entry in taxonomy.entries.values() {
            if let Some(prev) = names.insert(&entry.uda_id, &entry.uda_name) {
                if prev != entry.uda_name {
                    return Err(CorpusError::InvalidValue {
                        entity: "uda",
                        id: entry.uda_id.0.clone(),
                        message: format!("conflicting names {prev:?} and {:?}", entry.uda_name),
                    });
                }
            }
        }
        Ok(taxonomy)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, sds: &SdsId) -> Option<&SdsEntry> {
        self.entries.get(sds)
    }

    pub fn entries(&self) -> impl Iterator<Item = &SdsEntry> {
        self.entries.values()
    }

    /// Areas with their display names, ordered by id.
    pub fn udas(&self) -> BTreeMap<UdaId, String> {
        self.entries
            .values()
            .map(|e| (e.uda_id.clone(), e.uda_name.clone()))
            .collect()
    }

    pub fn uda_of(&self, sds: &SdsId) -> Option<&UdaId> {
        self.entries.get(sds).map(|e| &e.uda_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrgKind {
    University,
    PrivateFirm,
    PublicOrg,
    Consortium,
    Foundation,
    ForeignOrg,
}

impl OrgKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OrgKind::University => "university",
            OrgKind::PrivateFirm => "private_firm",
            OrgKind::PublicOrg => "public_org",
            OrgKind::Consortium => "consortium",
            OrgKind::Foundation => "foundation",
            OrgKind::ForeignOrg => "foreign_org",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Organization {
    pub org_id: OrgId,
    pub canonical_name: String,
    pub kind: OrgKind,
    /// ISO 3166-1 alpha-2.
    pub country: String,
}

impl Organization {
    /// Private firm registered in `home_country`.
    pub fn is_domestic_firm(&self, home_country: &str) -> bool {
        self.kind == OrgKind::PrivateFirm && self.country == home_country
    }
}

/// One journal in one year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalYear {
    pub journal_id: JournalId,
    pub name: String,
    pub year: i32,
    pub impact_factor: f64,
    pub sci_categories: BTreeSet<String>,
}

/// Journal rows keyed by id, then year.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JournalTable {
    rows: BTreeMap<JournalId, BTreeMap<i32, JournalYear>>,
}

impl JournalTable {
    pub fn from_rows(rows: Vec<JournalYear>) -> Result<Self, CorpusError> {
        let mut table: BTreeMap<JournalId, BTreeMap<i32, JournalYear>> = BTreeMap::new();
        for row in rows {
            let id = format!("{}/{}", row.journal_id, row.year);
            if !row.impact_factor.is_finite() || row.impact_factor < 0.0 {
                return Err(CorpusError::InvalidValue {
                    entity: "journal",
                    id,
                    message: format!(
                        "impact factor {} is not a non-negative number",
                        row.impact_factor
                    ),
                });
            }
            if row.sci_categories.is_empty() {
                return Err(CorpusError::InvalidValue {
                    entity: "journal",
                    id,
                    message: "no subject categories".into(),
                });
            }
            let years = table.entry(row.journal_id.clone()).or_default();
            if years.contains_key(&row.year) {
                return Err(CorpusError::DuplicateId {
                    entity: "journal-year",
                    id,
                });
            }
            years.insert(row.year, row);
        }
        Ok(Self { rows: table })
    }

    pub fn contains(&self, id: &JournalId) -> bool {
        self.rows.contains_key(id)
    }

    pub fn journal_ids(&self) -> impl Iterator<Item = &JournalId> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &JournalYear> {
        self.rows.values().flat_map(|years| years.values())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row used for `year`: the exact year if present, otherwise the nearest
    /// year inside `window` (the earlier one on a tie).
    pub fn effective(&self, id: &JournalId, year: i32, window: Window) -> Option<&JournalYear> {
        let years = self.rows.get(id)?;
        if let Some(row) = years.get(&year) {
            return Some(row);
        }
        years
            .range(window.min..=window.max)
            .min_by_key(|(y, _)| ((**y - year).abs(), **y))
            .map(|(_, row)| row)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Researcher {
    pub researcher_id: ResearcherId,
    pub full_name: String,
    pub university_org_id: OrgId,
    pub sds_id: SdsId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub raw_name: String,
    pub researcher_id: Option<ResearcherId>,
    pub org_id: OrgId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub pub_id: PubId,
    pub year: i32,
    pub journal_id: JournalId,
    pub authors: Vec<AuthorRef>,
    /// Distinct organizations of the address field.
    pub address_org_ids: BTreeSet<OrgId>,
}

impl Publication {
    /// Roster-linked authors, in byline order.
    pub fn linked_researchers(&self) -> impl Iterator<Item = &ResearcherId> {
        self.authors.iter().filter_map(|a| a.researcher_id.as_ref())
    }
}

/// Referentially closed, immutable analysis input.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    taxonomy: Taxonomy,
    organizations: BTreeMap<OrgId, Organization>,
    journals: JournalTable,
    researchers: BTreeMap<ResearcherId, Researcher>,
    publications: Vec<Publication>,
    window: Window,
    excluded_by_window: usize,
}

impl Corpus {
    /// Assembles a corpus, dropping publications outside `window` and
    /// checking that every reference resolves.
    pub fn from_parts(
        taxonomy: Taxonomy,
        organizations: Vec<Organization>,
        journals: JournalTable,
        researchers: Vec<Researcher>,
        publications: Vec<Publication>,
        window: Window,
    ) -> Result<Self, CorpusError> {
        let mut orgs = BTreeMap::new();
        for org in organizations {
            if !is_country_code(&org.country) {
                return Err(CorpusError::InvalidValue {
                    entity: "organization",
                    id: org.org_id.0,
                    message: format!("country {:?} is not an ISO 3166 alpha-2 code", org.country),
                });
            }
            if orgs.contains_key(&org.org_id) {
                return Err(CorpusError::DuplicateId {
                    entity: "organization",
                    id: org.org_id.0,
                });
            }
            orgs.insert(org.org_id.clone(), org);
        }

        let mut roster = BTreeMap::new();
        for r in researchers {
            if roster.contains_key(&r.researcher_id) {
                return Err(CorpusError::DuplicateId {
                    entity: "researcher",
                    id: r.researcher_id.0,
                });
            }
            roster.insert(r.researcher_id.clone(), r);
        }
        for r in roster.values() {
            let org =
                orgs.get(&r.university_org_id)
                    .ok_or_else(|| CorpusError::DanglingReference {
                        entity: "organization",
                        id: r.university_org_id.0.clone(),
                    })?;
            if org.kind != OrgKind::University {
                return Err(CorpusError::NotAUniversity {
                    researcher_id: r.researcher_id.0.clone(),
                    org_id: org.org_id.0.clone(),
                });
            }
            if taxonomy.get(&r.sds_id).is_none() {
                return Err(CorpusError::DanglingReference {
                    entity: "sds",
                    id: r.sds_id.0.clone(),
                });
            }
        }

        let mut publications = publications;
        publications.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
        for pair in publications.windows(2) {
            if pair[0].pub_id == pair[1].pub_id {
                return Err(CorpusError::DuplicateId {
                    entity: "publication",
                    id: pair[0].pub_id.0.clone(),
                });
            }
        }
        let before = publications.len();
        publications.retain(|p| window.contains(p.year));
        let excluded_by_window = before - publications.len();
        if publications.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }

        for p in &publications {
            check_publication(p, &orgs, &journals, &roster)?;
        }

        Ok(Self {
            taxonomy,
            organizations: orgs,
            journals,
            researchers: roster,
            publications,
            window,
            excluded_by_window,
        })
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn organizations(&self) -> &BTreeMap<OrgId, Organization> {
        &self.organizations
    }

    pub fn organization(&self, id: &OrgId) -> Option<&Organization> {
        self.organizations.get(id)
    }

    pub fn journals(&self) -> &JournalTable {
        &self.journals
    }

    pub fn researchers(&self) -> &BTreeMap<ResearcherId, Researcher> {
        &self.researchers
    }

    pub fn researcher(&self, id: &ResearcherId) -> Option<&Researcher> {
        self.researchers.get(id)
    }

    /// Publications inside the window, ordered by id.
    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn publication(&self, id: &PubId) -> Option<&Publication> {
        self.publications
            .binary_search_by(|p| p.pub_id.cmp(id))
            .ok()
            .map(|i| &self.publications[i])
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Publications dropped at load because their year fell outside the window.
    pub fn excluded_by_window(&self) -> usize {
        self.excluded_by_window
    }

    /// Journal row that applies to a publication's year.
    pub fn journal_of(&self, publication: &Publication) -> Option<&JournalYear> {
        self.journals
            .effective(&publication.journal_id, publication.year, self.window)
    }

    /// Distinct sectors of a publication's roster-linked authors.
    pub fn sectors_of(&self, publication: &Publication) -> BTreeSet<&SdsId> {
        publication
            .linked_researchers()
            .filter_map(|r| self.researchers.get(r))
            .map(|r| &r.sds_id)
            .collect()
    }

    /// Roster headcount per sector.
    pub fn headcount_by_sds(&self) -> BTreeMap<&SdsId, usize> {
        let mut counts = BTreeMap::new();
        for r in self.researchers.values() {
            *counts.entry(&r.sds_id).or_insert(0) += 1;
        }
        counts
    }
}

fn check_publication(
    p: &Publication,
    orgs: &BTreeMap<OrgId, Organization>,
    journals: &JournalTable,
    roster: &BTreeMap<ResearcherId, Researcher>,
) -> Result<(), CorpusError> {
    if p.authors.is_empty() {
        return Err(CorpusError::InvalidValue {
            entity: "publication",
            id: p.pub_id.0.clone(),
            message: "empty author list".into(),
        });
    }
    if !journals.contains(&p.journal_id) {
        return Err(CorpusError::DanglingReference {
            entity: "journal",
            id: p.journal_id.0.clone(),
        });
    }
    for org in &p.address_org_ids {
        if !orgs.contains_key(org) {
            return Err(CorpusError::DanglingReference {
                entity: "organization",
                id: org.0.clone(),
            });
        }
    }
    let mut seen = BTreeSet::new();
    for author in &p.authors {
        if !orgs.contains_key(&author.org_id) {
            return Err(CorpusError::DanglingReference {
                entity: "organization",
                id: author.org_id.0.clone(),
            });
        }
        let Some(rid) = &author.researcher_id else {
            continue;
        };
        let researcher = roster
            .get(rid)
            .ok_or_else(|| CorpusError::DanglingReference {
                entity: "researcher",
                id: rid.0.clone(),
            })?;
        if !seen.insert(rid) {
            return Err(CorpusError::InvalidValue {
                entity: "publication",
                id: p.pub_id.0.clone(),
                message: format!("researcher {rid} listed twice"),
            });
        }
        if !p.address_org_ids.contains(&researcher.university_org_id) {
            return Err(CorpusError::AffiliationNotInAddress {
                pub_id: p.pub_id.0.clone(),
                researcher_id: rid.0.clone(),
            });
        }
    }
    Ok(())
}

fn is_country_code(s: &str) -> bool {
    s.len() == 2 && s.bytes().all(|b| b.is_ascii_uppercase())
}


#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn window_rejects_reversed_bounds() {
        assert!(matches!(
            Window::new(2004, 2001),
            Err(CorpusError::InvalidWindow { .. })
        ));
        assert!(Window::new(2001, 2001).is_ok());
    }

    #[test]
    fn effective_year_falls_back_to_nearest_inside_window() {
        let table = JournalTable::from_rows(vec![
            journal("J", 2001, 1.0, &["C"]),
            journal("J", 2003, 3.0, &["C"]),
            journal("J", 1995, 9.0, &["C"]),
        ])
        .unwrap();
        let w = Window::new(2001, 2004).unwrap();
        let id = JournalId::new("J");
        assert_eq!(table.effective(&id, 2003, w).unwrap().year, 2003);
        // 2002 is equidistant from 2001 and 2003: earlier year wins
        assert_eq!(table.effective(&id, 2002, w).unwrap().year, 2001);
        assert_eq!(table.effective(&id, 2004, w).unwrap().year, 2003);
        // the 1995 row is outside the window and never used as a fallback
        let narrow = Window::new(2002, 2002).unwrap();
        assert!(table.effective(&id, 2002, narrow).is_none());
    }

    #[test]
    fn journal_rows_are_validated() {
        let neg = JournalTable::from_rows(vec![journal("J", 2001, -1.0, &["C"])]);
        assert!(matches!(neg, Err(CorpusError::InvalidValue { .. })));
        let empty = JournalTable::from_rows(vec![journal("J", 2001, 1.0, &[])]);
        assert!(matches!(empty, Err(CorpusError::InvalidValue { .. })));
        let dup = JournalTable::from_rows(vec![
            journal("J", 2001, 1.0, &["C"]),
            journal("J", 2001, 2.0, &["C"]),
        ]);
        assert!(matches!(dup, Err(CorpusError::DuplicateId { .. })));
    }

    #[test]
    fn window_filter_counts_exclusions() {
        let pubs = vec![
            publication("P1", 1999, "J1", &[("a", None, "UA")], &["UA"]),
            publication("P2", 2002, "J1", &[("b", None, "UA")], &["UA"]),
        ];
        let corpus = corpus_with(pubs, vec![]);
        assert_eq!(corpus.publications().len(), 1);
        assert_eq!(corpus.excluded_by_window(), 1);
        assert!(corpus
            .publications()
            .iter()
            .all(|p| corpus.window().contains(p.year)));
    }

    #[test]
    fn dangling_journal_is_rejected() {
        let pubs = vec![publication(
            "P1",
            2002,
            "NOPE",
            &[("a", None, "UA")],
            &["UA"],
        )];
        let journals = JournalTable::from_rows(vec![journal("J1", 2002, 1.0, &["C"])]).unwrap();
        let err = Corpus::from_parts(
            taxonomy(&[("S1", "A1")]),
            registry(),
            journals,
            vec![],
            pubs,
            Window::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            CorpusError::DanglingReference { entity: "journal", ref id } if id == "NOPE"
        ));
    }

    #[test]
    fn linked_author_needs_university_in_address() {
        let pubs = vec![publication(
            "P1",
            2002,
            "J1",
            &[("r", Some("R1"), "UA")],
            &["UB"],
        )];
        let journals = JournalTable::from_rows(vec![journal("J1", 2002, 1.0, &["C"])]).unwrap();
        let err = Corpus::from_parts(
            taxonomy(&[("S1", "A1")]),
            registry(),
            journals,
            vec![researcher("R1", "UA", "S1")],
            pubs,
            Window::default(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::AffiliationNotInAddress { .. }));
    }

    #[test]
    fn researcher_must_belong_to_a_university() {
        let journals = JournalTable::from_rows(vec![journal("J1", 2002, 1.0, &["C"])]).unwrap();
        let err = Corpus::from_parts(
            taxonomy(&[("S1", "A1")]),
            registry(),
            journals,
            vec![researcher("R1", "FX", "S1")],
            vec![publication("P1", 2002, "J1", &[("a", None, "UA")], &["UA"])],
            Window::default(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::NotAUniversity { .. }));
    }

    #[test]
    fn empty_after_window_is_an_error() {
        let journals = JournalTable::from_rows(vec![journal("J1", 2002, 1.0, &["C"])]).unwrap();
        let err = Corpus::from_parts(
            taxonomy(&[("S1", "A1")]),
            registry(),
            journals,
            vec![],
            vec![publication("P1", 1990, "J1", &[("a", None, "UA")], &["UA"])],
            Window::default(),
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::EmptyCorpus));
    }

    #[test]
    fn taxonomy_rejects_duplicates_and_blank_areas() {
        let dup = Taxonomy::from_entries(vec![
            SdsEntry {
                sds_id: "S".into(),
                sds_name: "a".into(),
                uda_id: "U".into(),
                uda_name: "u".into(),
            },
            SdsEntry {
                sds_id: "S".into(),
                sds_name: "b".into(),
                uda_id: "U".into(),
                uda_name: "u".into(),
            },
        ]);
        assert!(matches!(dup, Err(CorpusError::DuplicateId { .. })));
        let blank = Taxonomy::from_entries(vec![SdsEntry {
            sds_id: "S".into(),
            sds_name: "a".into(),
            uda_id: " ".into(),
            uda_name: "u".into(),
        }]);
        assert!(matches!(blank, Err(CorpusError::DanglingUda(_))));
    }
}
