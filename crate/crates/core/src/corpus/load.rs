use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use unicode_normalization::UnicodeNormalization;

use super::{
    AuthorRef, Corpus, CorpusError, JournalTable, JournalYear, OrgKind, Organization, Publication,
    Researcher, SdsEntry, Taxonomy, Window,
};
use crate::{JournalId, OrgId, PubId, ResearcherId, SdsId, UdaId};

pub const TAXONOMY_FILE: &str = "taxonomy.csv";
pub const ORGANIZATIONS_FILE: &str = "organizations.csv";
pub const JOURNALS_FILE: &str = "journals.csv";
pub const ROSTER_FILE: &str = "roster.csv";
pub const PUBLICATIONS_FILE: &str = "publications.jsonl";

#[derive(Deserialize)]
struct TaxonomyRow {
    sds_id: String,
    sds_name: String,
    uda_id: String,
    uda_name: String,
}

#[derive(Deserialize)]
struct OrganizationRow {
    org_id: String,
    canonical_name: String,
    kind: OrgKind,
    country: String,
}

#[derive(Deserialize)]
struct JournalRow {
    journal_id: String,
    name: String,
    year: i32,
    impact_factor: f64,
    sci_categories: String,
}

#[derive(Deserialize)]
struct RosterRow {
    researcher_id: String,
    full_name: String,
    university_org_id: String,
    sds_id: String,
}

#[derive(Deserialize)]
struct PublicationRow {
    pub_id: String,
    year: i32,
    journal_id: String,
    authors: Vec<AuthorRow>,
    address_org_ids: Vec<String>,
}

#[derive(Deserialize)]
struct AuthorRow {
    raw_name: String,
    researcher_id: Option<String>,
    org_id: String,
}

fn nfc(s: &str) -> String {
    s.nfc().collect()
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn open(path: &Path) -> Result<File, CorpusError> {
    if !path.is_file() {
        return Err(CorpusError::MissingFile(path.to_path_buf()));
    }
    File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a headed CSV file into typed rows tagged with their line numbers.
/// Every column in `required` must appear in the header.
fn read_csv<T: DeserializeOwned>(
    path: &Path,
    required: &[&str],
) -> Result<Vec<(u64, T)>, CorpusError> {
    let file = open(path)?;
    let label = file_label(path);
    let parse_err = |line: u64, message: String| CorpusError::Parse {
        file: label.clone(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::new(file));
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(parse_err(1, "missing header row".into()));
    }
    for col in required {
        if !headers.iter().any(|h| h.trim() == *col) {
            return Err(parse_err(1, format!("missing column {col:?}")));
        }
    }
    let headers = csv::StringRecord::from(headers.iter().map(str::trim).collect::<Vec<_>>());

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| parse_err(line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

/// Loads `taxonomy.csv` (`sds_id,sds_name,uda_id,uda_name`).
pub fn load_taxonomy(path: &Path) -> Result<Taxonomy, CorpusError> {
    let rows: Vec<(u64, TaxonomyRow)> =
        read_csv(path, &["sds_id", "sds_name", "uda_id", "uda_name"])?;
    if rows.is_empty() {
        return Err(CorpusError::Parse {
            file: file_label(path),
            line: 2,
            message: "no sectors".into(),
        });
    }
    Taxonomy::from_entries(
        rows.into_iter()
            .map(|(_, r)| SdsEntry {
                sds_id: SdsId(r.sds_id),
                sds_name: nfc(&r.sds_name),
                uda_id: UdaId(r.uda_id),
                uda_name: nfc(&r.uda_name),
            })
            .collect(),
    )
}

pub(crate) fn load_organizations(path: &Path) -> Result<Vec<Organization>, CorpusError> {
    let rows: Vec<(u64, OrganizationRow)> =
        read_csv(path, &["org_id", "canonical_name", "kind", "country"])?;
    Ok(rows
        .into_iter()
        .map(|(_, r)| Organization {
            org_id: OrgId(r.org_id),
            canonical_name: nfc(&r.canonical_name),
            kind: r.kind,
            country: r.country.trim().to_string(),
        })
        .collect())
}

pub(crate) fn load_journals(path: &Path) -> Result<JournalTable, CorpusError> {
    let rows: Vec<(u64, JournalRow)> = read_csv(
        path,
        &[
            "journal_id",
            "name",
            "year",
            "impact_factor",
            "sci_categories",
        ],
    )?;
    let mut out = Vec::with_capacity(rows.len());
    for (line, r) in rows {
        let mut cats = BTreeSet::new();
        for code in r.sci_categories.split(';') {
            let code = code.trim();
            if code.is_empty() {
                continue;
            }
            if !cats.insert(code.to_string()) {
                return Err(CorpusError::Parse {
                    file: file_label(path),
                    line,
                    message: format!("category {code:?} repeated for journal {}", r.journal_id),
                });
            }
        }
        out.push(JournalYear {
            journal_id: JournalId(r.journal_id),
            name: nfc(&r.name),
            year: r.year,
            impact_factor: r.impact_factor,
            sci_categories: cats,
        });
    }
    JournalTable::from_rows(out)
}

pub(crate) fn load_roster(path: &Path) -> Result<Vec<Researcher>, CorpusError> {
    let rows: Vec<(u64, RosterRow)> = read_csv(
        path,
        &["researcher_id", "full_name", "university_org_id", "sds_id"],
    )?;
    Ok(rows
        .into_iter()
        .map(|(_, r)| Researcher {
            researcher_id: ResearcherId(r.researcher_id),
            full_name: nfc(&r.full_name),
            university_org_id: OrgId(r.university_org_id),
            sds_id: SdsId(r.sds_id),
        })
        .collect())
}

pub(crate) fn load_publications(path: &Path) -> Result<Vec<Publication>, CorpusError> {
    let file = open(path)?;
    let label = file_label(path);
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: PublicationRow = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            file: label.clone(),
            line: line_no,
            message: e.to_string(),
        })?;
        out.push(Publication {
            pub_id: PubId(row.pub_id),
            year: row.year,
            journal_id: JournalId(row.journal_id),
            authors: row
                .authors
                .into_iter()
                .map(|a| AuthorRef {
                    raw_name: nfc(&a.raw_name),
                    researcher_id: a.researcher_id.map(ResearcherId),
                    org_id: OrgId(a.org_id),
                })
                .collect(),
            address_org_ids: row.address_org_ids.into_iter().map(OrgId).collect(),
        });
    }
    Ok(out)
}

/// Loads the five input files of `data_dir` and builds a corpus restricted
/// to `window`.
pub fn load_corpus(data_dir: &Path, window: Window) -> Result<Corpus, CorpusError> {
    let files = [
        TAXONOMY_FILE,
        ORGANIZATIONS_FILE,
        JOURNALS_FILE,
        ROSTER_FILE,
        PUBLICATIONS_FILE,
    ];
    for f in files {
        let p = data_dir.join(f);
        if !p.is_file() {
            return Err(CorpusError::MissingFile(p));
        }
    }
    let taxonomy = load_taxonomy(&data_dir.join(TAXONOMY_FILE))?;
    let organizations = load_organizations(&data_dir.join(ORGANIZATIONS_FILE))?;
    let journals = load_journals(&data_dir.join(JOURNALS_FILE))?;
    let researchers = load_roster(&data_dir.join(ROSTER_FILE))?;
    let publications = load_publications(&data_dir.join(PUBLICATIONS_FILE))?;
    Corpus::from_parts(
        taxonomy,
        organizations,
        journals,
        researchers,
        publications,
        window,
    )
}
