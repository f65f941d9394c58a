//! Seeded synthetic corpora.
//!
//! The generator uses `ChaCha8Rng::seed_from_u64(seed)` and draws in this
//! order, so a seed fixes every output byte:
//!
//! 1. firms: one `random_bool(0.8)` per firm after the first deciding
//!    whether it is domestic (the first firm always is);
//! 2. journals, one at a time: the category count `random_range(1..=min(3, C))`,
//!    then `index::sample(C, count)` for the categories, then for every year
//!    of the range an impact factor `random_range(0..1000) / 100`, and for
//!    every year after the first a `random_bool(0.15)` that drops the row;
//! 3. researchers, one at a time: university `random_range(0..U)`, then
//!    sector `random_range(0..S)`;
//! 4. publications, one at a time: year, journal, linked-author count
//!    `random_range(1..=min(max_authors, R))`, `index::sample` of researchers,
//!    `random_bool(industry_rate)`; when industrial, the firm count
//!    `random_range(1..=min(3, domestic firms))` and `index::sample` of the
//!    domestic firms; finally `random_bool(0.15)` for a public partner and,
//!    when true, `random_range(0..P)` to pick it.
//!
//! Taxonomy, organization ids and non-firm kinds involve no draws.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_pubs: usize,
    pub n_universities: usize,
    pub n_firms: usize,
    pub n_public_orgs: usize,
    pub n_researchers: usize,
    pub n_journals: usize,
    pub n_sds: usize,
    pub n_udas: usize,
    pub n_categories: usize,
    /// Probability that a publication includes domestic firms.
    pub industry_rate: f64,
    /// Upper bound on roster-linked authors per publication.
    pub max_authors: usize,
    pub year_min: i32,
    pub year_max: i32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            n_pubs: 1000,
            n_universities: 20,
            n_firms: 30,
            n_public_orgs: 6,
            n_researchers: 400,
            n_journals: 60,
            n_sds: 12,
            n_udas: 4,
            n_categories: 8,
            industry_rate: 0.1,
            max_authors: 6,
            year_min: 2001,
            year_max: 2003,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let counts = [
            ("n_pubs", self.n_pubs),
            ("n_universities", self.n_universities),
            ("n_firms", self.n_firms),
            ("n_public_orgs", self.n_public_orgs),
            ("n_researchers", self.n_researchers),
            ("n_journals", self.n_journals),
            ("n_sds", self.n_sds),
            ("n_udas", self.n_udas),
            ("n_categories", self.n_categories),
            ("max_authors", self.max_authors),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(HarnessError::InvalidConfig(format!(
                "{name} must be at least 1"
            )));
        }
        if !(0.0..=1.0).contains(&self.industry_rate) {
            return Err(HarnessError::InvalidConfig(format!(
                "industry_rate {} is not a probability",
                self.industry_rate
            )));
        }
        if self.year_min > self.year_max {
            return Err(HarnessError::InvalidConfig(format!(
                "year range {}..{} is empty",
                self.year_min, self.year_max
            )));
        }
        if self.n_udas > self.n_sds {
            return Err(HarnessError::InvalidConfig(
                "n_udas cannot exceed n_sds".to_string(),
            ));
        }
        Ok(())
    }
}

const KINDS: [&str; 4] = ["public_org", "consortium", "foundation", "foreign_org"];

#[derive(Serialize)]
struct AuthorOut {
    raw_name: String,
    researcher_id: Option<String>,
    org_id: String,
}

#[derive(Serialize)]
struct PubOut {
    pub_id: String,
    year: i32,
    journal_id: String,
    authors: Vec<AuthorOut>,
    address_org_ids: Vec<String>,
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("flush Vec")
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), HarnessError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|source| HarnessError::Io { path, source })
}

fn univ_id(i: usize) -> String {
    format!("U{:03}", i + 1)
}

/// Writes a complete data directory for `config` into `dir`.
pub fn generate(config: &SynthConfig, dir: &Path) -> Result<(), HarnessError> {
    config.validate()?;
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut w = csv_writer();
    w.write_record(["sds_id", "sds_name", "uda_id", "uda_name"])
        .expect("csv");
    for s in 0..config.n_sds {
        let u = s % config.n_udas;
        w.write_record([
            format!("S{:03}", s + 1),
            format!("Sector {}", s + 1),
            format!("A{:02}", u + 1),
            format!("Area {}", u + 1),
        ])
        .expect("csv");
    }
    write(dir, "taxonomy.csv", &finish(w))?;

    let mut w = csv_writer();
    w.write_record(["org_id", "canonical_name", "kind", "country"])
        .expect("csv");
    for u in 0..config.n_universities {
        w.write_record([
            univ_id(u),
            format!("University {}", u + 1),
            "university".into(),
            "IT".into(),
        ])
        .expect("csv");
    }
    let mut domestic = Vec::new();
    for f in 0..config.n_firms {
        let home = f == 0 || rng.random_bool(0.8);
        let id = format!("F{:03}", f + 1);
        if home {
            domestic.push(id.clone());
        }
        let country = if home { "IT" } else { "DE" };
        w.write_record([
            id,
            format!("Firm {} S.p.A.", f + 1),
            "private_firm".into(),
            country.into(),
        ])
        .expect("csv");
    }
    let public: Vec<String> = (0..config.n_public_orgs)
        .map(|g| format!("G{:03}", g + 1))
        .collect();
    for (g, id) in public.iter().enumerate() {
        let kind = KINDS[g % KINDS.len()];
        let country = if kind == "foreign_org" { "FR" } else { "IT" };
        w.write_record([
            id.clone(),
            format!("Institute {}", g + 1),
            kind.into(),
            country.into(),
        ])
        .expect("csv");
    }
    write(dir, "organizations.csv", &finish(w))?;

    let mut w = csv_writer();
    w.write_record([
        "journal_id",
        "name",
        "year",
        "impact_factor",
        "sci_categories",
    ])
    .expect("csv");
    let max_cats = config.n_categories.min(3);
    for j in 0..config.n_journals {
        let k = rng.random_range(1..=max_cats);
        let mut cats: Vec<usize> = index::sample(&mut rng, config.n_categories, k).into_vec();
        cats.sort_unstable();
        let cats = cats
            .iter()
            .map(|c| format!("C{:02}", c + 1))
            .collect::<Vec<_>>()
            .join(";");
        for year in config.year_min..=config.year_max {
            let impact = rng.random_range(0..1000u32) as f64 / 100.0;
            if year > config.year_min && rng.random_bool(0.15) {
                continue;
            }
            w.write_record([
                format!("J{:04}", j + 1),
                format!("Journal {}", j + 1),
                year.to_string(),
                format!("{impact:.2}"),
                cats.clone(),
            ])
            .expect("csv");
        }
    }
    write(dir, "journals.csv", &finish(w))?;

    let mut w = csv_writer();
    w.write_record(["researcher_id", "full_name", "university_org_id", "sds_id"])
        .expect("csv");
    let mut roster = Vec::with_capacity(config.n_researchers);
    for r in 0..config.n_researchers {
        let u = rng.random_range(0..config.n_universities);
        let s = rng.random_range(0..config.n_sds);
        let id = format!("R{:05}", r + 1);
        w.write_record([
            id.clone(),
            format!("Researcher {}", r + 1),
            univ_id(u),
            format!("S{:03}", s + 1),
        ])
        .expect("csv");
        roster.push((id, univ_id(u)));
    }
    write(dir, "roster.csv", &finish(w))?;

    let span = config.year_min..=config.year_max;
    let max_linked = config.max_authors.min(config.n_researchers);
    let max_firms = domestic.len().min(3);
    let mut out = Vec::new();
    for p in 0..config.n_pubs {
        let year = rng.random_range(span.clone());
        let journal = rng.random_range(0..config.n_journals);
        let n_linked = rng.random_range(1..=max_linked);
        let mut linked: Vec<usize> =
            index::sample(&mut rng, config.n_researchers, n_linked).into_vec();
        linked.sort_unstable();
        let mut authors: Vec<AuthorOut> = linked
            .iter()
            .map(|&r| AuthorOut {
                raw_name: format!("Researcher {}", r + 1),
                researcher_id: Some(roster[r].0.clone()),
                org_id: roster[r].1.clone(),
            })
            .collect();
        let mut addresses: BTreeSet<String> = linked.iter().map(|&r| roster[r].1.clone()).collect();
        if rng.random_bool(config.industry_rate) {
            let n_firms = rng.random_range(1..=max_firms);
            let mut firms = index::sample(&mut rng, domestic.len(), n_firms).into_vec();
            firms.sort_unstable();
            for f in firms {
                authors.push(AuthorOut {
                    raw_name: format!("Engineer {}", f + 1),
                    researcher_id: None,
                    org_id: domestic[f].clone(),
                });
                addresses.insert(domestic[f].clone());
            }
        }
        if rng.random_bool(0.15) {
            let g = rng.random_range(0..public.len());
            authors.push(AuthorOut {
                raw_name: format!("Staff {}", g + 1),
                researcher_id: None,
                org_id: public[g].clone(),
            });
            addresses.insert(public[g].clone());
        }
        let record = PubOut {
            pub_id: format!("P{:07}", p + 1),
            year,
            journal_id: format!("J{:04}", journal + 1),
            authors,
            address_org_ids: addresses.into_iter().collect(),
        };
        serde_json::to_writer(&mut out, &record).expect("serialize to Vec");
        out.push(b'\n');
    }
    write(dir, "publications.jsonl", &out)?;
    Ok(())
}

/// Fixed corpus with one publication per `(m, n)` for `m, n` in `0..=max`.
///
/// Publication `G_m_n` lists `m` universities and `n` domestic firms in its
/// address field. Linked authors come from the listed universities; the
/// firms and a public lab contribute unlinked authors.
pub fn write_grid_corpus(dir: &Path, max: usize) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let n = max.max(1);
    write(
        dir,
        "taxonomy.csv",
        b"sds_id,sds_name,uda_id,uda_name\nS001,Sector 1,A01,Area 1\n",
    )?;

    let mut w = csv_writer();
    w.write_record(["org_id", "canonical_name", "kind", "country"])
        .expect("csv");
    for u in 0..n {
        w.write_record([
            univ_id(u),
            format!("University {}", u + 1),
            "university".into(),
            "IT".into(),
        ])
        .expect("csv");
    }
    for f in 0..n {
        w.write_record([
            format!("F{:03}", f + 1),
            format!("Firm {}", f + 1),
            "private_firm".into(),
            "IT".into(),
        ])
        .expect("csv");
    }
    w.write_record(["LAB", "Public Lab", "public_org", "IT"])
        .expect("csv");
    write(dir, "organizations.csv", &finish(w))?;

    write(
        dir,
        "journals.csv",
        b"journal_id,name,year,impact_factor,sci_categories\nJ0001,Journal 1,2002,1.5,C01\n",
    )?;

    let mut w = csv_writer();
    w.write_record(["researcher_id", "full_name", "university_org_id", "sds_id"])
        .expect("csv");
    for u in 0..n {
        w.write_record([
            format!("R{:05}", u + 1),
            format!("Researcher {}", u + 1),
            univ_id(u),
            "S001".into(),
        ])
        .expect("csv");
    }
    write(dir, "roster.csv", &finish(w))?;

    let mut out = Vec::new();
    for m in 0..=max {
        for k in 0..=max {
            let mut authors: Vec<AuthorOut> = (0..m)
                .map(|u| AuthorOut {
                    raw_name: format!("Researcher {}", u + 1),
                    researcher_id: Some(format!("R{:05}", u + 1)),
                    org_id: univ_id(u),
                })
                .collect();
            let mut addresses: Vec<String> = (0..m).map(univ_id).collect();
            for f in 0..k {
                let id = format!("F{:03}", f + 1);
                authors.push(AuthorOut {
                    raw_name: format!("Engineer {}", f + 1),
                    researcher_id: None,
                    org_id: id.clone(),
                });
                addresses.push(id);
            }
            if authors.is_empty() {
                authors.push(AuthorOut {
                    raw_name: "Lab Staff".into(),
                    researcher_id: None,
                    org_id: "LAB".into(),
                });
                addresses.push("LAB".into());
            }
            let record = PubOut {
                pub_id: format!("G_{m}_{k}"),
                year: 2002,
                journal_id: "J0001".into(),
                authors,
                address_org_ids: addresses,
            };
            serde_json::to_writer(&mut out, &record).expect("serialize to Vec");
            out.push(b'\n');
        }
    }
    write(dir, "publications.jsonl", &out)
}
