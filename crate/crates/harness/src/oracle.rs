//! Brute-force reference computations.
//!
//! Everything here reads the data directory on its own and recomputes
//! results by plain enumeration, without touching the analysis engine.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::HarnessError;

/// Window and home country the oracles should assume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleScope {
    pub year_min: i32,
    pub year_max: i32,
    pub home_country: String,
}

impl Default for OracleScope {
    fn default() -> Self {
        Self {
            year_min: 2001,
            year_max: 2003,
            home_country: "IT".to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleCollab {
    pub publications: u64,
    pub industry_articles: u64,
    pub total_collaborations: u64,
    /// Keyed by case name (`one_one`, `m_one`, `one_n`, `m_n`).
    pub articles_by_case: BTreeMap<String, u64>,
    pub collaborations_by_case: BTreeMap<String, u64>,
    /// Per publication: (m, n, case, pair count).
    pub per_publication: BTreeMap<String, (usize, usize, String, u64)>,
}

fn read_table(dir: &Path, name: &str) -> Result<Vec<BTreeMap<String, String>>, HarnessError> {
    let path = dir.join(name);
    let mut reader = csv::Reader::from_path(&path).map_err(|e| HarnessError::Parse {
        file: name.to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    let headers = reader
        .headers()
        .map_err(|e| HarnessError::Parse {
            file: name.to_string(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::Parse {
            file: name.to_string(),
            line: i + 2,
            message: e.to_string(),
        })?;
        rows.push(
            headers
                .iter()
                .zip(rec.iter())
                .map(|(h, v)| (h.to_string(), v.to_string()))
                .collect(),
        );
    }
    Ok(rows)
}

fn read_publications(dir: &Path, scope: &OracleScope) -> Result<Vec<Value>, HarnessError> {
    let name = "publications.jsonl";
    let path = dir.join(name);
    let text = fs::read_to_string(&path).map_err(|source| HarnessError::Io { path, source })?;
    let mut pubs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line).map_err(|e| HarnessError::Parse {
            file: name.to_string(),
            line: i + 1,
            message: e.to_string(),
        })?;
        let year = v["year"].as_i64().unwrap_or(i64::MIN);
        if year >= scope.year_min as i64 && year <= scope.year_max as i64 {
            pubs.push(v);
        }
    }
    Ok(pubs)
}

fn str_list(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().map(String::from))
                .collect()
        })
        .unwrap_or_default()
}

/// Collaboration totals by enumerating every (address, address) pair.
pub fn oracle_collab_counts(dir: &Path, scope: &OracleScope) -> Result<OracleCollab, HarnessError> {
    let orgs = read_table(dir, "organizations.csv")?;
    let is_univ: BTreeSet<String> = orgs
        .iter()
        .filter(|o| o["kind"] == "university")
        .map(|o| o["org_id"].clone())
        .collect();
    let is_firm: BTreeSet<String> = orgs
        .iter()
        .filter(|o| o["kind"] == "private_firm" && o["country"] == scope.home_country)
        .map(|o| o["org_id"].clone())
        .collect();

    let mut out = OracleCollab::default();
    for p in read_publications(dir, scope)? {
        out.publications += 1;
        let mut addresses = str_list(&p["address_org_ids"]);
        addresses.sort();
        addresses.dedup();
        let mut pairs = 0u64;
        for a in &addresses {
            for b in &addresses {
                if is_univ.contains(a) && is_firm.contains(b) {
                    pairs += 1;
                }
            }
        }
        let m = addresses.iter().filter(|a| is_univ.contains(*a)).count();
        let n = addresses.iter().filter(|a| is_firm.contains(*a)).count();
        let case = if m == 0 || n == 0 {
            "none"
        } else if m == 1 && n == 1 {
            "one_one"
        } else if n == 1 {
            "m_one"
        } else if m == 1 {
            "one_n"
        } else {
            "m_n"
        };
        if pairs > 0 {
            out.industry_articles += 1;
            out.total_collaborations += pairs;
            *out.articles_by_case.entry(case.to_string()).or_default() += 1;
            *out.collaborations_by_case
                .entry(case.to_string())
                .or_default() += pairs;
        }
        let id = p["pub_id"].as_str().unwrap_or_default().to_string();
        out.per_publication
            .insert(id, (m, n, case.to_string(), pairs));
    }
    Ok(out)
}

/// Midrank percentiles by pairwise comparison.
pub fn oracle_percentiles(values: &[f64]) -> Result<Vec<f64>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::EmptySample);
    }
    let n = values.len() as f64;
    Ok(values
        .iter()
        .map(|v| {
            let below = values.iter().filter(|w| *w < v).count() as f64;
            let equal = values.iter().filter(|w| *w == v).count() as f64;
            100.0 * (below + 0.5 * equal) / n
        })
        .collect())
}

/// Article-level impact percentile for every (journal, year) in the window.
pub fn oracle_if_ranks(
    dir: &Path,
    scope: &OracleScope,
) -> Result<BTreeMap<(String, i32), f64>, HarnessError> {
    let rows = read_table(dir, "journals.csv")?;
    // journal -> [(year, impact, categories)]
    let mut journals: BTreeMap<String, Vec<(i32, f64, Vec<String>)>> = BTreeMap::new();
    for r in &rows {
        let year: i32 = r["year"].parse().map_err(|_| HarnessError::Parse {
            file: "journals.csv".into(),
            line: 0,
            message: format!("bad year {}", r["year"]),
        })?;
        let impact: f64 = r["impact_factor"]
            .parse()
            .map_err(|_| HarnessError::Parse {
                file: "journals.csv".into(),
                line: 0,
                message: format!("bad impact factor {}", r["impact_factor"]),
            })?;
        let cats = r["sci_categories"]
            .split(';')
            .map(|c| c.trim().to_string())
            .collect();
        journals
            .entry(r["journal_id"].clone())
            .or_default()
            .push((year, impact, cats));
    }

    let mut out = BTreeMap::new();
    for year in scope.year_min..=scope.year_max {
        // pick each journal's row: same year, else closest in-window year, earlier first
        let mut chosen: Vec<(String, f64, Vec<String>)> = Vec::new();
        for (id, years) in &journals {
            let mut best: Option<&(i32, f64, Vec<String>)> = None;
            for cand in years {
                if cand.0 < scope.year_min || cand.0 > scope.year_max {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => {
                        let (dc, db) = ((cand.0 - year).abs(), (b.0 - year).abs());
                        dc < db || (dc == db && cand.0 < b.0)
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
            if let Some(b) = best {
                chosen.push((id.clone(), b.1, b.2.clone()));
            }
        }
        let categories: BTreeSet<&String> = chosen.iter().flat_map(|c| c.2.iter()).collect();
        let mut per_journal: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for cat in categories {
            let members: Vec<&(String, f64, Vec<String>)> =
                chosen.iter().filter(|c| c.2.contains(cat)).collect();
            let values: Vec<f64> = members.iter().map(|m| m.1).collect();
            let ranks = oracle_percentiles(&values)?;
            for (m, r) in members.iter().zip(ranks) {
                per_journal.entry(m.0.clone()).or_default().push(r);
            }
        }
        for (id, ranks) in per_journal {
            let mean = ranks.iter().sum::<f64>() / ranks.len() as f64;
            out.insert((id, year), mean);
        }
    }
    Ok(out)
}

/// Output and fractional strength of every roster researcher.
pub fn oracle_researcher_metrics(
    dir: &Path,
    scope: &OracleScope,
) -> Result<BTreeMap<String, (u64, f64)>, HarnessError> {
    let roster = read_table(dir, "roster.csv")?;
    let pubs = read_publications(dir, scope)?;
    let ranks = oracle_if_ranks(dir, scope)?;
    let mut out = BTreeMap::new();
    for r in &roster {
        let id = &r["researcher_id"];
        let mut o = 0u64;
        let mut fss = 0.0;
        for p in &pubs {
            let Some(authors) = p["authors"].as_array() else {
                continue;
            };
            let listed = authors
                .iter()
                .any(|a| a["researcher_id"].as_str() == Some(id.as_str()));
            if !listed {
                continue;
            }
            o += 1;
            let key = (
                p["journal_id"].as_str().unwrap_or_default().to_string(),
                p["year"].as_i64().unwrap_or_default() as i32,
            );
            let ifpr = ranks
                .get(&key)
                .copied()
                .ok_or_else(|| HarnessError::Parse {
                    file: "journals.csv".into(),
                    line: 0,
                    message: format!("journal {} has no usable row for {}", key.0, key.1),
                })?;
            fss += ifpr / 100.0 / authors.len() as f64;
        }
        out.insert(id.clone(), (o, fss));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentile_examples() {
        let r = oracle_percentiles(&[1.0, 2.0, 3.0]).unwrap();
        assert!((r[0] - 50.0 / 3.0).abs() < 1e-12);
        assert_eq!(r[1], 50.0);
        assert!((r[2] - 250.0 / 3.0).abs() < 1e-12);
        assert_eq!(oracle_percentiles(&[4.0]).unwrap(), [50.0]);
        assert!(matches!(
            oracle_percentiles(&[]),
            Err(HarnessError::EmptySample)
        ));
    }
}
