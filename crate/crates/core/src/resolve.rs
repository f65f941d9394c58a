//! Organization-name consolidation.
//!
//! Raw address strings are normalized (NFC, lowercase, punctuation removed,
//! trailing legal-form tokens dropped, whitespace collapsed) and looked up
//! in an exact alias table. Fuzzy matching never feeds the table: it only
//! produces [`MatchSuggestion`]s for a human to review.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::Organization;
use crate::OrgId;

pub const ALIASES_FILE: &str = "aliases.csv";
pub const SUFFIXES_FILE: &str = "suffixes.txt";

pub const DEFAULT_LEGAL_SUFFIXES: &[&str] = &[
    "spa", "s.p.a", "srl", "s.r.l", "snc", "sas", "inc", "ltd", "gmbh",
];

pub const DEFAULT_SUGGESTION_THRESHOLD: f64 = 0.9;

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("alias {alias:?} normalizes to a form claimed by both {first} and {second}")]
    AmbiguousAlias {
        alias: String,
        first: OrgId,
        second: OrgId,
    },
    #[error("alias {alias:?} points to unknown organization {org_id}")]
    UnknownOrg { alias: String, org_id: OrgId },
    #[error("name {0:?} is empty after normalization")]
    EmptyAlias(String),
    #[error("similarity threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
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
}

/// Legal-form tokens removed from the end of a name. Tokens are stored in
/// normalized form, so `s.p.a` and `spa` are the same entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixList(BTreeSet<String>);

impl SuffixList {
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set = tokens
            .into_iter()
            .map(|t| {
                let lower: String = t.as_ref().nfc().collect::<String>().to_lowercase();
                lower
                    .nfc()
                    .filter(|c| c.is_alphanumeric())
                    .collect::<String>()
            })
            .filter(|t| !t.is_empty())
            .collect();
        Self(set)
    }

    /// One token per line; blank lines and `#` comments are skipped.
    pub fn load(path: &Path) -> Result<Self, ResolveError> {
        let io_err = |source| ResolveError::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = std::fs::File::open(path).map_err(io_err)?;
        let mut tokens = Vec::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line.map_err(io_err)?;
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('#') {
                tokens.push(t.to_string());
            }
        }
        Ok(Self::from_tokens(tokens))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }
}

impl Default for SuffixList {
    fn default() -> Self {
        Self::from_tokens(DEFAULT_LEGAL_SUFFIXES)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Normalizer {
    suffixes: SuffixList,
}

impl Normalizer {
    pub fn new(suffixes: SuffixList) -> Self {
        Self { suffixes }
    }

    pub fn normalize(&self, raw: &str) -> String {
        let folded = raw.nfc().collect::<String>().to_lowercase();
        let kept: String = folded
            .nfc()
            .filter(|c| c.is_alphanumeric() || c.is_whitespace())
            .collect();
        let mut tokens: Vec<&str> = kept.split_whitespace().collect();
        while tokens.last().is_some_and(|t| self.suffixes.contains(t)) {
            tokens.pop();
        }
        tokens.join(" ").nfc().collect()
    }
}

/// Normalizes with the default legal-suffix list.
pub fn normalize_org_name(raw: &str) -> String {
    Normalizer::default().normalize(raw)
}

/// Jaro-Winkler similarity over Unicode scalar values.
///
/// Follows the classic comparator: the match window is
/// `max(len) / 2 - 1`, half-transpositions are halved with integer division,
/// and the common-prefix bonus (scale 0.1, at most 4 characters) applies only
/// when the Jaro score exceeds 0.7.
pub fn jaro_winkler(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let jaro = jaro(&a, &b);
    if jaro <= 0.7 {
        return jaro;
    }
    let prefix = a.iter().zip(&b).take(4).take_while(|(x, y)| x == y).count();
    jaro + 0.1 * prefix as f64 * (1.0 - jaro)
}

fn jaro(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_hit = vec![false; a.len()];
    let mut b_hit = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_hit[j] && b[j] == *ca {
                a_hit[i] = true;
                b_hit[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    let a_seq = a.iter().zip(&a_hit).filter(|(_, h)| **h).map(|(c, _)| c);
    let b_seq = b.iter().zip(&b_hit).filter(|(_, h)| **h).map(|(c, _)| c);
    let half_transpositions = a_seq.zip(b_seq).filter(|(x, y)| x != y).count();
    let transpositions = half_transpositions / 2;
    let m = matches as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (matches - transpositions) as f64 / m) / 3.0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliasEntry {
    pub alias: String,
    pub org_id: OrgId,
}

/// Reads `aliases.csv` (`alias,org_id`).
pub fn load_aliases(path: &Path) -> Result<Vec<AliasEntry>, ResolveError> {
    let file_label = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => ResolveError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => ResolveError::Parse {
            file: file_label.clone(),
            line: 1,
            message: format!("{other:?}"),
        },
    })?;
    let mut out = Vec::new();
    for row in reader.deserialize::<AliasEntry>() {
        let row = row.map_err(|e| ResolveError::Parse {
            file: file_label.clone(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        out.push(row);
    }
    Ok(out)
}

/// Exact lookup table from normalized names to organizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasMap {
    entries: BTreeMap<String, OrgId>,
    normalizer: Normalizer,
}

impl AliasMap {
    /// Seeds the table with every canonical name in `registry`, then adds
    /// `aliases`. Two organizations claiming one normalized form is an error.
    pub fn build(
        registry: &BTreeMap<OrgId, Organization>,
        aliases: &[AliasEntry],
        normalizer: Normalizer,
    ) -> Result<Self, ResolveError> {
        let mut entries: BTreeMap<String, OrgId> = BTreeMap::new();
        let canonical = registry
            .values()
            .map(|o| (o.canonical_name.as_str(), &o.org_id));
        let extra = aliases.iter().map(|a| (a.alias.as_str(), &a.org_id));
        for (raw, org) in canonical.chain(extra) {
            if !registry.contains_key(org) {
                return Err(ResolveError::UnknownOrg {
                    alias: raw.to_string(),
                    org_id: org.clone(),
                });
            }
            let key = normalizer.normalize(raw);
            if key.is_empty() {
                return Err(ResolveError::EmptyAlias(raw.to_string()));
            }
            match entries.get(&key) {
                Some(existing) if existing != org => {
                    let (first, second) = if existing < org {
                        (existing.clone(), org.clone())
                    } else {
                        (org.clone(), existing.clone())
                    };
                    return Err(ResolveError::AmbiguousAlias {
                        alias: key,
                        first,
                        second,
                    });
                }
                Some(_) => {}
                None => {
                    entries.insert(key, org.clone());
                }
            }
        }
        Ok(Self {
            entries,
            normalizer,
        })
    }

    pub fn normalizer(&self) -> &Normalizer {
        &self.normalizer
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &OrgId)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn get(&self, normalized: &str) -> Option<&OrgId> {
        self.entries.get(normalized)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Resolved(OrgId),
    Unresolved(String),
}

pub fn resolve_org(raw: &str, aliases: &AliasMap) -> Resolution {
    let key = aliases.normalizer.normalize(raw);
    match aliases.get(&key) {
        Some(org) => Resolution::Resolved(org.clone()),
        None => Resolution::Unresolved(raw.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSuggestion {
    pub raw_name: String,
    pub candidate_org_id: OrgId,
    pub score: f64,
}

/// Candidate organizations for names the table could not resolve.
///
/// Each organization is scored by its best Jaro-Winkler similarity across
/// all of its normalized forms. Names keep their input order (duplicates
/// dropped); within a name, candidates are sorted by score descending, then
/// org id ascending.
pub fn suggest_aliases(
    unresolved: &[String],
    aliases: &AliasMap,
    threshold: f64,
) -> Result<Vec<MatchSuggestion>, ResolveError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(ResolveError::InvalidThreshold(threshold));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for raw in unresolved {
        if !seen.insert(raw.as_str()) {
            continue;
        }
        let key = aliases.normalizer.normalize(raw);
        let mut best: BTreeMap<&OrgId, f64> = BTreeMap::new();
        for (form, org) in aliases.entries() {
            let score = jaro_winkler(&key, form);
            let slot = best.entry(org).or_insert(score);
            if score > *slot {
                *slot = score;
            }
        }
        let mut hits: Vec<MatchSuggestion> = best
            .into_iter()
            .filter(|(_, s)| *s >= threshold)
            .map(|(org, score)| MatchSuggestion {
                raw_name: raw.clone(),
                candidate_org_id: org.clone(),
                score,
            })
            .collect();
        hits.sort_by(|x, y| {
            y.score
                .total_cmp(&x.score)
                .then_with(|| x.candidate_org_id.cmp(&y.candidate_org_id))
        });
        out.extend(hits);
    }
    Ok(out)
}

/// `raw_name,candidate_org_id,score` with LF line endings.
pub fn suggestions_to_csv(suggestions: &[MatchSuggestion]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["raw_name", "candidate_org_id", "score"])
        .expect("write to Vec");
    for s in suggestions {
        w.write_record([
            s.raw_name.as_str(),
            s.candidate_org_id.as_str(),
            &s.score.to_string(),
        ])
        .expect("write to Vec");
    }
    String::from_utf8(w.into_inner().expect("flush Vec")).expect("utf-8 input")
}
