use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Corpus, OrgKind};
use crate::OrgId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    UnlinkedAuthor,
    UnreferencedOrganization,
    NoUniversityAddress,
    DanglingReference,
    AffiliationNotInAddress,
    OutsideWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Issue {
    pub entity: &'static str,
    pub id: String,
    pub kind: IssueKind,
    pub detail: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            IssueKind::UnlinkedAuthor => "author without roster link",
            IssueKind::UnreferencedOrganization => "never referenced",
            IssueKind::NoUniversityAddress => "no university in address field",
            IssueKind::DanglingReference => "unresolved reference",
            IssueKind::AffiliationNotInAddress => "author university missing from address field",
            IssueKind::OutsideWindow => "year outside window",
        };
        write!(f, "{} {}: {}", self.entity, self.id, what)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        writeln!(
            f,
            "{} error(s), {} warning(s)",
            self.errors.len(),
            self.warnings.len()
        )
    }
}

/// Full scan of a loaded corpus. Hard errors are re-derived from scratch
/// rather than trusted from the loader; warnings flag data that loads fine
/// but is probably incomplete. Both lists are sorted by (entity, id).
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut report = ValidationReport::default();
    let dangling = |entity: &'static str, id: &str, detail: String| Issue {
        entity,
        id: id.to_string(),
        kind: IssueKind::DanglingReference,
        detail,
    };

    let mut referenced: BTreeSet<&OrgId> = BTreeSet::new();
    for r in corpus.researchers().values() {
        referenced.insert(&r.university_org_id);
        if corpus.taxonomy().get(&r.sds_id).is_none() {
            report.errors.push(dangling(
                "researcher",
                r.researcher_id.as_str(),
                format!("sds {}", r.sds_id),
            ));
        }
        match corpus.organization(&r.university_org_id) {
            None => report.errors.push(dangling(
                "researcher",
                r.researcher_id.as_str(),
                format!("organization {}", r.university_org_id),
            )),
            Some(o) if o.kind != OrgKind::University => report.errors.push(dangling(
                "researcher",
                r.researcher_id.as_str(),
                format!("{} is not a university", o.org_id),
            )),
            Some(_) => {}
        }
    }

    for p in corpus.publications() {
        let id = p.pub_id.as_str();
        if !corpus.window().contains(p.year) {
            report.errors.push(Issue {
                entity: "publication",
                id: id.to_string(),
                kind: IssueKind::OutsideWindow,
                detail: p.year.to_string(),
            });
        }
        if !corpus.journals().contains(&p.journal_id) {
            report.errors.push(dangling(
                "publication",
                id,
                format!("journal {}", p.journal_id),
            ));
        }
        let mut has_university = false;
        for org in &p.address_org_ids {
            referenced.insert(org);
            match corpus.organization(org) {
                None => {
                    report
                        .errors
                        .push(dangling("publication", id, format!("organization {org}")))
                }
                Some(o) => has_university |= o.kind == OrgKind::University,
            }
        }
        if !has_university {
            report.warnings.push(Issue {
                entity: "publication",
                id: id.to_string(),
                kind: IssueKind::NoUniversityAddress,
                detail: String::new(),
            });
        }
        for a in &p.authors {
            referenced.insert(&a.org_id);
            if corpus.organization(&a.org_id).is_none() {
                report.errors.push(dangling(
                    "publication",
                    id,
                    format!("organization {}", a.org_id),
                ));
            }
            match &a.researcher_id {
                None => report.warnings.push(Issue {
                    entity: "publication",
                    id: id.to_string(),
                    kind: IssueKind::UnlinkedAuthor,
                    detail: a.raw_name.clone(),
                }),
                Some(rid) => match corpus.researcher(rid) {
                    None => {
                        report
                            .errors
                            .push(dangling("publication", id, format!("researcher {rid}")))
                    }
                    Some(r) if !p.address_org_ids.contains(&r.university_org_id) => {
                        report.errors.push(Issue {
                            entity: "publication",
                            id: id.to_string(),
                            kind: IssueKind::AffiliationNotInAddress,
                            detail: rid.to_string(),
                        })
                    }
                    Some(_) => {}
                },
            }
        }
    }

    for org in corpus.organizations().keys() {
        if !referenced.contains(org) {
            report.warnings.push(Issue {
                entity: "organization",
                id: org.to_string(),
                kind: IssueKind::UnreferencedOrganization,
                detail: String::new(),
            });
        }
    }

    report.errors.sort();
    report.warnings.sort();
    report
}
