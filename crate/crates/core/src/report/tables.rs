use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    csv_string, fixed, full, full_opt, json_pretty, md_table, p_value, Render, ReportError,
};
use crate::collab::{CollabCase, CollabEdge, CollabSummary, Selector};
use crate::corpus::Corpus;
use crate::indicators::{intensity_of, Analysis, Level, MultidiscIndex, SectorIntensityRow};
use crate::stats::{compare_in, Comparison, Grouping, Indicator, Sample, TestKind};
use crate::AnalysisConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Count,
    PctAll,
    PctCoauth,
    PerResearcher,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Count,
        Metric::PctAll,
        Metric::PctCoauth,
        Metric::PerResearcher,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Count => "count",
            Metric::PctAll => "pct_all",
            Metric::PctCoauth => "pct_coauth",
            Metric::PerResearcher => "per_researcher",
        }
    }

    fn value(self, row: &SectorIntensityRow) -> Option<f64> {
        match self {
            Metric::Count => Some(row.n_industry_coauth as f64),
            Metric::PctAll => Some(row.pct_of_all),
            Metric::PctCoauth => row.pct_of_coauth,
            Metric::PerResearcher => row.per_researcher,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Metric::Count => "number of industry co-authored articles",
            Metric::PctAll => "industry co-authored share of all articles (%)",
            Metric::PctCoauth => "industry co-authored share of extramural articles (%)",
            Metric::PerResearcher => "industry co-authored articles per researcher",
        }
    }

    fn show(self, v: f64) -> String {
        match self {
            Metric::Count => fixed(v, 0),
            _ => fixed(v, 3),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| ReportError::UnknownMetric(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub sector_id: String,
    pub sector_name: String,
    pub uda_name: String,
    pub value: f64,
    pub n_industry_coauth: u64,
    pub n_articles: u64,
    pub n_coauth: u64,
    pub headcount: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTable {
    pub title: String,
    pub level: Level,
    pub metric: Metric,
    pub k: usize,
    pub rows: Vec<RankRow>,
}

/// Top `k` sectors (or areas) under `metric`, highest first. Ties go to the
/// alphabetically first name; sectors where the metric is undefined are left out.
pub fn build_rank_table(
    corpus: &Corpus,
    level: Level,
    metric: Metric,
    k: usize,
    home_country: &str,
) -> Result<RankTable, ReportError> {
    if k == 0 {
        return Err(ReportError::InvalidTopK);
    }
    rank_table_in(&Analysis::new(corpus, home_country), level, metric, k)
}

/// [`build_rank_table`] over an already prepared analysis.
pub fn rank_table_in(
    analysis: &Analysis<'_>,
    level: Level,
    metric: Metric,
    k: usize,
) -> Result<RankTable, ReportError> {
    if k == 0 {
        return Err(ReportError::InvalidTopK);
    }
    let mut rows: Vec<(f64, SectorIntensityRow)> =
        intensity_of(analysis.corpus(), analysis.facts(), level)
            .into_iter()
            .filter_map(|r| metric.value(&r).map(|v| (v, r)))
            .collect();
    rows.sort_by(|(va, a), (vb, b)| {
        vb.total_cmp(va)
            .then_with(|| a.sector_name.cmp(&b.sector_name))
            .then_with(|| a.sector_id.cmp(&b.sector_id))
    });
    rows.truncate(k);
    let unit = match level {
        Level::Sds => "sectors",
        Level::Uda => "areas",
    };
    Ok(RankTable {
        title: format!("Top {k} {unit} by {}", metric.describe()),
        level,
        metric,
        k,
        rows: rows
            .into_iter()
            .enumerate()
            .map(|(i, (value, r))| RankRow {
                rank: i + 1,
                sector_id: r.sector_id,
                sector_name: r.sector_name,
                uda_name: r.uda_name,
                value,
                n_industry_coauth: r.n_industry_coauth,
                n_articles: r.n_articles,
                n_coauth: r.n_coauth,
                headcount: r.headcount,
            })
            .collect(),
    })
}

impl Render for RankTable {
    fn to_csv(&self) -> String {
        csv_string(
            &[
                "rank",
                "sector_id",
                "sector_name",
                "uda_name",
                "value",
                "n_industry_coauth",
                "n_articles",
                "n_coauth",
                "headcount",
            ],
            self.rows.iter().map(|r| {
                vec![
                    r.rank.to_string(),
                    r.sector_id.clone(),
                    r.sector_name.clone(),
                    r.uda_name.clone(),
                    full(r.value),
                    r.n_industry_coauth.to_string(),
                    r.n_articles.to_string(),
                    r.n_coauth.to_string(),
                    r.headcount.to_string(),
                ]
            }),
        )
    }

    fn to_json(&self) -> String {
        json_pretty(self)
    }

    fn to_markdown(&self) -> String {
        let with_area = self.level == Level::Sds;
        let mut header = vec!["Rank", "Id", "Name"];
        if with_area {
            header.push("Area");
        }
        header.extend(["Value", "Industry", "Articles", "Extramural", "Staff"]);
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![
                    r.rank.to_string(),
                    r.sector_id.clone(),
                    r.sector_name.clone(),
                ];
                if with_area {
                    cells.push(r.uda_name.clone());
                }
                cells.extend([
                    self.metric.show(r.value),
                    r.n_industry_coauth.to_string(),
                    r.n_articles.to_string(),
                    r.n_coauth.to_string(),
                    r.headcount.to_string(),
                ]);
                cells
            })
            .collect();
        format!("# {}\n\n{}", self.title, md_table(&header, &rows))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub title: String,
    pub comparison: Comparison,
}

impl ComparisonTable {
    pub fn exclusion_note(&self) -> Option<String> {
        self.comparison.exclusion.as_ref().map(|e| e.note())
    }
}

fn comparison_title(grouping: Grouping, indicator: Indicator) -> String {
    let what = match indicator {
        Indicator::Ifpr => "Journal impact percentile",
        Indicator::O => "Output percentile",
        Indicator::Fss => "Fractional scientific strength percentile",
        Indicator::IiSds => "Sectors per publication",
        Indicator::IiSci => "Subject categories per publication",
    };
    let groups = match grouping {
        Grouping::SdsAllVsCollab => "all publications vs extramural collaborations",
        Grouping::SdsAllVsIndustry | Grouping::MultidiscAllVsIndustry => {
            "all publications vs industry co-authored publications"
        }
        Grouping::MultidiscCollabVsIndustry => {
            "extramural collaborations vs industry co-authored publications"
        }
        Grouping::ResearchersIndustryVsRest => {
            "researchers with industry co-authorship vs the rest"
        }
    };
    format!("{what}: {groups}")
}

pub fn build_comparison_table(
    corpus: &Corpus,
    grouping: Grouping,
    indicator: Indicator,
    config: &AnalysisConfig,
) -> Result<ComparisonTable, ReportError> {
    let analysis = Analysis::new(corpus, &config.home_country);
    comparison_table_in(&analysis, grouping, indicator, config)
}

/// [`build_comparison_table`] over an already prepared analysis.
pub fn comparison_table_in(
    analysis: &Analysis<'_>,
    grouping: Grouping,
    indicator: Indicator,
    config: &AnalysisConfig,
) -> Result<ComparisonTable, ReportError> {
    let comparison = compare_in(analysis, grouping, indicator, config)?;
    Ok(ComparisonTable {
        title: comparison_title(grouping, indicator),
        comparison,
    })
}

#[derive(Serialize)]
struct ComparisonJson<'a> {
    title: &'a str,
    grouping: Grouping,
    indicator: Indicator,
    kind: TestKind,
    sample_a: &'a Sample,
    sample_b: &'a Sample,
    t: f64,
    df: f64,
    p_one: f64,
    p_two: f64,
    units: &'a [String],
    exclusion_note: Option<String>,
}

impl Render for ComparisonTable {
    fn to_csv(&self) -> String {
        let c = &self.comparison;
        let r = &c.result;
        csv_string(
            &[
                "grouping",
                "indicator",
                "kind",
                "label_a",
                "mean_a",
                "variance_a",
                "n_a",
                "label_b",
                "mean_b",
                "variance_b",
                "n_b",
                "t",
                "df",
                "p_one",
                "p_two",
                "exclusion_note",
            ],
            [vec![
                c.grouping.to_string(),
                c.indicator.to_string(),
                kind_str(r.kind).to_string(),
                c.sample_a.label.clone(),
                full(c.sample_a.mean),
                full_opt(c.sample_a.variance),
                c.sample_a.n.to_string(),
                c.sample_b.label.clone(),
                full(c.sample_b.mean),
                full_opt(c.sample_b.variance),
                c.sample_b.n.to_string(),
                full(r.t),
                full(r.df),
                full(r.p_one),
                full(r.p_two),
                self.exclusion_note().unwrap_or_default(),
            ]],
        )
    }

    fn to_json(&self) -> String {
        let c = &self.comparison;
        json_pretty(&ComparisonJson {
            title: &self.title,
            grouping: c.grouping,
            indicator: c.indicator,
            kind: c.result.kind,
            sample_a: &c.sample_a,
            sample_b: &c.sample_b,
            t: c.result.t,
            df: c.result.df,
            p_one: c.result.p_one,
            p_two: c.result.p_two,
            units: &c.units,
            exclusion_note: self.exclusion_note(),
        })
    }

    fn to_markdown(&self) -> String {
        let c = &self.comparison;
        let r = &c.result;
        let var = |s: &Sample| {
            s.variance
                .map(|v| fixed(v, 3))
                .unwrap_or_else(|| "n/a".into())
        };
        let blank = String::new;
        let rows = vec![
            vec![
                "Mean".into(),
                fixed(c.sample_a.mean, 3),
                fixed(c.sample_b.mean, 3),
            ],
            vec!["Variance".into(), var(&c.sample_a), var(&c.sample_b)],
            vec![
                "Observations".into(),
                c.sample_a.n.to_string(),
                c.sample_b.n.to_string(),
            ],
            vec!["t".into(), fixed(r.t, 4), blank()],
            vec!["df".into(), fixed(r.df, 3), blank()],
            vec!["p (one tail)".into(), p_value(r.p_one), blank()],
            vec!["p (two tail)".into(), p_value(r.p_two), blank()],
        ];
        let mut out = format!(
            "# {}\n\n{}",
            self.title,
            md_table(&["", &c.sample_a.label, &c.sample_b.label], &rows)
        );
        out.push_str(&format!("\nTest: {}.", kind_str(r.kind)));
        if let Some(note) = self.exclusion_note() {
            out.push_str(&format!(" Units: {}; {note}.", c.units.len()));
        }
        out.push('\n');
        out
    }
}

fn kind_str(kind: TestKind) -> &'static str {
    match kind {
        TestKind::Paired => "paired",
        TestKind::Welch => "welch",
    }
}

/// Multidisciplinarity indices of one publication subset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultidiscTable {
    pub title: String,
    pub subset: Selector,
    pub rows: Vec<MultidiscIndex>,
}

impl MultidiscTable {
    pub fn new(subset: Selector, rows: Vec<MultidiscIndex>) -> Self {
        let what = match subset {
            Selector::All => "all publications",
            Selector::ExtramuralCollab => "extramural collaborations",
            Selector::IndustryCoauthored => "industry co-authored publications",
        };
        Self {
            title: format!("Multidisciplinarity of {what}"),
            subset,
            rows,
        }
    }
}

impl Render for MultidiscTable {
    fn to_csv(&self) -> String {
        csv_string(
            &["scope", "scope_id", "subset", "ii_sds", "ii_sci", "n_pubs"],
            self.rows.iter().map(|r| {
                vec![
                    r.scope.as_str().to_string(),
                    r.scope_id.clone(),
                    r.subset.to_string(),
                    full_opt(r.ii_sds),
                    full_opt(r.ii_sci),
                    r.n_pubs.to_string(),
                ]
            }),
        )
    }

    fn to_json(&self) -> String {
        json_pretty(self)
    }

    fn to_markdown(&self) -> String {
        let show = |v: Option<f64>| v.map(|v| fixed(v, 3)).unwrap_or_else(|| "n/a".into());
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.scope.as_str().to_string(),
                    r.scope_id.clone(),
                    show(r.ii_sds),
                    show(r.ii_sci),
                    r.n_pubs.to_string(),
                ]
            })
            .collect();
        format!(
            "# {}\n\n{}",
            self.title,
            md_table(&["Scope", "Id", "Ii_SDS", "Ii_SCI", "Publications"], &rows)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EdgeTable {
    pub edges: Vec<CollabEdge>,
}

impl Render for EdgeTable {
    fn to_csv(&self) -> String {
        crate::collab::edges_to_csv(&self.edges)
    }

    fn to_json(&self) -> String {
        json_pretty(self)
    }

    fn to_markdown(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .edges
            .iter()
            .map(|e| {
                vec![
                    e.pub_id.to_string(),
                    e.university_org_id.to_string(),
                    e.firm_org_id.to_string(),
                ]
            })
            .collect();
        format!(
            "# University-firm collaboration edges\n\n{}",
            md_table(&["Publication", "University", "Firm"], &rows)
        )
    }
}

/// Collaboration totals split by the (m, n) case of each article.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CaseTable {
    pub summary: CollabSummary,
}

const CASES: [CollabCase; 4] = [
    CollabCase::OneOne,
    CollabCase::MOne,
    CollabCase::OneN,
    CollabCase::MN,
];

impl CaseTable {
    fn rows(&self) -> Vec<Vec<String>> {
        let s = &self.summary;
        let mut rows: Vec<Vec<String>> = CASES
            .iter()
            .map(|&c| {
                vec![
                    c.as_str().to_string(),
                    s.articles_by_case.get(c).to_string(),
                    s.collaborations_by_case.get(c).to_string(),
                ]
            })
            .collect();
        rows.push(vec![
            "total".into(),
            s.industry_articles.to_string(),
            s.total_collaborations.to_string(),
        ]);
        rows
    }
}

impl Render for CaseTable {
    fn to_csv(&self) -> String {
        csv_string(&["case", "articles", "collaborations"], self.rows())
    }

    fn to_json(&self) -> String {
        json_pretty(self)
    }

    fn to_markdown(&self) -> String {
        format!(
            "# Industry collaborations by case\n\n{}\nPublications analysed: {}.\n",
            md_table(&["Case", "Articles", "Collaborations"], &self.rows()),
            self.summary.publications
        )
    }
}
