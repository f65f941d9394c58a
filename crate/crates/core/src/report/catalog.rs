use super::tables::{
    comparison_table_in, rank_table_in, CaseTable, EdgeTable, Metric, MultidiscTable,
};
use super::{render, Format, ReportError};
use crate::collab::{edges_of, summarize, Selector};
use crate::corpus::Corpus;
use crate::indicators::{multidisc_of, Analysis, Level};
use crate::stats::{Grouping, Indicator};
use crate::AnalysisConfig;

/// One rendered table and the file stem it is usually saved under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedTable {
    pub name: String,
    pub content: String,
}

const RANKINGS: [(&str, Level, Metric, usize); 7] = [
    ("uda_count_top4", Level::Uda, Metric::Count, 4),
    ("uda_pct_all_top4", Level::Uda, Metric::PctAll, 4),
    ("uda_pct_coauth_top4", Level::Uda, Metric::PctCoauth, 4),
    ("sds_count_top10", Level::Sds, Metric::Count, 10),
    ("sds_pct_all_top10", Level::Sds, Metric::PctAll, 10),
    ("sds_pct_coauth_top10", Level::Sds, Metric::PctCoauth, 10),
    (
        "sds_per_researcher_top10",
        Level::Sds,
        Metric::PerResearcher,
        10,
    ),
];

const COMPARISONS: [(&str, Grouping, Indicator); 8] = [
    (
        "ifpr_all_vs_collab",
        Grouping::SdsAllVsCollab,
        Indicator::Ifpr,
    ),
    (
        "ifpr_all_vs_industry",
        Grouping::SdsAllVsIndustry,
        Indicator::Ifpr,
    ),
    (
        "researchers_output",
        Grouping::ResearchersIndustryVsRest,
        Indicator::O,
    ),
    (
        "researchers_fss",
        Grouping::ResearchersIndustryVsRest,
        Indicator::Fss,
    ),
    (
        "multidisc_all_vs_industry_sds",
        Grouping::MultidiscAllVsIndustry,
        Indicator::IiSds,
    ),
    (
        "multidisc_all_vs_industry_sci",
        Grouping::MultidiscAllVsIndustry,
        Indicator::IiSci,
    ),
    (
        "multidisc_collab_vs_industry_sds",
        Grouping::MultidiscCollabVsIndustry,
        Indicator::IiSds,
    ),
    (
        "multidisc_collab_vs_industry_sci",
        Grouping::MultidiscCollabVsIndustry,
        Indicator::IiSci,
    ),
];

const SUBSETS: [(&str, Selector); 3] = [
    ("multidisc_all", Selector::All),
    ("multidisc_collab", Selector::ExtramuralCollab),
    ("multidisc_industry", Selector::IndustryCoauthored),
];

/// Every table family in a fixed order: the case breakdown, the area and
/// sector rankings, the eight comparisons, the per-subset
/// multidisciplinarity indices and the edge list.
pub fn render_all(
    corpus: &Corpus,
    config: &AnalysisConfig,
    format: Format,
) -> Result<Vec<RenderedTable>, ReportError> {
    let analysis = Analysis::new(corpus, &config.home_country);
    let mut out = Vec::new();
    let mut push = |name: &str, content: String| {
        out.push(RenderedTable {
            name: name.to_string(),
            content,
        })
    };
    let cases = CaseTable {
        summary: summarize(analysis.profiles()),
    };
    push("collaboration_cases", render(&cases, format));
    for (name, level, metric, k) in RANKINGS {
        push(
            name,
            render(&rank_table_in(&analysis, level, metric, k)?, format),
        );
    }
    for (name, grouping, indicator) in COMPARISONS {
        let table = comparison_table_in(&analysis, grouping, indicator, config)?;
        push(name, render(&table, format));
    }
    for (name, selector) in SUBSETS {
        let rows = multidisc_of(corpus, analysis.facts(), selector)?;
        push(name, render(&MultidiscTable::new(selector, rows), format));
    }
    let edges = EdgeTable {
        edges: edges_of(analysis.profiles()),
    };
    push("edges", render(&edges, format));
    Ok(out)
}
