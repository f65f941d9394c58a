//! `collabmap`: batch front end over the collaboration-mapping engine.
//!
//! Exit status is 0 on success, 1 when the data fail to load, validate or
//! analyse, and 2 on usage errors (including grouping and indicator pairs
//! that cannot be combined).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use collabmap_core::collab::{extract_edges, Selector};
use collabmap_core::corpus::{load_corpus, validate_corpus, Corpus, Window};
use collabmap_core::indicators::{multidisc_table, Level};
use collabmap_core::report::{
    build_comparison_table, build_rank_table, render, render_all, EdgeTable, Format, Metric,
    MultidiscTable, ReportError,
};
use collabmap_core::resolve::{
    load_aliases, resolve_org, suggest_aliases, suggestions_to_csv, AliasMap, Normalizer,
    Resolution, SuffixList, ALIASES_FILE, DEFAULT_SUGGESTION_THRESHOLD, SUFFIXES_FILE,
};
use collabmap_core::stats::{CompareError, Grouping, Indicator};
use collabmap_core::{AnalysisConfig, DEFAULT_HOME_COUNTRY};
use collabmap_harness::{generate, SynthConfig};

#[derive(Debug, Parser)]
#[command(
    name = "collabmap",
    version,
    about = "University-industry collaboration maps"
)]
struct Cli {
    /// Worker threads for per-publication work (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Directory holding the five input files.
    #[arg(long)]
    data_dir: PathBuf,
    #[arg(long, default_value_t = 2001)]
    year_min: i32,
    #[arg(long, default_value_t = 2003)]
    year_max: i32,
    /// Private firms count as industry only when registered here.
    #[arg(long, default_value = DEFAULT_HOME_COUNTRY)]
    home_country: String,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and check a data directory.
    Validate {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Rank areas or sectors by industry co-authorship.
    Map {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "sds")]
        level: Level,
        #[arg(long, default_value = "count")]
        metric: Metric,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, default_value = "md")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List every (publication, university, firm) edge.
    Edges {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run one t-test comparison.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        grouping: Grouping,
        #[arg(long)]
        indicator: Indicator,
        #[arg(long, default_value_t = 7)]
        min_collab_pubs: usize,
        #[arg(long, default_value_t = 1)]
        min_industry_pubs: usize,
        #[arg(long, default_value = "json")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Multidisciplinarity indices of one publication subset.
    Multidisc {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "all")]
        subset: Selector,
        #[arg(long, default_value = "md")]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Render every table family at once.
    Report {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 7)]
        min_collab_pubs: usize,
        #[arg(long, default_value_t = 1)]
        min_industry_pubs: usize,
        #[arg(long, default_value = "md")]
        format: Format,
        /// Directory receiving one file per table; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Match raw organization names against the registry and alias table.
    Resolve {
        #[command(flatten)]
        data: DataArgs,
        /// Text file with one raw name per line.
        #[arg(long)]
        names: PathBuf,
        /// Emit fuzzy suggestions for unresolved names instead.
        #[arg(long)]
        suggest: bool,
        #[arg(long, default_value_t = DEFAULT_SUGGESTION_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write a seeded synthetic data directory.
    Synth {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        pubs: usize,
        #[arg(long)]
        researchers: Option<usize>,
        #[arg(long)]
        industry_rate: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failures that are the caller's fault rather than the data's.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn load(data: &DataArgs) -> Result<Corpus> {
    let window = Window::new(data.year_min, data.year_max).map_err(|e| Usage(e.to_string()))?;
    let corpus = load_corpus(&data.data_dir, window)
        .with_context(|| format!("loading {}", data.data_dir.display()))?;
    let report = validate_corpus(&corpus);
    if !report.is_clean() {
        eprint!("{report}");
        bail!("{} validation error(s)", report.errors.len());
    }
    Ok(corpus)
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn config(data: &DataArgs, min_collab_pubs: usize, min_industry_pubs: usize) -> AnalysisConfig {
    AnalysisConfig {
        home_country: data.home_country.clone(),
        min_collab_pubs,
        min_industry_pubs,
    }
}

/// Incompatible grouping and indicator pairs are a usage problem.
fn classify(e: ReportError) -> anyhow::Error {
    match e {
        ReportError::Compare(CompareError::IncompatibleIndicator { .. })
        | ReportError::InvalidTopK => Usage(e.to_string()).into(),
        other => other.into(),
    }
}

fn alias_map(dir: &Path, corpus: &Corpus) -> Result<AliasMap> {
    let suffix_path = dir.join(SUFFIXES_FILE);
    let suffixes = if suffix_path.exists() {
        SuffixList::load(&suffix_path)?
    } else {
        SuffixList::default()
    };
    let alias_path = dir.join(ALIASES_FILE);
    let aliases = if alias_path.exists() {
        load_aliases(&alias_path)?
    } else {
        Vec::new()
    };
    Ok(AliasMap::build(
        corpus.organizations(),
        &aliases,
        Normalizer::new(suffixes),
    )?)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Validate { data } => {
            let window =
                Window::new(data.year_min, data.year_max).map_err(|e| Usage(e.to_string()))?;
            let corpus = load_corpus(&data.data_dir, window)
                .with_context(|| format!("loading {}", data.data_dir.display()))?;
            let report = validate_corpus(&corpus);
            print!("{report}");
            if !report.is_clean() {
                bail!("{} validation error(s)", report.errors.len());
            }
            Ok(())
        }
        Command::Map {
            data,
            level,
            metric,
            top,
            format,
            out,
        } => {
            let corpus = load(&data)?;
            let table = build_rank_table(&corpus, level, metric, top, &data.home_country)
                .map_err(classify)?;
            emit(out.out.as_deref(), &render(&table, format))
        }
        Command::Edges { data, format, out } => {
            let corpus = load(&data)?;
            let table = EdgeTable {
                edges: extract_edges(&corpus, &data.home_country),
            };
            emit(out.out.as_deref(), &render(&table, format))
        }
        Command::Compare {
            data,
            grouping,
            indicator,
            min_collab_pubs,
            min_industry_pubs,
            format,
            out,
        } => {
            if !grouping.indicators().contains(&indicator) {
                return Err(Usage(format!(
                    "indicator {indicator} cannot be used with grouping {grouping}"
                ))
                .into());
            }
            let corpus = load(&data)?;
            let cfg = config(&data, min_collab_pubs, min_industry_pubs);
            let table =
                build_comparison_table(&corpus, grouping, indicator, &cfg).map_err(classify)?;
            emit(out.out.as_deref(), &render(&table, format))
        }
        Command::Multidisc {
            data,
            subset,
            format,
            out,
        } => {
            let corpus = load(&data)?;
            let rows = multidisc_table(&corpus, subset, &data.home_country)?;
            emit(
                out.out.as_deref(),
                &render(&MultidiscTable::new(subset, rows), format),
            )
        }
        Command::Report {
            data,
            min_collab_pubs,
            min_industry_pubs,
            format,
            out,
        } => {
            let corpus = load(&data)?;
            alias_map(&data.data_dir, &corpus)?;
            let cfg = config(&data, min_collab_pubs, min_industry_pubs);
            let tables = render_all(&corpus, &cfg, format).map_err(classify)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                    for t in &tables {
                        let path = dir.join(format!("{}.{}", t.name, format.extension()));
                        emit(Some(&path), &t.content)?;
                    }
                    Ok(())
                }
                None => {
                    let joined: Vec<&str> = tables.iter().map(|t| t.content.as_str()).collect();
                    emit(None, &joined.join("\n"))
                }
            }
        }
        Command::Resolve {
            data,
            names,
            suggest,
            threshold,
            out,
        } => {
            let corpus = load(&data)?;
            let map = alias_map(&data.data_dir, &corpus)?;
            let text = fs::read_to_string(&names)
                .with_context(|| format!("reading {}", names.display()))?;
            let raw: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect();
            let content = if suggest {
                let unresolved: Vec<String> = raw
                    .iter()
                    .filter(|r| matches!(resolve_org(r, &map), Resolution::Unresolved(_)))
                    .cloned()
                    .collect();
                let hits = suggest_aliases(&unresolved, &map, threshold)
                    .map_err(|e| Usage(e.to_string()))?;
                suggestions_to_csv(&hits)
            } else {
                resolutions_csv(&raw, &map)?
            };
            emit(out.out.as_deref(), &content)
        }
        Command::Synth {
            seed,
            pubs,
            researchers,
            industry_rate,
            out,
        } => {
            let mut cfg = SynthConfig {
                seed,
                n_pubs: pubs,
                ..SynthConfig::default()
            };
            if let Some(r) = researchers {
                cfg.n_researchers = r;
            }
            if let Some(rate) = industry_rate {
                cfg.industry_rate = rate;
            }
            cfg.validate().map_err(|e| Usage(e.to_string()))?;
            generate(&cfg, &out)?;
            Ok(())
        }
    }
}

fn resolutions_csv(raw: &[String], map: &AliasMap) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["raw_name", "org_id"])?;
    for r in raw {
        let id = match resolve_org(r, map) {
            Resolution::Resolved(id) => id.to_string(),
            Resolution::Unresolved(_) => String::new(),
        };
        w.write_record([r.as_str(), id.as_str()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
