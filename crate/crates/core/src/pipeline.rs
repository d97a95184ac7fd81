//! End-to-end orchestration behind the command-line tool.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::corpus::{
    load_accounts, load_authors, load_gold, AccountRecord, AuthorRecord, FrequencyTables, PublicationCatalog,
};
use crate::evalkit::{
    check_gold_authors, restrict_gold_to_active, sweep_tsv, threshold_sweep, DemographicsReport, EvalError,
    ProductivityBins, DEFAULT_THRESHOLDS,
};
use crate::linker::{candidates_tsv, generate_candidates, CandidatePair, SurnameIndex};
use crate::scoring::{
    apply_preferred_rule, filter_threshold, pairs_tsv, score_candidates, MatchSet, RuleConfig, ScoredPair,
    ScoringContext,
};
use crate::synth::{generate, gold_csv, to_jsonl, SynthSpec};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Link,
    Score,
    Evaluate,
    Report,
    Synth,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Link => "link",
            Stage::Score => "score",
            Stage::Evaluate => "evaluate",
            Stage::Report => "report",
            Stage::Synth => "synth",
            Stage::Write => "write",
        })
    }
}

#[derive(Debug, Error)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Box<dyn std::error::Error + Send + Sync>,
}

fn at<E>(stage: Stage) -> impl FnOnce(E) -> PipelineError
where
    E: Into<Box<dyn std::error::Error + Send + Sync>>,
{
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

fn fail(stage: Stage, message: impl Into<String>) -> PipelineError {
    PipelineError {
        stage,
        source: message.into().into(),
    }
}

/// Settings read from a config file; every key is optional.
#[derive(Debug, Clone, PartialEq)]
pub struct FileSettings {
    pub rules: RuleConfig,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub bins: Option<ProductivityBins>,
}

/// Parses a TOML config. `seed`, `workers` and `productivity_bins` are
/// pipeline settings; all other keys override rule defaults.
pub fn parse_config(text: &str) -> Result<FileSettings, PipelineError> {
    let mut table: toml::Table = text.parse().map_err(at::<toml::de::Error>(Stage::Config))?;
    let int = |v: toml::Value, key: &str| -> Result<u64, PipelineError> {
        v.as_integer()
            .and_then(|i| u64::try_from(i).ok())
            .ok_or_else(|| fail(Stage::Config, format!("`{key}` must be a non-negative integer")))
    };
    let seed = table.remove("seed").map(|v| int(v, "seed")).transpose()?;
    let workers = table
        .remove("workers")
        .map(|v| int(v, "workers").map(|w| w as usize))
        .transpose()?;
    let bins = match table.remove("productivity_bins") {
        None => None,
        Some(v) => {
            let lower: Vec<usize> = v
                .as_array()
                .ok_or_else(|| fail(Stage::Config, "`productivity_bins` must be an array"))?
                .iter()
                .map(|x| int(x.clone(), "productivity_bins").map(|n| n as usize))
                .collect::<Result<_, _>>()?;
            Some(ProductivityBins::new(lower).map_err(at(Stage::Config))?)
        }
    };
    let rules = RuleConfig::from_overrides(table).map_err(at(Stage::Config))?;
    Ok(FileSettings {
        rules,
        seed,
        workers,
        bins,
    })
}

pub fn load_config(path: &Path) -> Result<FileSettings, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| fail(Stage::Config, format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub authors: PathBuf,
    pub accounts: PathBuf,
    pub gold: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub rules: RuleConfig,
    pub bins: ProductivityBins,
    pub seed: u64,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
    /// Also write `candidates.tsv` with the blocking evidence.
    pub dump_candidates: bool,
}

impl PipelineConfig {
    pub fn new(authors: impl Into<PathBuf>, accounts: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            authors: authors.into(),
            accounts: accounts.into(),
            gold: None,
            out_dir: out_dir.into(),
            rules: RuleConfig::default(),
            bins: ProductivityBins::default(),
            seed: DEFAULT_SEED,
            workers: None,
            dump_candidates: false,
        }
    }
}

/// Every intermediate of one linkage run.
#[derive(Debug, Clone)]
pub struct Linkage {
    pub candidates: Vec<CandidatePair>,
    pub scored: Vec<ScoredPair>,
    pub selected: Vec<ScoredPair>,
    pub matches: MatchSet,
}

/// Blocking, scoring, best-account selection and the minimum-score cut.
pub fn run_linkage(
    authors: &[AuthorRecord],
    accounts: &[AccountRecord],
    rules: &RuleConfig,
) -> Result<Linkage, PipelineError> {
    let index = SurnameIndex::build(authors);
    let candidates = generate_candidates(accounts, &index);
    let tables = FrequencyTables::build(authors);
    let catalog = PublicationCatalog::build(authors);
    let ctx = ScoringContext::new(authors, accounts, &tables, &catalog, rules);
    let scored = score_candidates(&candidates, &ctx).map_err(at(Stage::Score))?;
    let selected = apply_preferred_rule(scored.clone());
    let matches = filter_threshold(&selected, rules.min_total_score);
    Ok(Linkage {
        candidates,
        scored,
        selected,
        matches,
    })
}

fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T, PipelineError> + Send,
) -> Result<T, PipelineError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(fail(Stage::Config, "worker count must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(at(Stage::Config))?;
    pool.install(f)
}

fn load_inputs(config: &PipelineConfig) -> Result<(Vec<AuthorRecord>, Vec<AccountRecord>), PipelineError> {
    let authors = load_authors(&config.authors).map_err(at(Stage::Load))?;
    let accounts = load_accounts(&config.accounts).map_err(at(Stage::Load))?;
    Ok((authors, accounts))
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, PipelineError> {
    fs::create_dir_all(dir).map_err(|e| fail(Stage::Write, format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| fail(Stage::Write, format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Writes `pairs.tsv` with the retained matches.
pub fn cmd_link(config: &PipelineConfig) -> Result<PathBuf, PipelineError> {
    with_workers(config.workers, || {
        let (authors, accounts) = load_inputs(config)?;
        let linkage = run_linkage(&authors, &accounts, &config.rules)?;
        if config.dump_candidates {
            write_output(&config.out_dir, "candidates.tsv", &candidates_tsv(&linkage.candidates))?;
        }
        write_output(&config.out_dir, "pairs.tsv", &pairs_tsv(&linkage.matches.pairs))
    })
}

/// Writes `eval.tsv`, the precision/recall sweep over the default thresholds.
pub fn cmd_eval(config: &PipelineConfig) -> Result<PathBuf, PipelineError> {
    let gold_path = config
        .gold
        .as_deref()
        .ok_or_else(|| fail(Stage::Evaluate, "no gold standard file given"))?;
    with_workers(config.workers, || {
        let (authors, accounts) = load_inputs(config)?;
        let gold = load_gold(gold_path).map_err(at(Stage::Load))?;
        check_gold_authors(&gold, &authors).map_err(at(Stage::Evaluate))?;
        let gold = restrict_gold_to_active(&gold, &accounts);
        if gold.is_empty() {
            return Err(at(Stage::Evaluate)(EvalError::EmptyGold));
        }
        let linkage = run_linkage(&authors, &accounts, &config.rules)?;
        let rows = threshold_sweep(&linkage.selected, &gold, &DEFAULT_THRESHOLDS).map_err(at(Stage::Evaluate))?;
        write_output(&config.out_dir, "eval.tsv", &sweep_tsv(&rows))
    })
}

/// Writes `report.tsv` with the productivity, domain and academic-age sections.
pub fn cmd_report(config: &PipelineConfig) -> Result<PathBuf, PipelineError> {
    with_workers(config.workers, || {
        let (authors, accounts) = load_inputs(config)?;
        let linkage = run_linkage(&authors, &accounts, &config.rules)?;
        let report = DemographicsReport::build(&authors, &linkage.matches, &config.bins, config.seed);
        write_output(&config.out_dir, "report.tsv", &report.to_tsv())
    })
}

/// Writes `authors.jsonl`, `accounts.jsonl` and `gold.csv`.
pub fn cmd_synth(spec: &SynthSpec, out_dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let corpus = generate(spec).map_err(at(Stage::Synth))?;
    Ok(vec![
        write_output(out_dir, "authors.jsonl", &to_jsonl(&corpus.authors))?,
        write_output(out_dir, "accounts.jsonl", &to_jsonl(&corpus.accounts))?,
        write_output(out_dir, "gold.csv", &gold_csv(&corpus.gold))?,
    ])
}
