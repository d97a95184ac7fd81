//! `scholink`: link publication authors to social-media accounts.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scholink::pipeline::{
    cmd_eval, cmd_link, cmd_report, cmd_synth, load_config, PipelineConfig, PipelineError, DEFAULT_SEED,
};
use scholink::synth::{NoiseModel, SynthSpec};

#[derive(Debug, Parser)]
#[command(name = "scholink", version, about = "Author to social-media account record linkage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic corpus with known links.
    Synth(SynthArgs),
    /// Link authors to accounts and write pairs.tsv.
    Link {
        #[command(flatten)]
        run: RunArgs,
        /// Also write candidates.tsv with the blocking evidence.
        #[arg(long)]
        dump_candidates: bool,
    },
    /// Sweep precision and recall over thresholds 6 to 2 and write eval.tsv.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// Gold standard CSV with author_id,handle columns.
        #[arg(long)]
        gold: Option<PathBuf>,
    },
    /// Write report.tsv with matched shares by productivity, domain and academic age.
    Report {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Authors JSONL file.
    #[arg(long)]
    authors: PathBuf,
    /// Accounts JSONL file.
    #[arg(long)]
    accounts: PathBuf,
    /// TOML file overriding rule tables, seed, workers or productivity bins.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Minimum total score a retained pair must reach.
    #[arg(long, allow_negative_numbers = true)]
    min_score: Option<i32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 5000)]
    n_authors: usize,
    #[arg(long, default_value_t = 1000)]
    n_accounts: usize,
    /// Share of accounts that belong to a generated author.
    #[arg(long, default_value_t = 0.5)]
    fraction_linked: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Turn off every noise source.
    #[arg(long)]
    no_noise: bool,
    #[arg(long)]
    initials_only_prob: Option<f64>,
    #[arg(long)]
    diacritic_prob: Option<f64>,
    #[arg(long)]
    truncation_prob: Option<f64>,
    #[arg(long, default_value = "data")]
    out_dir: PathBuf,
}

impl RunArgs {
    fn into_config(self) -> Result<PipelineConfig, PipelineError> {
        let mut config = PipelineConfig::new(self.authors, self.accounts, self.out_dir);
        if let Some(path) = &self.config {
            let file = load_config(path)?;
            config.rules = file.rules;
            config.seed = file.seed.unwrap_or(config.seed);
            config.workers = file.workers;
            config.bins = file.bins.unwrap_or(config.bins);
        }
        if let Some(m) = self.min_score {
            config.rules.min_total_score = m;
        }
        config.seed = self.seed.unwrap_or(config.seed);
        config.workers = self.workers.or(config.workers);
        Ok(config)
    }
}

impl SynthArgs {
    fn spec(&self) -> SynthSpec {
        let mut noise = if self.no_noise { NoiseModel::none() } else { NoiseModel::default() };
        noise.initials_only_prob = self.initials_only_prob.unwrap_or(noise.initials_only_prob);
        noise.diacritic_prob = self.diacritic_prob.unwrap_or(noise.diacritic_prob);
        noise.truncation_prob = self.truncation_prob.unwrap_or(noise.truncation_prob);
        SynthSpec {
            n_authors: self.n_authors,
            n_accounts: self.n_accounts,
            fraction_linked: self.fraction_linked,
            noise,
            seed: self.seed,
        }
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, PipelineError> {
    match cli.command {
        Command::Synth(args) => cmd_synth(&args.spec(), &args.out_dir),
        Command::Link { run, dump_candidates } => {
            let mut config = run.into_config()?;
            config.dump_candidates = dump_candidates;
            cmd_link(&config).map(|p| vec![p])
        }
        Command::Eval { run, gold } => {
            let mut config = run.into_config()?;
            config.gold = gold;
            cmd_eval(&config).map(|p| vec![p])
        }
        Command::Report { run } => cmd_report(&run.into_config()?).map(|p| vec![p]),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("scholink: {e}");
            ExitCode::FAILURE
        }
    }
}
