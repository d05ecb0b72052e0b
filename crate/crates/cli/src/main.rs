//! `gecsynth`: filter a clean corpus, corrupt it into synthetic parallel
//! pairs, split and build typed test sets, and score corrections with GLEU
//! or span-based F0.5.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gecsynth::corpus::DecodePolicy;
use gecsynth::noise::{Lexicons, NoiseConfig};
use gecsynth::tokenizer::Tokenizer;

mod commands;
mod error;
mod manifest;
mod output;

use error::{CliError, Result};
use manifest::{ManifestBuilder, RunManifest};

const EXIT_CODES: &str = "Exit codes:
  0  success
  1  internal error (failed self-check)
  2  usage error
  3  config, rules or lexicon error
  4  I/O error
  5  malformed input file
  6  corpus exhausted (too few applicable sentences)
  7  line-count or alignment mismatch between input files";

#[derive(Parser)]
#[command(
    name = "gecsynth",
    version,
    about = "Synthetic error generation and GEC evaluation",
    after_help = EXIT_CODES
)]
struct Cli {
    /// Noise config (JSON); lexicon paths in it resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Abort on undecodable input lines (default).
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Skip and count undecodable input lines.
    #[arg(long, global = true)]
    lenient: bool,
    /// Human-readable tables instead of JSON on standard output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Also write the run manifest to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter a plain corpus, keeping clean in-language sentences.
    Preprocess(commands::preprocess::Args),
    /// Corrupt a tagged corpus into parallel (noised, clean) pairs.
    Noise(commands::noise::Args),
    /// Split a parallel file into train, validation and test parts.
    Split(commands::split::Args),
    /// Build one single-error-type test set per type.
    MakeTestsets(commands::testsets::Args),
    /// Score a hypothesis file.
    #[command(subcommand)]
    Score(commands::score::ScoreCommand),
    /// M2 conversions.
    #[command(subcommand)]
    M2(commands::m2::M2Command),
    /// Summarize a parallel file.
    Stats(commands::stats::Args),
}

/// Settings shared by every subcommand.
pub struct Globals {
    pub config: NoiseConfig,
    pub config_path: Option<PathBuf>,
    pub workers: usize,
    pub policy: DecodePolicy,
    pub pretty: bool,
    manifest_path: Option<PathBuf>,
}

impl Globals {
    fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let mut config = match &cli.config {
            Some(path) => NoiseConfig::load(path)?,
            None => NoiseConfig::default(),
        };
        if let Some(seed) = cli.seed {
            config.seed = seed;
        }
        Ok(Globals {
            config,
            config_path: cli.config.clone(),
            workers: cli.workers,
            policy: if cli.lenient { DecodePolicy::Lenient } else { DecodePolicy::Strict },
            pretty: cli.pretty,
            manifest_path: cli.manifest.clone(),
        })
    }

    pub fn lexicons(&self) -> Result<Lexicons> {
        Ok(Lexicons::load(&self.config.lexicons)?)
    }

    /// The tokenizer with the configured abbreviation list, without loading
    /// the other lexicons.
    pub fn tokenizer(&self) -> Result<Tokenizer> {
        match &self.config.lexicons.abbreviations {
            Some(p) => Tokenizer::from_abbreviation_file(p).map_err(|e| CliError::Config(e.to_string())),
            None => Ok(Tokenizer::default()),
        }
    }

    pub fn manifest(&self, command: &str) -> ManifestBuilder {
        let mut m = ManifestBuilder::new(command, Some(self.config.fingerprint()), self.config.seed, self.workers);
        if let Some(p) = &self.config_path {
            m.input(p);
        }
        m
    }

    /// Writes the manifest to `--manifest`, if given.
    pub fn save_manifest(&self, manifest: &RunManifest) -> Result<()> {
        match &self.manifest_path {
            Some(p) => output::write_json(manifest, p),
            None => Ok(()),
        }
    }

    /// Saves the manifest and prints it: the report of the pipeline commands.
    pub fn report_manifest(&self, manifest: &RunManifest) -> Result<()> {
        self.save_manifest(manifest)?;
        output::emit(manifest, self.pretty)
    }
}

/// `<stem>.edits.jsonl` next to a parallel file.
pub fn sidecar_path(pairs: &Path) -> PathBuf {
    pairs.with_extension("edits.jsonl")
}

fn run(cli: Cli) -> Result<()> {
    let globals = Globals::from_cli(&cli)?;
    match cli.command {
        Command::Preprocess(args) => commands::preprocess::run(&globals, args),
        Command::Noise(args) => commands::noise::run(&globals, args),
        Command::Split(args) => commands::split::run(&globals, args),
        Command::MakeTestsets(args) => commands::testsets::run(&globals, args),
        Command::Score(cmd) => commands::score::run(&globals, cmd),
        Command::M2(cmd) => commands::m2::run(&globals, cmd),
        Command::Stats(args) => commands::stats::run(&globals, args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(error::exit::OK),
        Err(e) => {
            eprintln!("gecsynth: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
