use std::io::Write;
use std::path::PathBuf;

use gecsynth::corpus::parallel::escape_field;
use gecsynth::corpus::{filter_sentence, read_plain_corpus, FilterDecision, FilterRules};
use gecsynth::morpho::MisspellingLexicon;

use crate::error::{CliError, Result};
use crate::output;
use crate::Globals;

#[derive(clap::Args)]
pub struct Args {
    /// Plain corpus, one sentence per line.
    #[arg(long, short)]
    input: PathBuf,
    /// Kept sentences, one per line.
    #[arg(long, short)]
    output: PathBuf,
    /// Filter rules (JSON); built-in defaults when omitted.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Rejection report, `id<TAB>reason<TAB>text` per line.
    /// Defaults to `<output stem>.rejected.tsv`.
    #[arg(long)]
    rejects: Option<PathBuf>,
}

fn load_rules(path: Option<&PathBuf>) -> Result<FilterRules> {
    let Some(path) = path else {
        return Ok(FilterRules::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("rules file {}: {e}", path.display())))?;
    let rules: FilterRules = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("rules file {}: {e}", path.display())))?;
    rules.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(rules)
}

pub fn run(g: &Globals, args: Args) -> Result<()> {
    let rules = load_rules(args.rules.as_ref())?;
    let blocklist = match &g.config.lexicons.misspellings {
        Some(p) => MisspellingLexicon::load(p)?,
        None => MisspellingLexicon::default(),
    };
    let rejects_path = args
        .rejects
        .clone()
        .unwrap_or_else(|| args.output.with_extension("rejected.tsv"));
    let mut m = g.manifest("preprocess");
    m.input(&args.input);
    if let Some(r) = &args.rules {
        m.input(r);
    }
    m.output(&args.output);
    m.output(&rejects_path);

    let mut reader = read_plain_corpus(&args.input, g.policy).map_err(|e| CliError::corpus(&args.input, e))?;
    let mut kept = output::create(&args.output)?;
    let mut rejected = output::create(&rejects_path)?;
    for record in reader.by_ref() {
        let record = record.map_err(|e| CliError::corpus(&args.input, e))?;
        match filter_sentence(&record, &rules, &blocklist) {
            FilterDecision::Keep => {
                m.keep();
                writeln!(kept, "{}", record.text).map_err(|e| CliError::io(&args.output, e))?;
            }
            FilterDecision::Reject(reason) => {
                m.reject(reason.as_str());
                writeln!(rejected, "{}\t{}\t{}", record.id, reason.as_str(), escape_field(&record.text))
                    .map_err(|e| CliError::io(&rejects_path, e))?;
            }
        }
    }
    for _ in 0..reader.skipped_invalid() {
        m.reject("invalid_utf8");
    }
    output::finish(kept, &args.output)?;
    output::finish(rejected, &rejects_path)?;
    let kept_count = m.counts().kept;
    m.counts().parts.insert("kept".into(), kept_count);
    g.report_manifest(&m.finish()?)
}
