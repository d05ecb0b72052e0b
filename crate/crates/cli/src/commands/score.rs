use std::path::{Path, PathBuf};

use clap::{Subcommand, ValueEnum};
use gecsynth::corpus::parallel::parse_pair_line;
use gecsynth::gleu::{gleu_corpus, gleu_multiref, GleuMode, GleuReport, MultiRefEntry, DEFAULT_MAX_N};
use gecsynth::span::{extract_edits, from_m2, score_corpus_spans, SpanEntry};
use gecsynth::tokenizer::Tokenizer;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::{output, Globals};

/// The `--hypothesis` value that scores the uncorrected source.
const IDENTITY: &str = "identity";

#[derive(Subcommand)]
pub enum ScoreCommand {
    /// GLEU of a hypothesis against one or more references.
    Gleu(GleuArgs),
    /// Span-based precision, recall and F0.5 against gold edits.
    Span(SpanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Corpus,
    SentenceMean,
}

#[derive(clap::Args)]
pub struct GleuArgs {
    /// Parallel file supplying source (first column) and reference.
    #[arg(long, conflicts_with_all = ["source", "reference"])]
    pairs: Option<PathBuf>,
    /// Source sentences, one per line.
    #[arg(long, requires = "reference")]
    source: Option<PathBuf>,
    /// Reference sentences; repeat for several references.
    #[arg(long)]
    reference: Vec<PathBuf>,
    /// Corrected sentences, or `identity` to score the source itself.
    #[arg(long)]
    hypothesis: String,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "corpus")]
    mode: Mode,
    /// Reference draws averaged when sentences have several references.
    #[arg(long, default_value_t = 500)]
    iterations: usize,
}

#[derive(clap::Args)]
pub struct SpanArgs {
    /// Parallel file; gold edits are extracted from source to target.
    #[arg(long, conflicts_with = "m2", required_unless_present = "m2")]
    pairs: Option<PathBuf>,
    /// Gold M2 file.
    #[arg(long)]
    m2: Option<PathBuf>,
    /// Corrected sentences, or `identity` to score the source itself.
    #[arg(long)]
    hypothesis: String,
}

#[derive(Serialize)]
struct GleuOutput {
    metric: &'static str,
    /// Rounded to one decimal.
    gleu: f64,
    score: f64,
    sentences: usize,
    references: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<GleuReport>,
}

pub fn run(g: &Globals, cmd: ScoreCommand) -> Result<()> {
    let tokenizer = g.tokenizer()?;
    match cmd {
        ScoreCommand::Gleu(args) => gleu(g, &tokenizer, args),
        ScoreCommand::Span(args) => span(g, &tokenizer, args),
    }
}

fn tokenize_all(tokenizer: &Tokenizer, lines: &[String]) -> Vec<Vec<String>> {
    lines.iter().map(|l| tokenizer.tokenize(l).owned_surfaces()).collect()
}

fn read_pairs(path: &Path) -> Result<(Vec<String>, Vec<String>)> {
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for (i, line) in output::read_lines(path)?.iter().enumerate() {
        let p = parse_pair_line(line, i + 1).map_err(|e| CliError::corpus(path, e))?;
        sources.push(p.source);
        targets.push(p.target);
    }
    Ok((sources, targets))
}

fn check_len(what: &Path, found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(CliError::Mismatch(format!(
            "{} has {found} lines, expected {expected}",
            what.display()
        )));
    }
    Ok(())
}

fn read_hypothesis(arg: &str, sources: &[String]) -> Result<Vec<String>> {
    if arg == IDENTITY {
        return Ok(sources.to_vec());
    }
    let path = Path::new(arg);
    let lines = output::read_lines(path)?;
    check_len(path, lines.len(), sources.len())?;
    Ok(lines)
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

fn gleu(g: &Globals, tokenizer: &Tokenizer, args: GleuArgs) -> Result<()> {
    let mut m = g.manifest("score gleu");
    let (sources, references) = match (&args.pairs, &args.source) {
        (Some(p), _) => {
            m.input(p);
            let (s, t) = read_pairs(p)?;
            (s, vec![t])
        }
        (None, Some(src)) => {
            m.input(src);
            let s = output::read_lines(src)?;
            let mut refs = Vec::new();
            for r in &args.reference {
                m.input(r);
                let lines = output::read_lines(r)?;
                check_len(r, lines.len(), s.len())?;
                refs.push(lines);
            }
            (s, refs)
        }
        (None, None) => return Err(CliError::Usage("give --pairs or --source with --reference".into())),
    };
    let hypotheses = read_hypothesis(&args.hypothesis, &sources)?;
    if args.hypothesis != IDENTITY {
        m.input(Path::new(&args.hypothesis));
    }
    let mode = match args.mode {
        Mode::Corpus => GleuMode::Corpus,
        Mode::SentenceMean => GleuMode::SentenceMean,
    };
    let src = tokenize_all(tokenizer, &sources);
    let refs: Vec<Vec<Vec<String>>> = references.iter().map(|r| tokenize_all(tokenizer, r)).collect();
    let hyp = tokenize_all(tokenizer, &hypotheses);
    let err_path = args.pairs.clone().or(args.source.clone()).unwrap_or_default();
    let out = if refs.len() == 1 {
        let triples = (0..src.len()).map(|i| (src[i].as_slice(), refs[0][i].as_slice(), hyp[i].as_slice()));
        let report = gleu_corpus(triples, args.max_n, mode).map_err(|e| CliError::gleu(&err_path, e))?;
        GleuOutput {
            metric: "gleu",
            gleu: round1(report.score),
            score: report.score,
            sentences: src.len(),
            references: 1,
            report: Some(report),
        }
    } else {
        let entries: Vec<MultiRefEntry<String>> = (0..src.len())
            .map(|i| MultiRefEntry {
                source: src[i].clone(),
                references: refs.iter().map(|r| r[i].clone()).collect(),
                hypothesis: hyp[i].clone(),
            })
            .collect();
        let score = gleu_multiref(&entries, args.iterations, g.config.seed, args.max_n, mode)
            .map_err(|e| CliError::gleu(&err_path, e))?;
        GleuOutput {
            metric: "gleu",
            gleu: round1(score),
            score,
            sentences: src.len(),
            references: refs.len(),
            report: None,
        }
    };
    for _ in 0..src.len() {
        m.keep();
    }
    g.save_manifest(&m.finish()?)?;
    output::emit(&out, g.pretty)
}

fn span(g: &Globals, tokenizer: &Tokenizer, args: SpanArgs) -> Result<()> {
    let mut m = g.manifest("score span");
    let (gold_path, sources, golds) = if let Some(p) = &args.pairs {
        let (s, t) = read_pairs(p)?;
        let src = tokenize_all(tokenizer, &s);
        let tgt = tokenize_all(tokenizer, &t);
        let golds: Vec<_> = src.iter().zip(&tgt).map(|(a, b)| extract_edits(a, b)).collect();
        (p.clone(), src, golds)
    } else {
        let p = args.m2.clone().expect("clap requires --pairs or --m2");
        let text = std::fs::read_to_string(&p).map_err(|e| CliError::io(&p, e))?;
        let entries = from_m2(&text).map_err(|e| CliError::span(&p, e))?;
        let (src, golds) = entries.into_iter().map(|e| (e.source, e.edits)).unzip();
        (p, src, golds)
    };
    m.input(&gold_path);
    let hypotheses: Vec<Vec<String>> = if args.hypothesis == IDENTITY {
        sources.clone()
    } else {
        let path = Path::new(&args.hypothesis);
        m.input(path);
        let lines = output::read_lines(path)?;
        check_len(path, lines.len(), sources.len())?;
        tokenize_all(tokenizer, &lines)
    };
    let entries: Vec<SpanEntry> = sources
        .into_iter()
        .zip(golds)
        .zip(hypotheses)
        .map(|((source, gold), hypothesis)| SpanEntry {
            source,
            gold,
            hypothesis,
        })
        .collect();
    let score = score_corpus_spans(&entries).map_err(|e| CliError::span(&gold_path, e))?;
    for _ in &entries {
        m.keep();
    }
    g.save_manifest(&m.finish()?)?;
    output::emit(&score, g.pretty)
}
