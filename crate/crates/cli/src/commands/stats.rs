use std::collections::BTreeMap;
use std::path::PathBuf;

use gecsynth::corpus::parallel::{parse_pair_line, read_sidecar};
use gecsynth::span::extract_edits;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::{output, sidecar_path, Globals};

#[derive(clap::Args)]
pub struct Args {
    /// Parallel file.
    #[arg(long, short)]
    input: PathBuf,
    /// Edit-log sidecar; `<input stem>.edits.jsonl` is used when present.
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Debug, Default, Serialize)]
struct LengthRatio {
    mean: f64,
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct Stats {
    pairs: usize,
    identity_pairs: usize,
    mean_edit_count: f64,
    /// `edit_log` when counted from the sidecar, `spans` when re-extracted
    /// from the text.
    edit_count_source: &'static str,
    /// Pairs each op contributed to; empty without a sidecar.
    per_op: BTreeMap<String, u64>,
    per_op_edits: BTreeMap<String, u64>,
    /// Source chars over target chars.
    length_ratio: LengthRatio,
}

pub fn run(g: &Globals, args: Args) -> Result<()> {
    let mut m = g.manifest("stats");
    m.input(&args.input);
    let mut pairs = Vec::new();
    for (i, line) in output::read_lines(&args.input)?.iter().enumerate() {
        pairs.push(parse_pair_line(line, i + 1).map_err(|e| CliError::corpus(&args.input, e))?);
    }
    let sidecar = args
        .sidecar
        .clone()
        .or_else(|| Some(sidecar_path(&args.input)).filter(|p| p.is_file()));
    let mut per_op = BTreeMap::new();
    let mut per_op_edits = BTreeMap::new();
    let (edit_total, source) = match &sidecar {
        Some(p) => {
            m.input(p);
            let entries = read_sidecar(p).map_err(|e| CliError::corpus(p, e))?;
            if entries.len() != pairs.len() {
                return Err(CliError::Mismatch(format!(
                    "{} has {} pairs but sidecar {} has {} entries",
                    args.input.display(),
                    pairs.len(),
                    p.display(),
                    entries.len()
                )));
            }
            let mut total = 0;
            for e in &entries {
                for op in &e.applied_ops {
                    *per_op.entry(op.to_string()).or_default() += 1;
                }
                for r in e.edits.records() {
                    *per_op_edits.entry(r.op.to_string()).or_default() += 1;
                }
                total += e.edits.len();
            }
            (total, "edit_log")
        }
        None => {
            let tokenizer = g.tokenizer()?;
            let total = pairs
                .iter()
                .map(|p| {
                    let s = tokenizer.tokenize(&p.source).owned_surfaces();
                    let t = tokenizer.tokenize(&p.target).owned_surfaces();
                    extract_edits(&s, &t).len()
                })
                .sum();
            (total, "spans")
        }
    };
    let ratios: Vec<f64> = pairs
        .iter()
        .map(|p| p.source.chars().count() as f64 / p.target.chars().count().max(1) as f64)
        .collect();
    let n = pairs.len();
    let length_ratio = if n == 0 {
        LengthRatio::default()
    } else {
        LengthRatio {
            mean: ratios.iter().sum::<f64>() / n as f64,
            min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
            max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    };
    let stats = Stats {
        pairs: n,
        identity_pairs: pairs.iter().filter(|p| p.source == p.target).count(),
        mean_edit_count: if n == 0 { 0.0 } else { edit_total as f64 / n as f64 },
        edit_count_source: source,
        per_op,
        per_op_edits,
        length_ratio,
    };
    for _ in 0..n {
        m.keep();
    }
    g.save_manifest(&m.finish()?)?;
    output::emit(&stats, g.pretty)
}
