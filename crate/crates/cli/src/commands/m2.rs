use std::io::Write;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use gecsynth::corpus::parallel::{format_pair_line, parse_pair_line};
use gecsynth::span::{apply_edits, extract_edits, from_m2, write_m2, M2Entry};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::{output, Globals};

#[derive(Subcommand)]
pub enum M2Command {
    /// Convert between parallel files and M2.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Parallel file in, M2 out.
    M2,
    /// M2 in, parallel file of space-joined tokens out.
    Pairs,
}

#[derive(clap::Args)]
pub struct ConvertArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "m2")]
    to: Target,
}

#[derive(Serialize)]
struct ConvertReport {
    entries: usize,
    edits: usize,
}

pub fn run(g: &Globals, cmd: M2Command) -> Result<()> {
    let M2Command::Convert(args) = cmd;
    let mut m = g.manifest("m2 convert");
    m.input(&args.input);
    m.output(&args.output);
    let report = match args.to {
        Target::M2 => {
            let tokenizer = g.tokenizer()?;
            let mut entries = Vec::new();
            for (i, line) in output::read_lines(&args.input)?.iter().enumerate() {
                let p = parse_pair_line(line, i + 1).map_err(|e| CliError::corpus(&args.input, e))?;
                let source = tokenizer.tokenize(&p.source).owned_surfaces();
                let target = tokenizer.tokenize(&p.target).owned_surfaces();
                let edits = extract_edits(&source, &target);
                entries.push(M2Entry { source, edits });
            }
            let text = write_m2(&entries).map_err(|e| CliError::span(&args.input, e))?;
            std::fs::write(&args.output, text).map_err(|e| CliError::io(&args.output, e))?;
            ConvertReport {
                entries: entries.len(),
                edits: entries.iter().map(|e| e.edits.len()).sum(),
            }
        }
        Target::Pairs => {
            let text = std::fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
            let entries = from_m2(&text).map_err(|e| CliError::span(&args.input, e))?;
            let mut w = output::create(&args.output)?;
            for e in &entries {
                let target = apply_edits(&e.source, &e.edits).map_err(|err| CliError::span(&args.input, err))?;
                writeln!(w, "{}", format_pair_line(&e.source.join(" "), &target.join(" ")))
                    .map_err(|err| CliError::io(&args.output, err))?;
            }
            output::finish(w, &args.output)?;
            ConvertReport {
                entries: entries.len(),
                edits: entries.iter().map(|e| e.edits.len()).sum(),
            }
        }
    };
    for _ in 0..report.entries {
        m.keep();
    }
    m.counts().pairs_emitted = report.entries as u64;
    g.save_manifest(&m.finish()?)?;
    output::emit(&report, g.pretty)
}
