use std::fs::File;
use std::path::PathBuf;

use gecsynth::corpus::{read_tagged_corpus, ParallelWriter, TaggedSentence};
use gecsynth::noise::{generate_typed_testset, verify_isolation, NoiseContext, NoiseError, NoiseOp};
use gecsynth::span::{extract_edits, write_m2, M2Entry};

use crate::error::{CliError, Result};
use crate::manifest::OpCounts;
use crate::{sidecar_path, Globals};

#[derive(clap::Args)]
pub struct Args {
    /// Tagged corpus to draw sentences from.
    #[arg(long, short)]
    input: PathBuf,
    /// Directory receiving `<type>.tsv`, `<type>.edits.jsonl` and `<type>.m2`.
    #[arg(long)]
    out_dir: PathBuf,
    /// Pairs per test set.
    #[arg(long, short, default_value_t = 100)]
    n: usize,
    /// Comma-separated test-set names or op ids; the seven standard types
    /// when omitted.
    #[arg(long, value_delimiter = ',')]
    types: Vec<String>,
}

fn resolve_types(names: &[String]) -> Result<Vec<(String, NoiseOp)>> {
    if names.is_empty() {
        return Ok(NoiseOp::TEST_SETS.iter().map(|&(n, op)| (n.to_owned(), op)).collect());
    }
    names
        .iter()
        .map(|n| {
            NoiseOp::from_test_set_name(n)
                .map(|op| (op.test_set_name().to_owned(), op))
                .ok_or_else(|| CliError::Usage(format!("unknown test-set type {n:?}")))
        })
        .collect()
}

pub fn run(g: &Globals, args: Args) -> Result<()> {
    let types = resolve_types(&args.types)?;
    let lexicons = g.lexicons()?;
    let ctx = NoiseContext::new(&g.config, &lexicons);
    let corpus: Vec<TaggedSentence> = read_tagged_corpus(&args.input)
        .map_err(|e| CliError::corpus(&args.input, e))?
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::corpus(&args.input, e))?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;

    let mut m = g.manifest("make-testsets");
    m.input(&args.input);
    for _ in &corpus {
        m.keep();
    }
    let mut exhausted = Vec::new();
    for (name, op) in types {
        let pairs = match generate_typed_testset(&corpus, op, args.n, &ctx) {
            Ok(p) => p,
            Err(NoiseError::Exhausted { found, requested, .. }) => {
                exhausted.push(format!("{name} ({found} of {requested})"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut entries = Vec::with_capacity(pairs.len());
        for p in &pairs {
            verify_isolation(p, op, &ctx)?;
            let source = lexicons.tokenizer.tokenize(&p.source).owned_surfaces();
            let target = lexicons.tokenizer.tokenize(&p.target).owned_surfaces();
            let edits = extract_edits(&source, &target);
            entries.push(M2Entry { source, edits });
        }
        let tsv = args.out_dir.join(format!("{name}.tsv"));
        let side = sidecar_path(&tsv);
        let m2 = args.out_dir.join(format!("{name}.m2"));
        let open = |p: &PathBuf| File::create(p).map_err(|e| CliError::io(p, e));
        let mut writer = ParallelWriter::new(open(&tsv)?, Some(open(&side)?));
        for p in &pairs {
            writer.write(p).map_err(|e| CliError::corpus(&tsv, e))?;
        }
        writer.finish().map_err(|e| CliError::corpus(&tsv, e))?;
        let m2_text = write_m2(&entries).map_err(|e| CliError::span(&m2, e))?;
        std::fs::write(&m2, m2_text).map_err(|e| CliError::io(&m2, e))?;
        for path in [&tsv, &side, &m2] {
            m.output(path);
        }
        let counts = m.counts();
        counts.pairs_emitted += pairs.len() as u64;
        counts.parts.insert(name.clone(), pairs.len() as u64);
        let c = counts.ops.entry(op.to_string()).or_insert_with(|| OpCounts {
            enabled: true,
            ..OpCounts::default()
        });
        c.applied += pairs.len() as u64;
        c.edits += pairs.iter().map(|p| p.edits.len() as u64).sum::<u64>();
    }
    let manifest = m.finish()?;
    if !exhausted.is_empty() {
        g.save_manifest(&manifest)?;
        return Err(CliError::Exhausted(format!(
            "not enough applicable sentences for: {}",
            exhausted.join(", ")
        )));
    }
    g.report_manifest(&manifest)
}
