use std::fs::File;
use std::path::{Path, PathBuf};

use gecsynth::corpus::{read_tagged_corpus, ParallelWriter, TaggedSentence};
use gecsynth::noise::{compose_corpus, NoiseContext, NoiseOp};

use crate::error::{CliError, Result};
use crate::manifest::{ManifestBuilder, OpCounts};
use crate::{sidecar_path, Globals};

#[derive(clap::Args)]
pub struct Args {
    /// Tagged corpus.
    #[arg(long, short)]
    input: PathBuf,
    /// Parallel output, `source<TAB>target` per line.
    #[arg(long, short)]
    output: PathBuf,
    /// Edit-log sidecar; defaults to `<output stem>.edits.jsonl`.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    /// Sentences per shard handed to the workers.
    #[arg(long, default_value_t = 10_000)]
    shard_size: usize,
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map_err(|e| CliError::io(path, e))
}

pub fn run(g: &Globals, args: Args) -> Result<()> {
    if args.shard_size == 0 {
        return Err(CliError::Usage("--shard-size must be at least 1".into()));
    }
    let lexicons = g.lexicons()?;
    let ctx = NoiseContext::new(&g.config, &lexicons);
    let sidecar = args.sidecar.clone().unwrap_or_else(|| sidecar_path(&args.output));
    let mut m = g.manifest("noise");
    m.input(&args.input);
    m.output(&args.output);
    m.output(&sidecar);
    for op in NoiseOp::ALL {
        m.counts().ops.insert(
            op.to_string(),
            OpCounts {
                enabled: g.config.op(op).enabled,
                ..OpCounts::default()
            },
        );
    }

    let reader = read_tagged_corpus(&args.input).map_err(|e| CliError::corpus(&args.input, e))?;
    let mut writer = ParallelWriter::new(create(&args.output)?, Some(create(&sidecar)?));
    let mut shard: Vec<TaggedSentence> = Vec::with_capacity(args.shard_size);
    for sentence in reader {
        shard.push(sentence.map_err(|e| CliError::corpus(&args.input, e))?);
        if shard.len() == args.shard_size {
            run_shard(&shard, &ctx, g.workers, &mut writer, &mut m, &args.output)?;
            shard.clear();
        }
    }
    run_shard(&shard, &ctx, g.workers, &mut writer, &mut m, &args.output)?;
    let written = writer.finish().map_err(|e| CliError::corpus(&args.output, e))?;
    m.counts().pairs_emitted = written as u64;
    m.counts().parts.insert("pairs".into(), written as u64);
    g.report_manifest(&m.finish()?)
}

/// Composes one shard in parallel and appends it in input order.
fn run_shard(
    shard: &[TaggedSentence],
    ctx: &NoiseContext,
    workers: usize,
    writer: &mut ParallelWriter<File>,
    m: &mut ManifestBuilder,
    out: &Path,
) -> Result<()> {
    for composed in compose_corpus(shard, ctx, workers)? {
        m.keep();
        for t in &composed.trace {
            let c = m.counts().ops.get_mut(t.op.as_str()).expect("every op has a counter");
            c.fired += u64::from(t.fired);
            c.applicable += u64::from(t.applicable);
            c.applied += u64::from(t.applied);
            c.edits += t.edits as u64;
        }
        writer.write(&composed.pair).map_err(|e| CliError::corpus(out, e))?;
    }
    Ok(())
}
