use std::io::Write;
use std::path::PathBuf;

use gecsynth::corpus::parallel::parse_pair_line;
use gecsynth::corpus::{SplitPlan, DEFAULT_N_TEST, DEFAULT_N_VALID};

use crate::error::{CliError, Result};
use crate::output;
use crate::Globals;

#[derive(clap::Args)]
pub struct Args {
    /// Parallel file to split.
    #[arg(long, short)]
    input: PathBuf,
    /// Directory for `train.tsv`, `valid.tsv` and `test.tsv`.
    #[arg(long)]
    out_dir: PathBuf,
    /// Edit-log sidecar to split alongside, line for line.
    #[arg(long)]
    sidecar: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_N_VALID)]
    n_valid: usize,
    #[arg(long, default_value_t = DEFAULT_N_TEST)]
    n_test: usize,
}

pub fn run(g: &Globals, args: Args) -> Result<()> {
    let lines = output::read_lines(&args.input)?;
    for (i, line) in lines.iter().enumerate() {
        parse_pair_line(line, i + 1).map_err(|e| CliError::corpus(&args.input, e))?;
    }
    let side_lines = match &args.sidecar {
        Some(p) => {
            let side: Vec<String> = output::read_lines(p)?.into_iter().filter(|l| !l.is_empty()).collect();
            if side.len() != lines.len() {
                return Err(CliError::Mismatch(format!(
                    "{} has {} pairs but sidecar {} has {} entries",
                    args.input.display(),
                    lines.len(),
                    p.display(),
                    side.len()
                )));
            }
            Some(side)
        }
        None => None,
    };

    let mut m = g.manifest("split");
    m.input(&args.input);
    if let Some(p) = &args.sidecar {
        m.input(p);
    }
    let plan = SplitPlan::new(lines.len(), args.n_valid, args.n_test, g.config.seed)
        .map_err(|e| CliError::corpus(&args.input, e))?;
    let (train, valid, test) = plan.apply((0..lines.len()).collect());
    for (name, indices) in [("train", train), ("valid", valid), ("test", test)] {
        let path = args.out_dir.join(format!("{name}.tsv"));
        write_part(&path, &lines, &indices)?;
        m.output(&path);
        if let Some(side) = &side_lines {
            let side_path = crate::sidecar_path(&path);
            write_part(&side_path, side, &indices)?;
            m.output(&side_path);
        }
        m.counts().parts.insert(name.into(), indices.len() as u64);
    }
    for _ in 0..lines.len() {
        m.keep();
    }
    m.counts().pairs_emitted = lines.len() as u64;
    g.report_manifest(&m.finish()?)
}

fn write_part(path: &std::path::Path, lines: &[String], indices: &[usize]) -> Result<()> {
    let mut w = output::create(path)?;
    for &i in indices {
        writeln!(w, "{}", lines[i]).map_err(|e| CliError::io(path, e))?;
    }
    output::finish(w, path)
}
