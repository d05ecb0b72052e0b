//! `source<TAB>target` parallel files with an optional JSON-lines sidecar
//! holding each pair's edit log.
//!
//! Inside a field a literal tab is written `\t`, a newline `\n` and a
//! backslash `\\`; no other escapes exist.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::noise::{EditLog, NoiseOp};

/// A synthetic training pair: noised `source`, clean `target` and the log of
/// every corruption applied to get from one to the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub id: String,
    pub source: String,
    pub target: String,
    pub edits: EditLog,
    pub applied_ops: Vec<NoiseOp>,
}

impl ParallelPair {
    pub fn identity(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        ParallelPair {
            id: id.into(),
            source: text.clone(),
            target: text,
            edits: EditLog::default(),
            applied_ops: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

/// One line of a parallel file without its edit log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextPair {
    pub source: String,
    pub target: String,
}

/// Sidecar record; `id` ties it to the pair on the same line number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidecarEntry {
    pub id: String,
    pub applied_ops: Vec<NoiseOp>,
    pub edits: EditLog,
}

pub fn escape_field(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(text: &str) -> Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some(other) => return Err(format!("unknown escape \\{other}")),
            None => return Err("dangling backslash".to_owned()),
        }
    }
    Ok(out)
}

pub fn format_pair_line(source: &str, target: &str) -> String {
    format!("{}\t{}", escape_field(source), escape_field(target))
}

pub fn parse_pair_line(line: &str, line_no: usize) -> Result<TextPair, CorpusError> {
    let (src, tgt) = line
        .split_once('\t')
        .ok_or_else(|| CorpusError::format(line_no, "missing tab separator"))?;
    if tgt.contains('\t') {
        return Err(CorpusError::format(line_no, "more than one tab separator"));
    }
    let unescape = |f: &str| unescape_field(f).map_err(|m| CorpusError::format(line_no, m));
    Ok(TextPair {
        source: unescape(src)?,
        target: unescape(tgt)?,
    })
}

pub struct ParallelWriter<W: Write> {
    pairs: BufWriter<W>,
    sidecar: Option<BufWriter<W>>,
    written: usize,
}

impl<W: Write> ParallelWriter<W> {
    pub fn new(pairs: W, sidecar: Option<W>) -> Self {
        ParallelWriter {
            pairs: BufWriter::new(pairs),
            sidecar: sidecar.map(BufWriter::new),
            written: 0,
        }
    }

    pub fn write(&mut self, pair: &ParallelPair) -> Result<(), CorpusError> {
        writeln!(self.pairs, "{}", format_pair_line(&pair.source, &pair.target))?;
        if let Some(side) = &mut self.sidecar {
            let entry = SidecarEntry {
                id: pair.id.clone(),
                applied_ops: pair.applied_ops.clone(),
                edits: pair.edits.clone(),
            };
            serde_json::to_writer(&mut *side, &entry)?;
            side.write_all(b"\n")?;
        }
        self.written += 1;
        Ok(())
    }

    /// Flushes both outputs and returns the number of pairs written.
    pub fn finish(mut self) -> Result<usize, CorpusError> {
        self.pairs.flush()?;
        if let Some(side) = &mut self.sidecar {
            side.flush()?;
        }
        Ok(self.written)
    }
}

/// Writes `pairs` to `path`, plus the edit-log sidecar when `sidecar` is given.
pub fn write_parallel<'a>(
    pairs: impl IntoIterator<Item = &'a ParallelPair>,
    path: impl AsRef<Path>,
    sidecar: Option<&Path>,
) -> Result<usize, CorpusError> {
    let path = path.as_ref();
    let main = File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let side = sidecar
        .map(|p| File::create(p).map_err(|e| CorpusError::io(p, e)))
        .transpose()?;
    let mut writer = ParallelWriter::new(main, side);
    for pair in pairs {
        writer.write(pair)?;
    }
    writer.finish()
}

pub struct ParallelReader<R> {
    lines: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> ParallelReader<R> {
    pub fn new(reader: R) -> Self {
        ParallelReader {
            lines: reader.lines(),
            line: 0,
        }
    }
}

impl<R: BufRead> Iterator for ParallelReader<R> {
    type Item = Result<TextPair, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        let line = self.lines.next()?;
        self.line += 1;
        Some(
            line.map_err(CorpusError::from)
                .and_then(|l| parse_pair_line(&l, self.line)),
        )
    }
}

pub fn read_parallel(
    path: impl AsRef<Path>,
) -> Result<ParallelReader<BufReader<File>>, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    Ok(ParallelReader::new(BufReader::new(file)))
}

pub fn read_sidecar(path: impl AsRef<Path>) -> Result<Vec<SidecarEntry>, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let entry = serde_json::from_str(&line)
            .map_err(|e| CorpusError::format(i + 1, format!("sidecar: {e}")))?;
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn pair(src: &str, tgt: &str) -> ParallelPair {
        ParallelPair {
            id: "1".into(),
            source: src.into(),
            target: tgt.into(),
            edits: EditLog::default(),
            applied_ops: vec![],
        }
    }

    fn write_to_string(pairs: &[ParallelPair]) -> String {
        let mut buf = Vec::new();
        let mut w = ParallelWriter::new(&mut buf, None);
        for p in pairs {
            w.write(p).unwrap();
        }
        assert_eq!(w.finish().unwrap(), pairs.len());
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn one_pair_one_line() {
        assert_eq!(write_to_string(&[pair("a b", "a")]), "a b\ta\n");
    }

    #[test]
    fn empty_stream_writes_nothing() {
        assert_eq!(write_to_string(&[]), "");
    }

    #[test]
    fn tabs_are_escaped_and_round_trip() {
        let text = write_to_string(&[pair("a\tb", "c\\d\ne")]);
        assert_eq!(text, "a\\tb\tc\\\\d\\ne\n");
        let back: Vec<_> = ParallelReader::new(Cursor::new(text))
            .map(Result::unwrap)
            .collect();
        assert_eq!(back[0].source, "a\tb");
        assert_eq!(back[0].target, "c\\d\ne");
    }

    #[test]
    fn malformed_lines_are_errors() {
        assert!(parse_pair_line("no separator", 1).is_err());
        assert!(parse_pair_line("a\tb\tc", 1).is_err());
        assert!(parse_pair_line("a\\x\tb", 1).is_err());
    }

    proptest! {
        #[test]
        fn escape_round_trips(s in "[a-z\\\\\t\nt ]{0,20}") {
            let esc = escape_field(&s);
            prop_assert!(!esc.contains('\t') && !esc.contains('\n'));
            prop_assert_eq!(unescape_field(&esc).unwrap(), s);
        }
    }
}
