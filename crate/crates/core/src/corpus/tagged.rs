//! Token-per-line tagged corpus:
//!
//! ```text
//! # id = s1
//! # text = Ég hlakka til.
//! Ég	ég	fn	case=nom|num=sg
//! hlakka	hlakka	so	mood=ind|num=sg|person=1
//! til	til	fs	_
//! .	.	pi	_
//!
//! ```
//!
//! Columns are surface, lemma, PoS and features; `_` marks an empty lemma or
//! feature set and the feature column may be omitted. Sentences are separated
//! by blank lines. Optional `# id = ` and `# text = ` comments carry the
//! sentence id and original text; without an id, sentences are numbered
//! `s1, s2, …` in file order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use super::{CorpusError, Feats, TaggedSentence, TaggedToken};

pub struct TaggedCorpusReader<R> {
    lines: std::io::Lines<R>,
    line: usize,
    count: usize,
    done: bool,
}

impl<R: BufRead> TaggedCorpusReader<R> {
    pub fn new(reader: R) -> Self {
        TaggedCorpusReader {
            lines: reader.lines(),
            line: 0,
            count: 0,
            done: false,
        }
    }
}

pub fn read_tagged_corpus(
    path: impl AsRef<Path>,
) -> Result<TaggedCorpusReader<BufReader<File>>, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    Ok(TaggedCorpusReader::new(BufReader::new(file)))
}

fn parse_token(line: &str, line_no: usize) -> Result<TaggedToken, CorpusError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if !(3..=4).contains(&cols.len()) {
        return Err(CorpusError::format(
            line_no,
            format!("expected 4 tab-separated columns, found {}", cols.len()),
        ));
    }
    let surface: String = cols[0].nfc().collect();
    if surface.is_empty() {
        return Err(CorpusError::format(line_no, "empty surface form"));
    }
    let lemma = match cols[1] {
        "" | "_" => surface.clone(),
        l => l.nfc().collect(),
    };
    let feats: Feats = cols
        .get(3)
        .copied()
        .unwrap_or("_")
        .parse()
        .map_err(|m: String| CorpusError::format(line_no, m))?;
    Ok(TaggedToken {
        surface,
        lemma,
        pos: cols[2].to_owned(),
        feats,
    })
}

impl<R: BufRead> Iterator for TaggedCorpusReader<R> {
    type Item = Result<TaggedSentence, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut id = None;
        let mut raw = None;
        let mut tokens = Vec::new();
        let mut in_block = false;
        loop {
            let line = match self.lines.next() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
                Some(Ok(l)) => l,
            };
            self.line += 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                if in_block {
                    break;
                }
                continue;
            }
            in_block = true;
            if line.starts_with("# ") && !line.contains('\t') {
                if let Some(v) = line.strip_prefix("# id = ") {
                    id = Some(v.to_owned());
                } else if let Some(v) = line.strip_prefix("# text = ") {
                    raw = Some(v.nfc().collect::<String>());
                }
                continue;
            }
            match parse_token(line, self.line) {
                Ok(t) => tokens.push(t),
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        if !in_block {
            return None;
        }
        if tokens.is_empty() {
            self.done = true;
            return Some(Err(CorpusError::EmptySentence { line: self.line }));
        }
        self.count += 1;
        let id = id.unwrap_or_else(|| format!("s{}", self.count));
        let mut sentence = TaggedSentence::new(id, tokens).expect("tokens checked non-empty");
        sentence.raw_text = raw;
        Some(Ok(sentence))
    }
}

/// Writes sentences in the tagged format, always emitting an `# id` line.
pub fn write_tagged_corpus<'a, W: Write>(
    out: W,
    sentences: impl IntoIterator<Item = &'a TaggedSentence>,
) -> std::io::Result<usize> {
    let mut out = BufWriter::new(out);
    let mut n = 0;
    for s in sentences {
        writeln!(out, "# id = {}", s.id)?;
        if let Some(raw) = &s.raw_text {
            writeln!(out, "# text = {raw}")?;
        }
        for t in &s.tokens {
            let lemma = if t.lemma.is_empty() { "_" } else { &t.lemma };
            writeln!(out, "{}\t{}\t{}\t{}", t.surface, lemma, t.pos, t.feats)?;
        }
        writeln!(out)?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}
