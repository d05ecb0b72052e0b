use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use unicode_normalization::UnicodeNormalization;

use super::{CorpusError, SentenceRecord};

/// What to do with a line that is not valid UTF-8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodePolicy {
    #[default]
    Strict,
    /// Skip the line and count it.
    Lenient,
}

/// Streams one sentence per line, NFC-normalized. Blank lines are skipped;
/// ids are 1-based line numbers.
pub struct PlainCorpusReader<R> {
    reader: R,
    policy: DecodePolicy,
    provenance: Option<String>,
    line: usize,
    skipped_invalid: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> PlainCorpusReader<R> {
    pub fn new(reader: R, policy: DecodePolicy) -> Self {
        PlainCorpusReader {
            reader,
            policy,
            provenance: None,
            line: 0,
            skipped_invalid: 0,
            buf: Vec::new(),
        }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    /// Number of lines dropped for invalid UTF-8 (lenient mode only).
    pub fn skipped_invalid(&self) -> usize {
        self.skipped_invalid
    }
}

pub fn read_plain_corpus(
    path: impl AsRef<Path>,
    policy: DecodePolicy,
) -> Result<PlainCorpusReader<BufReader<File>>, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let provenance = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(PlainCorpusReader::new(BufReader::new(file), policy).with_provenance(provenance))
}

impl<R: BufRead> Iterator for PlainCorpusReader<R> {
    type Item = Result<SentenceRecord, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            while matches!(self.buf.last(), Some(b'\n' | b'\r')) {
                self.buf.pop();
            }
            let text = match std::str::from_utf8(&self.buf) {
                Ok(t) => t,
                Err(_) if self.policy == DecodePolicy::Lenient => {
                    log::warn!("line {}: invalid UTF-8, skipped", self.line);
                    self.skipped_invalid += 1;
                    continue;
                }
                Err(_) => return Some(Err(CorpusError::InvalidUtf8 { line: self.line })),
            };
            let text: String = text.nfc().collect();
            if let Some(record) = SentenceRecord::new(self.line.to_string(), text) {
                let record = match &self.provenance {
                    Some(p) => record.with_provenance(p.clone()),
                    None => record,
                };
                return Some(Ok(record));
            }
        }
    }
}
