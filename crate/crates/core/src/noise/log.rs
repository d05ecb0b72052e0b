use serde::{Deserialize, Serialize};

use super::{NoiseError, NoiseOp};

/// One localized rewrite: at char `offset` of the text as it stood when the
/// edit was made, `before` was replaced by `after`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditRecord {
    pub op: NoiseOp,
    /// Index of the token the op targeted.
    pub token: usize,
    pub offset: usize,
    pub before: String,
    pub after: String,
}

impl EditRecord {
    /// Replaces `from` with `to` at `offset`, checking `from` is there.
    fn rewrite(text: &str, offset: usize, from: &str, to: &str, index: usize) -> Result<String, NoiseError> {
        let chars: Vec<char> = text.chars().collect();
        let from_chars: Vec<char> = from.chars().collect();
        let end = offset + from_chars.len();
        if end > chars.len() || chars[offset..end] != from_chars[..] {
            let found: String = chars
                .get(offset.min(chars.len())..end.min(chars.len()))
                .map(|s| s.iter().collect())
                .unwrap_or_default();
            return Err(NoiseError::Integrity {
                record: index,
                expected: from.to_owned(),
                found,
            });
        }
        let mut out: String = chars[..offset].iter().collect();
        out.push_str(to);
        out.extend(&chars[end..]);
        Ok(out)
    }
}

/// Ordered edit records. Replaying them left to right on the clean text gives
/// the noised text; undoing them right to left restores the clean text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EditLog(pub Vec<EditRecord>);

impl EditLog {
    pub fn records(&self) -> &[EditRecord] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, record: EditRecord) {
        self.0.push(record);
    }

    pub fn extend(&mut self, other: EditLog) {
        self.0.extend(other.0);
    }

    /// Distinct ops in first-appearance order.
    pub fn ops(&self) -> Vec<NoiseOp> {
        let mut ops = Vec::new();
        for r in &self.0 {
            if !ops.contains(&r.op) {
                ops.push(r.op);
            }
        }
        ops
    }

    pub fn replay(&self, clean: &str) -> Result<String, NoiseError> {
        let mut text = clean.to_owned();
        for (i, r) in self.0.iter().enumerate() {
            text = EditRecord::rewrite(&text, r.offset, &r.before, &r.after, i)?;
        }
        Ok(text)
    }

    pub fn undo(&self, noised: &str) -> Result<String, NoiseError> {
        let mut text = noised.to_owned();
        for (i, r) in self.0.iter().enumerate().rev() {
            text = EditRecord::rewrite(&text, r.offset, &r.after, &r.before, i)?;
        }
        Ok(text)
    }
}
