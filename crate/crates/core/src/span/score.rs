use serde::{Deserialize, Serialize};

use super::{extract_edits, validate_edits, EditSpan, SpanError};

/// True positive, false positive and false negative edit counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl SpanCounts {
    pub fn add(&mut self, other: SpanCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    /// Precision and recall are 1 when their denominator is 0, matching the
    /// ERRANT scorer.
    pub fn score(self) -> SpanScore {
        let precision = if self.tp + self.fp == 0 {
            1.0
        } else {
            self.tp as f64 / (self.tp + self.fp) as f64
        };
        let recall = if self.tp + self.fn_ == 0 {
            1.0
        } else {
            self.tp as f64 / (self.tp + self.fn_) as f64
        };
        let denom = 0.25 * precision + recall;
        let f05 = if precision == 0.0 && recall == 0.0 || denom == 0.0 {
            0.0
        } else {
            1.25 * precision * recall / denom
        };
        SpanScore {
            tp: self.tp,
            fp: self.fp,
            fn_: self.fn_,
            precision,
            recall,
            f05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanScore {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f05: f64,
}

fn count(gold: &[EditSpan], hyp: &[EditSpan]) -> SpanCounts {
    let tp = hyp.iter().filter(|h| gold.contains(h)).count() as u64;
    SpanCounts {
        tp,
        fp: hyp.len() as u64 - tp,
        fn_: gold.len() as u64 - tp,
    }
}

fn check_order(edits: &[EditSpan]) -> Result<(), SpanError> {
    validate_edits(edits, edits.iter().map(|e| e.end).max().unwrap_or(0))
}

/// Exact-match scoring of hypothesis edits against gold edits.
pub fn score_spans(gold: &[EditSpan], hyp: &[EditSpan]) -> Result<SpanScore, SpanError> {
    check_order(gold)?;
    check_order(hyp)?;
    Ok(count(gold, hyp).score())
}

/// One sentence to score: the source tokens, its gold edits and the system's
/// output tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanEntry {
    pub source: Vec<String>,
    pub gold: Vec<EditSpan>,
    pub hypothesis: Vec<String>,
}

/// Corpus score: hypothesis edits are extracted from each source/output
/// pair, counts are summed over the corpus, then P, R and F0.5 are computed.
pub fn score_corpus_spans<'a, I>(entries: I) -> Result<SpanScore, SpanError>
where
    I: IntoIterator<Item = &'a SpanEntry>,
{
    let mut total = SpanCounts::default();
    for e in entries {
        validate_edits(&e.gold, e.source.len())?;
        let hyp = extract_edits(&e.source, &e.hypothesis);
        total.add(count(&e.gold, &hyp));
    }
    Ok(total.score())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(start: usize, end: usize, repl: &[&str]) -> EditSpan {
        EditSpan::new(start, end, repl.iter().copied())
    }

    #[test]
    fn documented_examples() {
        let gold = vec![e(1, 2, &["x"])];
        let s = score_spans(&gold, &gold).unwrap();
        assert_eq!((s.precision, s.recall, s.f05), (1.0, 1.0, 1.0));

        let s = score_spans(&gold, &[]).unwrap();
        assert_eq!((s.tp, s.recall, s.f05), (0, 0.0, 0.0));

        let s = score_spans(&gold, &[e(1, 2, &["x"]), e(3, 3, &["y"])]).unwrap();
        assert_eq!((s.precision, s.recall), (0.5, 1.0));
        assert!((s.f05 - 1.25 * 0.5 / (0.125 + 1.0)).abs() < 1e-12);
        assert!((s.f05 - 0.5556).abs() < 1e-4);
    }

    #[test]
    fn overlapping_hypothesis_is_rejected() {
        assert!(score_spans(&[], &[e(0, 2, &["x"]), e(1, 3, &["y"])]).is_err());
    }

    #[test]
    fn corpus_sums_before_dividing() {
        let src = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
        let entries = vec![
            SpanEntry { source: src("a b c"), gold: vec![e(1, 2, &["x"])], hypothesis: src("a x c") },
            SpanEntry { source: src("a b c"), gold: vec![e(0, 1, &["y"])], hypothesis: src("a b z") },
            SpanEntry { source: src("a b"), gold: vec![], hypothesis: src("a b") },
        ];
        let s = score_corpus_spans(&entries).unwrap();
        assert_eq!((s.tp, s.fp, s.fn_), (1, 1, 1));
        assert_eq!(s.precision, 0.5);
        let identity: Vec<SpanEntry> = entries
            .iter()
            .map(|x| SpanEntry { hypothesis: x.source.clone(), ..x.clone() })
            .collect();
        assert_eq!(score_corpus_spans(&identity).unwrap().f05, 0.0);
    }

    #[test]
    fn f05_increases_with_precision() {
        for r in 1..=10 {
            let recall = r as f64 / 10.0;
            let mut last = -1.0;
            for p in 0..=10 {
                let precision = p as f64 / 10.0;
                let f = if precision == 0.0 { 0.0 } else { 1.25 * precision * recall / (0.25 * precision + recall) };
                assert!(f > last);
                last = f;
            }
        }
    }

    proptest! {
        #[test]
        fn scores_are_bounded(tp in 0u64..20, fp in 0u64..20, fn_ in 0u64..20) {
            let s = SpanCounts { tp, fp, fn_ }.score();
            for v in [s.precision, s.recall, s.f05] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert!(s.f05 <= s.precision.max(s.recall) + 1e-12);
            prop_assert_eq!(s.f05 == 1.0, fp == 0 && fn_ == 0 && tp > 0 || tp + fp + fn_ == 0);
        }
    }
}
