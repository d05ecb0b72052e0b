//! Optimal-string-alignment distance over tokens with a case-only
//! substitution discount, and conversion of the alignment into edit spans.

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::{validate_edits, EditSpan, SpanError};

/// Alignment costs in half units, so the default case-only substitution
/// costs 0.5 of a full edit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlignCosts {
    pub substitution: u32,
    /// Substitution between tokens that differ only in letter case.
    pub case_substitution: u32,
    pub insertion: u32,
    pub deletion: u32,
    pub transposition: u32,
}

impl Default for AlignCosts {
    fn default() -> Self {
        AlignCosts {
            substitution: 2,
            case_substitution: 1,
            insertion: 2,
            deletion: 2,
            transposition: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignOp {
    Match,
    Substitute,
    Insert,
    Delete,
    Transpose,
}

/// One alignment step covering `source[src.0..src.1]` and
/// `target[tgt.0..tgt.1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignStep {
    pub op: AlignOp,
    pub src: (usize, usize),
    pub tgt: (usize, usize),
}

fn nfc(tokens: &[impl AsRef<str>]) -> Vec<String> {
    tokens.iter().map(|t| t.as_ref().nfc().collect()).collect()
}

fn substitution_cost(a: &str, b: &str, costs: &AlignCosts) -> u32 {
    if a == b {
        0
    } else if a.to_lowercase() == b.to_lowercase() {
        costs.case_substitution
    } else {
        costs.substitution
    }
}

pub fn align<S: AsRef<str>>(source: &[S], target: &[S]) -> Vec<AlignStep> {
    align_with(source, target, &AlignCosts::default())
}

/// Minimum-cost alignment. Among equal-cost alignments the backtrace from
/// the end takes non-match steps first, which places edits as late in the
/// sentence as possible.
pub fn align_with<S: AsRef<str>>(source: &[S], target: &[S], costs: &AlignCosts) -> Vec<AlignStep> {
    let a = nfc(source);
    let b = nfc(target);
    let (n, m) = (a.len(), b.len());
    let width = m + 1;
    let mut d = vec![0u32; (n + 1) * width];
    let at = |i: usize, j: usize| i * width + j;
    for i in 1..=n {
        d[at(i, 0)] = d[at(i - 1, 0)] + costs.deletion;
    }
    for j in 1..=m {
        d[at(0, j)] = d[at(0, j - 1)] + costs.insertion;
    }
    let transposable = |i: usize, j: usize| {
        i >= 2 && j >= 2 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] && a[i - 1] != a[i - 2]
    };
    for i in 1..=n {
        for j in 1..=m {
            let mut best = d[at(i - 1, j - 1)] + substitution_cost(&a[i - 1], &b[j - 1], costs);
            best = best.min(d[at(i - 1, j)] + costs.deletion);
            best = best.min(d[at(i, j - 1)] + costs.insertion);
            if transposable(i, j) {
                best = best.min(d[at(i - 2, j - 2)] + costs.transposition);
            }
            d[at(i, j)] = best;
        }
    }

    let mut steps = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[at(i, j)];
        let sub = (i > 0 && j > 0).then(|| substitution_cost(&a[i - 1], &b[j - 1], costs));
        let step = if sub.is_some_and(|c| c > 0 && d[at(i - 1, j - 1)] + c == here) {
            AlignStep { op: AlignOp::Substitute, src: (i - 1, i), tgt: (j - 1, j) }
        } else if transposable(i, j) && d[at(i - 2, j - 2)] + costs.transposition == here {
            AlignStep { op: AlignOp::Transpose, src: (i - 2, i), tgt: (j - 2, j) }
        } else if i > 0 && d[at(i - 1, j)] + costs.deletion == here {
            AlignStep { op: AlignOp::Delete, src: (i - 1, i), tgt: (j, j) }
        } else if j > 0 && d[at(i, j - 1)] + costs.insertion == here {
            AlignStep { op: AlignOp::Insert, src: (i, i), tgt: (j - 1, j) }
        } else {
            debug_assert_eq!(sub, Some(0));
            AlignStep { op: AlignOp::Match, src: (i - 1, i), tgt: (j - 1, j) }
        };
        i = step.src.0;
        j = step.tgt.0;
        steps.push(step);
    }
    steps.reverse();
    steps
}

/// Total cost of an alignment, in half units.
pub fn alignment_cost<S: AsRef<str>>(source: &[S], target: &[S], steps: &[AlignStep], costs: &AlignCosts) -> u32 {
    let a = nfc(source);
    let b = nfc(target);
    steps
        .iter()
        .map(|s| match s.op {
            AlignOp::Match => 0,
            AlignOp::Substitute => substitution_cost(&a[s.src.0], &b[s.tgt.0], costs),
            AlignOp::Insert => costs.insertion,
            AlignOp::Delete => costs.deletion,
            AlignOp::Transpose => costs.transposition,
        })
        .sum()
}

pub fn extract_edits<S: AsRef<str>>(source: &[S], corrected: &[S]) -> Vec<EditSpan> {
    extract_edits_with(source, corrected, &AlignCosts::default())
}

/// Edits turning `source` into `corrected`: runs of adjacent non-match
/// alignment steps merged into single spans.
pub fn extract_edits_with<S: AsRef<str>>(source: &[S], corrected: &[S], costs: &AlignCosts) -> Vec<EditSpan> {
    let mut edits: Vec<EditSpan> = Vec::new();
    let mut open: Option<(usize, usize, usize, usize)> = None;
    let mut close = |open: &mut Option<(usize, usize, usize, usize)>| {
        if let Some((s0, s1, t0, t1)) = open.take() {
            edits.push(EditSpan::new(s0, s1, corrected[t0..t1].iter().map(|t| t.as_ref().to_owned())));
        }
    };
    for step in align_with(source, corrected, costs) {
        if step.op == AlignOp::Match {
            close(&mut open);
            continue;
        }
        open = Some(match open {
            Some((s0, _, t0, _)) => (s0, step.src.1, t0, step.tgt.1),
            None => (step.src.0, step.src.1, step.tgt.0, step.tgt.1),
        });
    }
    close(&mut open);
    edits
}

/// Applies sorted, non-overlapping edits to `source`.
pub fn apply_edits<S: AsRef<str>>(source: &[S], edits: &[EditSpan]) -> Result<Vec<String>, SpanError> {
    validate_edits(edits, source.len())?;
    let mut out = Vec::with_capacity(source.len());
    let mut pos = 0;
    for e in edits {
        out.extend(source[pos..e.start].iter().map(|t| t.as_ref().to_owned()));
        out.extend(e.replacement.iter().cloned());
        pos = e.end;
    }
    out.extend(source[pos..].iter().map(|t| t.as_ref().to_owned()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Minimum cost over every alignment, found by exhaustive recursion.
    fn brute_min(a: &[&str], b: &[&str], costs: &AlignCosts) -> u32 {
        if a.is_empty() {
            return b.len() as u32 * costs.insertion;
        }
        if b.is_empty() {
            return a.len() as u32 * costs.deletion;
        }
        let sub = if a[0] == b[0] {
            0
        } else if a[0].to_lowercase() == b[0].to_lowercase() {
            costs.case_substitution
        } else {
            costs.substitution
        };
        let mut best = sub + brute_min(&a[1..], &b[1..], costs);
        best = best.min(costs.deletion + brute_min(&a[1..], b, costs));
        best = best.min(costs.insertion + brute_min(a, &b[1..], costs));
        if a.len() >= 2 && b.len() >= 2 && a[0] == b[1] && a[1] == b[0] && a[0] != a[1] {
            best = best.min(costs.transposition + brute_min(&a[2..], &b[2..], costs));
        }
        best
    }

    #[test]
    fn documented_examples() {
        assert!(extract_edits(&["a", "b"], &["a", "b"]).is_empty());
        assert_eq!(extract_edits(&["a", "b", "c"], &["a", "x", "c"]), vec![EditSpan::new(1, 2, ["x"])]);
        assert_eq!(extract_edits(&["a", "b"], &["b", "a"]), vec![EditSpan::new(0, 2, ["b", "a"])]);
    }

    #[test]
    fn ties_resolve_to_latest_position() {
        assert_eq!(extract_edits(&["x", "x"], &["x"]), vec![EditSpan::new(1, 2, Vec::<String>::new())]);
        assert_eq!(extract_edits(&["x"], &["x", "x"]), vec![EditSpan::new(1, 1, ["x"])]);
    }

    #[test]
    fn case_only_substitution_is_cheaper() {
        let steps = align(&["Hús"], &["hús"]);
        assert_eq!(alignment_cost(&["Hús"], &["hús"], &steps, &AlignCosts::default()), 1);
        // NFC and NFD spellings of the same word match
        let nfd = "hu\u{301}s";
        assert!(extract_edits(&["hús"], &[nfd]).is_empty());
    }

    #[test]
    fn adjacent_non_matches_merge() {
        let e = extract_edits(&["a", "b", "c", "d"], &["a", "x", "y", "z", "d"]);
        assert_eq!(e, vec![EditSpan::new(1, 3, ["x", "y", "z"])]);
    }

    #[test]
    fn apply_rejects_bad_edits() {
        let src = ["a", "b", "c"];
        assert!(matches!(apply_edits(&src, &[EditSpan::new(2, 4, ["x"])]), Err(SpanError::OutOfRange { .. })));
        let overlapping = [EditSpan::new(0, 2, ["x"]), EditSpan::new(1, 2, ["y"])];
        assert!(matches!(apply_edits(&src, &overlapping), Err(SpanError::Overlap { index: 1 })));
        let unsorted = [EditSpan::new(2, 3, ["x"]), EditSpan::new(0, 1, ["y"])];
        assert!(apply_edits(&src, &unsorted).is_err());
        let touching = [EditSpan::new(1, 1, ["x"]), EditSpan::new(1, 2, ["y"])];
        assert_eq!(apply_edits(&src, &touching).unwrap(), ["a", "x", "y", "c"]);
    }

    fn seq(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
        prop::collection::vec(prop::sample::select(vec!["a", "b", "A", "c", "d"]), 0..=max)
    }

    proptest! {
        #[test]
        fn edits_reconstruct_target(a in seq(12), b in seq(12)) {
            let edits = extract_edits(&a, &b);
            prop_assert_eq!(apply_edits(&a, &edits).unwrap(), b.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            prop_assert!(validate_edits(&edits, a.len()).is_ok());
        }

        #[test]
        fn alignment_is_minimal(a in seq(6), b in seq(6)) {
            let costs = AlignCosts::default();
            let steps = align_with(&a, &b, &costs);
            prop_assert_eq!(alignment_cost(&a, &b, &steps, &costs), brute_min(&a, &b, &costs));
        }
    }
}
