//! M2 blocks: an `S` line with the space-joined source tokens, one `A` line
//! per edit and a blank line after each block. Edit types are written as
//! `UNK` and ignored on read.

use super::{validate_edits, EditSpan, SpanError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct M2Entry {
    pub source: Vec<String>,
    pub edits: Vec<EditSpan>,
}

fn check_token(t: &str) -> Result<(), SpanError> {
    if t.is_empty() || t.chars().any(char::is_whitespace) || t.contains("|||") {
        return Err(SpanError::BadToken(t.to_owned()));
    }
    Ok(())
}

/// One M2 block (without the separating blank line).
pub fn to_m2<S: AsRef<str>>(source: &[S], edits: &[EditSpan]) -> Result<String, SpanError> {
    validate_edits(edits, source.len())?;
    let mut out = String::from("S");
    for t in source {
        check_token(t.as_ref())?;
        out.push(' ');
        out.push_str(t.as_ref());
    }
    out.push('\n');
    for e in edits {
        for t in &e.replacement {
            check_token(t)?;
        }
        out.push_str(&format!(
            "A {} {}|||UNK|||{}|||REQUIRED|||-NONE-|||0\n",
            e.start,
            e.end,
            e.replacement.join(" ")
        ));
    }
    Ok(out)
}

/// A whole M2 file: blocks each followed by a blank line.
pub fn write_m2(entries: &[M2Entry]) -> Result<String, SpanError> {
    let mut out = String::new();
    for e in entries {
        out.push_str(&to_m2(&e.source, &e.edits)?);
        out.push('\n');
    }
    Ok(out)
}

fn parse_a_line(rest: &str, line: usize) -> Result<Option<EditSpan>, SpanError> {
    let err = |message: String| SpanError::M2Format { line, message };
    let fields: Vec<&str> = rest.split("|||").collect();
    if fields.len() != 6 {
        return Err(err(format!("expected 6 |||-separated fields, got {}", fields.len())));
    }
    let mut nums = fields[0].split(' ');
    let (Some(start), Some(end), None) = (nums.next(), nums.next(), nums.next()) else {
        return Err(err(format!("bad span {:?}", fields[0])));
    };
    if fields[1] == "noop" || (start == "-1" && end == "-1") {
        return Ok(None);
    }
    if fields[5] != "0" {
        return Ok(None);
    }
    let start: usize = start.parse().map_err(|_| err(format!("bad start {start:?}")))?;
    let end: usize = end.parse().map_err(|_| err(format!("bad end {end:?}")))?;
    let replacement = match fields[2] {
        "" | "-NONE-" => Vec::new(),
        r => r.split(' ').map(str::to_owned).collect(),
    };
    Ok(Some(EditSpan { start, end, replacement }))
}

/// Parses M2 text. `noop` lines and annotators other than 0 are skipped.
pub fn from_m2(text: &str) -> Result<Vec<M2Entry>, SpanError> {
    let mut entries = Vec::new();
    let mut current: Option<(M2Entry, usize)> = None;
    let finish = |current: &mut Option<(M2Entry, usize)>, entries: &mut Vec<M2Entry>| -> Result<(), SpanError> {
        if let Some((entry, line)) = current.take() {
            validate_edits(&entry.edits, entry.source.len())
                .map_err(|e| SpanError::M2Format { line, message: e.to_string() })?;
            entries.push(entry);
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.is_empty() {
            finish(&mut current, &mut entries)?;
        } else if let Some(rest) = raw.strip_prefix('S') {
            finish(&mut current, &mut entries)?;
            let source = match rest.strip_prefix(' ') {
                Some(toks) => toks.split(' ').map(str::to_owned).collect(),
                None if rest.is_empty() => Vec::new(),
                None => return Err(SpanError::M2Format { line, message: "S must be followed by a space".into() }),
            };
            current = Some((M2Entry { source, edits: Vec::new() }, line));
        } else if let Some(rest) = raw.strip_prefix("A ") {
            let Some((entry, _)) = current.as_mut() else {
                return Err(SpanError::M2Format { line, message: "A line before any S line".into() });
            };
            if let Some(edit) = parse_a_line(rest, line)? {
                entry.edits.push(edit);
            }
        } else {
            return Err(SpanError::M2Format { line, message: format!("unexpected line {raw:?}") });
        }
    }
    finish(&mut current, &mut entries)?;
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn format_examples() {
        assert_eq!(to_m2(&["a", "b"], &[]).unwrap(), "S a b\n");
        let block = to_m2(&["a", "b", "c"], &[EditSpan::new(1, 2, ["x"])]).unwrap();
        assert_eq!(block, "S a b c\nA 1 2|||UNK|||x|||REQUIRED|||-NONE-|||0\n");
        let del = to_m2(&["a", "b"], &[EditSpan::new(0, 1, Vec::<String>::new())]).unwrap();
        assert!(del.ends_with("A 0 1|||UNK||||||REQUIRED|||-NONE-|||0\n"));
    }

    #[test]
    fn reads_errant_output() {
        let text = "S Hann fór í gær\nA 1 2|||R:VERB|||fer|||REQUIRED|||-NONE-|||0\nA 3 3|||M:ADV|||aftur|||REQUIRED|||-NONE-|||1\n\nS Gott\nA -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0\n";
        let entries = from_m2(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].edits, vec![EditSpan::new(1, 2, ["fer"])]);
        assert!(entries[1].edits.is_empty());
    }

    #[test]
    fn malformed_input() {
        assert!(from_m2("A 1 2|||UNK|||x|||REQUIRED|||-NONE-|||0\n").is_err());
        assert!(from_m2("S a\nA 1|||UNK|||x|||REQUIRED|||-NONE-|||0\n").is_err());
        assert!(from_m2("S a\nA 0 5|||UNK|||x|||REQUIRED|||-NONE-|||0\n").is_err());
        assert!(from_m2("S a\nA 0 1|||UNK|||x\n").is_err());
        assert!(from_m2("hello\n").is_err());
        assert!(to_m2(&["a b"], &[]).is_err());
    }

    fn entry() -> impl Strategy<Value = M2Entry> {
        let tok = prop::sample::select(vec!["a", "b", "hús", "Á", ",", "."]);
        prop::collection::vec(tok.clone(), 0..8).prop_flat_map(move |source| {
            let n = source.len();
            let target = prop::collection::vec(tok.clone(), 0..8);
            (Just(source), target).prop_map(move |(s, t)| {
                let edits = crate::span::extract_edits(&s, &t);
                debug_assert!(edits.iter().all(|e| e.end <= n));
                M2Entry { source: s.iter().map(|x| x.to_string()).collect(), edits }
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(entries in prop::collection::vec(entry(), 0..5)) {
            let text = write_m2(&entries).unwrap();
            let back = from_m2(&text).unwrap();
            prop_assert_eq!(&back, &entries);
            prop_assert_eq!(write_m2(&back).unwrap(), text);
        }
    }
}
