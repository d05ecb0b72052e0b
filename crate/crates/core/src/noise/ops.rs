//! The corruption operations. Each takes a sentence, the noise context and an
//! RNG, picks its site(s) uniformly and returns a [`NoiseOutcome`]; ops with
//! nothing to act on return the sentence unchanged.

use rand::seq::{index, IndexedRandom, SliceRandom};
use rand::Rng;

use std::sync::Arc;

use super::sentence::{gap, Editor, NoiseOutcome, NoisySentence};
use super::{NoiseContext, NoiseOp};
use crate::corpus::TaggedToken;
use crate::morpho::{match_case, Analysis, Case, CharRuleTable, InflectionLexicon, ObliqueVerb};
use crate::tokenizer::{classify, TokenKind};

pub fn apply_op<R: Rng + ?Sized>(
    op: NoiseOp,
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    match op {
        NoiseOp::SwapNounCase => swap_noun_case(sentence, ctx, rng),
        NoiseOp::SwapMood => swap_mood(sentence, ctx, rng),
        NoiseOp::Dativitis => apply_dativitis(sentence, ctx, rng),
        NoiseOp::SplitCompound => split_compound(sentence, ctx, rng),
        NoiseOp::Misspelling => substitute_misspelling(sentence, ctx, rng),
        NoiseOp::DeleteSpace => delete_space(sentence, ctx, rng),
        NoiseOp::DeleteCommas => delete_commas(sentence, ctx, rng),
        NoiseOp::SwapWordOrder => swap_word_order(sentence, ctx, rng),
        NoiseOp::DuplicateWord => duplicate_word(sentence, ctx, rng),
        NoiseOp::DuplicateChar => duplicate_char(sentence, ctx, rng),
        NoiseOp::DropChar => drop_char(sentence, ctx, rng),
        NoiseOp::RuleCharSwap => rule_char_swap(sentence, ctx, rng),
        NoiseOp::ToggleAccent => toggle_accent(sentence, ctx, rng),
        NoiseOp::ReplaceRandomChar => replace_random_char(sentence, ctx, rng),
    }
}

fn is_word(token: &TaggedToken) -> bool {
    token.surface.chars().any(char::is_alphabetic)
}

fn word_indices(sentence: &NoisySentence) -> Vec<usize> {
    (0..sentence.tokens.len())
        .filter(|&i| is_word(&sentence.tokens[i]))
        .collect()
}

fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("pick from non-empty slice")
}

fn words_per_sentence(ctx: &NoiseContext, op: NoiseOp) -> usize {
    ctx.config.op(op).intensity.words_per_sentence
}

/// Forms of `token` with `key` set to `value`, excluding ones that would not
/// change its surface.
fn alternative_forms<'l>(
    lex: &'l InflectionLexicon,
    token: &TaggedToken,
    key: &str,
    value: &str,
) -> Vec<&'l str> {
    lex.inflect_analysis(&Analysis::new(&*token.lemma, &*token.pos, token.feats.with(key, value)))
        .forms()
        .into_iter()
        .filter(|f| match_case(&token.surface, f) != token.surface)
        .collect()
}

fn reinflect(token: &mut TaggedToken, key: &str, value: &str, form: &str) {
    token.surface = match_case(&token.surface, form);
    token.feats.insert(key, value);
}

/// Re-inflects the agreeing modifiers directly before `head` from case
/// `from` to case `to`, where the lexicon has the form.
fn reinflect_modifiers(
    sentence: &mut NoisySentence,
    ctx: &NoiseContext,
    head: usize,
    from: &str,
    to: Case,
) {
    let pos = &ctx.config.options.pos;
    for j in (0..head).rev() {
        let tok = &sentence.tokens[j];
        if !pos.is_modifier(&tok.pos) || tok.feats.get("case") != Some(from) {
            break;
        }
        let forms = alternative_forms(&ctx.lexicons.inflection, tok, "case", to.as_str());
        if let Some(form) = forms.first() {
            let form = form.to_string();
            reinflect(sentence.token_mut(j), "case", to.as_str(), &form);
        }
    }
}

/// Re-inflects one noun to a different grammatical case.
pub fn swap_noun_case<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::SwapNounCase;
    let lex = &ctx.lexicons.inflection;
    let pos = &ctx.config.options.pos;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let current = ed.sentence();
        let mut nouns: Vec<(usize, Case)> = current
            .tokens
            .iter()
            .enumerate()
            .filter(|(_, tok)| pos.is_noun(&tok.pos))
            .filter_map(|(i, tok)| Some((i, tok.feats.get("case")?.parse::<Case>().ok()?)))
            .collect();
        // The first noun of a random order that has another case form is a
        // uniform draw over the nouns that have one.
        nouns.shuffle(rng);
        let site = nouns.into_iter().find_map(|(i, case)| {
            let tok = &current.tokens[i];
            let alts: Vec<(Case, Vec<String>)> = Case::ALL
                .into_iter()
                .filter(|&c| c != case)
                .map(|c| {
                    let forms = alternative_forms(lex, tok, "case", c.as_str());
                    (c, forms.into_iter().map(str::to_owned).collect::<Vec<_>>())
                })
                .filter(|(_, forms)| !forms.is_empty())
                .collect();
            (!alts.is_empty()).then_some((i, alts))
        });
        let Some((i, alts)) = site else {
            break;
        };
        ed.mark_applicable();
        let (case, forms) = pick(rng, &alts);
        let form = pick(rng, forms).clone();
        let case = *case;
        let np_wide = ctx.config.options.np_wide_case_swap;
        ed.step(i, |s| {
            let old = s.tokens[i].feats.get("case").unwrap_or_default().to_owned();
            reinflect(s.token_mut(i), "case", case.as_str(), &form);
            if np_wide {
                reinflect_modifiers(s, ctx, i, &old, case);
            }
        });
    }
    ed.finish()
}

/// Flips one verb's mood in the configured direction.
pub fn swap_mood<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::SwapMood;
    let (from, to) = ctx.config.options.mood_direction.values();
    let lex = &ctx.lexicons.inflection;
    let pos = &ctx.config.options.pos;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let sites: Vec<(usize, Vec<String>)> = ed
            .sentence()
            .tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| pos.is_verb(&t.pos) && t.feats.get("mood") == Some(from))
            .map(|(i, t)| {
                let forms = alternative_forms(lex, t, "mood", to);
                (i, forms.into_iter().map(str::to_owned).collect::<Vec<_>>())
            })
            .filter(|(_, forms)| !forms.is_empty())
            .collect();
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let (i, forms) = pick(rng, &sites);
        let (i, form) = (*i, pick(rng, forms).clone());
        ed.step(i, |s| reinflect(s.token_mut(i), "mood", to, &form));
    }
    ed.finish()
}

/// Nearest nominal in the verb's clause: searched leftwards first, then up to
/// three tokens to the right. Returns it only if it carries `case`.
fn find_subject(sentence: &NoisySentence, ctx: &NoiseContext, verb: usize, case: Case) -> Option<usize> {
    let pos = &ctx.config.options.pos;
    let tokens = &sentence.tokens;
    let check = |j: usize| -> Option<Option<usize>> {
        let t = &tokens[j];
        if classify(&t.surface) == TokenKind::Punct {
            return Some(None);
        }
        if pos.is_nominal(&t.pos) {
            return Some((t.feats.get("case") == Some(case.as_str())).then_some(j));
        }
        None
    };
    for j in (0..verb).rev() {
        if let Some(found) = check(j) {
            if found.is_some() {
                return found;
            }
            break;
        }
    }
    for j in (verb + 1..tokens.len()).take(3) {
        if let Some(found) = check(j) {
            return found;
        }
    }
    None
}

/// Puts the subject of an oblique-subject verb into the dative and the verb
/// into its third-person singular form.
pub fn apply_dativitis<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::Dativitis;
    let lex = &ctx.lexicons.inflection;
    let pos = &ctx.config.options.pos;
    let dat = ObliqueVerb::TARGET_CASE;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let current = ed.sentence();
        let mut sites: Vec<(usize, usize, Vec<String>, Option<String>)> = Vec::new();
        for (i, verb) in current.tokens.iter().enumerate() {
            if !pos.is_verb(&verb.pos) {
                continue;
            }
            let Some(entry) = ctx.lexicons.oblique_verbs.get(&verb.lemma) else {
                continue;
            };
            let Some(subj) = find_subject(current, ctx, i, entry.standard_case) else {
                continue;
            };
            let forms = alternative_forms(lex, &current.tokens[subj], "case", dat.as_str());
            if !forms.is_empty() {
                let forms = forms.into_iter().map(str::to_owned).collect();
                sites.push((i, subj, forms, entry.third_singular.clone()));
            }
        }
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let (verb, subj, forms, third) = pick(rng, &sites);
        let form = pick(rng, forms).clone();
        let (verb, subj, third) = (*verb, *subj, third.clone());
        ed.step(subj, |s| {
            let old = s.tokens[subj].feats.get("case").unwrap_or_default().to_owned();
            reinflect(s.token_mut(subj), "case", dat.as_str(), &form);
            reinflect_modifiers(s, ctx, subj, &old, dat);
            if let Some(third) = third {
                let v = s.token_mut(verb);
                v.surface = match_case(&v.surface, &third);
                v.feats.insert("person", "3");
                v.feats.insert("num", "sg");
            }
        });
    }
    ed.finish()
}

/// Inserts a space inside a word where both halves are attested words.
pub fn split_compound<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::SplitCompound;
    let min = ctx.config.options.min_compound_part_len;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let sites: Vec<(usize, Vec<(String, String)>)> = word_indices(ed.sentence())
            .into_iter()
            .map(|i| {
                let splits = ctx
                    .lexicons
                    .inflection
                    .valid_compound_splits(&ed.sentence().tokens[i].surface, min);
                (i, splits)
            })
            .filter(|(_, splits)| !splits.is_empty())
            .collect();
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let (i, splits) = pick(rng, &sites);
        let (left, right) = pick(rng, splits).clone();
        let i = *i;
        ed.step(i, |s| {
            s.token_mut(i).surface = right;
            let before = s.gaps[i].clone();
            s.insert_token(i, Arc::new(TaggedToken::bare(left)), &before);
            s.gaps[i + 1] = gap(" ");
        });
    }
    ed.finish()
}

/// Swaps a correctly spelled word for one of its listed misspellings.
pub fn substitute_misspelling<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::Misspelling;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let sites: Vec<(usize, Vec<String>)> = word_indices(ed.sentence())
            .into_iter()
            .map(|i| {
                let surface = &ed.sentence().tokens[i].surface;
                let variants = ctx
                    .lexicons
                    .misspellings
                    .misspellings_any_case(surface)
                    .iter()
                    .map(|v| match_case(surface, v))
                    .filter(|v| v != surface)
                    .collect::<Vec<_>>();
                (i, variants)
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let (i, variants) = pick(rng, &sites);
        let (i, variant) = (*i, pick(rng, variants).clone());
        ed.step(i, |s| s.token_mut(i).surface = variant);
    }
    ed.finish()
}

/// Removes the whitespace between two words, merging them.
pub fn delete_space<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::DeleteSpace;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let s = ed.sentence();
        let sites: Vec<usize> = (0..s.tokens.len().saturating_sub(1))
            .filter(|&i| {
                !s.gaps[i + 1].is_empty() && is_word(&s.tokens[i]) && is_word(&s.tokens[i + 1])
            })
            .collect();
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let i = *pick(rng, &sites);
        ed.step(i, |s| merge_with_next(s, i));
    }
    ed.finish()
}

pub(crate) fn merge_with_next(s: &mut NoisySentence, i: usize) {
    let next = s.tokens.remove(i + 1);
    s.gaps.remove(i + 1);
    let merged = format!("{}{}", s.tokens[i].surface, next.surface);
    s.tokens[i] = Arc::new(TaggedToken::bare(merged));
}

/// Drops commas; each comma goes independently with the configured
/// comma probability.
pub fn delete_commas<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::DeleteCommas;
    let p = ctx.config.options.comma_probability;
    let mut ed = Editor::new(op, sentence);
    let commas: Vec<usize> = (0..sentence.tokens.len())
        .filter(|&i| sentence.tokens[i].surface == ",")
        .collect();
    if commas.is_empty() {
        return ed.finish();
    }
    ed.mark_applicable();
    let chosen: Vec<usize> = commas.into_iter().filter(|_| rng.random_bool(p)).collect();
    for &i in chosen.iter().rev() {
        ed.step(i, |s| remove_comma(s, i));
    }
    ed.finish()
}

fn remove_comma(s: &mut NoisySentence, i: usize) {
    let (before, after) = (&s.gaps[i], &s.gaps[i + 1]);
    let mut joined = if after.is_empty() { before.to_string() } else { after.to_string() };
    let between_tokens = i > 0 && i + 1 < s.tokens.len();
    if joined.is_empty() && between_tokens {
        joined = " ".to_owned();
    }
    s.remove_token(i, &joined);
}

/// Transposes two adjacent words (punctuation never moves).
pub fn swap_word_order<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::SwapWordOrder;
    let movable = |t: &TaggedToken| matches!(classify(&t.surface), TokenKind::Word | TokenKind::Number);
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let s = ed.sentence();
        let sites: Vec<usize> = (0..s.tokens.len().saturating_sub(1))
            .filter(|&i| {
                movable(&s.tokens[i])
                    && movable(&s.tokens[i + 1])
                    && !s.gaps[i + 1].is_empty()
                    && s.tokens[i].surface != s.tokens[i + 1].surface
            })
            .collect();
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let i = *pick(rng, &sites);
        ed.step(i, |s| s.tokens.swap(i, i + 1));
    }
    ed.finish()
}

/// Repeats a word right after itself.
pub fn duplicate_word<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let op = NoiseOp::DuplicateWord;
    let mut ed = Editor::new(op, sentence);
    for _ in 0..words_per_sentence(ctx, op) {
        let sites = word_indices(ed.sentence());
        if sites.is_empty() {
            break;
        }
        ed.mark_applicable();
        let i = *pick(rng, &sites);
        ed.step(i, |s| {
            let copy = s.tokens[i].clone();
            s.insert_token(i + 1, copy, " ");
        });
    }
    ed.finish()
}

/// Shared driver for the character-level ops: choose up to
/// `words_per_sentence` distinct eligible words, then make up to
/// `chars_per_word` edits in each. `sites` lists the edit sites in a word and
/// `edit` applies one of them.
fn char_level<R, S, E>(
    op: NoiseOp,
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
    sites: S,
    mut edit: E,
) -> NoiseOutcome
where
    R: Rng + ?Sized,
    S: Fn(&[char]) -> usize,
    E: FnMut(&[char], usize, &mut R) -> Vec<char>,
{
    let intensity = ctx.config.op(op).intensity;
    let mut ed = Editor::new(op, sentence);
    let eligible: Vec<usize> = word_indices(sentence)
        .into_iter()
        .filter(|&i| sites(&sentence.tokens[i].surface.chars().collect::<Vec<_>>()) > 0)
        .collect();
    if eligible.is_empty() {
        return ed.finish();
    }
    ed.mark_applicable();
    let k = intensity.words_per_sentence.min(eligible.len());
    let mut picked: Vec<usize> = index::sample(rng, eligible.len(), k)
        .into_iter()
        .map(|j| eligible[j])
        .collect();
    picked.sort_unstable();
    for i in picked {
        for _ in 0..intensity.chars_per_word {
            let word: Vec<char> = ed.sentence().tokens[i].surface.chars().collect();
            let n = sites(&word);
            if n == 0 {
                break;
            }
            let site = rng.random_range(0..n);
            let new_word: String = edit(&word, site, rng).into_iter().collect();
            ed.step(i, |s| s.token_mut(i).surface = new_word);
        }
    }
    ed.finish()
}

fn letter_positions(word: &[char]) -> Vec<usize> {
    (0..word.len()).filter(|&p| word[p].is_alphabetic()).collect()
}

/// Doubles one letter of a word ("ein" → "eein").
pub fn duplicate_char<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    char_level(
        NoiseOp::DuplicateChar,
        sentence,
        ctx,
        rng,
        |w| letter_positions(w).len(),
        |w, site, _| {
            let p = letter_positions(w)[site];
            duplicate_char_at(w, p)
        },
    )
}

pub fn duplicate_char_at(word: &[char], pos: usize) -> Vec<char> {
    let mut out = word.to_vec();
    out.insert(pos + 1, word[pos]);
    out
}

/// Deletes one character of a word, never emptying it.
pub fn drop_char<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    char_level(
        NoiseOp::DropChar,
        sentence,
        ctx,
        rng,
        |w| if w.len() >= 2 { w.len() } else { 0 },
        |w, site, _| drop_char_at(w, site),
    )
}

pub fn drop_char_at(word: &[char], pos: usize) -> Vec<char> {
    let mut out = word.to_vec();
    out.remove(pos);
    out
}

fn rewrite_with_table<R: Rng + ?Sized>(
    op: NoiseOp,
    table: &CharRuleTable,
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    char_level(
        op,
        sentence,
        ctx,
        rng,
        |w| table.sites(w).len(),
        |w, site, _| {
            let (pos, from, to) = table.sites(w)[site];
            let mut out = w[..pos].to_vec();
            out.extend_from_slice(to);
            out.extend_from_slice(&w[pos + from.len()..]);
            out
        },
    )
}

/// Applies one spelling-rule rewrite (y↔i, ýi→ýji, …).
pub fn rule_char_swap<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    rewrite_with_table(NoiseOp::RuleCharSwap, &ctx.lexicons.char_rules, sentence, ctx, rng)
}

/// Adds or removes an accent on one character (a↔á, I↔Í, …).
pub fn toggle_accent<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    rewrite_with_table(NoiseOp::ToggleAccent, &ctx.lexicons.accents, sentence, ctx, rng)
}

/// Replaces one character with a different one from the replacement
/// alphabet. Word length is unchanged.
pub fn replace_random_char<R: Rng + ?Sized>(
    sentence: &NoisySentence,
    ctx: &NoiseContext,
    rng: &mut R,
) -> NoiseOutcome {
    let alphabet: Vec<char> = ctx.config.options.replacement_alphabet.chars().collect();
    char_level(
        NoiseOp::ReplaceRandomChar,
        sentence,
        ctx,
        rng,
        |w| w.len(),
        |w, site, rng| {
            let choices: Vec<char> = alphabet.iter().copied().filter(|&c| c != w[site]).collect();
            let mut out = w.to_vec();
            out[site] = *pick(rng, &choices);
            out
        },
    )
}
