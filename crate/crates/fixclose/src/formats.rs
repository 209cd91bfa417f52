//! Text formats for words, generator lists and morphisms.
//!
//! * A word is `baccbCCBA`-style text (`1` is the identity, `x^k` is sugar).
//! * A generator list is comma separated on the command line, or one word per
//!   line in a file.
//! * A morphism is one `x -> word` line per letter. A family file holds
//!   several morphisms separated by blank lines.
//!
//! In files, `#` starts a comment. Every error names the line (and column
//! where it makes sense) it refers to.

use fixclose_core::{Alphabet, Letter, Morphism, SubgroupGraph, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{source_name}:{line}:{column}: {message}")]
pub struct FormatError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FormatError {
    fn new(source_name: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError {
            source_name: source_name.to_string(),
            line,
            column,
            message: message.into(),
        }
    }
}

/// Largest rank the letter-based text format can express.
pub const MAX_TEXT_RANK: usize = 26;

/// Parses one word, reporting positions relative to `column_offset`.
fn word_at(
    text: &str,
    source: &str,
    line: usize,
    column_offset: usize,
) -> Result<Word, FormatError> {
    Word::parse(text).map_err(|e| {
        let (column, message) = match e {
            fixclose_core::ParseWordError::UnexpectedChar { ch, column } => {
                (column, format!("unexpected character {ch:?} in word"))
            }
            fixclose_core::ParseWordError::BadExponent { column } => {
                (column, "malformed exponent".to_string())
            }
        };
        FormatError::new(source, line, column_offset + column, message)
    })
}

fn check_rank(
    w: &Word,
    rank: Option<usize>,
    source: &str,
    line: usize,
    column: usize,
) -> Result<(), FormatError> {
    if let (Some(rank), Some(g)) = (rank, w.max_generator()) {
        if g >= rank {
            return Err(FormatError::new(
                source,
                line,
                column,
                format!(
                    "letter {} is outside the rank-{rank} alphabet",
                    Letter::positive(g)
                ),
            ));
        }
    }
    Ok(())
}

/// Comma-separated words, e.g. `a,baccbCCBA`. An empty string is the empty list.
pub fn parse_word_list(
    text: &str,
    rank: Option<usize>,
    source: &str,
) -> Result<Vec<Word>, FormatError> {
    let mut out = Vec::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut offset = 0;
    for part in text.split(',') {
        let lead = part.len() - part.trim_start().len();
        let w = word_at(part, source, 1, offset)?;
        check_rank(&w, rank, source, 1, offset + lead + 1)?;
        out.push(w);
        offset += part.chars().count() + 1;
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// One word per line; blank lines and comments are skipped.
pub fn parse_gens_file(
    text: &str,
    rank: Option<usize>,
    source: &str,
) -> Result<Vec<Word>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let w = word_at(body, source, i + 1, 0)?;
        check_rank(&w, rank, source, i + 1, 1)?;
        out.push(w);
    }
    Ok(out)
}

/// Rank implied by a set of words: one more than the largest generator used.
pub fn inferred_rank<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> usize {
    words
        .into_iter()
        .filter_map(Word::max_generator)
        .max()
        .map_or(1, |g| g + 1)
}

fn parse_letter(
    text: &str,
    source: &str,
    line: usize,
    column: usize,
) -> Result<usize, FormatError> {
    let mut chars = text.chars();
    match (chars.next(), chars.next()) {
        (Some(c @ 'a'..='z'), None) => Ok(c as usize - 'a' as usize),
        _ => Err(FormatError::new(
            source,
            line,
            column,
            format!("expected a lowercase letter, found {text:?}"),
        )),
    }
}

/// Collects `x -> word` lines, indexed by their 1-based line numbers.
fn parse_rules(
    lines: &[(usize, &str)],
    source: &str,
) -> Result<Vec<(usize, usize, Word)>, FormatError> {
    let mut rules = Vec::new();
    for &(line, body) in lines {
        let Some((lhs, rhs)) = body.split_once("->") else {
            return Err(FormatError::new(source, line, 1, "expected `x -> word`"));
        };
        let lhs_col = lhs.len() - lhs.trim_start().len() + 1;
        let g = parse_letter(lhs.trim(), source, line, lhs_col)?;
        let rhs_offset = lhs.chars().count() + 2;
        let w = word_at(rhs, source, line, rhs_offset)?;
        rules.push((line, g, w));
    }
    Ok(rules)
}

fn build_morphism(
    rules: Vec<(usize, usize, Word)>,
    rank: usize,
    source: &str,
) -> Result<Morphism, FormatError> {
    let mut images: Vec<Option<Word>> = vec![None; rank];
    let last_line = rules.last().map_or(1, |r| r.0);
    for (line, g, w) in rules {
        if g >= rank {
            return Err(FormatError::new(
                source,
                line,
                1,
                format!(
                    "letter {} is outside the rank-{rank} alphabet",
                    Letter::positive(g)
                ),
            ));
        }
        check_rank(&w, Some(rank), source, line, 1)?;
        if images[g].is_some() {
            return Err(FormatError::new(
                source,
                line,
                1,
                format!("second image for letter {}", Letter::positive(g)),
            ));
        }
        images[g] = Some(w);
    }
    if let Some(g) = images.iter().position(Option::is_none) {
        return Err(FormatError::new(
            source,
            last_line,
            1,
            format!("no image given for letter {}", Letter::positive(g)),
        ));
    }
    let alphabet = alphabet(rank).map_err(|m| FormatError::new(source, 1, 1, m))?;
    Morphism::new(alphabet, images.into_iter().map(Option::unwrap).collect())
        .map_err(|e| FormatError::new(source, 1, 1, e.to_string()))
}

pub fn alphabet(rank: usize) -> Result<Alphabet, String> {
    if rank == 0 || rank > MAX_TEXT_RANK {
        return Err(format!(
            "rank must be between 1 and {MAX_TEXT_RANK}, got {rank}"
        ));
    }
    Alphabet::new(rank).map_err(|e| e.to_string())
}

fn blocks(text: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            if !out.last().expect("non-empty").is_empty() {
                out.push(Vec::new());
            }
            continue;
        }
        out.last_mut().expect("non-empty").push((i + 1, body));
    }
    out.retain(|b| !b.is_empty());
    out
}

/// Rank implied by morphism rules when none is given.
fn rules_rank(rules: &[(usize, usize, Word)]) -> usize {
    let letters = rules.iter().map(|r| r.1 + 1).max().unwrap_or(1);
    letters.max(inferred_rank(rules.iter().map(|r| &r.2)))
}

/// A family of morphisms separated by blank lines.
pub fn parse_morphisms(
    text: &str,
    rank: Option<usize>,
    source: &str,
) -> Result<Vec<Morphism>, FormatError> {
    let parsed: Vec<Vec<(usize, usize, Word)>> = blocks(text)
        .iter()
        .map(|b| parse_rules(b, source))
        .collect::<Result<_, _>>()?;
    if parsed.is_empty() {
        return Err(FormatError::new(source, 1, 1, "no morphism found"));
    }
    let rank = rank.unwrap_or_else(|| parsed.iter().map(|r| rules_rank(r)).max().unwrap_or(1));
    parsed
        .into_iter()
        .map(|rules| build_morphism(rules, rank, source))
        .collect()
}

/// Exactly one morphism.
pub fn parse_morphism(
    text: &str,
    rank: Option<usize>,
    source: &str,
) -> Result<Morphism, FormatError> {
    let mut all = parse_morphisms(text, rank, source)?;
    if all.len() != 1 {
        return Err(FormatError::new(
            source,
            1,
            1,
            format!("expected one morphism, found {}", all.len()),
        ));
    }
    Ok(all.remove(0))
}

/// Inline morphism: rules separated by `;`, e.g. `a->a;b->ab`.
pub fn parse_inline_morphism(
    text: &str,
    rank: Option<usize>,
    source: &str,
) -> Result<Morphism, FormatError> {
    parse_morphism(&text.replace(';', "\n"), rank, source)
}

/// Comma-separated basis, `1` for the trivial subgroup's empty basis.
pub fn format_basis(h: &SubgroupGraph) -> String {
    let basis = h.basis();
    if basis.is_empty() {
        return "1".to_string();
    }
    basis
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Inverse of [`format_basis`].
pub fn parse_basis(
    text: &str,
    alphabet: Alphabet,
    source: &str,
) -> Result<SubgroupGraph, FormatError> {
    let gens = parse_word_list(text, Some(alphabet.rank()), source)?;
    SubgroupGraph::from_generators(alphabet, &gens)
        .map_err(|e| FormatError::new(source, 1, 1, e.to_string()))
}

pub fn format_morphisms(ms: &[Morphism]) -> String {
    ms.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n\n")
}
