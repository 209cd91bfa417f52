//! Verdict reports.
//!
//! The structured form is a list of `key: value` lines. Each witness is a
//! `witness:` line followed by its morphism lines indented by two spaces.
//! [`parse_structured`] reads a report back into a [`Verdict`], so that
//! [`fixclose_core::closure::audit`] can re-check a certificate from the
//! text alone.

use std::fmt::Write;

use fixclose_core::closure::{BoundKind, Certificate};
use fixclose_core::{Answer, Budget, FixRule, Morphism, Question, SubgroupGraph, Verdict, Word};

use crate::formats::{alphabet, format_basis, parse_basis, parse_morphism};

pub fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::None => "none".into(),
        Certificate::WholeGroup => "whole-group".into(),
        Certificate::MaximalCyclic => "maximal-cyclic".into(),
        Certificate::ExactFixes(rules) => {
            let mut s = String::from("exact-fixes");
            for r in rules {
                let _ = write!(s, " {r}");
            }
            s
        }
        Certificate::Retraction => "retraction".into(),
        Certificate::RootRule { power } => format!("root-rule {power}"),
        Certificate::StabilizerFixes => "stabilizer-fixes".into(),
    }
}

fn budget_text(b: &Budget) -> String {
    format!(
        "max-len={} fringe-cap={} whitehead-states={} whitehead-length={} whitehead-rank={} \
         free-factor-rank={} retraction-bound={} retraction-nodes={} max-iter={}",
        b.max_len,
        b.fringe_cap,
        b.whitehead.max_states,
        b.whitehead.max_total_length,
        b.whitehead.max_rank,
        b.free_factor_max_rank,
        b.retraction_bound,
        b.retraction_nodes,
        b.max_iter
    )
}

pub fn structured(v: &Verdict) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "question: {}", v.question);
    let _ = writeln!(s, "rank: {}", v.subgroup.alphabet().rank());
    let _ = writeln!(s, "subgroup: {}", format_basis(&v.subgroup));
    let _ = writeln!(s, "answer: {}", v.answer);
    let _ = writeln!(s, "certificate: {}", certificate_text(&v.certificate));
    if let Some(x) = &v.witness_word {
        let _ = writeln!(s, "witness-word: {x}");
    }
    let _ = writeln!(s, "budget: {}", budget_text(&v.budget));
    let _ = writeln!(
        s,
        "closure-bound: {} {}",
        v.bound_kind,
        format_basis(&v.closure_bound)
    );
    for m in &v.witnesses {
        s.push_str("witness:\n");
        for line in m.to_string().lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    for n in &v.notes {
        let _ = writeln!(s, "note: {}", n.replace('\n', " "));
    }
    s
}

/// Human-oriented summary.
pub fn text(v: &Verdict) -> String {
    let mut s = String::new();
    let verb = match v.answer {
        Answer::CertifiedYes => "is",
        Answer::CertifiedNo => "is not",
        Answer::Evidence => "may be",
    };
    let _ = writeln!(
        s,
        "{}: H = <{}> {verb} {}",
        v.answer,
        format_basis(&v.subgroup),
        v.question
    );
    let _ = writeln!(s, "certificate: {}", certificate_text(&v.certificate));
    if let Some(x) = &v.witness_word {
        let _ = writeln!(s, "witness word: {x}");
    }
    let _ = writeln!(
        s,
        "closure bound ({}): <{}>",
        v.bound_kind,
        format_basis(&v.closure_bound)
    );
    for (i, m) in v.witnesses.iter().enumerate() {
        let _ = writeln!(s, "witness {}:", i + 1);
        for line in m.to_string().lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    for n in &v.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("report line {line}: {message}")]
pub struct ReportError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ReportError> {
    Err(ReportError {
        line,
        message: message.into(),
    })
}

/// Recursive-descent parser for [`FixRule`] display strings.
struct RuleParser<'a> {
    rest: &'a str,
}

impl<'a> RuleParser<'a> {
    fn eat(&mut self, token: &str) -> bool {
        match self.rest.strip_prefix(token) {
            Some(r) => {
                self.rest = r;
                true
            }
            None => false,
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), String> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(format!("expected `{token}` at `{}`", self.rest))
        }
    }

    fn rule(&mut self) -> Result<FixRule, String> {
        if self.eat("idempotent") {
            Ok(FixRule::Idempotent)
        } else if self.eat("rank-one") {
            Ok(FixRule::RankOne)
        } else if self.eat("trivial-stable-image") {
            Ok(FixRule::TrivialStableImage)
        } else if self.eat("stable-image(") {
            let inner = self.rule()?;
            self.expect(")")?;
            Ok(FixRule::StableImage(Box::new(inner)))
        } else if self.eat("inner(") {
            let end = self.rest.find(')').ok_or("unterminated inner(")?;
            let w = Word::parse(&self.rest[..end]).map_err(|e| e.to_string())?;
            self.rest = &self.rest[end + 1..];
            Ok(FixRule::Inner(w))
        } else if self.eat("blocks(") {
            let mut rules = vec![self.rule()?];
            while self.eat(";") {
                rules.push(self.rule()?);
            }
            self.expect(")")?;
            Ok(FixRule::Blocks(rules))
        } else {
            Err(format!("unknown rule at `{}`", self.rest))
        }
    }
}

pub fn parse_rule(text: &str) -> Result<FixRule, String> {
    let mut p = RuleParser { rest: text };
    let r = p.rule()?;
    if !p.rest.is_empty() {
        return Err(format!("trailing text `{}`", p.rest));
    }
    Ok(r)
}

fn parse_certificate(text: &str) -> Result<Certificate, String> {
    let mut parts = text.split_whitespace();
    let head = parts.next().ok_or("empty certificate")?;
    let rest: Vec<&str> = parts.collect();
    let bare = |c: Certificate| {
        if rest.is_empty() {
            Ok(c)
        } else {
            Err(format!("`{head}` takes no arguments"))
        }
    };
    match head {
        "none" => bare(Certificate::None),
        "whole-group" => bare(Certificate::WholeGroup),
        "maximal-cyclic" => bare(Certificate::MaximalCyclic),
        "retraction" => bare(Certificate::Retraction),
        "stabilizer-fixes" => bare(Certificate::StabilizerFixes),
        "exact-fixes" => Ok(Certificate::ExactFixes(
            rest.iter()
                .map(|r| parse_rule(r))
                .collect::<Result<_, _>>()?,
        )),
        "root-rule" => match rest.as_slice() {
            [k] => Ok(Certificate::RootRule {
                power: k.parse().map_err(|_| format!("bad power `{k}`"))?,
            }),
            _ => Err(String::from("root-rule takes one power")),
        },
        other => Err(format!("unknown certificate `{other}`")),
    }
}

fn parse_budget(text: &str) -> Result<Budget, String> {
    let mut b = Budget::default();
    for item in text.split_whitespace() {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found `{item}`"))?;
        let value: usize = value
            .parse()
            .map_err(|_| format!("bad value in `{item}`"))?;
        let slot = match key {
            "max-len" => &mut b.max_len,
            "fringe-cap" => &mut b.fringe_cap,
            "whitehead-states" => &mut b.whitehead.max_states,
            "whitehead-length" => &mut b.whitehead.max_total_length,
            "whitehead-rank" => &mut b.whitehead.max_rank,
            "free-factor-rank" => &mut b.free_factor_max_rank,
            "retraction-bound" => &mut b.retraction_bound,
            "retraction-nodes" => &mut b.retraction_nodes,
            "max-iter" => &mut b.max_iter,
            _ => return Err(format!("unknown budget key `{key}`")),
        };
        *slot = value;
    }
    Ok(b)
}

/// Reads a report produced by [`structured`].
pub fn parse_structured(report: &str) -> Result<Verdict, ReportError> {
    let lines: Vec<&str> = report.lines().collect();
    let mut question = None;
    let mut rank = None;
    let mut subgroup_text = None;
    let mut answer = None;
    let mut certificate = None;
    let mut witness_word = None;
    let mut budget = None;
    let mut bound = None;
    let mut witness_blocks: Vec<(usize, String)> = Vec::new();
    let mut notes = Vec::new();

    let mut i = 0;
    while i < lines.len() {
        let n = i + 1;
        let line = lines[i];
        i += 1;
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return fail(n, "expected `key: value`");
        };
        let value = value.trim();
        match key {
            "question" => question = Some(value.parse::<Question>().or_else(|e| fail(n, e))?),
            "rank" => {
                let r: usize = value.parse().or_else(|_| fail(n, "bad rank"))?;
                rank = Some((n, alphabet(r).or_else(|e| fail(n, e))?));
            }
            "subgroup" => subgroup_text = Some((n, value.to_string())),
            "answer" => answer = Some(value.parse::<Answer>().or_else(|e| fail(n, e))?),
            "certificate" => certificate = Some(parse_certificate(value).or_else(|e| fail(n, e))?),
            "witness-word" => {
                witness_word = Some(Word::parse(value).or_else(|e| fail(n, e.to_string()))?)
            }
            "budget" => budget = Some(parse_budget(value).or_else(|e| fail(n, e))?),
            "closure-bound" => {
                let (kind, basis) = value
                    .split_once(' ')
                    .ok_or(())
                    .or_else(|_| fail(n, "expected `<kind> <basis>`"))?;
                bound = Some((
                    n,
                    kind.parse::<BoundKind>().or_else(|e| fail(n, e))?,
                    basis.to_string(),
                ));
            }
            "witness" => {
                let mut body = String::new();
                while i < lines.len() && lines[i].starts_with("  ") {
                    body.push_str(lines[i].trim());
                    body.push('\n');
                    i += 1;
                }
                witness_blocks.push((n, body));
            }
            "note" => notes.push(value.to_string()),
            other => return fail(n, format!("unknown key `{other}`")),
        }
    }

    let missing = |k: &str| ReportError {
        line: lines.len(),
        message: format!("missing `{k}`"),
    };
    let (_, alpha) = rank.ok_or_else(|| missing("rank"))?;
    let (sn, st) = subgroup_text.ok_or_else(|| missing("subgroup"))?;
    let subgroup = parse_basis(&st, alpha, "subgroup").or_else(|e| fail(sn, e.message))?;
    let (bn, bound_kind, bt) = bound.ok_or_else(|| missing("closure-bound"))?;
    let closure_bound: SubgroupGraph =
        parse_basis(&bt, alpha, "closure-bound").or_else(|e| fail(bn, e.message))?;
    let witnesses = witness_blocks
        .into_iter()
        .map(|(n, body)| {
            parse_morphism(&body, Some(alpha.rank()), "witness")
                .or_else(|e| fail(n + e.line, e.message))
        })
        .collect::<Result<Vec<Morphism>, _>>()?;
    Ok(Verdict {
        question: question.ok_or_else(|| missing("question"))?,
        subgroup,
        answer: answer.ok_or_else(|| missing("answer"))?,
        certificate: certificate.ok_or_else(|| missing("certificate"))?,
        witnesses,
        witness_word,
        budget: budget.ok_or_else(|| missing("budget"))?,
        closure_bound,
        bound_kind,
        notes,
    })
}
