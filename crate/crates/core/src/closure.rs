//! Auto-fixed and endo-fixed verdicts.
//!
//! Every positive or negative answer carries a certificate that can be
//! re-checked without trusting the search that found it:
//!
//! * a YES lists morphisms fixing `H` whose fixed subgroups are known exactly
//!   and intersect to `H`;
//! * a NO gives a word `x ∉ H` that every morphism fixing `H` of the relevant
//!   kind must fix, either because some `x^k` lies in `H` (roots are unique in
//!   a free group) or because `x` is fixed by a full generating set of the
//!   pointwise stabilizer.
//!
//! Anything else is reported as evidence together with the best bound found.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::extensions::algebraic_extensions;
use crate::fixpoints::{
    exact_fix, find_retraction, for_each_fixed, is_retraction, reduce_family, FixRule,
};
use crate::stallings::SubgroupGraph;
use crate::whitehead::stabilizer_generators;
use crate::words::{Alphabet, Morphism, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Question {
    AutoFixed,
    EndoFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    CertifiedYes,
    CertifiedNo,
    Evidence,
}

/// How `closure_bound` relates to the closure of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Contained in the closure.
    Lower,
    /// Contains the closure; an intersection of exactly known fixed subgroups.
    Upper,
    /// Equal to the closure.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certificate {
    None,
    /// `H = F`, fixed by the identity alone.
    WholeGroup,
    /// `H = <u>` with `u` not a proper power is the centralizer of `u`.
    MaximalCyclic,
    /// The witnesses have the listed exactly known fixed subgroups, whose
    /// intersection is `H`.
    ExactFixes(Vec<FixRule>),
    /// The single witness is a retraction onto `H`.
    Retraction,
    /// `witness^power ∈ H` while `witness ∉ H`.
    RootRule {
        power: usize,
    },
    /// The witnesses generate the pointwise stabilizer of `H` and all fix the
    /// witness word, which is not in `H`.
    StabilizerFixes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub question: Question,
    pub subgroup: SubgroupGraph,
    pub answer: Answer,
    pub certificate: Certificate,
    pub witnesses: Vec<Morphism>,
    pub witness_word: Option<Word>,
    pub budget: Budget,
    pub closure_bound: SubgroupGraph,
    pub bound_kind: BoundKind,
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(question: Question, h: &SubgroupGraph, budget: &Budget) -> Self {
        Verdict {
            question,
            subgroup: h.clone(),
            answer: Answer::Evidence,
            certificate: Certificate::None,
            witnesses: Vec::new(),
            witness_word: None,
            budget: *budget,
            closure_bound: h.clone(),
            bound_kind: BoundKind::Lower,
            notes: Vec::new(),
        }
    }

    fn yes(mut self, certificate: Certificate, witnesses: Vec<Morphism>) -> Self {
        self.answer = Answer::CertifiedYes;
        self.certificate = certificate;
        self.witnesses = witnesses;
        self.closure_bound = self.subgroup.clone();
        self.bound_kind = BoundKind::Exact;
        self
    }

    fn no(mut self, certificate: Certificate, word: Word, witnesses: Vec<Morphism>) -> Self {
        self.answer = Answer::CertifiedNo;
        self.certificate = certificate;
        let mut gens = self.subgroup.basis();
        gens.push(word.clone());
        self.closure_bound =
            SubgroupGraph::from_generators(self.subgroup.alphabet(), &gens).expect("same alphabet");
        self.bound_kind = BoundKind::Lower;
        self.witness_word = Some(word);
        self.witnesses = witnesses;
        self
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

/// A word `u ∉ H` with `u^k ∈ H` for some `k >= 2`, searched among the basis
/// of `H` and the elements of `H` up to `max_len`.
pub fn root_witness(h: &SubgroupGraph, max_len: usize) -> Option<(Word, usize)> {
    let (elements, _) = h.elements_up_to(max_len, 200_000);
    h.basis()
        .into_iter()
        .chain(elements)
        .filter(|e| !e.is_empty())
        .find_map(|e| {
            let (u, k) = e.element_root().ok()?;
            (k >= 2 && !h.contains(&u)).then_some((u, k))
        })
}

/// Exact membership in the auto-closure: `x` is fixed by every generator of
/// the pointwise stabilizer of `H`.
pub fn acl_membership(h: &SubgroupGraph, x: &Word, budget: &Budget) -> Result<bool> {
    let gens = stabilizer_generators(h.alphabet(), &h.basis(), &budget.whitehead)?;
    for g in &gens {
        if g.apply(x)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shortlex-first word of length at most `max_len` fixed by all of `ms` and
/// outside `h`.
fn first_fixed_outside(h: &SubgroupGraph, ms: &[Morphism], max_len: usize) -> Result<Option<Word>> {
    let mut best: Option<Word> = None;
    for_each_fixed(h.alphabet(), ms, max_len, |w| {
        if !h.contains(w) && best.as_ref().map_or(true, |b| w < b) {
            best = Some(w.clone());
        }
        true
    })?;
    Ok(best)
}

/// Fixed subgroups of those morphisms whose fixed subgroup is known exactly.
fn exact_parts(
    ms: &[Morphism],
    budget: &Budget,
) -> Result<Vec<(Morphism, FixRule, SubgroupGraph)>> {
    let mut out = Vec::new();
    for m in ms {
        if let Some(e) = exact_fix(m, budget.max_iter)? {
            out.push((m.clone(), e.rule, e.subgroup));
        }
    }
    Ok(out)
}

fn intersect_all<'a, I>(alphabet: Alphabet, parts: I) -> Result<SubgroupGraph>
where
    I: IntoIterator<Item = &'a SubgroupGraph>,
{
    let mut acc = SubgroupGraph::whole(alphabet);
    for p in parts {
        acc = acc.intersect(p)?;
    }
    Ok(acc)
}

fn first_letter_outside(h: &SubgroupGraph) -> Option<Word> {
    h.alphabet()
        .letters()
        .map(Word::letter)
        .find(|x| !h.contains(x))
}

/// Decides whether `H` is the fixed subgroup of a family of automorphisms.
pub fn auto_fixed_verdict(h: &SubgroupGraph, budget: &Budget) -> Verdict {
    let alphabet = h.alphabet();
    let v = Verdict::new(Question::AutoFixed, h, budget);
    if h.is_whole() {
        return v.yes(
            Certificate::WholeGroup,
            alloc::vec![Morphism::identity(alphabet)],
        );
    }
    if let Some((u, k)) = root_witness(h, budget.max_len) {
        return v.no(Certificate::RootRule { power: k }, u, Vec::new());
    }
    let basis = h.basis();
    if basis.len() == 1 {
        let conj = Morphism::conjugation(alphabet, &basis[0]).expect("same alphabet");
        return v.yes(Certificate::MaximalCyclic, alloc::vec![conj]);
    }
    match auto_from_stabilizer(h, &basis, v.clone(), budget) {
        Ok(v) => v,
        Err(e) => {
            let mut v = v;
            v.note(format!("stabilizer unavailable: {e}"));
            v
        }
    }
}

fn auto_from_stabilizer(
    h: &SubgroupGraph,
    basis: &[Word],
    mut v: Verdict,
    budget: &Budget,
) -> Result<Verdict> {
    let alphabet = h.alphabet();
    let gens = stabilizer_generators(alphabet, basis, &budget.whitehead)?;
    if gens.is_empty() {
        // Only the identity fixes H, so the closure is F.
        let x = first_letter_outside(h).expect("H is proper");
        return Ok(v.no(Certificate::StabilizerFixes, x, gens));
    }
    if let Some(x) = first_fixed_outside(h, &gens, budget.max_len)? {
        return Ok(v.no(Certificate::StabilizerFixes, x, gens));
    }
    let parts = exact_parts(&gens, budget)?;
    let meet = intersect_all(alphabet, parts.iter().map(|p| &p.2))?;
    if meet == *h {
        let (witnesses, rules) = parts.into_iter().map(|(m, r, _)| (m, r)).unzip();
        return Ok(v.yes(Certificate::ExactFixes(rules), witnesses));
    }
    if parts.len() == gens.len() {
        // The closure is exactly `meet`, which is strictly larger than H.
        let x = meet
            .basis()
            .into_iter()
            .find(|w| !h.contains(w))
            .expect("meet is larger than H");
        return Ok(v.no(Certificate::StabilizerFixes, x, gens));
    }
    let mut words: Vec<Word> = basis.to_vec();
    for_each_fixed(alphabet, &gens, budget.max_len, |w| {
        words.push(w.clone());
        true
    })?;
    v.closure_bound = SubgroupGraph::from_generators(alphabet, &words)?;
    v.bound_kind = BoundKind::Lower;
    v.note(format!(
        "{} stabilizer generators, {} with exactly known fixed subgroups; no fixed word of length <= {} outside H",
        gens.len(),
        parts.len(),
        budget.max_len
    ));
    Ok(v)
}

/// An endo-fixed subgroup containing `H`, given as an intersection of exactly
/// known fixed subgroups of explicit endomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureBound {
    pub subgroup: SubgroupGraph,
    pub witnesses: Vec<Morphism>,
    pub rules: Vec<FixRule>,
    pub notes: Vec<String>,
}

/// The stabilizer generator `alpha`, acting on the coordinates of `hi`, made
/// into the endomorphism "retract onto `hi`, then apply `alpha`".
fn lift_through(rho: &Morphism, alpha: &Morphism, hi: &SubgroupGraph) -> Result<Morphism> {
    let basis = hi.basis();
    let images = rho
        .images()
        .iter()
        .map(|img| Ok(alpha.apply(&hi.coordinates(img)?)?.substitute(&basis)))
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(rho.alphabet(), images)
}

/// Upper bound on the endo-closure: for each algebraic extension `H_i` that
/// is confirmed to be a retract via `ρ_i`, the automorphisms of `H_i` fixing
/// `H` are lifted through `ρ_i`; their exactly known fixed subgroups, and
/// `H_i = Fix(ρ_i)` itself, are intersected.
pub fn endo_closure_upper(h: &SubgroupGraph, budget: &Budget) -> Result<ClosureBound> {
    let alphabet = h.alphabet();
    let ae = algebraic_extensions(h, budget)?;
    let mut bound = ClosureBound {
        subgroup: SubgroupGraph::whole(alphabet),
        witnesses: Vec::new(),
        rules: Vec::new(),
        notes: Vec::new(),
    };
    for hi in &ae.members {
        if bound.subgroup == *h {
            break;
        }
        let rho = match find_retraction(hi, budget.retraction_bound, budget.retraction_nodes) {
            crate::fixpoints::RetractionSearch::Found(rho) => rho,
            other => {
                bound.notes.push(format!(
                    "no retraction onto <{}> found ({other:?})",
                    join(&hi.basis())
                ));
                continue;
            }
        };
        add_exact(&mut bound, &rho, budget)?;
        if hi == h || bound.subgroup == *h {
            continue;
        }
        let inner = Alphabet::new(hi.rank())?;
        let coords = h.rewrite_in(hi)?;
        let gens = match stabilizer_generators(inner, &coords, &budget.whitehead) {
            Ok(gens) => gens,
            Err(e) if e.is_budget() => {
                bound.notes.push(format!(
                    "stabilizer in <{}> unavailable: {e}",
                    join(&hi.basis())
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        for alpha in &gens {
            let beta = lift_through(&rho, alpha, hi)?;
            add_exact(&mut bound, &beta, budget)?;
        }
    }
    Ok(bound)
}

fn add_exact(bound: &mut ClosureBound, m: &Morphism, budget: &Budget) -> Result<()> {
    if let Some(e) = exact_fix(m, budget.max_iter)? {
        let next = bound.subgroup.intersect(&e.subgroup)?;
        if next != bound.subgroup {
            bound.subgroup = next;
            bound.witnesses.push(m.clone());
            bound.rules.push(e.rule);
        }
    }
    Ok(())
}

fn join(words: &[Word]) -> String {
    let parts: Vec<String> = words.iter().map(|w| format!("{w}")).collect();
    parts.join(",")
}

/// Decides whether `H` is the fixed subgroup of a family of endomorphisms.
pub fn endo_fixed_verdict(h: &SubgroupGraph, budget: &Budget) -> Verdict {
    let mut v = Verdict::new(Question::EndoFixed, h, budget);
    if let Some(rho) = find_retraction(h, budget.retraction_bound, budget.retraction_nodes).found()
    {
        return v.yes(Certificate::Retraction, alloc::vec![rho.clone()]);
    }
    if let Some((u, k)) = root_witness(h, budget.max_len) {
        return v.no(Certificate::RootRule { power: k }, u, Vec::new());
    }
    match endo_closure_upper(h, budget) {
        Ok(bound) if bound.subgroup == *h => {
            v.yes(Certificate::ExactFixes(bound.rules), bound.witnesses)
        }
        Ok(bound) => {
            v.closure_bound = bound.subgroup;
            v.bound_kind = BoundKind::Upper;
            v.witnesses = bound.witnesses;
            v.notes = bound.notes;
            v
        }
        Err(e) => {
            v.closure_bound = SubgroupGraph::whole(h.alphabet());
            v.bound_kind = BoundKind::Upper;
            v.note(format!("closure bound unavailable: {e}"));
            v
        }
    }
}

fn dedup(ms: &[Morphism]) -> Vec<Morphism> {
    let mut out: Vec<Morphism> = Vec::new();
    for m in ms {
        if !out.contains(m) {
            out.push(m.clone());
        }
    }
    out
}

/// Recertifies `ms` as a family of exactly known fixed subgroups meeting in `h`.
fn certify(h: &SubgroupGraph, ms: &[Morphism], budget: &Budget) -> Result<Option<Vec<FixRule>>> {
    let parts = exact_parts(ms, budget)?;
    if parts.len() != ms.len() || intersect_all(h.alphabet(), parts.iter().map(|p| &p.2))? != *h {
        return Ok(None);
    }
    Ok(Some(parts.into_iter().map(|p| p.1).collect()))
}

/// Thins the witnesses of a YES verdict to at most `2n` morphisms with the
/// same certified fixed subgroup.
pub fn reduce_witnesses(v: &Verdict, budget: &Budget) -> Verdict {
    let mut out = v.clone();
    if v.answer != Answer::CertifiedYes {
        return out;
    }
    out.witnesses = dedup(&v.witnesses);
    let Certificate::ExactFixes(_) = v.certificate else {
        return out;
    };
    let limit = 2 * v.subgroup.alphabet().rank();
    let h = &v.subgroup;
    let family = reduce_family(&out.witnesses, budget.max_len.min(6), budget.max_len.max(6))
        .map(|f| f.members)
        .unwrap_or_else(|_| out.witnesses.clone());
    if family.len() <= limit {
        if let Ok(Some(rules)) = certify(h, &family, budget) {
            out.witnesses = family;
            out.certificate = Certificate::ExactFixes(rules);
            return out;
        }
    }
    // Exact greedy: keep a witness only if it shrinks the running intersection.
    let Ok(parts) = exact_parts(&out.witnesses, budget) else {
        return out;
    };
    let mut acc = SubgroupGraph::whole(h.alphabet());
    let mut kept: Vec<usize> = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let next = acc.intersect(&p.2).expect("same alphabet");
        if next != acc {
            acc = next;
            kept.push(i);
        }
        if acc == *h {
            break;
        }
    }
    if acc != *h {
        return out;
    }
    if kept.len() > limit {
        if let Some(subset) = small_subset(h, &parts, limit) {
            kept = subset;
        }
    }
    out.witnesses = kept.iter().map(|&i| parts[i].0.clone()).collect();
    out.certificate = Certificate::ExactFixes(kept.iter().map(|&i| parts[i].1.clone()).collect());
    out
}

/// Smallest subset (up to `limit` members) whose fixed subgroups meet in `h`.
fn small_subset(
    h: &SubgroupGraph,
    parts: &[(Morphism, FixRule, SubgroupGraph)],
    limit: usize,
) -> Option<Vec<usize>> {
    fn grow(
        h: &SubgroupGraph,
        parts: &[(Morphism, FixRule, SubgroupGraph)],
        start: usize,
        size: usize,
        acc: &SubgroupGraph,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == size {
            return acc == h;
        }
        for i in start..parts.len() {
            chosen.push(i);
            let next = acc.intersect(&parts[i].2).expect("same alphabet");
            if grow(h, parts, i + 1, size, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let whole = SubgroupGraph::whole(h.alphabet());
    (1..=limit.min(parts.len())).find_map(|size| {
        let mut chosen = Vec::new();
        grow(h, parts, 0, size, &whole, &mut chosen).then_some(chosen)
    })
}

/// Re-checks the certificate of a verdict from its recorded data alone,
/// recomputing every fixed subgroup and stabilizer it relies on.
pub fn audit(v: &Verdict) -> core::result::Result<(), String> {
    audit_inner(v).map_err(|e| format!("{:?} {:?}: {e}", v.question, v.answer))
}

fn audit_inner(v: &Verdict) -> core::result::Result<(), String> {
    let h = &v.subgroup;
    let alphabet = h.alphabet();
    let basis = h.basis();
    let err = |e: Error| format!("{e}");
    for m in &v.witnesses {
        if m.alphabet() != alphabet {
            return Err(String::from("witness over a different alphabet"));
        }
    }
    match v.answer {
        Answer::Evidence => Ok(()),
        Answer::CertifiedYes => {
            if v.closure_bound != *h || v.bound_kind != BoundKind::Exact {
                return Err(String::from(
                    "YES verdict must report H as its exact closure",
                ));
            }
            if v.witnesses.is_empty() {
                return Err(String::from("YES verdict without witnesses"));
            }
            for m in &v.witnesses {
                if basis.iter().any(|w| m.apply(w).as_ref() != Ok(w)) {
                    return Err(format!("witness does not fix H:\n{m}"));
                }
                if v.question == Question::AutoFixed && !m.is_automorphism() {
                    return Err(format!("witness is not an automorphism:\n{m}"));
                }
            }
            match &v.certificate {
                Certificate::WholeGroup => {
                    if h.is_whole() && v.witnesses.iter().all(Morphism::is_identity) {
                        Ok(())
                    } else {
                        Err(String::from(
                            "whole-group certificate for a proper subgroup",
                        ))
                    }
                }
                Certificate::MaximalCyclic => {
                    let [conj] = v.witnesses.as_slice() else {
                        return Err(String::from("maximal-cyclic certificate needs one witness"));
                    };
                    let u = conj.as_conjugation().ok_or("witness is not inner")?;
                    let (_, k) = u.element_root().map_err(err)?;
                    let gen = SubgroupGraph::from_generators(alphabet, &[u]).map_err(err)?;
                    if k == 1 && gen == *h {
                        Ok(())
                    } else {
                        Err(String::from(
                            "conjugating element does not generate H as a maximal cyclic subgroup",
                        ))
                    }
                }
                Certificate::Retraction => {
                    let [rho] = v.witnesses.as_slice() else {
                        return Err(String::from("retraction certificate needs one witness"));
                    };
                    if is_retraction(rho, h) {
                        Ok(())
                    } else {
                        Err(String::from("witness is not a retraction onto H"))
                    }
                }
                Certificate::ExactFixes(rules) => {
                    if rules.len() != v.witnesses.len() {
                        return Err(String::from("one rule per witness expected"));
                    }
                    let mut acc = SubgroupGraph::whole(alphabet);
                    for (m, rule) in v.witnesses.iter().zip(rules) {
                        let e = exact_fix(m, v.budget.max_iter)
                            .map_err(err)?
                            .ok_or("no exact rule applies")?;
                        if e.rule != *rule {
                            return Err(format!(
                                "rule mismatch: recorded {rule}, recomputed {}",
                                e.rule
                            ));
                        }
                        acc = acc.intersect(&e.subgroup).map_err(err)?;
                    }
                    if acc == *h {
                        Ok(())
                    } else {
                        Err(String::from("exact fixed subgroups do not meet in H"))
                    }
                }
                other => Err(format!("{other:?} does not certify YES")),
            }
        }
        Answer::CertifiedNo => {
            let x = v
                .witness_word
                .as_ref()
                .ok_or("NO verdict without a witness word")?;
            if h.contains(x) {
                return Err(format!("witness {x} lies in H"));
            }
            match &v.certificate {
                Certificate::RootRule { power } => {
                    if *power >= 2 && h.contains(&x.pow(*power as i64)) {
                        Ok(())
                    } else {
                        Err(format!("{x}^{power} is not in H"))
                    }
                }
                Certificate::StabilizerFixes if v.question == Question::AutoFixed => {
                    let gens = stabilizer_generators(alphabet, &basis, &v.budget.whitehead)
                        .map_err(err)?;
                    let recorded: BTreeSet<&Morphism> = v.witnesses.iter().collect();
                    if gens.iter().collect::<BTreeSet<_>>() != recorded {
                        return Err(String::from(
                            "recorded generators differ from the recomputed stabilizer",
                        ));
                    }
                    for g in &gens {
                        if g.apply(x).map_err(err)? != *x {
                            return Err(format!("stabilizer generator moves {x}"));
                        }
                    }
                    Ok(())
                }
                other => Err(format!("{other:?} does not certify NO")),
            }
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Question::AutoFixed => "auto-fixed",
            Question::EndoFixed => "endo-fixed",
        })
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::CertifiedYes => "CertifiedYes",
            Answer::CertifiedNo => "CertifiedNo",
            Answer::Evidence => "Evidence",
        })
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Exact => "exact",
        })
    }
}

impl FromStr for Question {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "auto-fixed" => Ok(Question::AutoFixed),
            "endo-fixed" => Ok(Question::EndoFixed),
            _ => Err(format!("unknown question `{s}`")),
        }
    }
}

impl FromStr for Answer {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "CertifiedYes" => Ok(Answer::CertifiedYes),
            "CertifiedNo" => Ok(Answer::CertifiedNo),
            "Evidence" => Ok(Answer::Evidence),
            _ => Err(format!("unknown answer `{s}`")),
        }
    }
}

impl FromStr for BoundKind {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "lower" => Ok(BoundKind::Lower),
            "upper" => Ok(BoundKind::Upper),
            "exact" => Ok(BoundKind::Exact),
            _ => Err(format!("unknown bound kind `{s}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{morph, sub, w};

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn acl_membership_examples() {
        assert!(acl_membership(&sub(2, &["aa"]), &w("a"), &budget()).unwrap());
        assert!(acl_membership(&sub(2, &["a"]), &w("a"), &budget()).unwrap());
        assert!(!acl_membership(&sub(2, &["a"]), &w("b"), &budget()).unwrap());
    }

    #[test]
    fn auto_verdicts() {
        let v = auto_fixed_verdict(&sub(2, &["a"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedYes);
        assert_eq!(
            v.witnesses,
            vec![Morphism::conjugation(Alphabet::new(2).unwrap(), &w("a")).unwrap()]
        );
        let v = auto_fixed_verdict(&sub(2, &["aa"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedNo);
        assert_eq!(v.witness_word, Some(w("a")));
        let v = auto_fixed_verdict(&sub(2, &["a", "b"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedYes);
        assert_eq!(v.certificate, Certificate::WholeGroup);
        for v in [v, auto_fixed_verdict(&sub(2, &["aa"]), &budget())] {
            audit(&v).unwrap();
        }
    }

    #[test]
    fn auto_no_from_trivial_stabilizer() {
        // <ab, aB> has index two; only the identity fixes it.
        let v = auto_fixed_verdict(&sub(2, &["ab", "aB"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedNo);
        audit(&v).unwrap();
    }

    #[test]
    fn endo_verdicts() {
        let v = endo_fixed_verdict(&sub(2, &["a"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedYes);
        assert_eq!(v.witnesses, vec![morph(2, &["a", "1"])]);
        let v = endo_fixed_verdict(&sub(2, &["aa"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedNo);
        assert_eq!(v.witness_word, Some(w("a")));
        audit(&v).unwrap();
        let v = endo_fixed_verdict(&sub(3, &["a", "baccbCCBA"]), &budget());
        assert_eq!(v.answer, Answer::CertifiedYes);
        audit(&v).unwrap();
    }

    #[test]
    fn endo_closure_examples() {
        assert_eq!(
            endo_closure_upper(&sub(2, &["aa"]), &budget())
                .unwrap()
                .subgroup,
            sub(2, &["a"])
        );
        let h = sub(3, &["a", "baccbCCBA"]);
        assert_eq!(endo_closure_upper(&h, &budget()).unwrap().subgroup, h);
        assert_eq!(
            endo_closure_upper(&sub(2, &["a"]), &budget())
                .unwrap()
                .subgroup,
            sub(2, &["a"])
        );
    }

    #[test]
    fn witness_thinning() {
        let f2 = Alphabet::new(2).unwrap();
        let conj = Morphism::conjugation(f2, &w("a")).unwrap();
        let mut v = auto_fixed_verdict(&sub(2, &["a"]), &budget());
        v.witnesses = vec![conj.clone(), conj.clone()];
        assert_eq!(reduce_witnesses(&v, &budget()).witnesses, vec![conj]);
        let psi = morph(3, &["a", "baccbCCBA", "1"]);
        let phi = morph(3, &["a", "b", "cb"]);
        let fam: Vec<Morphism> = (0..3)
            .map(|n| phi.power(n).compose(&psi).unwrap())
            .collect();
        let mut v = endo_fixed_verdict(&sub(3, &["a", "baccbCCBA"]), &budget());
        v.certificate = Certificate::ExactFixes(alloc::vec![FixRule::Idempotent; 3]);
        v.witnesses = fam;
        let r = reduce_witnesses(&v, &budget());
        assert!(r.witnesses.len() <= 6);
        audit(&r).unwrap();
    }

    #[test]
    fn audit_rejects_forged_verdicts() {
        let mut v = auto_fixed_verdict(&sub(2, &["aa"]), &budget());
        v.witness_word = Some(w("b"));
        assert!(audit(&v).is_err());
        let mut v = endo_fixed_verdict(&sub(2, &["a"]), &budget());
        v.witnesses = vec![morph(2, &["a", "b"])];
        assert!(audit(&v).is_err());
    }
}
