//! Fixed words, exactly known fixed subgroups, stable images, retraction
//! search and family thinning.
//!
//! No general algorithm for `Fix(φ)` is used. Fixed words are enumerated up
//! to a length bound, and a small set of rules identifies `Fix(φ)` exactly for
//! special morphisms: idempotents, inner automorphisms, maps on a rank-one
//! group, letter-block decompositions, and restriction to a stable image.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Cap, Error, Result};
use crate::stallings::SubgroupGraph;
use crate::union_find::UnionFind;
use crate::words::{Alphabet, Letter, Morphism, Word};

/// Image of a growing prefix under one morphism, with undo.
struct ImageStack<'a> {
    images: &'a [Word],
    buf: Vec<Letter>,
    log: Vec<(usize, Vec<Letter>)>,
}

impl<'a> ImageStack<'a> {
    fn new(m: &'a Morphism) -> Self {
        ImageStack {
            images: m.images(),
            buf: Vec::new(),
            log: Vec::new(),
        }
    }

    fn push(&mut self, x: Letter) {
        let img = &self.images[x.generator()];
        let img = if x.is_inverse() {
            img.inverse()
        } else {
            img.clone()
        };
        let mut popped = Vec::new();
        let mut i = 0;
        while i < img.len() && self.buf.last() == Some(&img.letters()[i].inverse()) {
            popped.push(self.buf.pop().expect("non-empty"));
            i += 1;
        }
        self.log.push((self.buf.len(), popped));
        self.buf.extend_from_slice(&img.letters()[i..]);
    }

    fn pop(&mut self) {
        let (len, popped) = self.log.pop().expect("matched push");
        self.buf.truncate(len);
        self.buf.extend(popped.into_iter().rev());
    }

    /// `|p^-1 · image(p)|`.
    fn displacement(&self, p: &[Letter]) -> usize {
        let common = p.iter().zip(&self.buf).take_while(|(x, y)| x == y).count();
        p.len() + self.buf.len() - 2 * common
    }
}

fn check_len(max_len: usize, cap: usize) -> Result<()> {
    if max_len > cap {
        return Err(Error::Budget {
            cap: Cap::FixedWordLength,
            limit: cap,
            needed: max_len,
        });
    }
    Ok(())
}

/// Calls `visit` on every reduced word of length at most `max_len` fixed by
/// every morphism in `ms`, in depth-first order; stops early when `visit`
/// returns `false`.
///
/// A prefix `p` is abandoned once `|p^-1 g(p)|` exceeds what the remaining
/// `r` letters can repair, namely `r (1 + max |g(x)|)`.
pub fn for_each_fixed<F>(
    alphabet: Alphabet,
    ms: &[Morphism],
    max_len: usize,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&Word) -> bool,
{
    for m in ms {
        if m.alphabet() != alphabet {
            return Err(Error::RankMismatch {
                left: alphabet.rank(),
                right: m.rank(),
            });
        }
    }
    let mut stacks: Vec<ImageStack<'_>> = ms.iter().map(ImageStack::new).collect();
    let slack: Vec<usize> = ms.iter().map(|m| 1 + m.max_image_len()).collect();
    let letters: Vec<Letter> = alphabet.signed_letters().collect();
    let mut prefix: Vec<Letter> = Vec::new();

    fn walk<F: FnMut(&Word) -> bool>(
        stacks: &mut [ImageStack<'_>],
        slack: &[usize],
        letters: &[Letter],
        prefix: &mut Vec<Letter>,
        max_len: usize,
        visit: &mut F,
    ) -> bool {
        if stacks.iter().all(|s| s.buf == *prefix)
            && !visit(&Word::from_letters(prefix.iter().copied()))
        {
            return false;
        }
        if prefix.len() == max_len {
            return true;
        }
        for &x in letters {
            if prefix.last() == Some(&x.inverse()) {
                continue;
            }
            prefix.push(x);
            stacks.iter_mut().for_each(|s| s.push(x));
            let remaining = max_len - prefix.len();
            let viable = stacks
                .iter()
                .zip(slack)
                .all(|(s, &k)| s.displacement(prefix) <= remaining * k);
            let go_on = !viable || walk(stacks, slack, letters, prefix, max_len, visit);
            stacks.iter_mut().for_each(|s| s.pop());
            prefix.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    walk(
        &mut stacks,
        &slack,
        &letters,
        &mut prefix,
        max_len,
        &mut visit,
    );
    Ok(())
}

/// Words of length at most `max_len` fixed by every morphism of `ms`, in
/// shortlex order.
pub fn fixed_words_all(
    alphabet: Alphabet,
    ms: &[Morphism],
    max_len: usize,
    cap: usize,
) -> Result<Vec<Word>> {
    check_len(max_len, cap)?;
    let mut out = Vec::new();
    for_each_fixed(alphabet, ms, max_len, |w| {
        out.push(w.clone());
        true
    })?;
    out.sort();
    Ok(out)
}

/// Words of length at most `max_len` fixed by `m`, in shortlex order.
pub fn fixed_words(m: &Morphism, max_len: usize, cap: usize) -> Result<Vec<Word>> {
    fixed_words_all(m.alphabet(), core::slice::from_ref(m), max_len, cap)
}

/// Why a fixed subgroup is known exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FixRule {
    /// `φ² = φ`, so `Fix(φ)` is the image of `φ`.
    Idempotent,
    /// `φ` is conjugation by `w`; `Fix(φ)` is the centralizer `<root(w)>`.
    Inner(Word),
    /// Rank one: `a ↦ a^k` with `k ≠ 1` fixes only the identity.
    RankOne,
    /// The letters split into blocks preserved by an injective `φ`; the fixed
    /// subgroup is the free product of the fixed subgroups of the blocks.
    Blocks(Vec<FixRule>),
    /// The stable image is trivial, so only the identity is fixed.
    TrivialStableImage,
    /// `Fix(φ)` lies in the stable image `K ≠ F`; computed from the
    /// restriction of `φ` to `K` in the coordinates of `K`.
    StableImage(Box<FixRule>),
}

impl fmt::Display for FixRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixRule::Idempotent => f.write_str("idempotent"),
            FixRule::Inner(w) => write!(f, "inner({w})"),
            FixRule::RankOne => f.write_str("rank-one"),
            FixRule::Blocks(rules) => {
                f.write_str("blocks(")?;
                for (i, r) in rules.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
            FixRule::TrivialStableImage => f.write_str("trivial-stable-image"),
            FixRule::StableImage(r) => write!(f, "stable-image({r})"),
        }
    }
}

/// `Fix(φ)` together with the rule certifying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactFix {
    pub subgroup: SubgroupGraph,
    pub rule: FixRule,
}

const EXACT_DEPTH: usize = 4;

/// The fixed subgroup of `m` when one of the exact rules applies.
pub fn exact_fix(m: &Morphism, max_iter: usize) -> Result<Option<ExactFix>> {
    exact_fix_at(m, max_iter, EXACT_DEPTH)
}

fn exact_fix_at(m: &Morphism, max_iter: usize, depth: usize) -> Result<Option<ExactFix>> {
    let alphabet = m.alphabet();
    if m.is_idempotent() {
        let image = SubgroupGraph::whole(alphabet).image(m)?;
        return Ok(Some(ExactFix {
            subgroup: image,
            rule: FixRule::Idempotent,
        }));
    }
    if let Some(w) = m.as_conjugation() {
        let (root, _) = w.element_root()?;
        let subgroup = SubgroupGraph::from_generators(alphabet, &[root])?;
        return Ok(Some(ExactFix {
            subgroup,
            rule: FixRule::Inner(w),
        }));
    }
    if alphabet.rank() == 1 {
        // Not idempotent, so a ↦ a^k with k ∉ {0, 1}.
        return Ok(Some(ExactFix {
            subgroup: SubgroupGraph::trivial(alphabet),
            rule: FixRule::RankOne,
        }));
    }
    if depth == 0 {
        return Ok(None);
    }
    if let Some(found) = block_fix(m, max_iter, depth)? {
        return Ok(Some(found));
    }
    let stable = stable_image(m, max_iter);
    if !stable.stabilized || stable.subgroup.is_whole() {
        return Ok(None);
    }
    if stable.subgroup.is_trivial() {
        return Ok(Some(ExactFix {
            subgroup: stable.subgroup,
            rule: FixRule::TrivialStableImage,
        }));
    }
    let k = &stable.subgroup;
    let restricted = restriction(m, k)?;
    match exact_fix_at(&restricted, max_iter, depth - 1)? {
        Some(inner) => {
            let basis = k.basis();
            let gens: Vec<Word> = inner
                .subgroup
                .basis()
                .iter()
                .map(|w| w.substitute(&basis))
                .collect();
            let subgroup = SubgroupGraph::from_generators(alphabet, &gens)?;
            Ok(Some(ExactFix {
                subgroup,
                rule: FixRule::StableImage(Box::new(inner.rule)),
            }))
        }
        None => Ok(None),
    }
}

/// Splits the letters into the finest blocks such that each image only uses
/// letters of its own block. With at least two blocks and `m` injective, a
/// reduced product of block syllables maps to a reduced product of non-trivial
/// syllables in the same blocks, so `Fix(m)` is the free product of the
/// blockwise fixed subgroups.
fn block_fix(m: &Morphism, max_iter: usize, depth: usize) -> Result<Option<ExactFix>> {
    let alphabet = m.alphabet();
    let n = alphabet.rank();
    let mut uf = UnionFind::new(n);
    for (i, img) in m.images().iter().enumerate() {
        for x in img.letters() {
            uf.union(i, x.generator());
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = alloc::vec![usize::MAX; n];
    for i in 0..n {
        let r = uf.find(i);
        if block_of[r] == usize::MAX {
            block_of[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of[r]].push(i);
    }
    if blocks.len() < 2 || !m.is_automorphism() {
        return Ok(None);
    }
    let mut rules = Vec::new();
    let mut gens = Vec::new();
    for block in &blocks {
        let sub = Alphabet::new(block.len())?;
        let mut local = alloc::vec![Word::identity(); n];
        for (j, &g) in block.iter().enumerate() {
            local[g] = Word::letter(Letter::positive(j));
        }
        let images: Vec<Word> = block
            .iter()
            .map(|&g| m.image_of(g).substitute(&local))
            .collect();
        let restricted = Morphism::new(sub, images)?;
        let Some(inner) = exact_fix_at(&restricted, max_iter, depth - 1)? else {
            return Ok(None);
        };
        let back: Vec<Word> = block
            .iter()
            .map(|&g| Word::letter(Letter::positive(g)))
            .collect();
        gens.extend(inner.subgroup.basis().iter().map(|w| w.substitute(&back)));
        rules.push(inner.rule);
    }
    let subgroup = SubgroupGraph::from_generators(alphabet, &gens)?;
    Ok(Some(ExactFix {
        subgroup,
        rule: FixRule::Blocks(rules),
    }))
}

/// `Fix(conj_w)`, the maximal cyclic subgroup containing `w`.
pub fn exact_fix_inner(alphabet: Alphabet, w: &Word) -> Result<SubgroupGraph> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(w.clone()));
    }
    let (root, _) = w.root()?;
    SubgroupGraph::from_generators(alphabet, &[root])
}

/// Bounded approximation of `Fix(ms)` from below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixApproximation {
    pub morphisms: Vec<Morphism>,
    pub length_bound: usize,
    /// Generated by the fixed words of length at most `length_bound`.
    pub subgroup: SubgroupGraph,
    /// `subgroup` equals `Fix(ms)` as certified by `rules`.
    pub exact: bool,
    /// One rule per morphism when every morphism has an exactly known fixed subgroup.
    pub rules: Vec<FixRule>,
    /// The exact intersection when `rules` is non-empty.
    pub certified: Option<SubgroupGraph>,
}

pub fn fix_approx(
    ms: &[Morphism],
    max_len: usize,
    cap: usize,
    max_iter: usize,
) -> Result<FixApproximation> {
    let Some(first) = ms.first() else {
        return Err(Error::Inconclusive(String::from("empty morphism family")));
    };
    let alphabet = first.alphabet();
    let moving: Vec<Morphism> = ms.iter().filter(|m| !m.is_identity()).cloned().collect();
    check_len(max_len, cap)?;
    let subgroup = if moving.is_empty() {
        SubgroupGraph::whole(alphabet)
    } else {
        let mut gens: Vec<Word> = Vec::new();
        let mut current = SubgroupGraph::trivial(alphabet);
        let mut words = Vec::new();
        for_each_fixed(alphabet, &moving, max_len, |w| {
            words.push(w.clone());
            true
        })?;
        words.sort();
        for w in words {
            if !current.contains(&w) {
                gens.push(w);
                current = SubgroupGraph::from_generators(alphabet, &gens)?;
            }
        }
        current
    };
    let mut rules = Vec::new();
    let mut certified = Some(SubgroupGraph::whole(alphabet));
    for m in ms {
        match exact_fix(m, max_iter)? {
            Some(e) => {
                certified = Some(certified.expect("still certified").intersect(&e.subgroup)?);
                rules.push(e.rule);
            }
            None => {
                certified = None;
                rules.clear();
                break;
            }
        }
    }
    let exact = certified.as_ref() == Some(&subgroup);
    Ok(FixApproximation {
        morphisms: ms.to_vec(),
        length_bound: max_len,
        subgroup,
        exact,
        rules,
        certified,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableImageResult {
    pub subgroup: SubgroupGraph,
    pub iterations: usize,
    pub stabilized: bool,
}

/// Iterates `K_0 = F`, `K_{t+1} = m(K_t)` until two consecutive terms agree
/// or `max_iter` images have been taken.
pub fn stable_image(m: &Morphism, max_iter: usize) -> StableImageResult {
    let mut k = SubgroupGraph::whole(m.alphabet());
    for t in 0..max_iter {
        let next = k.image(m).expect("same alphabet");
        if next == k {
            return StableImageResult {
                subgroup: k,
                iterations: t,
                stabilized: true,
            };
        }
        k = next;
    }
    StableImageResult {
        subgroup: k,
        iterations: max_iter,
        stabilized: false,
    }
}

/// The restriction of `m` to an invariant subgroup `k`, in the coordinates of
/// the basis of `k`.
pub fn restriction(m: &Morphism, k: &SubgroupGraph) -> Result<Morphism> {
    let inner = Alphabet::new(k.rank().max(1))?;
    if k.is_trivial() {
        return Err(Error::EmptyAlphabet);
    }
    let images = k
        .basis()
        .iter()
        .map(|w| k.coordinates(&m.apply(w)?))
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(inner, images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RetractionSearch {
    Found(Morphism),
    /// No retraction has letter images of length at most `bound`.
    NotFound {
        bound: usize,
    },
    /// The node or candidate cap was reached before the search space at
    /// `bound` was exhausted.
    Truncated {
        bound: usize,
    },
}

impl RetractionSearch {
    pub fn found(&self) -> Option<&Morphism> {
        match self {
            RetractionSearch::Found(m) => Some(m),
            _ => None,
        }
    }
}

/// `m` maps every letter into `h` and fixes every basis word of `h`, so `m`
/// is a retraction onto `h` and `Fix(m) = h`.
pub fn is_retraction(m: &Morphism, h: &SubgroupGraph) -> bool {
    m.alphabet() == h.alphabet()
        && m.images().iter().all(|w| h.contains(w))
        && h.basis().iter().all(|w| m.apply(w).as_ref() == Ok(w))
}

struct RetractionSearcher<'a> {
    basis: &'a [Word],
    bound: usize,
    assigned: Vec<Option<Word>>,
    nodes: usize,
    max_nodes: usize,
    exhausted_nodes: bool,
}

impl RetractionSearcher<'_> {
    /// Necessary conditions on the basis words given the current partial
    /// assignment: assigned prefixes and suffixes must leave a remainder the
    /// unassigned letters can still produce.
    fn consistent(&self) -> bool {
        for h in self.basis {
            let letters = h.letters();
            let mut image = Word::identity();
            let mut k = 0;
            while k < letters.len() {
                match &self.assigned[letters[k].generator()] {
                    Some(img) => {
                        let img = if letters[k].is_inverse() {
                            img.inverse()
                        } else {
                            img.clone()
                        };
                        image = image.mul(&img);
                        k += 1;
                    }
                    None => break,
                }
            }
            let rest = letters.len() - k;
            if rest == 0 {
                if image != *h {
                    return false;
                }
                continue;
            }
            if image.inverse().mul(h).len() > self.bound * rest {
                return false;
            }
            let mut image = Word::identity();
            let mut j = letters.len();
            while j > k {
                match &self.assigned[letters[j - 1].generator()] {
                    Some(img) => {
                        let img = if letters[j - 1].is_inverse() {
                            img.inverse()
                        } else {
                            img.clone()
                        };
                        image = img.mul(&image);
                        j -= 1;
                    }
                    None => break,
                }
            }
            if h.mul(&image.inverse()).len() > self.bound * (j - k) {
                return false;
            }
        }
        true
    }

    fn search(&mut self, order: &[usize], candidates: &[Vec<Word>]) -> bool {
        let Some((&g, rest)) = order.split_first() else {
            return true;
        };
        for c in &candidates[g] {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                self.exhausted_nodes = true;
                return false;
            }
            self.assigned[g] = Some(c.clone());
            if self.consistent() && self.search(rest, candidates) {
                return true;
            }
            if self.exhausted_nodes {
                return false;
            }
        }
        self.assigned[g] = None;
        false
    }
}

/// Bounded search for a retraction `F -> H`: letter images are elements of
/// `H` of length at most `bound`, tried in shortlex order, letters taken in
/// order of first appearance in the basis of `H`.
pub fn find_retraction(h: &SubgroupGraph, bound: usize, max_nodes: usize) -> RetractionSearch {
    let alphabet = h.alphabet();
    let n = alphabet.rank();
    let basis = h.basis();
    let mut order = Vec::new();
    for w in &basis {
        for x in w.letters() {
            if !order.contains(&x.generator()) {
                order.push(x.generator());
            }
        }
    }
    let (elements, truncated) = h.elements_up_to(bound, max_nodes);
    let candidates: Vec<Vec<Word>> = (0..n)
        .map(|g| {
            let x = Word::letter(Letter::positive(g));
            if h.contains(&x) {
                alloc::vec![x]
            } else {
                elements.clone()
            }
        })
        .collect();
    let mut searcher = RetractionSearcher {
        basis: &basis,
        bound,
        assigned: alloc::vec![None; n],
        nodes: 0,
        max_nodes,
        exhausted_nodes: false,
    };
    if searcher.search(&order, &candidates) {
        let images = searcher
            .assigned
            .into_iter()
            .map(|w| w.unwrap_or_else(Word::identity))
            .collect();
        let rho = Morphism::new(alphabet, images).expect("one image per letter");
        debug_assert!(is_retraction(&rho, h) && rho.is_idempotent());
        return RetractionSearch::Found(rho);
    }
    if truncated || searcher.exhausted_nodes {
        RetractionSearch::Truncated { bound }
    } else {
        RetractionSearch::NotFound { bound }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFamily {
    pub members: Vec<Morphism>,
    /// The greedy chain needed more than `2n` members at this length bound.
    pub warning: bool,
}

/// Greedy thinning: repeatedly add the morphism that most shrinks the common
/// bounded fixed-word set, until it matches that of the whole family.
pub fn reduce_family(ms: &[Morphism], max_len: usize, cap: usize) -> Result<ReducedFamily> {
    check_len(max_len, cap)?;
    let mut distinct: Vec<Morphism> = Vec::new();
    for m in ms {
        if !distinct.contains(m) {
            distinct.push(m.clone());
        }
    }
    let Some(first) = distinct.first().cloned() else {
        return Ok(ReducedFamily {
            members: Vec::new(),
            warning: false,
        });
    };
    let alphabet = first.alphabet();
    // `None` stands for every word (the identity fixes everything).
    let sets: Vec<Option<BTreeSet<Word>>> = distinct
        .iter()
        .map(|m| {
            if m.is_identity() {
                Ok(None)
            } else {
                Ok(Some(fixed_words(m, max_len, cap)?.into_iter().collect()))
            }
        })
        .collect::<Result<_>>()?;
    let target: Option<BTreeSet<Word>> = sets
        .iter()
        .fold(None, |acc, s| meet(acc.as_ref(), s.as_ref()));
    let mut chosen: Vec<usize> = Vec::new();
    let mut current: Option<BTreeSet<Word>> = None;
    while current != target {
        let mut best: Option<(usize, usize)> = None;
        for (i, s) in sets.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let size = meet(current.as_ref(), s.as_ref()).map_or(usize::MAX, |s| s.len());
            if best.map_or(true, |(_, b)| size < b) {
                best = Some((i, size));
            }
        }
        let Some((i, _)) = best else { break };
        current = meet(current.as_ref(), sets[i].as_ref());
        chosen.push(i);
    }
    if chosen.is_empty() {
        chosen.push(0);
    }
    chosen.sort_unstable();
    let members: Vec<Morphism> = chosen.into_iter().map(|i| distinct[i].clone()).collect();
    let warning = members.len() > 2 * alphabet.rank();
    Ok(ReducedFamily { members, warning })
}

fn meet(a: Option<&BTreeSet<Word>>, b: Option<&BTreeSet<Word>>) -> Option<BTreeSet<Word>> {
    match (a, b) {
        (None, None) => None,
        (Some(s), None) | (None, Some(s)) => Some(s.clone()),
        (Some(s), Some(t)) => Some(s.intersection(t).cloned().collect()),
    }
}
