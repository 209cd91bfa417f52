//! Whitehead automorphisms, length minimization of word tuples and generators
//! of pointwise stabilizers.
//!
//! Lengths are ordinary (not cyclic) word lengths: the stabilizers computed
//! here fix elements, not conjugacy classes. A stabilizer is generated by the
//! loops of the level graph at the minimal total length, conjugated back to
//! the input tuple.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::budget::WhiteheadBudget;
use crate::error::{Cap, Error, Result};
use crate::words::{Alphabet, Letter, Morphism, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WhiteheadKind {
    /// Signed permutation: generator `i` goes to the letter `images[i]`.
    TypeI { images: Vec<Letter> },
    /// Multiplier `a` and cut set `A` with `a ∈ A`, `a^-1 ∉ A`. A letter `y`
    /// other than `a^±1` maps to `y`, `ya`, `a^-1 y` or `a^-1 y a` according to
    /// whether `y` and `y^-1` lie in `A`.
    TypeII {
        multiplier: Letter,
        cut: Vec<Letter>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WhiteheadAuto {
    pub kind: WhiteheadKind,
    pub realized: Morphism,
    pub inverse: Morphism,
}

impl WhiteheadAuto {
    pub fn type_one(alphabet: Alphabet, images: Vec<Letter>) -> Self {
        let realized = Morphism::new(alphabet, images.iter().map(|&l| Word::letter(l)).collect())
            .expect("signed permutation");
        let mut inv = alloc::vec![Word::identity(); alphabet.rank()];
        for (i, l) in images.iter().enumerate() {
            inv[l.generator()] = Word::letter(Letter::new(i, l.is_inverse()));
        }
        let inverse = Morphism::new(alphabet, inv).expect("signed permutation");
        WhiteheadAuto {
            kind: WhiteheadKind::TypeI { images },
            realized,
            inverse,
        }
    }

    /// `cut` must contain `multiplier` and not its inverse.
    pub fn type_two(alphabet: Alphabet, multiplier: Letter, cut: &[Letter]) -> Self {
        let realized = type_two_morphism(alphabet, multiplier, cut);
        let inverse_cut: Vec<Letter> = cut
            .iter()
            .map(|&l| {
                if l == multiplier {
                    multiplier.inverse()
                } else {
                    l
                }
            })
            .collect();
        let inverse = type_two_morphism(alphabet, multiplier.inverse(), &inverse_cut);
        let mut cut = cut.to_vec();
        cut.sort_unstable();
        WhiteheadAuto {
            kind: WhiteheadKind::TypeII { multiplier, cut },
            realized,
            inverse,
        }
    }

    pub fn is_type_one(&self) -> bool {
        matches!(self.kind, WhiteheadKind::TypeI { .. })
    }
}

fn type_two_morphism(alphabet: Alphabet, a: Letter, cut: &[Letter]) -> Morphism {
    let aw = Word::letter(a);
    let images = alphabet
        .letters()
        .map(|y| {
            if y.generator() == a.generator() {
                return Word::letter(y);
            }
            let mut img = Word::letter(y);
            if cut.contains(&y) {
                img = img.mul(&aw);
            }
            if cut.contains(&y.inverse()) {
                img = aw.inverse().mul(&img);
            }
            img
        })
        .collect();
    Morphism::new(alphabet, images).expect("letters of the alphabet")
}

/// All type I automorphisms (including the identity) in lexicographic order of
/// their letter images.
pub fn type_one_autos(alphabet: Alphabet) -> Vec<WhiteheadAuto> {
    let n = alphabet.rank();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    perms.sort();
    for p in perms {
        for signs in 0..(1usize << n) {
            let images = p
                .iter()
                .enumerate()
                .map(|(i, &g)| Letter::new(g, signs >> i & 1 == 1))
                .collect();
            out.push(WhiteheadAuto::type_one(alphabet, images));
        }
    }
    out.sort_by(|x, y| match (&x.kind, &y.kind) {
        (WhiteheadKind::TypeI { images: a }, WhiteheadKind::TypeI { images: b }) => a.cmp(b),
        _ => core::cmp::Ordering::Equal,
    });
    out
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// All non-identity type II automorphisms, ordered by multiplier and then by
/// the membership pattern of the other letters.
pub fn type_two_autos(alphabet: Alphabet) -> Vec<WhiteheadAuto> {
    let n = alphabet.rank();
    let mut out = Vec::new();
    for a in alphabet.signed_letters() {
        let others: Vec<usize> = (0..n).filter(|&g| g != a.generator()).collect();
        for mask in 1..(1usize << (2 * others.len())) {
            let mut cut = alloc::vec![a];
            for (j, &g) in others.iter().enumerate() {
                if mask >> (2 * j) & 1 == 1 {
                    cut.push(Letter::new(g, false));
                }
                if mask >> (2 * j + 1) & 1 == 1 {
                    cut.push(Letter::new(g, true));
                }
            }
            out.push(WhiteheadAuto::type_two(alphabet, a, &cut));
        }
    }
    out
}

/// Type I followed by type II automorphisms; this index order is the
/// tie-breaking order of every greedy step.
pub fn whitehead_autos(alphabet: Alphabet) -> Vec<WhiteheadAuto> {
    let mut out = type_one_autos(alphabet);
    out.extend(type_two_autos(alphabet));
    out
}

fn apply_tuple(m: &Morphism, tuple: &[Word]) -> Vec<Word> {
    tuple.iter().map(|w| w.substitute(m.images())).collect()
}

pub fn total_length(tuple: &[Word]) -> usize {
    tuple.iter().map(Word::len).sum()
}

/// Total length of `m(tuple)`, giving up as soon as it exceeds `cap`.
fn image_length_capped(m: &Morphism, tuple: &[Word], cap: usize) -> usize {
    let mut total = 0;
    for w in tuple {
        total += w.substitute(m.images()).len();
        if total > cap {
            break;
        }
    }
    total
}

/// Output of [`minimize_tuple`]: `tuple = automorphism(input)` entrywise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizedTuple {
    pub tuple: Vec<Word>,
    pub automorphism: Morphism,
    pub inverse: Morphism,
}

/// Greedy strict descent by type II moves (lowest index first), then an
/// exhaustive search of the bottom level for a further reducing move.
///
/// Type I moves preserve length and conjugate the set of type II moves to
/// itself, so they are not needed to find reductions.
pub fn minimize_tuple(
    alphabet: Alphabet,
    tuple: &[Word],
    budget: &WhiteheadBudget,
) -> Result<MinimizedTuple> {
    for w in tuple {
        alphabet.check(w)?;
    }
    let autos = type_two_autos(alphabet);
    let mut cur = tuple.to_vec();
    let mut sigma = Morphism::identity(alphabet);
    let mut sigma_inv = Morphism::identity(alphabet);
    'descent: loop {
        let len = total_length(&cur);
        if let Some(w) = autos
            .iter()
            .find(|w| image_length_capped(&w.realized, &cur, len) < len)
        {
            cur = apply_tuple(&w.realized, &cur);
            sigma = sigma.compose(&w.realized)?;
            sigma_inv = w.inverse.compose(&sigma_inv)?;
            continue;
        }
        if len > budget.max_total_length {
            return Err(Error::Budget {
                cap: Cap::LevelGraphLength,
                limit: budget.max_total_length,
                needed: len,
            });
        }
        // Plateau search: states reachable by length-preserving moves.
        let mut index: BTreeMap<Vec<Word>, usize> = BTreeMap::new();
        let mut states: Vec<(Vec<Word>, usize, usize)> =
            alloc::vec![(cur.clone(), usize::MAX, usize::MAX)];
        index.insert(cur.clone(), 0);
        let mut head = 0;
        while head < states.len() {
            let s = states[head].0.clone();
            for (k, w) in autos.iter().enumerate() {
                let l = image_length_capped(&w.realized, &s, len);
                if l > len {
                    continue;
                }
                if l < len {
                    // Replay the path to `s`, then take the reducing move.
                    let mut path = alloc::vec![k];
                    let mut at = head;
                    while states[at].1 != usize::MAX {
                        path.push(states[at].2);
                        at = states[at].1;
                    }
                    for &step in path.iter().rev() {
                        let w = &autos[step];
                        cur = apply_tuple(&w.realized, &cur);
                        sigma = sigma.compose(&w.realized)?;
                        sigma_inv = w.inverse.compose(&sigma_inv)?;
                    }
                    continue 'descent;
                }
                let t = apply_tuple(&w.realized, &s);
                if !index.contains_key(&t) {
                    if states.len() >= budget.max_states {
                        return Err(Error::Budget {
                            cap: Cap::LevelGraphStates,
                            limit: budget.max_states,
                            needed: states.len() + 1,
                        });
                    }
                    index.insert(t.clone(), states.len());
                    states.push((t, head, k));
                }
            }
            head += 1;
        }
        return Ok(MinimizedTuple {
            tuple: cur,
            automorphism: sigma,
            inverse: sigma_inv,
        });
    }
}

/// Level graph at the minimal total length: tuples joined by Whitehead moves
/// (type I and II) that preserve total length. Vertex 0 is the base tuple.
#[derive(Debug, Clone)]
pub struct PeakGraph {
    pub vertices: Vec<Vec<Word>>,
    /// `(source, index into autos, target)`.
    pub edges: Vec<(usize, usize, usize)>,
    pub autos: Vec<WhiteheadAuto>,
}

impl PeakGraph {
    pub fn build(alphabet: Alphabet, base: &[Word], budget: &WhiteheadBudget) -> Result<PeakGraph> {
        let len = total_length(base);
        if len > budget.max_total_length {
            return Err(Error::Budget {
                cap: Cap::LevelGraphLength,
                limit: budget.max_total_length,
                needed: len,
            });
        }
        let autos = whitehead_autos(alphabet);
        let mut index: BTreeMap<Vec<Word>, usize> = BTreeMap::new();
        let mut vertices = alloc::vec![base.to_vec()];
        index.insert(base.to_vec(), 0);
        let mut edges = Vec::new();
        let mut head = 0;
        while head < vertices.len() {
            for (k, w) in autos.iter().enumerate() {
                if image_length_capped(&w.realized, &vertices[head], len) != len {
                    continue;
                }
                let t = apply_tuple(&w.realized, &vertices[head]);
                let target = match index.get(&t) {
                    Some(&i) => i,
                    None => {
                        if vertices.len() >= budget.max_states {
                            return Err(Error::Budget {
                                cap: Cap::LevelGraphStates,
                                limit: budget.max_states,
                                needed: vertices.len() + 1,
                            });
                        }
                        index.insert(t.clone(), vertices.len());
                        vertices.push(t);
                        vertices.len() - 1
                    }
                };
                edges.push((head, k, target));
            }
            head += 1;
        }
        Ok(PeakGraph {
            vertices,
            edges,
            autos,
        })
    }

    /// For each vertex, an automorphism carrying the base tuple to it along a
    /// breadth-first spanning tree, with its inverse.
    pub fn tree_paths(&self) -> Result<Vec<(Morphism, Morphism)>> {
        let alphabet = self.autos[0].realized.alphabet();
        let id = Morphism::identity(alphabet);
        let mut paths: Vec<Option<(Morphism, Morphism)>> = alloc::vec![None; self.vertices.len()];
        paths[0] = Some((id.clone(), id));
        // Edges are recorded in breadth-first order of their sources.
        for &(u, k, v) in &self.edges {
            if paths[v].is_none() {
                let (pu, pu_inv) = paths[u].clone().expect("sources are reached first");
                let w = &self.autos[k];
                paths[v] = Some((pu.compose(&w.realized)?, w.inverse.compose(&pu_inv)?));
            }
        }
        Ok(paths
            .into_iter()
            .map(|p| p.expect("level graph is connected"))
            .collect())
    }

    /// Loop automorphisms at the base: `path(u) · w · path(v)^-1` per edge, deduplicated,
    /// identity removed, in canonical order.
    pub fn loops(&self) -> Result<Vec<Morphism>> {
        let paths = self.tree_paths()?;
        let mut out = BTreeSet::new();
        for &(u, k, v) in &self.edges {
            let g = paths[u]
                .0
                .compose(&self.autos[k].realized)?
                .compose(&paths[v].1)?;
            if !g.is_identity() {
                out.insert(g);
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// Generators of the pointwise stabilizer `{σ ∈ Aut(F) : σ(t_i) = t_i for all i}`.
///
/// A budget error means the generator set is unavailable; it must not be read
/// as an empty (trivial) stabilizer.
pub fn stabilizer_generators(
    alphabet: Alphabet,
    tuple: &[Word],
    budget: &WhiteheadBudget,
) -> Result<Vec<Morphism>> {
    if alphabet.rank() > budget.max_rank {
        return Err(Error::Budget {
            cap: Cap::WhiteheadRank,
            limit: budget.max_rank,
            needed: alphabet.rank(),
        });
    }
    let tuple: Vec<Word> = tuple.iter().filter(|w| !w.is_empty()).cloned().collect();
    let min = minimize_tuple(alphabet, &tuple, budget)?;
    let peak = PeakGraph::build(alphabet, &min.tuple, budget)?;
    let mut out = BTreeSet::new();
    for g in peak.loops()? {
        let g = min.automorphism.compose(&g)?.compose(&min.inverse)?;
        if g.is_identity() {
            continue;
        }
        for w in &tuple {
            if g.apply(w)? != *w {
                return Err(Error::Inconclusive(alloc::format!(
                    "level-graph loop does not fix {w}; peak reduction anomaly"
                )));
            }
        }
        out.insert(g);
    }
    Ok(out.into_iter().collect())
}

/// Inverse of an automorphism, found by minimizing its tuple of letter images
/// to a signed permutation of the letters. `None` if `m` is not an automorphism.
pub fn invert(m: &Morphism, budget: &WhiteheadBudget) -> Result<Option<Morphism>> {
    let alphabet = m.alphabet();
    if m.images().iter().any(Word::is_empty) {
        return Ok(None);
    }
    let min = minimize_tuple(alphabet, m.images(), budget)?;
    let mut perm_inv = alloc::vec![Word::identity(); alphabet.rank()];
    let mut seen = alloc::vec![false; alphabet.rank()];
    for (i, w) in min.tuple.iter().enumerate() {
        if w.len() != 1 || seen[w.letters()[0].generator()] {
            return Ok(None);
        }
        let l = w.letters()[0];
        seen[l.generator()] = true;
        perm_inv[l.generator()] = Word::letter(Letter::new(i, l.is_inverse()));
    }
    let perm_inv = Morphism::new(alphabet, perm_inv)?;
    Ok(Some(min.automorphism.compose(&perm_inv)?))
}
