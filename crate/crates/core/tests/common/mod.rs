//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use fixclose_core::whitehead::whitehead_autos;
use fixclose_core::{Alphabet, Letter, Morphism, SubgroupGraph, Word};
use proptest::prelude::*;
use rand::Rng;

pub fn f(rank: usize) -> Alphabet {
    Alphabet::new(rank).unwrap()
}

pub fn w(text: &str) -> Word {
    Word::parse(text).unwrap()
}

pub fn sub(rank: usize, gens: &[&str]) -> SubgroupGraph {
    let gens: Vec<Word> = gens.iter().map(|g| w(g)).collect();
    SubgroupGraph::from_generators(f(rank), &gens).unwrap()
}

/// A uniformly random reduced word of exactly `len` letters.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let x = Letter::from_code(rng.gen_range(0..2 * rank));
        if letters.last() != Some(&x.inverse()) {
            letters.push(x);
        }
    }
    Word::from_letters(letters)
}

pub fn random_gens<R: Rng>(rng: &mut R, rank: usize, count: usize, max_len: usize) -> Vec<Word> {
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_word(rng, rank, len)
        })
        .collect()
}

pub fn random_morphism<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Morphism {
    let images = (0..rank)
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            random_word(rng, rank, len)
        })
        .collect();
    Morphism::new(f(rank), images).unwrap()
}

/// Proptest strategy for reduced words over `rank` letters.
pub fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len)
        .prop_map(|codes| Word::from_letters(codes.into_iter().map(Letter::from_code)))
}

pub fn nonempty_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word(rank, max_len).prop_filter("non-empty", |w| !w.is_empty())
}

pub fn gens(
    rank: usize,
    count: std::ops::RangeInclusive<usize>,
    max_len: usize,
) -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(nonempty_word(rank, max_len), count)
}

pub fn morphism(rank: usize, max_len: usize) -> impl Strategy<Value = Morphism> {
    prop::collection::vec(word(rank, max_len), rank)
        .prop_map(move |images| Morphism::new(f(rank), images).unwrap())
}

/// Every reduced product of at most `factors` generators or inverses.
pub fn products(gens: &[Word], factors: usize) -> BTreeSet<Word> {
    let mut signed: Vec<Word> = gens.to_vec();
    signed.extend(gens.iter().map(Word::inverse));
    let mut all = BTreeSet::from([Word::identity()]);
    let mut layer = vec![Word::identity()];
    for _ in 0..factors {
        let mut next = Vec::new();
        for u in &layer {
            for g in &signed {
                let v = u.mul(g);
                if all.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    all
}

/// Membership by a deliberately naive fold: build the flower, merge the two
/// endpoints of any pair of equally labelled edges leaving one vertex until
/// none remain, then read `x` from the base.
pub fn naive_contains(gens: &[Word], x: &Word) -> bool {
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut next_vertex = 1;
    for g in gens {
        let mut at = 0;
        for (i, l) in g.letters().iter().enumerate() {
            let to = if i + 1 == g.len() {
                0
            } else {
                next_vertex += 1;
                next_vertex - 1
            };
            edges.push((at, l.code(), to));
            edges.push((to, l.inverse().code(), at));
            at = to;
        }
    }
    loop {
        let mut merge = None;
        'scan: for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = (edges[i], edges[j]);
                if a.0 == b.0 && a.1 == b.1 && a.2 != b.2 {
                    merge = Some((a.2.min(b.2), a.2.max(b.2)));
                    break 'scan;
                }
            }
        }
        let Some((keep, gone)) = merge else { break };
        for e in edges.iter_mut() {
            if e.0 == gone {
                e.0 = keep;
            }
            if e.2 == gone {
                e.2 = keep;
            }
        }
        edges.sort_unstable();
        edges.dedup();
    }
    let mut v = 0;
    for l in x.letters() {
        match edges.iter().find(|e| e.0 == v && e.1 == l.code()) {
            Some(e) => v = e.2,
            None => return false,
        }
    }
    v == 0
}

/// Breadth-first search over Whitehead images of `h` up to `depth` moves for
/// a one-vertex core graph.
pub fn ball_reaches_rose(h: &SubgroupGraph, depth: usize) -> bool {
    let autos = whitehead_autos(h.alphabet());
    let mut seen = BTreeSet::from([h.clone()]);
    let mut queue = VecDeque::from([(h.clone(), 0)]);
    while let Some((g, d)) = queue.pop_front() {
        if g.vertex_count() == 1 {
            return true;
        }
        if d == depth {
            continue;
        }
        for a in &autos {
            let t = g.image(&a.realized).unwrap();
            if seen.insert(t.clone()) {
                queue.push_back((t, d + 1));
            }
        }
    }
    false
}

/// Free-factor oracle for `H <= K`: rewrite `H` in the basis of `K`, then
/// search the Whitehead ball in that rank.
pub fn ball_free_factor(h: &SubgroupGraph, k: &SubgroupGraph, depth: usize) -> bool {
    if h.is_trivial() || h == k {
        return true;
    }
    let coords = h.rewrite_in(k).unwrap();
    let inner = SubgroupGraph::from_generators(f(k.rank()), &coords).unwrap();
    ball_reaches_rose(&inner, depth)
}
