//! Random instances and brute-force oracles shared by the CLI and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use fixclose_core::{Alphabet, Letter, SubgroupGraph, Word};
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
