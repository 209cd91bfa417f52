//! Shorthands for unit tests.

use alloc::vec::Vec;

use crate::stallings::SubgroupGraph;
use crate::words::{Alphabet, Morphism, Word};

pub(crate) fn w(text: &str) -> Word {
    Word::parse(text).unwrap()
}

pub(crate) fn morph(rank: usize, images: &[&str]) -> Morphism {
    Morphism::new(
        Alphabet::new(rank).unwrap(),
        images.iter().map(|t| w(t)).collect(),
    )
    .unwrap()
}

pub(crate) fn sub(rank: usize, gens: &[&str]) -> SubgroupGraph {
    let gens: Vec<Word> = gens.iter().map(|t| w(t)).collect();
    SubgroupGraph::from_generators(Alphabet::new(rank).unwrap(), &gens).unwrap()
}
