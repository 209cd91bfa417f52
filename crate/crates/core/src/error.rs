use alloc::string::String;

use crate::words::Word;

/// Which search cap was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cap {
    FringeVertices,
    FixedWordLength,
    LevelGraphStates,
    LevelGraphLength,
    WhiteheadRank,
    FreeFactorRank,
}

impl core::fmt::Display for Cap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let name = match self {
            Cap::FringeVertices => "fringe vertex cap",
            Cap::FixedWordLength => "fixed-word length cap",
            Cap::LevelGraphStates => "level-graph state cap",
            Cap::LevelGraphLength => "level-graph total-length cap",
            Cap::WhiteheadRank => "Whitehead rank cap",
            Cap::FreeFactorRank => "free-factor rank cap",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("alphabet mismatch: rank {rank} has no letter with index {index}")]
    AlphabetMismatch { rank: usize, index: usize },
    #[error("morphisms over different alphabets (rank {left} vs rank {right})")]
    RankMismatch { left: usize, right: usize },
    #[error("alphabet must have at least one letter")]
    EmptyAlphabet,
    #[error("morphism has {found} images but the alphabet has {expected} letters")]
    MissingImages { expected: usize, found: usize },
    #[error("root of the empty word is undefined")]
    EmptyRoot,
    #[error("word must be non-empty")]
    EmptyWord,
    #[error("word {0} is not cyclically reduced; conjugate it first")]
    NotCyclicallyReduced(Word),
    #[error("word {word} is not an element of the target subgroup")]
    NotASubgroup { word: Word },
    #[error("{cap} exceeded (limit {limit}, needed {needed})")]
    Budget {
        cap: Cap,
        limit: usize,
        needed: usize,
    },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Inconclusive(_))
    }
}

pub type Result<T> = core::result::Result<T, Error>;
