//! Fixed subgroups of free groups.
//!
//! Decides, with explicit soundness levels, whether a finitely generated
//! subgroup `H` of a free group `F` is the fixed subgroup of a family of
//! automorphisms (auto-fixed) or of endomorphisms (endo-fixed).
//!
//! The building blocks are folded core graphs ([`stallings`]), the fringe and
//! algebraic extensions of a subgroup ([`extensions`]), Whitehead automorphisms
//! and pointwise stabilizers ([`whitehead`]), bounded fixed-word enumeration,
//! stable images and retraction search ([`fixpoints`]), and the two closure
//! pipelines that combine them into [`closure::Verdict`]s.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod budget;
pub mod closure;
pub mod error;
pub mod extensions;
pub mod fixpoints;
pub mod stallings;
pub mod whitehead;
pub mod words;

mod union_find;

#[cfg(test)]
mod testutil;

pub use budget::{Budget, WhiteheadBudget};
pub use closure::{Answer, Question, Verdict};
pub use error::{Cap, Error, Result};
pub use extensions::{ExtensionKind, ExtensionSet};
pub use fixpoints::{ExactFix, FixApproximation, FixRule, RetractionSearch, StableImageResult};
pub use stallings::SubgroupGraph;
pub use whitehead::{PeakGraph, WhiteheadAuto, WhiteheadKind};
pub use words::{Alphabet, Letter, Morphism, ParseWordError, Word};
