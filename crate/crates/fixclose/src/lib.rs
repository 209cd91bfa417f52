//! Command-line front end for `fixclose-core`: text formats for words,
//! subgroups and morphisms, verdict reports that can be re-audited, and DOT
//! output for core graphs.

pub mod cli;
pub mod dot;
pub mod formats;
pub mod report;
