//! Search caps shared by the bounded procedures.

/// Caps for Whitehead level-graph exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhiteheadBudget {
    /// Maximum number of tuples visited in one level graph.
    pub max_states: usize,
    /// Maximum total length of a level that may be explored.
    pub max_total_length: usize,
    /// Maximum ambient rank for stabilizer computations.
    pub max_rank: usize,
}

impl Default for WhiteheadBudget {
    fn default() -> Self {
        WhiteheadBudget {
            max_states: 50_000,
            max_total_length: 16,
            max_rank: 3,
        }
    }
}

/// Every cap used by the closure pipelines. Verdicts record the budget they ran under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Longest word enumerated by fixed-word and subgroup-element searches.
    pub max_len: usize,
    /// Largest core graph whose fringe is enumerated.
    pub fringe_cap: usize,
    pub whitehead: WhiteheadBudget,
    /// Largest subgroup rank for the free-factor descent.
    pub free_factor_max_rank: usize,
    /// Longest letter image tried by the retraction search.
    pub retraction_bound: usize,
    /// Search-tree nodes the retraction search may visit.
    pub retraction_nodes: usize,
    /// Iterations of the stable-image computation.
    pub max_iter: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_len: 10,
            fringe_cap: 8,
            whitehead: WhiteheadBudget::default(),
            free_factor_max_rank: 6,
            retraction_bound: 10,
            retraction_nodes: 2_000_000,
            max_iter: 8,
        }
    }
}
