//! Exact-arithmetic toolkit for supersaturation in ranked posets: comparable
//! pair counting and lower bounds via random chains, the memoryless
//! level-uniform chain distribution on `{0,1,2}^n`, multi-stage
//! Kleitman-Winston containers, antichain enumeration, Dilworth widths by
//! bipartite matching, and seeded random-subset threshold experiments.
//!
//! Every count, probability and weight is a big integer or big rational;
//! floating point only appears in display-level report fields.

pub mod arith;
pub mod bitset;
pub mod chains;
pub mod checks;
pub mod containers;
pub mod digraph;
pub mod error;
pub mod gf;
pub mod matching;
pub mod poset;
pub mod random;
pub mod report;
pub mod supersat;
pub mod weights;

pub use error::{Error, Result};

/// Resource ceilings for enumeration-backed operations. Exceeding one is a
/// reported error, never a panic.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Limits {
    /// Largest ground set that may be streamed element by element.
    pub max_stream_elements: u64,
    /// Largest poset whose comparability closure is materialized.
    pub max_closure_elements: usize,
    /// Exhaustive subset sweeps run when `|P|` is at most this.
    pub max_exhaustive_bits: u32,
    /// Branch-and-bound minimum-comparable-pair search cap.
    pub max_branch_bound: u32,
    /// Per-level cap for exhaustive normalised-matching subset checks.
    pub max_level_subset_bits: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_stream_elements: 10_000_000,
            max_closure_elements: 50_000,
            max_exhaustive_bits: 24,
            max_branch_bound: 40,
            max_level_subset_bits: 22,
        }
    }
}
