//! Strahler numbers of sentence structures.
//!
//! Dependency trees are binarized (by relation priority or by head-distance
//! heuristics), bracketed by the exact upper and lower Strahler limits over
//! all binarizations, and compared against exact statistics of random binary
//! and plane tree ensembles. The shift-reduce module checks the stack-depth
//! reading of the Strahler number.

pub mod binarize;
pub mod conllu;
pub mod ensembles;
pub mod limits;
pub mod shift_reduce;
pub mod stats;
pub mod tree;

pub use binarize::{all_binarizations, binarize, Binary2Order, BinarizeError, BinarizeMethod, PriorityTable};
pub use conllu::{parse_conllu, scan_corpus, CorpusSource, IngestReport, SentenceOutcome};
pub use ensembles::{
    catalan_binary_count, combine, r2_limits, r2_strahler_distribution, r2_table, r_limit_table, r_state_table, st, state_of,
    EnsembleError, EnsembleTable, StateMultiset,
};
pub use limits::{f_max, f_min, it, limit_pair, LimitMode, LimitPair};
pub use shift_reduce::{evaluate, min_stack_depth, sethi_ullman_order, EvalTrace, TraversalOrder};
pub use stats::{aggregate, analyze, histogram, resample_r2, AggregateRow, AnalysisConfig, SentenceRecord};
pub use tree::{depth, strahler, validate_dep_tree, BinTree, DepNode, DepTree, DepTreeError, StrahlerValue};
