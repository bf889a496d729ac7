//! Upper and lower Strahler limits of a dependency tree over all of its
//! binarizations.
//!
//! Each node folds its children's limits with [`it`]: ascending order with the
//! head counted first gives the maximum, descending order with the head
//! counted last gives the minimum. Word order and projectivity are ignored.

use serde::{Deserialize, Serialize};

use crate::tree::DepTree;

/// `x + 1` when `x == y`, otherwise `max(x, y)`.
pub fn it(x: u32, y: u32) -> u32 {
    if x == y {
        x + 1
    } else {
        x.max(y)
    }
}

/// Which limit a fold computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitMode {
    Max,
    Min,
}

/// Limit of a node whose children have the given limits.
///
/// The values need not be sorted; an empty slice is a leaf.
pub fn fold_children(values: &[u32], mode: LimitMode) -> u32 {
    if values.is_empty() {
        return 1;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    fold_sorted(&sorted, mode)
}

/// Same as [`fold_children`] for values already sorted ascending.
pub(crate) fn fold_sorted(ascending: &[u32], mode: LimitMode) -> u32 {
    if ascending.is_empty() {
        return 1;
    }
    match mode {
        LimitMode::Max => ascending.iter().fold(it(0, 1), |acc, &v| it(acc, v)),
        LimitMode::Min => it(ascending.iter().rev().fold(0, |acc, &v| it(acc, v)), 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LimitPair {
    pub lower: u32,
    pub upper: u32,
}

/// Limit of every node in the tree, indexed like [`DepTree::nodes`].
pub fn node_limits(t: &DepTree, mode: LimitMode) -> Vec<u32> {
    let mut values = vec![0u32; t.len()];
    let mut scratch = Vec::new();
    for &v in t.post_order() {
        scratch.clear();
        scratch.extend(t.children(v).iter().map(|&c| values[c]));
        scratch.sort_unstable();
        values[v] = fold_sorted(&scratch, mode);
    }
    values
}

/// Maximum Strahler number over all binarizations.
pub fn f_max(t: &DepTree) -> u32 {
    node_limits(t, LimitMode::Max)[t.root()]
}

/// Minimum Strahler number over all binarizations.
pub fn f_min(t: &DepTree) -> u32 {
    node_limits(t, LimitMode::Min)[t.root()]
}

pub fn limit_pair(t: &DepTree) -> LimitPair {
    LimitPair {
        lower: f_min(t),
        upper: f_max(t),
    }
}
