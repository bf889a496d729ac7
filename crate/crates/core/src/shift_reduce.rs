//! Shift-reduce evaluation of binary trees on a stack.
//!
//! The minimum stack depth over all evaluation orders equals the Strahler
//! number, and the Sethi-Ullman order (larger label first) attains it.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::tree::{BinNode, BinTree, NodeId, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StackOp {
    Shift,
    Reduce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalStep {
    pub op: StackOp,
    /// Leaf payload for shifts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf: Option<String>,
    pub stack_depth_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalTrace {
    pub steps: Vec<EvalStep>,
    pub max_depth: usize,
}

impl fmt::Display for EvalTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            match (&step.op, &step.leaf) {
                (StackOp::Shift, Some(leaf)) => writeln!(f, "{:>4}  shift {leaf:<10} depth {}", i + 1, step.stack_depth_after)?,
                _ => writeln!(f, "{:>4}  reduce{:11}depth {}", i + 1, "", step.stack_depth_after)?,
            }
        }
        write!(f, "max depth {}", self.max_depth)
    }
}

/// Which child each inner node evaluates first, indexed by inner ordinal
/// (position in [`BinTree::inner_nodes`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalOrder(Vec<Side>);

impl TraversalOrder {
    pub fn new(first: Vec<Side>) -> Self {
        TraversalOrder(first)
    }

    /// Same side first at every inner node.
    pub fn uniform(t: &BinTree, side: Side) -> Self {
        TraversalOrder(vec![side; t.inner_count()])
    }

    /// Order number `bits` of the `2^inner_count` orders: bit `i` set means
    /// inner node `i` evaluates its right child first.
    pub fn from_bits(t: &BinTree, bits: u64) -> Self {
        TraversalOrder(
            (0..t.inner_count())
                .map(|i| if bits >> i & 1 == 1 { Side::Right } else { Side::Left })
                .collect(),
        )
    }

    pub fn sides(&self) -> &[Side] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftReduceError {
    #[error("order has {got} flags but the tree has {expected} inner nodes")]
    OrderMismatch { expected: usize, got: usize },
    #[error("{inner} inner nodes exceed the exhaustive search cap of {cap}")]
    CapExceeded { inner: usize, cap: usize },
}

/// Inner ordinal of every node (meaningless for leaves).
fn inner_ordinals(t: &BinTree) -> Vec<usize> {
    let mut ordinals = vec![usize::MAX; t.node_count()];
    for (ord, id) in t.inner_nodes().enumerate() {
        ordinals[id] = ord;
    }
    ordinals
}

fn run(t: &BinTree, ord: &TraversalOrder, ordinals: &[usize], record: bool) -> EvalTrace {
    enum Task {
        Visit(NodeId),
        Reduce,
    }
    let mut steps = Vec::new();
    let mut depth = 0usize;
    let mut max_depth = 0usize;
    let mut tasks = vec![Task::Visit(t.root())];
    while let Some(task) = tasks.pop() {
        match task {
            Task::Visit(id) => match t.node(id) {
                BinNode::Leaf(payload) => {
                    depth += 1;
                    max_depth = max_depth.max(depth);
                    if record {
                        steps.push(EvalStep {
                            op: StackOp::Shift,
                            leaf: Some(payload.clone()),
                            stack_depth_after: depth,
                        });
                    }
                }
                BinNode::Inner(l, r) => {
                    let (first, second) = match ord.0[ordinals[id]] {
                        Side::Left => (*l, *r),
                        Side::Right => (*r, *l),
                    };
                    tasks.push(Task::Reduce);
                    tasks.push(Task::Visit(second));
                    tasks.push(Task::Visit(first));
                }
            },
            Task::Reduce => {
                depth -= 1;
                if record {
                    steps.push(EvalStep {
                        op: StackOp::Reduce,
                        leaf: None,
                        stack_depth_after: depth,
                    });
                }
            }
        }
    }
    EvalTrace { steps, max_depth }
}

/// Simulates shift-reduce evaluation, recording the stack depth after each step.
pub fn evaluate(t: &BinTree, ord: &TraversalOrder) -> Result<EvalTrace, ShiftReduceError> {
    if ord.0.len() != t.inner_count() {
        return Err(ShiftReduceError::OrderMismatch {
            expected: t.inner_count(),
            got: ord.0.len(),
        });
    }
    Ok(run(t, ord, &inner_ordinals(t), true))
}

/// Evaluates the child with the larger label first; ties go left.
pub fn sethi_ullman_order(t: &BinTree) -> TraversalOrder {
    let labels = t.strahler_labels();
    TraversalOrder(
        t.inner_nodes()
            .map(|id| {
                let (l, r) = t.children(id).expect("inner node");
                if labels[r] > labels[l] {
                    Side::Right
                } else {
                    Side::Left
                }
            })
            .collect(),
    )
}

/// Largest `exhaustive_cap` accepted by [`min_stack_depth`].
pub const MAX_EXHAUSTIVE_INNER: usize = 24;

/// Minimum over every evaluation order of the maximum stack depth, by
/// exhaustive search over `2^inner` orders.
pub fn min_stack_depth(t: &BinTree, exhaustive_cap: usize) -> Result<usize, ShiftReduceError> {
    let inner = t.inner_count();
    let cap = exhaustive_cap.min(MAX_EXHAUSTIVE_INNER);
    if inner > cap {
        return Err(ShiftReduceError::CapExceeded { inner, cap });
    }
    let ordinals = inner_ordinals(t);
    let best = (0..1u64 << inner)
        .map(|bits| run(t, &TraversalOrder::from_bits(t, bits), &ordinals, false).max_depth)
        .min()
        .expect("at least one order");
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::strahler;

    fn expression() -> BinTree {
        // 1 + 2 * 3 ^ 4
        "(1,(2,(3,4)))".parse().unwrap()
    }

    #[test]
    fn single_leaf() {
        let t = BinTree::leaf("x");
        let trace = evaluate(&t, &TraversalOrder::uniform(&t, Side::Left)).unwrap();
        assert_eq!(trace.max_depth, 1);
        assert_eq!(trace.steps.len(), 1);
        assert!(sethi_ullman_order(&t).sides().is_empty());
        assert_eq!(min_stack_depth(&t, 10).unwrap(), 1);
    }

    #[test]
    fn expression_tree_depths() {
        let t = expression();
        let left = evaluate(&t, &TraversalOrder::uniform(&t, Side::Left)).unwrap();
        assert_eq!(left.max_depth, 4);
        let right = evaluate(&t, &TraversalOrder::uniform(&t, Side::Right)).unwrap();
        assert_eq!(right.max_depth, 2);
        let su = evaluate(&t, &sethi_ullman_order(&t)).unwrap();
        assert_eq!(su.max_depth, 2);
        assert_eq!(min_stack_depth(&t, 10).unwrap(), 2);
        assert_eq!(strahler(&t).get(), 2);
    }

    #[test]
    fn trace_shape() {
        let t = expression();
        let trace = evaluate(&t, &TraversalOrder::uniform(&t, Side::Left)).unwrap();
        let depths: Vec<usize> = trace.steps.iter().map(|s| s.stack_depth_after).collect();
        assert_eq!(depths, vec![1, 2, 3, 4, 3, 2, 1]);
        let shifted: Vec<&str> = trace.steps.iter().filter_map(|s| s.leaf.as_deref()).collect();
        assert_eq!(shifted, vec!["1", "2", "3", "4"]);
        let right = evaluate(&t, &TraversalOrder::uniform(&t, Side::Right)).unwrap();
        let shifted: Vec<&str> = right.steps.iter().filter_map(|s| s.leaf.as_deref()).collect();
        assert_eq!(shifted, vec!["4", "3", "2", "1"]);
    }

    #[test]
    fn complete_tree_every_order() {
        let t = BinTree::complete(2);
        for bits in 0..8 {
            let trace = evaluate(&t, &TraversalOrder::from_bits(&t, bits)).unwrap();
            assert_eq!(trace.max_depth, 3);
        }
    }

    #[test]
    fn errors() {
        let t = expression();
        assert_eq!(
            evaluate(&t, &TraversalOrder::new(vec![Side::Left])),
            Err(ShiftReduceError::OrderMismatch { expected: 3, got: 1 })
        );
        assert_eq!(min_stack_depth(&t, 2), Err(ShiftReduceError::CapExceeded { inner: 3, cap: 2 }));
    }
}
