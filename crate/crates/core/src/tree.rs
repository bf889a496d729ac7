//! Dependency trees, binary trees and the Strahler number.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Strahler number of a binary tree (or subtree). Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrahlerValue(u32);

impl StrahlerValue {
    pub const LEAF: StrahlerValue = StrahlerValue(1);

    /// Returns `None` for zero.
    pub fn new(value: u32) -> Option<Self> {
        (value >= 1).then_some(StrahlerValue(value))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Value of an inner node whose children have values `self` and `other`.
    pub fn combine(self, other: StrahlerValue) -> StrahlerValue {
        if self == other {
            StrahlerValue(self.0 + 1)
        } else {
            StrahlerValue(self.0.max(other.0))
        }
    }
}

impl fmt::Display for StrahlerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<StrahlerValue> for u32 {
    fn from(v: StrahlerValue) -> u32 {
        v.0
    }
}

/// Identifier of a node inside a [`BinTree`] arena.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BinNode {
    Leaf(String),
    Inner(NodeId, NodeId),
}

/// Which child of an inner node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A full binary tree stored as an arena.
///
/// Children always precede their parent in the arena and the root is the
/// last node, so a forward scan is a valid bottom-up traversal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinTree {
    nodes: Vec<BinNode>,
}

impl BinTree {
    pub fn leaf(payload: impl Into<String>) -> BinTree {
        BinTree {
            nodes: vec![BinNode::Leaf(payload.into())],
        }
    }

    /// Joins two trees under a new root.
    pub fn join(left: BinTree, right: BinTree) -> BinTree {
        let mut builder = BinTreeBuilder::with_capacity(left.nodes.len() + right.nodes.len() + 1);
        let l = builder.graft(&left);
        let r = builder.graft(&right);
        let root = builder.inner(l, r);
        builder.finish(root)
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn node(&self, id: NodeId) -> &BinNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[BinNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    pub fn inner_count(&self) -> usize {
        self.nodes.len() / 2
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        matches!(self.nodes[id], BinNode::Leaf(_))
    }

    pub fn children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        match self.nodes[id] {
            BinNode::Inner(l, r) => Some((l, r)),
            BinNode::Leaf(_) => None,
        }
    }

    /// Ids of inner nodes in arena order. The position of an id in this
    /// sequence is its inner ordinal.
    pub fn inner_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, BinNode::Inner(..)))
            .map(|(i, _)| i)
    }

    /// Leaf payloads in left-to-right order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            match &self.nodes[id] {
                BinNode::Leaf(p) => out.push(p.as_str()),
                BinNode::Inner(l, r) => {
                    stack.push(*r);
                    stack.push(*l);
                }
            }
        }
        out
    }

    /// Strahler number of every node, indexed by node id.
    pub fn strahler_labels(&self) -> Vec<StrahlerValue> {
        let mut labels: Vec<StrahlerValue> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                BinNode::Leaf(_) => StrahlerValue::LEAF,
                BinNode::Inner(l, r) => labels[l].combine(labels[r]),
            };
            labels.push(v);
        }
        labels
    }

    /// Swaps left and right children everywhere.
    pub fn mirror(&self) -> BinTree {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                BinNode::Leaf(p) => BinNode::Leaf(p.clone()),
                BinNode::Inner(l, r) => BinNode::Inner(*r, *l),
            })
            .collect();
        BinTree { nodes }
    }

    /// Left spine caterpillar `(((l1,l2),l3),...)` over the given payloads.
    pub fn caterpillar<S: Into<String>>(payloads: impl IntoIterator<Item = S>) -> Option<BinTree> {
        let mut builder = BinTreeBuilder::default();
        let mut acc: Option<NodeId> = None;
        for p in payloads {
            let leaf = builder.leaf(p);
            acc = Some(match acc {
                None => leaf,
                Some(a) => builder.inner(a, leaf),
            });
        }
        acc.map(|root| builder.finish(root))
    }

    /// Perfectly balanced tree with `2^levels` leaves.
    pub fn complete(levels: u32) -> BinTree {
        let mut builder = BinTreeBuilder::default();
        let mut layer: Vec<NodeId> = (0..1usize << levels).map(|i| builder.leaf(i.to_string())).collect();
        while layer.len() > 1 {
            layer = layer.chunks(2).map(|pair| builder.inner(pair[0], pair[1])).collect();
        }
        builder.finish(layer[0])
    }
}

/// Strahler number of the whole tree.
pub fn strahler(t: &BinTree) -> StrahlerValue {
    t.strahler_labels()[t.root()]
}

/// Number of nodes on the longest root-to-leaf path.
pub fn depth(t: &BinTree) -> usize {
    let mut heights: Vec<usize> = Vec::with_capacity(t.nodes.len());
    for node in &t.nodes {
        let h = match *node {
            BinNode::Leaf(_) => 1,
            BinNode::Inner(l, r) => heights[l].max(heights[r]) + 1,
        };
        heights.push(h);
    }
    heights[t.root()]
}

/// Incremental construction of a [`BinTree`] arena.
///
/// Every node handed out must be consumed exactly once, except the root
/// passed to [`BinTreeBuilder::finish`]; unused nodes are dropped.
#[derive(Debug, Default)]
pub struct BinTreeBuilder {
    nodes: Vec<BinNode>,
}

impl BinTreeBuilder {
    pub fn with_capacity(cap: usize) -> Self {
        BinTreeBuilder {
            nodes: Vec::with_capacity(cap),
        }
    }

    pub fn leaf(&mut self, payload: impl Into<String>) -> NodeId {
        self.nodes.push(BinNode::Leaf(payload.into()));
        self.nodes.len() - 1
    }

    pub fn inner(&mut self, left: NodeId, right: NodeId) -> NodeId {
        assert!(left < self.nodes.len() && right < self.nodes.len() && left != right);
        self.nodes.push(BinNode::Inner(left, right));
        self.nodes.len() - 1
    }

    /// Copies a whole tree into this arena and returns the id of its root.
    pub fn graft(&mut self, t: &BinTree) -> NodeId {
        let offset = self.nodes.len();
        self.nodes.extend(t.nodes.iter().map(|n| match n {
            BinNode::Leaf(p) => BinNode::Leaf(p.clone()),
            BinNode::Inner(l, r) => BinNode::Inner(l + offset, r + offset),
        }));
        self.nodes.len() - 1
    }

    /// Extracts the subtree under `root` into a compact tree.
    pub fn finish(self, root: NodeId) -> BinTree {
        if root + 1 == self.nodes.len() && self.nodes.len() % 2 == 1 && self.is_compact(root) {
            return BinTree { nodes: self.nodes };
        }
        // Post-order copy keeps the children-before-parent layout.
        let mut remap: HashMap<NodeId, NodeId> = HashMap::new();
        let mut out: Vec<BinNode> = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            match &self.nodes[id] {
                BinNode::Leaf(p) => {
                    remap.insert(id, out.len());
                    out.push(BinNode::Leaf(p.clone()));
                }
                BinNode::Inner(l, r) => {
                    if expanded {
                        remap.insert(id, out.len());
                        out.push(BinNode::Inner(remap[l], remap[r]));
                    } else {
                        stack.push((id, true));
                        stack.push((*r, false));
                        stack.push((*l, false));
                    }
                }
            }
        }
        BinTree { nodes: out }
    }

    fn is_compact(&self, root: NodeId) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if seen[id] {
                return false;
            }
            seen[id] = true;
            count += 1;
            if let BinNode::Inner(l, r) = self.nodes[id] {
                stack.push(l);
                stack.push(r);
            }
        }
        count == self.nodes.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeLiteralError {
    #[error("unexpected character {found:?} at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("empty leaf at offset {0}")]
    EmptyLeaf(usize),
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

/// Parses literals such as `((1,2),(3,4))`. A bare token is a single leaf.
impl FromStr for BinTree {
    type Err = TreeLiteralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut builder = BinTreeBuilder::default();
        // Pending '(' frames: the left child once parsed.
        let mut frames: Vec<Option<NodeId>> = Vec::new();
        let mut pos = 0;
        let mut last: Option<NodeId> = None;
        loop {
            // Expect a subtree.
            let &(offset, c) = chars.get(pos).ok_or(TreeLiteralError::UnexpectedEnd)?;
            let mut node = if c == '(' {
                frames.push(None);
                pos += 1;
                continue;
            } else if c == ',' || c == ')' {
                return Err(TreeLiteralError::EmptyLeaf(offset));
            } else {
                let start = pos;
                while pos < chars.len() && !matches!(chars[pos].1, '(' | ')' | ',') {
                    pos += 1;
                }
                let token: String = chars[start..pos].iter().map(|(_, c)| c).collect();
                builder.leaf(token)
            };
            // Close as many frames as the input allows.
            loop {
                match frames.last_mut() {
                    None => {
                        last = Some(node);
                        break;
                    }
                    Some(frame) => {
                        let &(offset, c) = chars.get(pos).ok_or(TreeLiteralError::UnexpectedEnd)?;
                        match (frame.is_none(), c) {
                            (true, ',') => {
                                *frame = Some(node);
                                pos += 1;
                                break;
                            }
                            (false, ')') => {
                                let left = frame.take().expect("left child");
                                frames.pop();
                                node = builder.inner(left, node);
                                pos += 1;
                            }
                            _ => return Err(TreeLiteralError::Unexpected { found: c, offset }),
                        }
                    }
                }
            }
            if let Some(root) = last {
                if let Some(&(offset, _)) = chars.get(pos) {
                    return Err(TreeLiteralError::Trailing(offset));
                }
                return Ok(builder.finish(root));
            }
        }
    }
}

impl fmt::Display for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Tok {
            Node(NodeId),
            Text(&'static str),
        }
        let mut stack = vec![Tok::Node(self.root())];
        while let Some(tok) = stack.pop() {
            match tok {
                Tok::Text(s) => f.write_str(s)?,
                Tok::Node(id) => match &self.nodes[id] {
                    BinNode::Leaf(p) => f.write_str(p)?,
                    BinNode::Inner(l, r) => {
                        f.write_str("(")?;
                        stack.push(Tok::Text(")"));
                        stack.push(Tok::Node(*r));
                        stack.push(Tok::Text(","));
                        stack.push(Tok::Node(*l));
                    }
                },
            }
        }
        Ok(())
    }
}

/// One token of a dependency tree, as read from a treebank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DepNode {
    /// 1-based surface position.
    pub id: u32,
    /// 0 for the root.
    pub head: u32,
    pub relation: String,
    pub form: String,
}

impl DepNode {
    pub fn new(id: u32, head: u32, relation: impl Into<String>, form: impl Into<String>) -> Self {
        DepNode {
            id,
            head,
            relation: relation.into(),
            form: form.into(),
        }
    }

    /// Relation label without its language-specific subtype (`nmod:poss` -> `nmod`).
    pub fn universal_relation(&self) -> &str {
        self.relation.split(':').next().unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DepTreeError {
    #[error("empty tree")]
    EmptyTree,
    #[error("multiple roots: {0:?}")]
    MultipleRoots(Vec<u32>),
    #[error("cycle through ids {0:?}")]
    Cycle(Vec<u32>),
    #[error("heads point to missing ids: {0:?}")]
    OrphanNode(Vec<u32>),
    #[error("duplicate ids: {0:?}")]
    DuplicateId(Vec<u32>),
}

impl DepTreeError {
    pub fn kind(&self) -> &'static str {
        match self {
            DepTreeError::EmptyTree => "EmptyTree",
            DepTreeError::MultipleRoots(_) => "MultipleRoots",
            DepTreeError::Cycle(_) => "Cycle",
            DepTreeError::OrphanNode(_) => "OrphanNode",
            DepTreeError::DuplicateId(_) => "DuplicateId",
        }
    }
}

/// A validated rooted dependency tree.
///
/// Nodes are kept in surface order (ascending id); all structural accessors
/// take and return indices into that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepTree {
    nodes: Vec<DepNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
    post_order: Vec<usize>,
}

/// Checks that the head links form a single rooted tree.
pub fn validate_dep_tree(mut nodes: Vec<DepNode>) -> Result<DepTree, DepTreeError> {
    if nodes.is_empty() {
        return Err(DepTreeError::EmptyTree);
    }
    nodes.sort_by_key(|n| n.id);
    let dups: Vec<u32> = nodes.windows(2).filter(|w| w[0].id == w[1].id).map(|w| w[0].id).collect();
    if !dups.is_empty() {
        return Err(DepTreeError::DuplicateId(dups));
    }
    let index: HashMap<u32, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();

    let orphans: Vec<u32> = nodes
        .iter()
        .filter(|n| n.head != 0 && !index.contains_key(&n.head))
        .map(|n| n.id)
        .collect();
    if !orphans.is_empty() {
        return Err(DepTreeError::OrphanNode(orphans));
    }
    let roots: Vec<u32> = nodes.iter().filter(|n| n.head == 0).map(|n| n.id).collect();
    if roots.len() > 1 {
        return Err(DepTreeError::MultipleRoots(roots));
    }

    let parent: Vec<Option<usize>> = nodes
        .iter()
        .map(|n| (n.head != 0).then(|| index[&n.head]))
        .collect();

    // Every node must reach the root by following heads; anything else sits on a cycle.
    let mut state = vec![0u8; nodes.len()]; // 0 unknown, 1 on current path, 2 reaches root
    for start in 0..nodes.len() {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(v) = cur {
            match state[v] {
                2 => break,
                1 => {
                    let pos = path.iter().position(|&p| p == v).unwrap_or(0);
                    let mut ids: Vec<u32> = path[pos..].iter().map(|&i: &usize| nodes[i].id).collect();
                    ids.sort_unstable();
                    return Err(DepTreeError::Cycle(ids));
                }
                _ => {
                    state[v] = 1;
                    path.push(v);
                    cur = parent[v];
                }
            }
        }
        for v in path {
            state[v] = 2;
        }
    }
    // All nodes reach a headless node, and there is at most one; acyclic implies one exists.
    let root = parent.iter().position(Option::is_none).expect("acyclic forest has a root");
    Ok(DepTree::from_validated(nodes, parent, root))
}

impl DepTree {
    fn from_validated(nodes: Vec<DepNode>, parent: Vec<Option<usize>>, root: usize) -> DepTree {
        let mut children = vec![Vec::new(); nodes.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        let mut post_order = Vec::with_capacity(nodes.len());
        let mut stack = vec![(root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                post_order.push(v);
            } else {
                stack.push((v, true));
                stack.extend(children[v].iter().rev().map(|&c| (c, false)));
            }
        }
        DepTree {
            nodes,
            parent,
            children,
            root,
            post_order,
        }
    }

    /// Builds an unlabeled tree from parent indices (`None` marks the root).
    /// Words are named `w1..wn` with relation `dep`.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<DepTree, DepTreeError> {
        let nodes = parents
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let head = p.map_or(0, |p| p as u32 + 1);
                DepNode::new(i as u32 + 1, head, if head == 0 { "root" } else { "dep" }, format!("w{}", i + 1))
            })
            .collect();
        validate_dep_tree(nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, i: usize) -> &DepNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[DepNode] {
        &self.nodes
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    /// Dependents of node `i` in surface order.
    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Children before parents; the root comes last.
    pub fn post_order(&self) -> &[usize] {
        &self.post_order
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.form.as_str())
    }

    /// Removes nodes whose universal relation is `relation`, attaching their
    /// dependents to the removed node's head. The root is never removed.
    pub fn without_relation(&self, relation: &str) -> DepTree {
        let keep: Vec<bool> = (0..self.len())
            .map(|i| i == self.root || self.nodes[i].universal_relation() != relation)
            .collect();
        if keep.iter().all(|&k| k) {
            return self.clone();
        }
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let mut p = self.parent[i];
            while let Some(pi) = p {
                if keep[pi] {
                    break;
                }
                p = self.parent[pi];
            }
            let mut n = node.clone();
            n.head = p.map_or(0, |pi| self.nodes[pi].id);
            nodes.push(n);
        }
        validate_dep_tree(nodes).expect("removing non-root nodes keeps a tree")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BinTree {
        s.parse().unwrap()
    }

    #[test]
    fn strahler_small_cases() {
        assert_eq!(strahler(&BinTree::leaf("a")).get(), 1);
        assert_eq!(strahler(&BinTree::complete(2)).get(), 3);
        // root children have values 3 and 2
        let fig1 = t("(((a,b),(c,d)),(e,f))");
        assert_eq!(strahler(&fig1).get(), 3);
        for n in 2..10 {
            let cat = BinTree::caterpillar((0..n).map(|i| i.to_string())).unwrap();
            assert_eq!(strahler(&cat).get(), 2);
        }
    }

    #[test]
    fn depth_small_cases() {
        assert_eq!(depth(&BinTree::leaf("a")), 1);
        assert_eq!(depth(&BinTree::caterpillar(["1", "2", "3", "4", "5"]).unwrap()), 5);
        assert_eq!(depth(&BinTree::complete(2)), 3);
    }

    #[test]
    fn deep_caterpillar_does_not_overflow() {
        let n = 200_000;
        let cat = BinTree::caterpillar((0..n).map(|i| i.to_string())).unwrap();
        assert_eq!(strahler(&cat).get(), 2);
        assert_eq!(depth(&cat), n);
        assert_eq!(cat.leaves().len(), n);
        let text = cat.to_string();
        assert_eq!(text.parse::<BinTree>().unwrap(), cat);
    }

    #[test]
    fn literal_parsing() {
        let tree = t("((1,2),(3,4))");
        assert_eq!(tree.leaf_count(), 4);
        assert_eq!(tree.leaves(), vec!["1", "2", "3", "4"]);
        assert_eq!(tree.to_string(), "((1,2),(3,4))");
        assert_eq!(t(" ( x , y ) ").to_string(), "(x,y)");
        assert_eq!(t("leaf").to_string(), "leaf");
        assert!("(1,2".parse::<BinTree>().is_err());
        assert!("(1,,2)".parse::<BinTree>().is_err());
        assert!("(1,2))".parse::<BinTree>().is_err());
        assert!("(1)".parse::<BinTree>().is_err());
        assert!("".parse::<BinTree>().is_err());
        assert!("(1,2,3)".parse::<BinTree>().is_err());
    }

    #[test]
    fn join_and_builder_finish() {
        let j = BinTree::join(t("(a,b)"), BinTree::leaf("c"));
        assert_eq!(j.to_string(), "((a,b),c)");
        let mut b = BinTreeBuilder::default();
        let unused = b.leaf("x");
        let a = b.leaf("a");
        let c = b.leaf("c");
        let root = b.inner(c, a);
        let _ = unused;
        let tree = b.finish(root);
        assert_eq!(tree.node_count(), 3);
        assert_eq!(tree.to_string(), "(c,a)");
    }

    #[test]
    fn validate_examples() {
        let one = validate_dep_tree(vec![DepNode::new(1, 0, "root", "a")]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(
            validate_dep_tree(vec![DepNode::new(1, 2, "x", "a"), DepNode::new(2, 1, "x", "b")]),
            Err(DepTreeError::Cycle(vec![1, 2]))
        );
        assert_eq!(
            validate_dep_tree(vec![DepNode::new(1, 0, "root", "a"), DepNode::new(2, 0, "root", "b")]),
            Err(DepTreeError::MultipleRoots(vec![1, 2]))
        );
        assert_eq!(validate_dep_tree(vec![]), Err(DepTreeError::EmptyTree));
        assert_eq!(
            validate_dep_tree(vec![DepNode::new(1, 0, "root", "a"), DepNode::new(2, 7, "x", "b")]),
            Err(DepTreeError::OrphanNode(vec![2]))
        );
        assert_eq!(
            validate_dep_tree(vec![DepNode::new(1, 1, "x", "a")]),
            Err(DepTreeError::Cycle(vec![1]))
        );
        // cycle detached from a valid root
        assert_eq!(
            validate_dep_tree(vec![
                DepNode::new(1, 0, "root", "a"),
                DepNode::new(2, 3, "x", "b"),
                DepNode::new(3, 2, "x", "c"),
            ]),
            Err(DepTreeError::Cycle(vec![2, 3]))
        );
    }

    #[test]
    fn children_in_surface_order() {
        let tree = validate_dep_tree(vec![
            DepNode::new(3, 2, "obj", "c"),
            DepNode::new(1, 2, "nsubj", "a"),
            DepNode::new(2, 0, "root", "b"),
        ])
        .unwrap();
        assert_eq!(tree.root(), 1);
        assert_eq!(tree.children(1), &[0, 2]);
        assert_eq!(tree.post_order(), &[0, 2, 1]);
    }

    #[test]
    fn dropping_punctuation_reattaches() {
        let tree = validate_dep_tree(vec![
            DepNode::new(1, 0, "root", "go"),
            DepNode::new(2, 1, "punct", "-"),
            DepNode::new(3, 2, "dep", "x"),
            DepNode::new(4, 1, "punct", "!"),
        ])
        .unwrap();
        let dropped = tree.without_relation("punct");
        assert_eq!(dropped.len(), 2);
        assert_eq!(dropped.node(1).head, 1);
    }
}
