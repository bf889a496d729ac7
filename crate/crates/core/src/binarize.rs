//! Conversion of dependency trees into binary trees whose leaves are the words.
//!
//! Every dependency node becomes a constituent that starts as the head word
//! alone; its dependents' constituents are attached one at a time, each
//! attachment adding one inner node. Methods differ only in the attachment
//! order.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{BinTree, BinTreeBuilder, DepTree, NodeId};

/// Relation labels from function words outward.
const DEFAULT_PRIORITY: &[&str] = &[
    "det", "case", "clf", "cop", "aux", "mark", "cc", "nummod", "amod", "compound", "flat", "fixed",
    "goeswith", "advmod", "discourse", "nmod", "appos", "acl", "obj", "iobj", "ccomp", "xcomp", "obl",
    "advcl", "expl", "nsubj", "csubj", "vocative", "dislocated", "orphan", "reparandum", "list", "conj",
    "parataxis", "punct", "dep",
];

#[derive(Debug, Error)]
pub enum PriorityTableError {
    #[error("line {line}: expected `label<TAB>rank`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: invalid rank {text:?}")]
    Rank { line: usize, text: String },
    #[error("reading priority table: {0}")]
    Io(#[from] std::io::Error),
}

/// Attachment rank of each relation label; lower ranks attach first
/// (closer to the head).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityTable {
    ranks: HashMap<String, i64>,
    default_rank: i64,
}

impl PriorityTable {
    pub fn new(ranks: HashMap<String, i64>) -> Self {
        let default_rank = ranks.values().copied().max().map_or(0, |m| m + 1);
        PriorityTable { ranks, default_rank }
    }

    /// Reads `label<TAB>rank` lines; `#` starts a comment, blank lines are skipped.
    pub fn read(reader: impl BufRead) -> Result<Self, PriorityTableError> {
        let mut ranks = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split('\t').map(str::trim).filter(|f| !f.is_empty());
            let (Some(label), Some(rank), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(PriorityTableError::Syntax {
                    line: i + 1,
                    text: line.clone(),
                });
            };
            let rank: i64 = rank.parse().map_err(|_| PriorityTableError::Rank {
                line: i + 1,
                text: rank.to_string(),
            })?;
            ranks.insert(label.to_string(), rank);
        }
        Ok(PriorityTable::new(ranks))
    }

    /// Rank of a label. Subtyped labels (`nmod:poss`) fall back to their
    /// universal part; unknown labels get the default rank.
    pub fn rank(&self, relation: &str) -> i64 {
        if let Some(&r) = self.ranks.get(relation) {
            return r;
        }
        let universal = relation.split(':').next().unwrap_or(relation);
        self.ranks.get(universal).copied().unwrap_or(self.default_rank)
    }

    pub fn default_rank(&self) -> i64 {
        self.default_rank
    }

    /// Writes the table in the same text format [`PriorityTable::read`] accepts.
    pub fn to_text(&self) -> String {
        let mut entries: Vec<(&String, &i64)> = self.ranks.iter().collect();
        entries.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
        let mut out = String::from("# relation\trank\n");
        for (label, rank) in entries {
            out.push_str(&format!("{label}\t{rank}\n"));
        }
        out
    }
}

impl Default for PriorityTable {
    fn default() -> Self {
        PriorityTable::new(
            DEFAULT_PRIORITY
                .iter()
                .enumerate()
                .map(|(i, l)| (l.to_string(), i as i64 + 1))
                .collect(),
        )
    }
}

/// Attachment order of the head-distance heuristic within each side of the head.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Binary2Order {
    /// Closer dependents attach first, so farther ones end up nearer the root.
    #[default]
    NearFirst,
    /// Farther dependents attach first and end up deeper.
    FarFirst,
}

impl FromStr for Binary2Order {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "near-first" => Ok(Binary2Order::NearFirst),
            "far-first" => Ok(Binary2Order::FarFirst),
            other => Err(format!("unknown binary2 order {other:?} (expected near-first or far-first)")),
        }
    }
}

impl fmt::Display for Binary2Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Binary2Order::NearFirst => "near-first",
            Binary2Order::FarFirst => "far-first",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinarizeMethod {
    /// Relation-priority attachment; ties fall back to the heuristic order.
    Binary1 { table: PriorityTable, order: Binary2Order },
    /// Head-distance heuristics: dependents before the head attach before
    /// those after it.
    Binary2 { order: Binary2Order },
}

impl BinarizeMethod {
    pub fn binary1(table: PriorityTable) -> Self {
        BinarizeMethod::Binary1 {
            table,
            order: Binary2Order::default(),
        }
    }

    pub fn binary2() -> Self {
        BinarizeMethod::Binary2 {
            order: Binary2Order::default(),
        }
    }
}

/// Dependents of `v` in heuristic attachment order.
fn heuristic_order(t: &DepTree, v: usize, order: Binary2Order) -> Vec<usize> {
    let head_id = t.node(v).id;
    let children = t.children(v);
    let split = children.partition_point(|&c| t.node(c).id < head_id);
    let (before, after) = children.split_at(split);
    match order {
        Binary2Order::NearFirst => before.iter().rev().chain(after.iter()).copied().collect(),
        Binary2Order::FarFirst => before.iter().chain(after.iter().rev()).copied().collect(),
    }
}

fn attachment_order(t: &DepTree, v: usize, method: &BinarizeMethod) -> Vec<usize> {
    match method {
        BinarizeMethod::Binary2 { order } => heuristic_order(t, v, *order),
        BinarizeMethod::Binary1 { table, order } => {
            let mut deps = heuristic_order(t, v, *order);
            // stable: equal ranks keep heuristic order
            deps.sort_by_key(|&c| table.rank(&t.node(c).relation));
            deps
        }
    }
}

/// Attaches `dep` to the constituent `acc` on the side the dependent occupies
/// in the sentence.
fn attach(builder: &mut BinTreeBuilder, t: &DepTree, head: usize, acc: NodeId, dep: usize, dep_node: NodeId) -> NodeId {
    if t.node(dep).id < t.node(head).id {
        builder.inner(dep_node, acc)
    } else {
        builder.inner(acc, dep_node)
    }
}

pub fn binarize(t: &DepTree, method: &BinarizeMethod) -> BinTree {
    let mut builder = BinTreeBuilder::with_capacity(2 * t.len());
    let mut constituent: Vec<NodeId> = vec![0; t.len()];
    for &v in t.post_order() {
        let mut acc = builder.leaf(t.node(v).form.clone());
        for dep in attachment_order(t, v, method) {
            acc = attach(&mut builder, t, v, acc, dep, constituent[dep]);
        }
        constituent[v] = acc;
    }
    builder.finish(constituent[t.root()])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinarizeError {
    #[error("enumeration would produce more than {cap} trees")]
    CapExceeded { cap: usize },
}

/// Advances `perm` to the next lexicographic permutation; false after the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Every binary tree reachable by attaching each node's dependents in any
/// order. Fails if the total would exceed `cap`.
pub fn all_binarizations(t: &DepTree, cap: usize) -> Result<Vec<BinTree>, BinarizeError> {
    let mut subtrees: Vec<Vec<BinTree>> = vec![Vec::new(); t.len()];
    for &v in t.post_order() {
        let deps = t.children(v);
        let mut count: usize = 1;
        for k in 1..=deps.len() {
            count = count.checked_mul(k).ok_or(BinarizeError::CapExceeded { cap })?;
        }
        for &d in deps {
            count = count
                .checked_mul(subtrees[d].len())
                .ok_or(BinarizeError::CapExceeded { cap })?;
        }
        if count > cap {
            return Err(BinarizeError::CapExceeded { cap });
        }

        let mut out = Vec::with_capacity(count);
        let mut perm: Vec<usize> = (0..deps.len()).collect();
        loop {
            // Odometer over the choice of subtree for each dependent.
            let mut choice = vec![0usize; deps.len()];
            loop {
                let mut builder = BinTreeBuilder::default();
                let mut acc = builder.leaf(t.node(v).form.clone());
                for &p in &perm {
                    let d = deps[p];
                    let sub = builder.graft(&subtrees[d][choice[p]]);
                    acc = attach(&mut builder, t, v, acc, d, sub);
                }
                out.push(builder.finish(acc));

                let mut pos = 0;
                while pos < deps.len() {
                    choice[pos] += 1;
                    if choice[pos] < subtrees[deps[pos]].len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == deps.len() {
                    break;
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        for &d in deps {
            subtrees[d] = Vec::new();
        }
        subtrees[v] = out;
    }
    Ok(std::mem::take(&mut subtrees[t.root()]))
}
