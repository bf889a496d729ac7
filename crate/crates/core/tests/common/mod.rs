//! Independent enumerators and reference implementations shared by the
//! integration tests. Nothing here calls into the library's algorithms.

#![allow(dead_code)]

use strahler_core::tree::{BinTree, DepTree};

/// Plain recursive binary tree used as a reference shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Reference Strahler number, straight from the recursive definition.
    pub fn strahler(&self) -> u32 {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => {
                let (a, b) = (l.strahler(), r.strahler());
                if a == b {
                    a + 1
                } else {
                    a.max(b)
                }
            }
        }
    }

    pub fn is_perfect(&self) -> bool {
        fn height(s: &Shape) -> Option<u32> {
            match s {
                Shape::Leaf => Some(0),
                Shape::Node(l, r) => match (height(l), height(r)) {
                    (Some(a), Some(b)) if a == b => Some(a + 1),
                    _ => None,
                },
            }
        }
        height(self).is_some()
    }

    pub fn to_literal(&self) -> String {
        let mut next = 0;
        self.literal(&mut next)
    }

    fn literal(&self, next: &mut usize) -> String {
        match self {
            Shape::Leaf => {
                *next += 1;
                format!("x{next}")
            }
            Shape::Node(l, r) => {
                let a = l.literal(next);
                let b = r.literal(next);
                format!("({a},{b})")
            }
        }
    }

    pub fn to_tree(&self) -> BinTree {
        self.to_literal().parse().expect("valid literal")
    }

    /// Minimum stack depth over all evaluation orders, by the recurrence on
    /// which subtree is evaluated first (the first result stays on the stack
    /// while the second subtree is evaluated).
    pub fn min_stack_by_recurrence(&self) -> u32 {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => {
                let (a, b) = (l.min_stack_by_recurrence(), r.min_stack_by_recurrence());
                a.max(b + 1).min(b.max(a + 1))
            }
        }
    }
}

/// Every binary tree shape with exactly `leaves` leaves.
pub fn binary_shapes(leaves: usize) -> Vec<Shape> {
    if leaves == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..leaves {
        for l in binary_shapes(k) {
            for r in binary_shapes(leaves - k) {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

/// Plane (ordered) rooted tree as nested child lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plane(pub Vec<Plane>);

impl Plane {
    pub fn size(&self) -> usize {
        1 + self.0.iter().map(Plane::size).sum::<usize>()
    }

    /// Parent array in pre-order (node 0 is the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut out = vec![None];
        fn walk(p: &Plane, me: usize, out: &mut Vec<Option<usize>>) {
            for c in &p.0 {
                let id = out.len();
                out.push(Some(me));
                walk(c, id, out);
            }
        }
        walk(self, 0, &mut out);
        out
    }

    pub fn to_dep_tree(&self) -> DepTree {
        DepTree::from_parents(&self.parents()).expect("valid tree")
    }

    /// Upper and lower limits by exhaustive search over binarizations built
    /// here: at each node every attachment order of every combination of
    /// child binarizations. Returns every reachable Strahler number.
    pub fn reachable_strahler(&self) -> Vec<u32> {
        let child_sets: Vec<Vec<u32>> = self.0.iter().map(Plane::reachable_strahler).collect();
        let mut out = std::collections::BTreeSet::new();
        fn pick(sets: &[Vec<u32>], i: usize, cur: &mut Vec<u32>, out: &mut std::collections::BTreeSet<u32>) {
            if i == sets.len() {
                for_each_order(cur, out);
                return;
            }
            for &v in &sets[i] {
                cur.push(v);
                pick(sets, i + 1, cur, out);
                cur.pop();
            }
        }
        fn for_each_order(values: &[u32], out: &mut std::collections::BTreeSet<u32>) {
            fn rec(rest: &mut Vec<u32>, acc: u32, out: &mut std::collections::BTreeSet<u32>) {
                if rest.is_empty() {
                    out.insert(acc);
                    return;
                }
                for i in 0..rest.len() {
                    let v = rest.remove(i);
                    let next = if acc == v { acc + 1 } else { acc.max(v) };
                    rec(rest, next, out);
                    rest.insert(i, v);
                }
            }
            rec(&mut values.to_vec(), 1, out);
        }
        pick(&child_sets, 0, &mut Vec::new(), &mut out);
        out.into_iter().collect()
    }
}

/// Every plane tree with exactly `n` nodes.
pub fn plane_trees(n: usize) -> Vec<Plane> {
    plane_forests(n - 1).into_iter().map(Plane).collect()
}

/// Every ordered forest with exactly `n` nodes.
pub fn plane_forests(n: usize) -> Vec<Vec<Plane>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for head in plane_trees(first) {
            for rest in plane_forests(n - first) {
                let mut forest = vec![head.clone()];
                forest.extend(rest);
                out.push(forest);
            }
        }
    }
    out
}

pub fn catalan(k: u64) -> u128 {
    // C(2k, k) / (k + 1)
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (2 * (2 * i + 1)) / (i + 2);
    }
    c
}
