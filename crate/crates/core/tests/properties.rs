mod common;

use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use strahler_core::binarize::{binarize, BinarizeMethod, PriorityTable};
use strahler_core::conllu::{parse_conllu, SentenceOutcome};
use strahler_core::limits::{f_max, f_min};
use strahler_core::shift_reduce::{evaluate, sethi_ullman_order, StackOp, TraversalOrder};
use strahler_core::tree::{depth, strahler, validate_dep_tree, BinTree, DepNode, DepTree};

use common::{catalan, Shape};

const LABELS: [&str; 8] = ["det", "nsubj", "obj", "advmod", "conj", "punct", "nmod:poss", "xyz"];

/// Random dependency tree: node `i > 0` attaches to some earlier node, then
/// surface positions are permuted.
fn dep_tree_strategy(max_nodes: usize) -> impl Strategy<Value = DepTree> {
    (1..=max_nodes)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<prop::sample::Index>(), n),
                Just((1..=n as u32).collect::<Vec<u32>>()).prop_shuffle(),
                proptest::collection::vec(0..LABELS.len(), n),
            )
        })
        .prop_map(|(parent_picks, positions, labels)| {
            let nodes = (0..positions.len())
                .map(|i| {
                    let head = if i == 0 { 0 } else { positions[parent_picks[i].index(i)] };
                    DepNode::new(positions[i], head, if i == 0 { "root" } else { LABELS[labels[i]] }, format!("w{i}"))
                })
                .collect();
            validate_dep_tree(nodes).expect("attachment to earlier nodes is a tree")
        })
}

fn bin_tree_strategy() -> impl Strategy<Value = BinTree> {
    let leaf = "[a-z]{1,3}".prop_map(BinTree::leaf);
    leaf.prop_recursive(8, 64, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| BinTree::join(l, r)))
}

fn to_conllu(t: &DepTree) -> String {
    let mut out = String::from("# sent_id = p\n");
    for n in t.nodes() {
        out.push_str(&format!("{}\t{}\t_\t_\t_\t_\t{}\t{}\t_\t_\n", n.id, n.form, n.head, n.relation));
    }
    out.push('\n');
    out
}

/// Same tree with the surface order reversed, which reverses every child list.
fn reversed(t: &DepTree) -> DepTree {
    let n = t.len() as u32;
    let flip = |id: u32| if id == 0 { 0 } else { n + 1 - id };
    validate_dep_tree(
        t.nodes()
            .iter()
            .map(|d| DepNode::new(flip(d.id), flip(d.head), d.relation.clone(), d.form.clone()))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn binarizations_are_bracketed_by_limits(t in dep_tree_strategy(80)) {
        let (lo, hi) = (f_min(&t), f_max(&t));
        prop_assert!(1 <= lo && lo <= hi);
        prop_assert!(hi <= (t.len() as u32).ilog2() + 1);
        prop_assert_eq!(lo == 1, t.len() == 1);
        for m in [BinarizeMethod::binary1(PriorityTable::default()), BinarizeMethod::binary2()] {
            let b = binarize(&t, &m);
            prop_assert_eq!(b.leaf_count(), t.len());
            let s = strahler(&b).get();
            prop_assert!(lo <= s && s <= hi);
            prop_assert_eq!(binarize(&t, &m), b);
        }
    }

    #[test]
    fn limits_ignore_child_order(t in dep_tree_strategy(60)) {
        let r = reversed(&t);
        prop_assert_eq!(f_max(&r), f_max(&t));
        prop_assert_eq!(f_min(&r), f_min(&t));
    }

    #[test]
    fn strahler_is_bounded_by_depth_and_mirror_invariant(b in bin_tree_strategy()) {
        let s = strahler(&b);
        prop_assert!(1 <= s.get() && s.get() as usize <= depth(&b));
        prop_assert!(s.get() <= (b.leaf_count() as u32).ilog2() + 1);
        prop_assert_eq!(strahler(&b.mirror()), s);
    }

    #[test]
    fn tree_literals_round_trip(b in bin_tree_strategy()) {
        let text = b.to_string();
        prop_assert_eq!(text.parse::<BinTree>().unwrap(), b);
    }

    #[test]
    fn traces_keep_their_invariants(b in bin_tree_strategy(), bits in any::<u64>()) {
        let order = TraversalOrder::from_bits(&b, bits);
        let trace = evaluate(&b, &order).unwrap();
        let shifts = trace.steps.iter().filter(|s| s.op == StackOp::Shift).count();
        prop_assert_eq!(shifts, b.leaf_count());
        prop_assert_eq!(trace.steps.len() - shifts, b.leaf_count() - 1);
        prop_assert_eq!(trace.steps.last().unwrap().stack_depth_after, 1);
        prop_assert!(trace.steps.iter().all(|s| s.stack_depth_after >= 1));
        prop_assert!(trace.max_depth >= strahler(&b).get() as usize);
        let su = evaluate(&b, &sethi_ullman_order(&b)).unwrap();
        prop_assert_eq!(su.max_depth, strahler(&b).get() as usize);
    }

    #[test]
    fn conllu_round_trip(t in dep_tree_strategy(40)) {
        let text = to_conllu(&t);
        let parsed: Vec<SentenceOutcome> = parse_conllu(text.as_bytes()).map(Result::unwrap).collect();
        prop_assert_eq!(parsed.len(), 1);
        match &parsed[0] {
            SentenceOutcome::Tree(s) => prop_assert_eq!(&s.tree, &t),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
        let again: Vec<SentenceOutcome> = parse_conllu(text.as_bytes()).map(Result::unwrap).collect();
        prop_assert_eq!(again, parsed);
    }
}

/// Uniform random binary tree with `leaves` leaves: split sizes are drawn
/// with probability proportional to the number of trees on each side.
fn uniform_shape(leaves: usize, rng: &mut ChaCha8Rng) -> Shape {
    if leaves == 1 {
        return Shape::Leaf;
    }
    let total = catalan(leaves as u64 - 1);
    let mut pick = rng.random_range(0..total);
    for k in 1..leaves {
        let w = catalan(k as u64 - 1) * catalan((leaves - k) as u64 - 1);
        if pick < w {
            return Shape::Node(Box::new(uniform_shape(k, rng)), Box::new(uniform_shape(leaves - k, rng)));
        }
        pick -= w;
    }
    unreachable!("weights sum to the total")
}

#[test]
fn sethi_ullman_attains_strahler_on_random_twelve_leaf_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let tree = uniform_shape(12, &mut rng).to_tree();
        let trace = evaluate(&tree, &sethi_ullman_order(&tree)).unwrap();
        assert_eq!(trace.max_depth, strahler(&tree).get() as usize);
    }
}
