//! Exact Strahler statistics of random tree ensembles.
//!
//! * `R2(n)`: all binary trees with `n` leaves, counted by Strahler number.
//! * `R(n)`: all plane (ordered rooted) trees with `n` nodes, counted by their
//!   upper or lower binarization limit.
//!
//! Both ensembles have Catalan size, so every count is an arbitrary precision
//! integer and means are exact rationals until they are rendered.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::limits::{fold_sorted, LimitMode, LimitPair};

/// Default largest tree size tabulated.
pub const DEFAULT_N_MAX: usize = 300;
/// Resource guard for binary-tree distribution tables.
pub const R2_SIZE_LIMIT: usize = 4096;
/// Resource guard for plane-tree limit tables.
pub const PLANE_SIZE_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnsembleError {
    #[error("tree size {requested} exceeds the limit {limit}")]
    NMaxExceeded { requested: usize, limit: usize },
    #[error("tree size must be at least 1")]
    ZeroSize,
}

fn check_size(n: usize, limit: usize) -> Result<(), EnsembleError> {
    if n == 0 {
        Err(EnsembleError::ZeroSize)
    } else if n > limit {
        Err(EnsembleError::NMaxExceeded { requested: n, limit })
    } else {
        Ok(())
    }
}

/// `(1/n) * C(2n-2, n-1)`: binary trees with `n` leaves, which is also the
/// number of plane trees with `n` nodes.
pub fn catalan_binary_count(n: usize) -> BigUint {
    assert!(n >= 1, "tree size must be at least 1");
    let k = n - 1;
    // C(2k, k) / (k + 1), built incrementally so every step divides exactly.
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

/// Closed-form Strahler range over all binary trees with `n` leaves.
pub fn r2_limits(n: usize) -> LimitPair {
    assert!(n >= 1, "tree size must be at least 1");
    LimitPair {
        lower: if n == 1 { 1 } else { 2 },
        upper: n.ilog2() + 1,
    }
}

/// What an [`EnsembleTable`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    /// Binary trees by `n` leaves, keyed by Strahler number.
    BinaryStrahler,
    /// Plane trees by `n` nodes, keyed by upper or lower limit.
    PlaneLimit(LimitMode),
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleKind::BinaryStrahler => f.write_str("r2"),
            EnsembleKind::PlaneLimit(LimitMode::Max) => f.write_str("r-upper"),
            EnsembleKind::PlaneLimit(LimitMode::Min) => f.write_str("r-lower"),
        }
    }
}

/// Exact counts per tree size and value, for sizes `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleTable {
    kind: EnsembleKind,
    rows: Vec<BTreeMap<u32, BigUint>>,
}

impl EnsembleTable {
    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.rows.len()
    }

    /// Count of trees of size `n` per value.
    pub fn distribution(&self, n: usize) -> Result<&BTreeMap<u32, BigUint>, EnsembleError> {
        check_size(n, self.n_max())?;
        Ok(&self.rows[n - 1])
    }

    pub fn total(&self, n: usize) -> Result<BigUint, EnsembleError> {
        Ok(self.distribution(n)?.values().sum())
    }

    pub fn mean_exact(&self, n: usize) -> Result<BigRational, EnsembleError> {
        let dist = self.distribution(n)?;
        let (weighted, total) = weighted_sums(dist, 1);
        Ok(BigRational::new(weighted, total))
    }

    pub fn mean(&self, n: usize) -> Result<f64, EnsembleError> {
        Ok(rational_to_f64(&self.mean_exact(n)?))
    }

    /// Population variance of the value over trees of size `n`.
    pub fn variance_exact(&self, n: usize) -> Result<BigRational, EnsembleError> {
        let dist = self.distribution(n)?;
        let (first, total) = weighted_sums(dist, 1);
        let (second, _) = weighted_sums(dist, 2);
        let mean = BigRational::new(first, total.clone());
        Ok(BigRational::new(second, total) - mean.clone() * mean)
    }

    pub fn variance(&self, n: usize) -> Result<f64, EnsembleError> {
        Ok(rational_to_f64(&self.variance_exact(n)?))
    }
}

fn weighted_sums(dist: &BTreeMap<u32, BigUint>, power: u32) -> (BigInt, BigInt) {
    let mut weighted = BigUint::zero();
    let mut total = BigUint::zero();
    for (&v, c) in dist {
        weighted += c * BigUint::from(v).pow(power);
        total += c;
    }
    (BigInt::from(weighted), BigInt::from(total))
}

/// Nearest-ish `f64` for rationals whose parts overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Scale down to keep both parts finite.
    let shift = r.denom().bits().saturating_sub(900);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact number of binary trees with `n` leaves per Strahler number, for
/// every `n` up to `n_max`.
pub fn r2_table(n_max: usize) -> Result<EnsembleTable, EnsembleError> {
    check_size(n_max, R2_SIZE_LIMIT)?;
    // exact[n][s] and below[n][s] = sum of exact[n][s'] for s' < s; index 0 unused.
    let mut exact: Vec<Vec<BigUint>> = vec![Vec::new(), vec![BigUint::zero(), BigUint::one()]];
    let mut below: Vec<Vec<BigUint>> = vec![Vec::new(), vec![BigUint::zero(), BigUint::zero(), BigUint::one()]];

    for n in 2..=n_max {
        let s_max = r2_limits(n).upper as usize;
        let mut counts = vec![BigUint::zero(); s_max + 1];
        for (s, slot) in counts.iter_mut().enumerate().skip(2) {
            // Root is s when one side is s and the other below s (either side),
            // or when both sides are s - 1.
            let mut one_side = BigUint::zero();
            let mut both = BigUint::zero();
            for k in 1..n {
                let m = n - k;
                if let (Some(a), Some(b)) = (nonzero(&exact, k, s), below_at(&below, m, s)) {
                    one_side += a * b;
                }
                if let (Some(a), Some(b)) = (nonzero(&exact, k, s - 1), nonzero(&exact, m, s - 1)) {
                    both += a * b;
                }
            }
            *slot = (one_side << 1usize) + both;
        }
        let mut cumulative = vec![BigUint::zero(); s_max + 2];
        for s in 1..=s_max + 1 {
            cumulative[s] = &cumulative[s - 1] + &counts[s - 1];
        }
        exact.push(counts);
        below.push(cumulative);
    }

    let rows = exact
        .into_iter()
        .skip(1)
        .map(|counts| {
            counts
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| (s as u32, c))
                .collect()
        })
        .collect();
    Ok(EnsembleTable {
        kind: EnsembleKind::BinaryStrahler,
        rows,
    })
}

fn nonzero(table: &[Vec<BigUint>], n: usize, s: usize) -> Option<&BigUint> {
    table[n].get(s).filter(|c| !c.is_zero())
}

/// `below[m][s]`, which is the full total for `s` past the largest value.
fn below_at(below: &[Vec<BigUint>], m: usize, s: usize) -> Option<&BigUint> {
    let row = &below[m];
    let c = row.get(s).unwrap_or_else(|| row.last().expect("non-empty row"));
    (!c.is_zero()).then_some(c)
}

/// Exact Strahler distribution over binary trees with `n` leaves.
pub fn r2_strahler_distribution(n: usize) -> Result<BTreeMap<u32, BigUint>, EnsembleError> {
    let table = r2_table(n)?;
    Ok(table.distribution(n)?.clone())
}

/// Sorted multiset of child limits in which no value occurs more than twice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateMultiset(Vec<u32>);

impl StateMultiset {
    /// Values in ascending order.
    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn insert(&mut self, value: u32) {
        let lo = self.0.partition_point(|&v| v < value);
        let hi = self.0.partition_point(|&v| v <= value);
        if hi - lo < 2 {
            self.0.insert(hi, value);
        }
    }
}

impl fmt::Display for StateMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Sorts child limits and drops every occurrence of a value past the second.
pub fn state_of(child_limits: &[u32]) -> StateMultiset {
    let mut state = StateMultiset::default();
    for &v in child_limits {
        state.insert(v);
    }
    state
}

/// Limit of a root whose children carry the state's values.
pub fn st(q: &StateMultiset, mode: LimitMode) -> u32 {
    fold_sorted(&q.0, mode)
}

/// State of `q1`'s root after attaching one more child whose own root has state `q2`.
pub fn combine(q1: &StateMultiset, q2: &StateMultiset, mode: LimitMode) -> StateMultiset {
    let mut out = q1.clone();
    out.insert(st(q2, mode));
    out
}

/// Interned states with cached limits and transitions.
struct StateSpace {
    mode: LimitMode,
    states: Vec<StateMultiset>,
    limit: Vec<u32>,
    index: HashMap<StateMultiset, usize>,
    // transition[q][p]: state after appending a child of limit p
    transition: Vec<Vec<Option<usize>>>,
}

impl StateSpace {
    fn new(mode: LimitMode) -> Self {
        let mut space = StateSpace {
            mode,
            states: Vec::new(),
            limit: Vec::new(),
            index: HashMap::new(),
            transition: Vec::new(),
        };
        space.intern(StateMultiset::default());
        space
    }

    fn intern(&mut self, q: StateMultiset) -> usize {
        if let Some(&id) = self.index.get(&q) {
            return id;
        }
        let id = self.states.len();
        self.limit.push(st(&q, self.mode));
        self.index.insert(q.clone(), id);
        self.states.push(q);
        self.transition.push(Vec::new());
        id
    }

    fn append(&mut self, q: usize, p: u32) -> usize {
        let p = p as usize;
        if let Some(Some(next)) = self.transition[q].get(p) {
            return *next;
        }
        let mut next = self.states[q].clone();
        next.insert(p as u32);
        let next = self.intern(next);
        let row = &mut self.transition[q];
        if row.len() <= p {
            row.resize(p + 1, None);
        }
        row[p] = Some(next);
        next
    }
}

/// Exact counts of plane trees with `n` nodes per root state, for every `n`
/// up to `n_max` (index `n - 1`).
///
/// A tree with two or more nodes splits uniquely into its root with all but
/// the last child (size `n - m`) and the last child's subtree (size `m`), so
///
/// `S[n][q1 + p] += S[n - m][q1] * R[m][p]`
///
/// where `R[m][p]` sums `S[m][q]` over states with limit `p`.
pub fn r_state_table(n_max: usize, mode: LimitMode) -> Result<Vec<BTreeMap<StateMultiset, BigUint>>, EnsembleError> {
    let (space, by_state, _) = plane_dp(n_max, mode)?;
    Ok(by_state
        .into_iter()
        .skip(1)
        .map(|row| row.into_iter().map(|(q, c)| (space.states[q].clone(), c)).collect())
        .collect())
}

/// Exact counts of plane trees with `n` nodes per upper (`Max`) or lower
/// (`Min`) binarization limit, for every `n` up to `n_max`.
pub fn r_limit_table(n_max: usize, mode: LimitMode) -> Result<EnsembleTable, EnsembleError> {
    let (_, _, by_limit) = plane_dp(n_max, mode)?;
    let rows = by_limit.into_iter().skip(1).map(|row| row.into_iter().collect()).collect();
    Ok(EnsembleTable {
        kind: EnsembleKind::PlaneLimit(mode),
        rows,
    })
}

type SparseRows<K> = Vec<Vec<(K, BigUint)>>;

fn plane_dp(n_max: usize, mode: LimitMode) -> Result<(StateSpace, SparseRows<usize>, SparseRows<u32>), EnsembleError> {
    check_size(n_max, PLANE_SIZE_LIMIT)?;
    let mut space = StateSpace::new(mode);
    // by_state[n]: (state id, count); by_limit[n]: (limit, count); index 0 unused
    let mut by_state: SparseRows<usize> = vec![Vec::new(), vec![(0, BigUint::one())]];
    let mut by_limit: SparseRows<u32> = vec![Vec::new(), vec![(1, BigUint::one())]];

    for n in 2..=n_max {
        let mut acc: Vec<BigUint> = Vec::new();
        for m in 1..n {
            for (p, last) in &by_limit[m] {
                for (q1, rest) in &by_state[n - m] {
                    let q = space.append(*q1, *p);
                    if acc.len() <= q {
                        acc.resize(space.states.len(), BigUint::zero());
                    }
                    acc[q] += rest * last;
                }
            }
        }
        let states: Vec<(usize, BigUint)> = acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut limits: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (q, c) in &states {
            *limits.entry(space.limit[*q]).or_default() += c;
        }
        by_state.push(states);
        by_limit.push(limits.into_iter().collect());
    }
    Ok((space, by_state, by_limit))
}
