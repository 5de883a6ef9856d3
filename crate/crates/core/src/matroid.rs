//! Matroids given by rank oracles over ground sets of at most 63 labelled elements.
//!
//! Subsets are bitmasks ([`ElementSet`]) over ground-set positions. Minors and duals
//! wrap their parent's oracle, so building them is cheap and ranks are computed lazily.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::index::k_subsets;
use crate::linalg;
use crate::mat::Mat;

pub const MAX_GROUND: usize = 63;
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Index(usize),
    Cell(usize, usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Cell(i, j) => write!(f, "({i},{j})"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::GroundSet(format!("cannot read label {s:?}"));
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            Ok(Label::Cell(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        } else {
            s.parse().map(Label::Index).map_err(|_| bad())
        }
    }
}

/// A subset of a ground set, as a bitmask over element positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(pub u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn full(size: usize) -> Self {
        ElementSet(if size == 64 { u64::MAX } else { (1u64 << size) - 1 })
    }

    pub fn from_positions(positions: impl IntoIterator<Item = usize>) -> Self {
        ElementSet(positions.into_iter().fold(0, |m, p| m | (1u64 << p)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, pos: usize) -> bool {
        self.0 >> pos & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(self, pos: usize) -> Self {
        ElementSet(self.0 | 1u64 << pos)
    }

    pub fn remove(self, pos: usize) -> Self {
        ElementSet(self.0 & !(1u64 << pos))
    }

    /// Positions in increasing order.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let p = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(p)
        })
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
            Some(ElementSet(cur))
        })
    }
}

/// Distinct labels in a fixed order; positions index into this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<Label>,
}

impl GroundSet {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        if labels.len() > MAX_GROUND {
            return Err(Error::SizeCap(format!("{} ground elements, at most {MAX_GROUND}", labels.len())));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::GroundSet(format!("label {} repeated", w[0])));
        }
        Ok(GroundSet { labels })
    }

    /// `{1, ..., n}`.
    pub fn indices(n: usize) -> Result<Self> {
        GroundSet::new((1..=n).map(Label::Index).collect())
    }

    /// `[n] x [k]` in row-major order.
    pub fn cells(n: usize, k: usize) -> Result<Self> {
        GroundSet::new((1..=n).flat_map(|i| (1..=k).map(move |j| Label::Cell(i, j))).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, pos: usize) -> Label {
        self.labels[pos]
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn position(&self, label: Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::GroundSet(format!("{label} is not a ground element")))
    }

    pub fn subset(&self, labels: &[Label]) -> Result<ElementSet> {
        labels.iter().try_fold(ElementSet::EMPTY, |m, &l| Ok(m.insert(self.position(l)?)))
    }

    pub fn labels_of(&self, set: ElementSet) -> Vec<Label> {
        set.positions().map(|p| self.labels[p]).collect()
    }

    /// Sub-ground-set of the elements in `set`, in ground order.
    pub fn restrict(&self, set: ElementSet) -> GroundSet {
        GroundSet { labels: self.labels_of(set) }
    }

    /// Parses `{1,3}`, `1,3`, `(1,1),(2,1)` or `{}` into a subset.
    pub fn parse_subset(&self, text: &str) -> Result<ElementSet> {
        self.subset(&parse_labels(text)?)
    }

    pub fn format(&self, set: ElementSet) -> String {
        let parts: Vec<String> = self.labels_of(set).iter().map(Label::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Parses a comma-separated label list, optionally in braces, keeping the given order.
pub fn parse_labels(text: &str) -> Result<Vec<Label>> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let mut labels = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                labels.push(body[start..i].trim().parse()?);
                start = i + 1;
            }
            _ => {}
        }
    }
    labels.push(body[start..].trim().parse()?);
    Ok(labels)
}

/// A rank function on bitmasks over `0..size`.
pub trait RankOracle: Send + Sync {
    fn rank(&self, set: ElementSet) -> usize;
}

const UNKNOWN: u8 = u8::MAX;
const DENSE_LIMIT: usize = 20;

enum Memo {
    Dense(Vec<AtomicU8>),
    Sparse(Mutex<HashMap<u64, usize>>),
}

impl Memo {
    fn new(size: usize) -> Self {
        if size <= DENSE_LIMIT {
            Memo::Dense((0..1usize << size).map(|_| AtomicU8::new(UNKNOWN)).collect())
        } else {
            Memo::Sparse(Mutex::new(HashMap::new()))
        }
    }

    fn get_or(&self, set: ElementSet, compute: impl FnOnce() -> usize) -> usize {
        match self {
            Memo::Dense(table) => {
                let slot = &table[set.0 as usize];
                let v = slot.load(Ordering::Relaxed);
                if v != UNKNOWN {
                    return v as usize;
                }
                let r = compute();
                slot.store(r as u8, Ordering::Relaxed);
                r
            }
            Memo::Sparse(map) => {
                if let Some(&r) = map.lock().expect("memo lock").get(&set.0) {
                    return r;
                }
                let r = compute();
                map.lock().expect("memo lock").insert(set.0, r);
                r
            }
        }
    }
}

struct VectorOracle {
    matrix: Mat,
    memo: Memo,
}

impl RankOracle for VectorOracle {
    fn rank(&self, set: ElementSet) -> usize {
        self.memo.get_or(set, || {
            let cols: Vec<usize> = set.positions().map(|p| p + 1).collect();
            let rows: Vec<usize> = (1..=self.matrix.rows()).collect();
            linalg::rank(&self.matrix.select(&rows, &cols))
        })
    }
}

struct DualOracle {
    parent: Matroid,
}

impl RankOracle for DualOracle {
    fn rank(&self, set: ElementSet) -> usize {
        let e = self.parent.ground.full();
        set.len() + self.parent.rank_unchecked(e.difference(set)) - self.parent.full_rank
    }
}

/// Local positions map to parent positions; `offset` is added to every query and its
/// rank subtracted.
struct MinorOracle {
    parent: Matroid,
    to_parent: Vec<usize>,
    offset: ElementSet,
    offset_rank: usize,
}

impl RankOracle for MinorOracle {
    fn rank(&self, set: ElementSet) -> usize {
        let lifted = ElementSet::from_positions(set.positions().map(|p| self.to_parent[p]));
        self.parent.rank_unchecked(lifted.union(self.offset)) - self.offset_rank
    }
}

struct FnOracle<F>(F);

impl<F: Fn(ElementSet) -> usize + Send + Sync> RankOracle for FnOracle<F> {
    fn rank(&self, set: ElementSet) -> usize {
        (self.0)(set)
    }
}

#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    oracle: Arc<dyn RankOracle>,
    full_rank: usize,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid").field("ground", &self.ground).field("rank", &self.full_rank).finish()
    }
}

impl Matroid {
    pub fn from_oracle(ground: GroundSet, oracle: Arc<dyn RankOracle>) -> Self {
        let full_rank = oracle.rank(ground.full());
        Matroid { ground, oracle, full_rank }
    }

    /// A matroid from an arbitrary rank function; the axioms are not checked.
    pub fn from_rank_fn(ground: GroundSet, rank: impl Fn(ElementSet) -> usize + Send + Sync + 'static) -> Self {
        Matroid::from_oracle(ground, Arc::new(FnOracle(rank)))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    /// `r(E)`.
    pub fn full_rank(&self) -> usize {
        self.full_rank
    }

    /// `r*(E) = |E| - r(E)`.
    pub fn corank(&self) -> usize {
        self.ground.len() - self.full_rank
    }

    fn check(&self, set: ElementSet) -> Result<()> {
        if set.is_subset(self.ground.full()) {
            Ok(())
        } else {
            Err(Error::GroundSet(format!(
                "mask {:#x} has elements outside a ground set of size {}",
                set.0,
                self.ground.len()
            )))
        }
    }

    pub fn rank(&self, set: ElementSet) -> Result<usize> {
        self.check(set)?;
        Ok(self.rank_unchecked(set))
    }

    pub(crate) fn rank_unchecked(&self, set: ElementSet) -> usize {
        self.oracle.rank(set)
    }

    pub fn is_independent(&self, set: ElementSet) -> Result<bool> {
        Ok(self.rank(set)? == set.len())
    }

    pub fn is_basis(&self, set: ElementSet) -> Result<bool> {
        Ok(set.len() == self.full_rank && self.is_independent(set)?)
    }

    /// Coindependent: independent in the dual.
    pub fn is_coindependent(&self, set: ElementSet) -> Result<bool> {
        self.check(set)?;
        Ok(self.rank_unchecked(self.ground.full().difference(set)) == self.full_rank)
    }

    pub fn is_cobasis(&self, set: ElementSet) -> Result<bool> {
        self.check(set)?;
        self.is_basis(self.ground.full().difference(set))
    }

    pub fn dual(&self) -> Matroid {
        Matroid::from_oracle(self.ground.clone(), Arc::new(DualOracle { parent: self.clone() }))
    }

    /// `M|S`.
    pub fn restrict(&self, s: ElementSet) -> Result<Matroid> {
        self.check(s)?;
        Ok(self.minor_over(s, ElementSet::EMPTY))
    }

    /// `M \ T = M|(E \ T)`.
    pub fn delete(&self, t: ElementSet) -> Result<Matroid> {
        self.check(t)?;
        Ok(self.minor_over(self.ground.full().difference(t), ElementSet::EMPTY))
    }

    /// `M/T`, ranked by `r(X ∪ T) - r(T)`.
    pub fn contract(&self, t: ElementSet) -> Result<Matroid> {
        self.check(t)?;
        Ok(self.minor_over(self.ground.full().difference(t), t))
    }

    /// `M/T` built as `(M* \ T)*`.
    pub fn contract_via_dual(&self, t: ElementSet) -> Result<Matroid> {
        Ok(self.dual().delete(t)?.dual())
    }

    fn minor_over(&self, keep: ElementSet, offset: ElementSet) -> Matroid {
        let oracle = MinorOracle {
            parent: self.clone(),
            to_parent: keep.positions().collect(),
            offset,
            offset_rank: self.rank_unchecked(offset),
        };
        Matroid::from_oracle(self.ground.restrict(keep), Arc::new(oracle))
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.ground.len() > cap {
            return Err(Error::SizeCap(format!(
                "enumeration over {} elements exceeds the cap of {cap}",
                self.ground.len()
            )));
        }
        Ok(())
    }

    /// All bases, in lexicographic order of their sorted positions.
    pub fn bases(&self, cap: usize) -> Result<Vec<ElementSet>> {
        self.check_cap(cap)?;
        Ok(k_subsets(self.ground.len(), self.full_rank)
            .map(|c| ElementSet::from_positions(c.into_iter().map(|p| p - 1)))
            .filter(|&b| self.rank_unchecked(b) == self.full_rank)
            .collect())
    }

    /// Complements of the bases, listed in the order of [`Matroid::bases`].
    pub fn cobases(&self, cap: usize) -> Result<Vec<ElementSet>> {
        let e = self.ground.full();
        Ok(self.bases(cap)?.into_iter().map(|b| e.difference(b)).collect())
    }

    pub fn independent_sets(&self, cap: usize) -> Result<Vec<ElementSet>> {
        self.check_cap(cap)?;
        Ok(self.ground.full().subsets().filter(|&x| self.rank_unchecked(x) == x.len()).collect())
    }
}

/// `M[A]` on the columns of `matrix`, labelled by `labels`.
pub fn vector_matroid(matrix: &Mat, labels: GroundSet) -> Result<Matroid> {
    if labels.len() != matrix.cols() {
        return Err(Error::Shape(format!("{} labels for {} columns", labels.len(), matrix.cols())));
    }
    let oracle = VectorOracle { matrix: matrix.clone(), memo: Memo::new(labels.len()) };
    Ok(Matroid::from_oracle(labels, Arc::new(oracle)))
}

/// Vector matroid with columns labelled `1..=cols`.
pub fn column_matroid(matrix: &Mat) -> Result<Matroid> {
    vector_matroid(matrix, GroundSet::indices(matrix.cols())?)
}
