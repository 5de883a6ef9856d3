//! 1-based index sets and the combinatorial enumerators built on them.

use std::fmt;

use crate::error::{Error, Result};

/// Strictly increasing 1-based indices drawn from `[universe]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    universe: usize,
    indices: Vec<usize>,
}

impl IndexSet {
    /// Sorts and validates `indices`; duplicates and out-of-range values are rejected.
    pub fn new(universe: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Bounds(format!("duplicate index in {indices:?}")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > universe) {
            return Err(Error::Bounds(format!("index {bad} outside [1, {universe}]")));
        }
        Ok(IndexSet { universe, indices })
    }

    pub fn empty(universe: usize) -> Self {
        IndexSet { universe, indices: Vec::new() }
    }

    pub fn full(universe: usize) -> Self {
        IndexSet { universe, indices: (1..=universe).collect() }
    }

    pub(crate) fn from_sorted_unchecked(universe: usize, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        IndexSet { universe, indices }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// `c(alpha)` for 1-based `alpha`.
    pub fn at(&self, alpha: usize) -> usize {
        self.indices[alpha - 1]
    }

    /// `[universe] \ self`.
    pub fn complement(&self) -> IndexSet {
        let indices = (1..=self.universe).filter(|i| !self.contains(*i)).collect();
        IndexSet { universe: self.universe, indices }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (t, i) in self.indices.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Either every index, or an explicit [`IndexSet`]. Used where `A[c|)` keeps all columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Select {
    All,
    Only(IndexSet),
}

/// All `k`-subsets of `[n]` in lexicographic order, as 1-based sorted vectors.
pub fn k_subsets(n: usize, k: usize) -> KSubsets {
    KSubsets { n, k, current: if k <= n { Some((1..=k).collect()) } else { None } }
}

pub struct KSubsets {
    n: usize,
    k: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // rightmost position that can still be bumped
        let mut pos = self.k;
        while pos > 0 && next[pos - 1] == self.n - self.k + pos {
            pos -= 1;
        }
        if pos > 0 {
            next[pos - 1] += 1;
            for t in pos..self.k {
                next[t] = next[t - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// All injections `[k] -> [n]` as image tuples `(σ(1), ..., σ(k))`, lexicographic.
pub fn injections(n: usize, k: usize) -> Injections {
    let start = if k <= n { Some((1..=k).collect()) } else { None };
    Injections { n, current: start }
}

pub struct Injections {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Injections {
    fn advance(n: usize, tuple: &mut [usize]) -> bool {
        let k = tuple.len();
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            let used: Vec<usize> = tuple[..pos].to_vec();
            let mut candidate = tuple[pos] + 1;
            while candidate <= n && used.contains(&candidate) {
                candidate += 1;
            }
            if candidate <= n {
                tuple[pos] = candidate;
                // fill the tail with the smallest unused values
                let mut fill = 1;
                for t in pos + 1..k {
                    while tuple[..t].contains(&fill) {
                        fill += 1;
                    }
                    tuple[t] = fill;
                    fill += 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Injections {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        if Self::advance(self.n, &mut next) {
            self.current = Some(next);
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_validation() {
        assert_eq!(IndexSet::new(3, vec![3, 1]).unwrap().as_slice(), &[1, 3]);
        assert!(IndexSet::new(3, vec![0]).is_err());
        assert!(IndexSet::new(3, vec![4]).is_err());
        assert!(IndexSet::new(3, vec![2, 2]).is_err());
        assert_eq!(IndexSet::new(4, vec![2, 3]).unwrap().complement().as_slice(), &[1, 4]);
    }

    #[test]
    fn subset_counts() {
        for n in 0..8 {
            for k in 0..=n {
                let all: Vec<_> = k_subsets(n, k).collect();
                assert_eq!(all.len() as u128, binomial(n, k));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(k_subsets(2, 3).count(), 0);
    }

    #[test]
    fn injection_counts_and_order() {
        let all: Vec<_> = injections(3, 2).collect();
        assert_eq!(all, vec![vec![1, 2], vec![1, 3], vec![2, 1], vec![2, 3], vec![3, 1], vec![3, 2]]);
        assert_eq!(injections(10, 4).count(), 5040);
        assert_eq!(injections(4, 0).count(), 1);
        assert_eq!(injections(2, 3).count(), 0);
    }
}
