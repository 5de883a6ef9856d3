//! Canonical constraint matrices for the subspaces of `F_q^N`.
//!
//! A codimension-`c` subspace is the kernel of exactly one full-rank `c x N` matrix in
//! reduced row echelon form. The enumerator walks pivot sets in lexicographic order and,
//! within a pivot set, the free entries as a base-`q` counter. Each emitted matrix has a
//! strictly larger [`RrefMatrix::key`] than the previous one.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::index::k_subsets;
use crate::mat::Mat;

/// `[N choose c]_q`, or `None` on overflow.
pub fn gaussian_binomial(n: usize, c: usize, q: u64) -> Option<u128> {
    if c > n {
        return Some(0);
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..c {
        let num = q.checked_pow((n - i) as u32)? - 1;
        let den = q.checked_pow((i + 1) as u32)? - 1;
        acc = acc.checked_mul(num)? / den;
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RrefMatrix {
    rows: usize,
    cols: usize,
    q: u32,
    entries: Vec<u32>,
}

impl RrefMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major residues.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn to_mat(&self) -> Mat {
        let field = FieldSpec::prime(self.q).expect("enumerator modulus is prime");
        Mat::from_fn(field, self.rows, self.cols, |r, c| {
            Scalar::from_i64(field, self.entries[r * self.cols + c] as i64)
        })
    }

    /// Leading nonzero column of every row, read off the entries.
    pub fn pivots(&self) -> Vec<Option<usize>> {
        (0..self.rows).map(|r| (0..self.cols).find(|&c| self.entries[r * self.cols + c] != 0)).collect()
    }

    /// Full rank and in reduced row echelon form, checked from the entries alone.
    pub fn is_canonical(&self) -> bool {
        let pivots = self.pivots();
        let Some(pivots) = pivots.into_iter().collect::<Option<Vec<usize>>>() else {
            return false;
        };
        pivots.windows(2).all(|w| w[0] < w[1])
            && pivots
                .iter()
                .enumerate()
                .all(|(r, &p)| (0..self.rows).all(|o| self.entries[o * self.cols + p] == u32::from(o == r)))
    }

    /// Total order used to certify that no matrix is emitted twice: pivot columns first,
    /// then entries.
    pub fn key_cmp(&self, other: &RrefMatrix) -> Ordering {
        self.pivots().cmp(&other.pivots()).then_with(|| self.entries.cmp(&other.entries))
    }
}

/// Free positions `(row, col)` of a pivot set: right of the row's pivot, not a pivot column.
pub(crate) fn free_positions(pivots: &[usize], cols: usize) -> Vec<(usize, usize)> {
    pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &p)| (p + 1..cols).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
        .collect()
}

/// All 0-based pivot sets of size `c` in `0..cols`, lexicographic.
pub(crate) fn pivot_sets(cols: usize, c: usize) -> Vec<Vec<usize>> {
    k_subsets(cols, c).map(|s| s.into_iter().map(|p| p - 1).collect()).collect()
}

/// Calls `visit` with every RREF matrix (row-major residues) having the given pivots.
pub(crate) fn for_each_with_pivots(cols: usize, q: u32, pivots: &[usize], mut visit: impl FnMut(&[u32])) {
    let c = pivots.len();
    let free = free_positions(pivots, cols);
    let mut m = vec![0u32; c * cols];
    for (r, &p) in pivots.iter().enumerate() {
        m[r * cols + p] = 1;
    }
    let mut digits = vec![0u32; free.len()];
    loop {
        visit(&m);
        let mut d = free.len();
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            let (r, col) = free[d];
            digits[d] += 1;
            if digits[d] < q {
                m[r * cols + col] = digits[d];
                break;
            }
            digits[d] = 0;
            m[r * cols + col] = 0;
        }
    }
}

/// Every codimension-`c` subspace of `F_q^cols`, as its canonical constraint matrix.
pub fn enumerate_subspace_constraints(cols: usize, c: usize, q: u32, cap: u128) -> Result<SubspaceConstraints> {
    FieldSpec::prime(q)?;
    if c > cols {
        return Err(Error::Shape(format!("codimension {c} in a space of dimension {cols}")));
    }
    let count = gaussian_binomial(cols, c, q as u64).filter(|&n| n <= cap);
    let count = count.ok_or_else(|| Error::SizeCap(format!("[{cols} choose {c}]_{q} exceeds the cap of {cap}")))?;
    let mut pivot_sets = pivot_sets(cols, c);
    pivot_sets.reverse();
    Ok(SubspaceConstraints { cols, c, q, pivot_sets, current: None, remaining: count })
}

pub struct SubspaceConstraints {
    cols: usize,
    c: usize,
    q: u32,
    pivot_sets: Vec<Vec<usize>>,
    current: Option<Odometer>,
    remaining: u128,
}

/// Free positions of the current pivot set, their digits, and the matrix they spell.
struct Odometer {
    free: Vec<(usize, usize)>,
    digits: Vec<u32>,
    m: Vec<u32>,
}

impl SubspaceConstraints {
    fn start(&mut self) -> bool {
        let Some(pivots) = self.pivot_sets.pop() else {
            return false;
        };
        let mut m = vec![0u32; self.c * self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            m[r * self.cols + p] = 1;
        }
        let free = free_positions(&pivots, self.cols);
        let digits = vec![0; free.len()];
        self.current = Some(Odometer { free, digits, m });
        true
    }
}

impl Iterator for SubspaceConstraints {
    type Item = RrefMatrix;

    fn next(&mut self) -> Option<RrefMatrix> {
        if self.current.is_none() && !self.start() {
            return None;
        }
        let Odometer { free, digits, m } = self.current.as_mut().expect("started");
        let out = RrefMatrix { rows: self.c, cols: self.cols, q: self.q, entries: m.clone() };
        let mut d = free.len();
        let mut exhausted = true;
        while d > 0 {
            d -= 1;
            let (r, col) = free[d];
            digits[d] += 1;
            if digits[d] < self.q {
                m[r * self.cols + col] = digits[d];
                exhausted = false;
                break;
            }
            digits[d] = 0;
            m[r * self.cols + col] = 0;
        }
        if exhausted {
            self.current = None;
        }
        self.remaining = self.remaining.saturating_sub(1);
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).ok();
        (n.unwrap_or(usize::MAX), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rref;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 1, 2), Some(7));
        assert_eq!(gaussian_binomial(2, 2, 2), Some(1));
        assert_eq!(gaussian_binomial(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial(8, 1, 2), Some(255));
        assert_eq!(gaussian_binomial(5, 0, 3), Some(1));
        assert_eq!(gaussian_binomial(2, 3, 3), Some(0));
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_subspace_constraints(3, 1, 2, u128::MAX).unwrap().count(), 7);
        let only: Vec<_> = enumerate_subspace_constraints(2, 2, 2, u128::MAX).unwrap().collect();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].to_mat(), Mat::identity(FieldSpec::prime(2).unwrap(), 2));
        assert_eq!(enumerate_subspace_constraints(4, 2, 2, u128::MAX).unwrap().count(), 35);
        assert!(matches!(enumerate_subspace_constraints(4, 2, 2, 34), Err(Error::SizeCap(_))));
        assert!(enumerate_subspace_constraints(4, 2, 4, 100).is_err());
    }

    #[test]
    fn emitted_forms_are_canonical_and_increasing() {
        let all: Vec<_> = enumerate_subspace_constraints(5, 2, 3, u128::MAX).unwrap().collect();
        assert_eq!(all.len() as u128, gaussian_binomial(5, 2, 3).unwrap());
        for m in &all {
            assert!(m.is_canonical());
            assert_eq!(rref(&m.to_mat()).matrix, m.to_mat());
        }
        assert!(all.windows(2).all(|w| w[0].key_cmp(&w[1]) == Ordering::Less));
    }

    #[test]
    fn callback_walk_matches_iterator() {
        let mut walked = Vec::new();
        for p in pivot_sets(4, 2) {
            for_each_with_pivots(4, 3, &p, |m| walked.push(m.to_vec()));
        }
        let iterated: Vec<Vec<u32>> =
            enumerate_subspace_constraints(4, 2, 3, u128::MAX).unwrap().map(|m| m.entries().to_vec()).collect();
        assert_eq!(walked, iterated);
    }
}
