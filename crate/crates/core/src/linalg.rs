//! Gaussian elimination over an exact field.
//!
//! Pivoting is deterministic: columns are scanned left to right and the pivot
//! is the first nonzero entry at or below the current pivot row. Canonical forms
//! produced here are relied on by the subspace enumerator.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::index::IndexSet;
use crate::mat::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Mat,
    /// 1-based pivot columns.
    pub pivots: IndexSet,
    pub rank: usize,
}

/// Eliminates in place, returning 0-based pivot columns. Rows are fully reduced.
fn eliminate(m: &mut Mat) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(found) = (pr..rows).find(|&r| !m.at(r, c).is_zero()) else {
            continue;
        };
        if found != pr {
            for j in 0..cols {
                let tmp = m.at(found, j).clone();
                *m.at_mut(found, j) = m.at(pr, j).clone();
                *m.at_mut(pr, j) = tmp;
            }
        }
        let inv = m.at(pr, c).inverse().expect("nonzero pivot");
        for j in c..cols {
            let v = m.at(pr, j) * &inv;
            *m.at_mut(pr, j) = v;
        }
        for r in 0..rows {
            if r == pr || m.at(r, c).is_zero() {
                continue;
            }
            let factor = m.at(r, c).clone();
            for j in c..cols {
                let v = m.at(r, j) - &(&factor * m.at(pr, j));
                *m.at_mut(r, j) = v;
            }
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

pub fn rref(a: &Mat) -> Rref {
    let mut m = a.clone();
    let pivots = eliminate(&mut m);
    let rank = pivots.len();
    Rref {
        matrix: m,
        pivots: IndexSet::from_sorted_unchecked(a.cols(), pivots.into_iter().map(|c| c + 1).collect()),
        rank,
    }
}

/// Rank via forward elimination only.
pub fn rank(a: &Mat) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<Scalar>> = (0..rows).map(|r| a.row_slice(r).to_vec()).collect();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(found) = (pr..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(found, pr);
        let inv = m[pr][c].inverse().expect("nonzero pivot");
        for r in pr + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] * &inv;
            let (above, below) = m.split_at_mut(r);
            for (x, p) in below[0][c..cols].iter_mut().zip(&above[pr][c..cols]) {
                *x = &*x - &(&factor * p);
            }
        }
        pr += 1;
    }
    pr
}

/// Basis of `{x : A x = 0}`, one vector per free column in increasing order.
pub fn nullspace_basis(a: &Mat) -> Vec<Vec<Scalar>> {
    let field = a.field();
    let r = rref(a);
    let pivots = r.pivots.as_slice();
    (1..=a.cols())
        .filter(|c| !r.pivots.contains(*c))
        .map(|free| {
            let mut v = vec![field.zero(); a.cols()];
            v[free - 1] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p - 1] = -r.matrix.at(row, free - 1);
            }
            v
        })
        .collect()
}

/// One solution of `A x = b` with free variables set to zero, or `None` if inconsistent.
pub fn solve_affine(a: &Mat, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!("right-hand side of length {} for {} equations", b.len(), a.rows())));
    }
    let field = a.field();
    let column = Mat::new(field, b.len(), 1, b.to_vec())?;
    let aug = a.hcat(&column)?;
    let r = rref(&aug);
    if r.pivots.contains(a.cols() + 1) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); a.cols()];
    for (row, &p) in r.pivots.as_slice().iter().enumerate() {
        x[p - 1] = r.matrix.at(row, a.cols()).clone();
    }
    Ok(Some(x))
}

/// Determinant of a square matrix by elimination.
pub fn square_det(a: &Mat) -> Result<Scalar> {
    if !a.is_square() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", a.rows(), a.cols())));
    }
    Ok(det_of_rows(a.field(), a.rows(), |r, c| a.at(r, c).clone()))
}

/// Determinant of the `n x n` matrix whose entries are given by `entry`.
pub(crate) fn det_of_rows(field: crate::field::FieldSpec, n: usize, entry: impl Fn(usize, usize) -> Scalar) -> Scalar {
    let mut m: Vec<Vec<Scalar>> = (0..n).map(|r| (0..n).map(|c| entry(r, c)).collect()).collect();
    let mut det = field.one();
    for c in 0..n {
        let Some(found) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return field.zero();
        };
        if found != c {
            m.swap(found, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].inverse().expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] * &inv;
            let (above, below) = m.split_at_mut(r);
            for (x, p) in below[0][c + 1..n].iter_mut().zip(&above[c][c + 1..n]) {
                *x = &*x - &(&factor * p);
            }
        }
    }
    det
}

pub fn inverse(a: &Mat) -> Result<Option<Mat>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("inverse of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let aug = a.hcat(&Mat::identity(a.field(), n))?;
    let r = rref(&aug);
    if r.pivots.as_slice().iter().take(n).copied().ne(1..=n) || r.rank < n {
        return Ok(None);
    }
    Ok(Some(r.matrix.select(&(1..=n).collect::<Vec<_>>(), &(n + 1..=2 * n).collect::<Vec<_>>())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn vecq(f: FieldSpec, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_i64(f, x)).collect()
    }

    #[test]
    fn rref_examples() {
        let r = rref(&Mat::identity(q(), 2));
        assert_eq!((r.matrix, r.pivots.as_slice().to_vec(), r.rank), (Mat::identity(q(), 2), vec![1, 2], 2));

        let r = rref(&Mat::from_i64_rows(f2(), &[&[1, 1], &[1, 1]]));
        assert_eq!(r.matrix, Mat::from_i64_rows(f2(), &[&[1, 1], &[0, 0]]));
        assert_eq!(r.pivots.as_slice(), &[1]);
        assert_eq!(r.rank, 1);

        let r = rref(&Mat::from_i64_rows(q(), &[&[0, 0]]));
        assert_eq!(r.matrix, Mat::from_i64_rows(q(), &[&[0, 0]]));
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_basis(&Mat::identity(q(), 2)).is_empty());
        assert_eq!(nullspace_basis(&Mat::from_i64_rows(f2(), &[&[1, 1]])), vec![vecq(f2(), &[1, 1])]);
        assert_eq!(nullspace_basis(&Mat::from_i64_rows(q(), &[&[0, 0]])), vec![vecq(q(), &[1, 0]), vecq(q(), &[0, 1])]);
    }

    #[test]
    fn solve_examples() {
        let x = solve_affine(&Mat::identity(q(), 2), &vecq(q(), &[3, 4])).unwrap();
        assert_eq!(x, Some(vecq(q(), &[3, 4])));
        let x = solve_affine(&Mat::from_i64_rows(q(), &[&[1, 1], &[1, 1]]), &vecq(q(), &[0, 1])).unwrap();
        assert_eq!(x, None);
        let x = solve_affine(&Mat::from_i64_rows(f2(), &[&[1, 1]]), &vecq(f2(), &[1])).unwrap();
        assert_eq!(x, Some(vecq(f2(), &[1, 0])));
        assert!(solve_affine(&Mat::identity(q(), 2), &vecq(q(), &[1])).is_err());
    }

    #[test]
    fn det_examples() {
        assert_eq!(square_det(&Mat::identity(q(), 3)).unwrap(), q().one());
        assert_eq!(square_det(&Mat::from_i64_rows(q(), &[&[1, 2], &[3, 4]])).unwrap(), Scalar::from_i64(q(), -2));
        assert!(square_det(&Mat::from_i64_rows(f2(), &[&[1, 1], &[1, 1]])).unwrap().is_zero());
        assert!(matches!(square_det(&Mat::zeros(q(), 2, 3)), Err(Error::Shape(_))));
        assert_eq!(square_det(&Mat::zeros(q(), 0, 0)).unwrap(), q().one());
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat::from_i64_rows(q(), &[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(q(), 2));
        assert_eq!(inverse(&Mat::from_i64_rows(q(), &[&[1, 1], &[1, 1]])).unwrap(), None);
    }
}
