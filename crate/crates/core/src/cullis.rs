//! The Cullis determinant `det_{n,k}` of an `n x k` matrix with `n >= k`, its sign
//! conventions, and the row-shift maps under which it is invariant.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::index::{injections, k_subsets, IndexSet};
use crate::linalg::det_of_rows;
use crate::mat::Mat;

/// `(-1)^{Σ (c(α) - α)}` for a sorted selection of row indices.
pub fn sgn_subset(c: &IndexSet) -> i8 {
    parity_sign(subset_exponent(c.as_slice()))
}

fn subset_exponent(sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(a, &c)| c - (a + 1)).sum()
}

fn parity_sign(e: usize) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An injection `[k] -> [n]`, stored by its images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowInjection {
    universe: usize,
    images: Vec<usize>,
}

impl RowInjection {
    pub fn new(universe: usize, images: Vec<usize>) -> Result<Self> {
        IndexSet::new(universe, images.clone())?;
        Ok(RowInjection { universe, images })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// The image as a sorted selection.
    pub fn image(&self) -> IndexSet {
        let mut sorted = self.images.clone();
        sorted.sort_unstable();
        IndexSet::from_sorted_unchecked(self.universe, sorted)
    }
}

/// Sign of the sorting permutation of the images times the sign of the image set.
pub fn sgn_injection(sigma: &RowInjection) -> i8 {
    injection_sign(&sigma.images)
}

fn injection_sign(images: &[usize]) -> i8 {
    let inversions: usize = (0..images.len()).map(|a| images[a + 1..].iter().filter(|&&b| b < images[a]).count()).sum();
    let mut sorted = images.to_vec();
    sorted.sort_unstable();
    parity_sign(inversions) * parity_sign(subset_exponent(&sorted))
}

fn signed(s: i8, value: Scalar) -> Scalar {
    if s < 0 {
        -value
    } else {
        value
    }
}

fn check_tall(x: &Mat) -> Result<()> {
    if x.rows() < x.cols() {
        return Err(Error::Shape(format!("det_{{n,k}} needs n >= k, got a {}x{} matrix", x.rows(), x.cols())));
    }
    if x.rows() > 63 {
        return Err(Error::Shape(format!("at most 63 rows are supported, got {}", x.rows())));
    }
    Ok(())
}

/// Signed sum over all injections `[k] -> [n]`.
pub fn det_injection_sum(x: &Mat) -> Result<Scalar> {
    check_tall(x)?;
    let field = x.field();
    let mut total = field.zero();
    for sigma in injections(x.rows(), x.cols()) {
        let mut term = field.one();
        for (j, &row) in sigma.iter().enumerate() {
            let e = x.at(row - 1, j);
            if e.is_zero() {
                term = field.zero();
                break;
            }
            term *= e;
        }
        if !term.is_zero() {
            total += &signed(injection_sign(&sigma), term);
        }
    }
    Ok(total)
}

/// Alternating sum of the maximal `k x k` minors.
pub fn det_minor_sum(x: &Mat) -> Result<Scalar> {
    check_tall(x)?;
    let field = x.field();
    let k = x.cols();
    let mut total = field.zero();
    for c in k_subsets(x.rows(), k) {
        let minor = det_of_rows(field, k, |r, col| x.at(c[r] - 1, col).clone());
        if !minor.is_zero() {
            total += &signed(parity_sign(subset_exponent(&c)), minor);
        }
    }
    Ok(total)
}

/// Laplace expansion along column `col`, then recursively along the first remaining
/// column, memoized on the set of surviving rows.
pub fn det_laplace(x: &Mat, col: usize) -> Result<Scalar> {
    check_tall(x)?;
    let k = x.cols();
    if k == 0 {
        return Ok(x.field().one());
    }
    if col == 0 || col > k {
        return Err(Error::Bounds(format!("column {col} outside [1, {k}]")));
    }
    let order: Vec<usize> = std::iter::once(col - 1).chain((0..k).filter(|&c| c != col - 1)).collect();
    let full = (1u64 << x.rows()) - 1;
    let mut memo = HashMap::new();
    // the recursion assigns row signs as if expanding along column 1
    Ok(signed(parity_sign(col - 1), laplace_rec(x, &order, full, 0, &mut memo)))
}

fn laplace_rec(x: &Mat, order: &[usize], rows: u64, depth: usize, memo: &mut HashMap<u64, Scalar>) -> Scalar {
    let field = x.field();
    let remaining = order.len() - depth;
    if remaining == 0 {
        return field.one();
    }
    if let Some(v) = memo.get(&rows) {
        return v.clone();
    }
    let col = order[depth];
    let mut total = field.zero();
    let mut pos = 0;
    let mut bits = rows;
    while bits != 0 {
        let r = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let e = x.at(r, col);
        if !e.is_zero() {
            let term = if remaining == 1 {
                e.clone()
            } else {
                e * &laplace_rec(x, order, rows & !(1u64 << r), depth + 1, memo)
            };
            total += &signed(parity_sign(pos), term);
        }
        pos += 1;
    }
    memo.insert(rows, total.clone());
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Injection,
    Minor,
    Laplace,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Injection, Algorithm::Minor, Algorithm::Laplace];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Injection => "injection",
            Algorithm::Minor => "minor",
            Algorithm::Laplace => "laplace",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown algorithm {s:?}")))
    }
}

/// Evaluates with the chosen algorithm; Laplace expands along column 1.
pub fn det(x: &Mat, algo: Algorithm) -> Result<Scalar> {
    match algo {
        Algorithm::Injection => det_injection_sum(x),
        Algorithm::Minor => det_minor_sum(x),
        Algorithm::Laplace => det_laplace(x, 1),
    }
}

/// Coefficients of `det_{n,k}(A + λB)` as a polynomial in `λ`, lowest degree first.
///
/// The degree-`d` coefficient is the sum over `d`-sets of columns of the determinant of
/// `A` with those columns taken from `B`.
pub fn binomial_coeffs(a: &Mat, b: &Mat) -> Result<Vec<Scalar>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape(format!("{}x{} and {}x{} matrices", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    b.check_field(a.field())?;
    check_tall(a)?;
    let k = a.cols();
    (0..=k)
        .map(|d| {
            let mut coeff = a.field().zero();
            for replaced in k_subsets(k, d) {
                let mixed = Mat::from_fn(a.field(), a.rows(), k, |r, c| {
                    if replaced.contains(&(c + 1)) {
                        b.at(r, c).clone()
                    } else {
                        a.at(r, c).clone()
                    }
                });
                coeff += &det_minor_sum(&mixed)?;
            }
            Ok(coeff)
        })
        .collect()
}

fn check_row(x: &Mat, i: usize) -> Result<()> {
    if i == 0 || i > x.rows() {
        return Err(Error::Bounds(format!("row {i} outside [1, {}]", x.rows())));
    }
    Ok(())
}

/// Rows `i..n` followed by rows `1..i-1`, the leading block optionally negated.
fn rotate(x: &Mat, i: usize, negate_moved: bool) -> Mat {
    let n = x.rows();
    Mat::from_fn(x.field(), n, x.cols(), |r, c| {
        let src = (r + i - 1) % n;
        let v = x.at(src, c).clone();
        if negate_moved && src < i - 1 {
            -v
        } else {
            v
        }
    })
}

/// Cyclic row shift putting row `i` first; requires `n + k` odd.
///
/// Returns the shifted matrix and `s` with `s * det(shifted) = det(x)`.
pub fn cyclic_shift(x: &Mat, i: usize) -> Result<(Mat, Scalar)> {
    if (x.rows() + x.cols()) % 2 == 0 {
        return Err(Error::Parity(format!("cyclic shift needs n + k odd, got n={} k={}", x.rows(), x.cols())));
    }
    check_row(x, i)?;
    let sign = Scalar::sign_power(x.field(), (i + 1) * x.cols());
    Ok((rotate(x, i, false), sign))
}

/// Semi-cyclic row shift: as [`cyclic_shift`] but rows `1..i-1` change sign on the way
/// to the bottom; requires `n + k` even.
pub fn semicyclic_shift(x: &Mat, i: usize) -> Result<(Mat, Scalar)> {
    if (x.rows() + x.cols()) % 2 == 1 {
        return Err(Error::Parity(format!("semi-cyclic shift needs n + k even, got n={} k={}", x.rows(), x.cols())));
    }
    check_row(x, i)?;
    let sign = Scalar::sign_power(x.field(), (x.rows() - i) * x.cols());
    Ok((rotate(x, i, true), sign))
}

/// The shift matching the parity of `n + k`, without its sign factor.
pub fn scs_apply(x: &Mat, i0: usize) -> Result<Mat> {
    check_row(x, i0)?;
    Ok(rotate(x, i0, (x.rows() + x.cols()) % 2 == 0))
}

/// Moves a left-kernel vector along with [`scs_apply`]: `z°ᵗ·scs_apply(X) = zᵗX`.
pub fn scs_transport_z(z: &[Scalar], i0: usize, n: usize, k: usize) -> Result<Vec<Scalar>> {
    if z.len() != n {
        return Err(Error::Shape(format!("vector of length {} for n = {n}", z.len())));
    }
    if i0 == 0 || i0 > n {
        return Err(Error::Bounds(format!("row {i0} outside [1, {n}]")));
    }
    let flip = (n + k + 1) % 2 == 1;
    Ok(z[i0 - 1..].iter().cloned().chain(z[..i0 - 1].iter().map(|v| if flip { -v } else { v.clone() })).collect())
}

/// `X` with a column of ones appended.
pub fn with_ones_column(x: &Mat) -> Mat {
    let k = x.cols();
    Mat::from_fn(x.field(), x.rows(), k + 1, |r, c| if c == k { x.field().one() } else { x.at(r, c).clone() })
}

/// `Σ_i (-1)^i X[i|)`, so the first row enters with a minus sign.
pub fn alternating_row_sum(x: &Mat) -> Vec<Scalar> {
    let field = x.field();
    (0..x.cols())
        .map(|c| {
            let mut s = field.zero();
            for r in 0..x.rows() {
                if r % 2 == 0 {
                    s -= x.at(r, c);
                } else {
                    s += x.at(r, c);
                }
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn set(n: usize, v: &[usize]) -> IndexSet {
        IndexSet::new(n, v.to_vec()).unwrap()
    }

    fn tall() -> Mat {
        Mat::from_i64_rows(q(), &[&[1, 0], &[0, 1], &[0, 0]])
    }

    fn all_three(x: &Mat) -> [Scalar; 3] {
        [det_injection_sum(x).unwrap(), det_minor_sum(x).unwrap(), det_laplace(x, 1).unwrap()]
    }

    #[test]
    fn subset_signs() {
        assert_eq!(sgn_subset(&set(3, &[1, 2])), 1);
        assert_eq!(sgn_subset(&set(3, &[1, 3])), -1);
        assert_eq!(sgn_subset(&set(3, &[2, 3])), 1);
        assert_eq!(sgn_subset(&set(9, &[1, 3])), -1);
    }

    #[test]
    fn injection_signs() {
        let s = |v: &[usize]| sgn_injection(&RowInjection::new(3, v.to_vec()).unwrap());
        assert_eq!(s(&[1, 2]), 1);
        assert_eq!(s(&[2, 1]), -1);
        assert_eq!(s(&[3, 1]), 1);
        assert!(RowInjection::new(3, vec![2, 2]).is_err());
    }

    #[test]
    fn small_determinants() {
        let five = Mat::from_i64_rows(q(), &[&[5]]);
        assert_eq!(all_three(&five), [(); 3].map(|_| Scalar::from_i64(q(), 5)));
        let ones = Mat::from_i64_rows(q(), &[&[1], &[1]]);
        assert!(all_three(&ones).iter().all(Scalar::is_zero));
        assert_eq!(all_three(&tall()), [(); 3].map(|_| q().one()));
        let same = Mat::from_i64_rows(q(), &[&[1, 1], &[1, 1], &[1, 1]]);
        assert!(det_laplace(&same, 2).unwrap().is_zero());
    }

    #[test]
    fn square_case_is_classical() {
        let a = Mat::from_i64_rows(q(), &[&[2, 7, 1], &[0, 3, 4], &[5, 1, 1]]);
        let expected = crate::linalg::square_det(&a).unwrap();
        assert_eq!(all_three(&a), [(); 3].map(|_| expected.clone()));
        for col in 1..=3 {
            assert_eq!(det_laplace(&a, col).unwrap(), expected);
        }
        let b = Mat::from_i64_rows(q(), &[&[1, 1], &[2, 1]]);
        assert_eq!(det_laplace(&b, 2).unwrap(), Scalar::from_i64(q(), -1));
    }

    #[test]
    fn wide_is_rejected() {
        let wide = Mat::zeros(q(), 2, 3);
        assert!(matches!(det_injection_sum(&wide), Err(Error::Shape(_))));
        assert!(matches!(det_minor_sum(&wide), Err(Error::Shape(_))));
        assert!(matches!(det_laplace(&wide, 1), Err(Error::Shape(_))));
        assert!(matches!(det_laplace(&tall(), 3), Err(Error::Bounds(_))));
    }

    #[test]
    fn binomial_expansion() {
        let a = Mat::from_i64_rows(q(), &[&[1, 2], &[0, -1], &[3, 1]]);
        let b = Mat::from_i64_rows(q(), &[&[2, 0], &[1, 1], &[-2, 5]]);
        let coeffs = binomial_coeffs(&a, &b).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[0], det_minor_sum(&a).unwrap());
        for lambda in 0..3 {
            let l = Scalar::from_i64(q(), lambda);
            let direct = det_minor_sum(&a.add(&b.scale(&l)).unwrap()).unwrap();
            let mut power = q().one();
            let mut poly = q().zero();
            for c in &coeffs {
                poly += &(c * &power);
                power *= &l;
            }
            assert_eq!(poly, direct);
        }
        let zero = Mat::zeros(q(), 3, 2);
        let coeffs = binomial_coeffs(&zero, &b).unwrap();
        assert!(coeffs[..2].iter().all(Scalar::is_zero));
        assert_eq!(coeffs[2], det_minor_sum(&b).unwrap());
    }

    #[test]
    fn cyclic_examples() {
        let (same, s) = cyclic_shift(&tall(), 1).unwrap();
        assert_eq!((same, s), (tall(), q().one()));
        let (rot, s) = cyclic_shift(&tall(), 2).unwrap();
        assert_eq!(rot, Mat::from_i64_rows(q(), &[&[0, 1], &[0, 0], &[1, 0]]));
        assert_eq!(s, q().one());
        assert_eq!(det_minor_sum(&rot).unwrap(), q().one());
        assert_eq!(cyclic_shift(&tall(), 3).unwrap().1, q().one());
        assert!(matches!(cyclic_shift(&Mat::zeros(q(), 3, 1), 1), Err(Error::Parity(_))));
    }

    #[test]
    fn semicyclic_examples() {
        let x = Mat::from_i64_rows(q(), &[&[2], &[3], &[7]]);
        let (same, s) = semicyclic_shift(&x, 1).unwrap();
        assert_eq!((same, s), (x.clone(), q().one()));
        let (rot, s) = semicyclic_shift(&x, 2).unwrap();
        assert_eq!(rot, Mat::from_i64_rows(q(), &[&[3], &[7], &[-2]]));
        assert_eq!(s, Scalar::from_i64(q(), -1));
        assert_eq!(&s * &det_minor_sum(&rot).unwrap(), det_minor_sum(&x).unwrap());
        assert!(matches!(semicyclic_shift(&tall(), 1), Err(Error::Parity(_))));
    }

    #[test]
    fn scs_examples() {
        let x = Mat::from_i64_rows(q(), &[&[2], &[3], &[7]]);
        assert_eq!(scs_apply(&x, 1).unwrap(), x);
        assert_eq!(scs_apply(&x, 2).unwrap(), Mat::from_i64_rows(q(), &[&[3], &[7], &[-2]]));
        let y = Mat::from_i64_rows(q(), &[&[1], &[2], &[3], &[4]]);
        assert_eq!(scs_apply(&y, 3).unwrap(), Mat::from_i64_rows(q(), &[&[3], &[4], &[1], &[2]]));
        assert!(scs_apply(&y, 5).is_err());
    }

    #[test]
    fn transported_vector() {
        let z: Vec<Scalar> = [1, 0, 1].iter().map(|&v| Scalar::from_i64(q(), v)).collect();
        let ints = |v: &[i64]| v.iter().map(|&x| Scalar::from_i64(q(), x)).collect::<Vec<_>>();
        assert_eq!(scs_transport_z(&z, 1, 3, 1).unwrap(), z);
        assert_eq!(scs_transport_z(&z, 2, 3, 1).unwrap(), ints(&[0, 1, -1]));
        assert_eq!(scs_transport_z(&z, 2, 3, 2).unwrap(), ints(&[0, 1, 1]));
        // the transported vector pairs with the shifted matrix exactly as z pairs with X
        for k in 1..=2 {
            let x = Mat::from_fn(q(), 3, k, |r, c| Scalar::from_i64(q(), (3 * r + c) as i64 - 4));
            for i0 in 1..=3 {
                let moved = scs_transport_z(&z, i0, 3, k).unwrap();
                let lhs = scs_apply(&x, i0).unwrap().left_mul_vec(&moved).unwrap();
                assert_eq!(lhs, x.left_mul_vec(&z).unwrap());
            }
        }
        assert!(scs_transport_z(&z, 1, 4, 1).is_err());
    }

    #[test]
    fn ones_column_and_alternating_sum() {
        let x = Mat::from_i64_rows(q(), &[&[2], &[3], &[7]]);
        assert_eq!(with_ones_column(&x), Mat::from_i64_rows(q(), &[&[2, 1], &[3, 1], &[7, 1]]));
        assert_eq!(alternating_row_sum(&x), vec![Scalar::from_i64(q(), -6)]);
    }
}
