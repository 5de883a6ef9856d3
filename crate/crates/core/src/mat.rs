//! Dense exact matrices and their text format.
//!
//! All public indices are 1-based. The text format is
//!
//! ```text
//! n k field
//! x11 x12 ... x1k
//! ...
//! xn1 xn2 ... xnk
//! ```
//!
//! where `field` is `Q` or `F<p>` and entries are integers (or `a/b` over `Q`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::index::{IndexSet, Select};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(format!("entry over {} in a matrix over {field}", bad.field())));
        }
        Ok(Mat { rows, cols, field, data })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from integer rows, reducing into `field`.
    ///
    /// Panics on ragged input; meant for literals in tests and examples.
    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| Scalar::from_i64(field, v))).collect();
        Mat { rows: rows.len(), cols, field, data }
    }

    pub fn from_fn(field: FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                assert_eq!(s.field(), field, "entry field mismatch");
                data.push(s);
            }
        }
        Mat { rows, cols, field, data }
    }

    /// Stacks row vectors; all must have length `cols`.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<Scalar>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!("row of length {} where {cols} expected", r.len())));
        }
        Mat::new(field, rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry `x_{i,j}`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "entry ({i},{j}) out of range");
        &self.data[(i - 1) * self.cols + (j - 1)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols, "entry ({i},{j}) out of range");
        assert_eq!(value.field(), self.field, "entry field mismatch");
        self.data[(i - 1) * self.cols + (j - 1)] = value;
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub(crate) fn row_slice(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Row `i` (1-based) as a vector.
    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.row_slice(i - 1).to_vec()
    }

    /// Column `j` (1-based) as a vector.
    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, j - 1).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_field(other.field)?;
        Ok(Mat::from_fn(self.field, self.rows, other.cols, |i, j| {
            let mut acc = self.field.zero();
            for t in 0..self.cols {
                acc += &(self.at(i, t) * other.at(t, j));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, x) in self.row_slice(i).iter().zip(v) {
                    acc += &(a * x);
                }
                acc
            })
            .collect())
    }

    /// `v^t · self` for a vector of length `rows`.
    pub fn left_mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.rows {
            return Err(Error::Shape(format!("vector of length {} for {} rows", v.len(), self.rows)));
        }
        let mut out = vec![self.field.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row_slice(i)) {
                *o += &(vi * a);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, field: self.field, data })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        let data = self.data.iter().map(|a| a * s).collect();
        Mat { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub(crate) fn check_field(&self, field: FieldSpec) -> Result<()> {
        if self.field != field {
            return Err(Error::FieldMismatch(format!("{} vs {field}", self.field)));
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Mat) -> Result<()> {
        self.check_field(other.field)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    fn check_bounds(set: &IndexSet, limit: usize, what: &str) -> Result<()> {
        match set.as_slice().last() {
            Some(&last) if last > limit => Err(Error::Bounds(format!("{what} index {last} exceeds {limit}"))),
            _ => Ok(()),
        }
    }

    fn resolve(sel: &Select, limit: usize, what: &str) -> Result<Vec<usize>> {
        match sel {
            Select::All => Ok((1..=limit).collect()),
            Select::Only(set) => {
                Self::check_bounds(set, limit, what)?;
                Ok(set.as_slice().to_vec())
            }
        }
    }

    /// `A[rows|cols]`: the selected rows and columns, in increasing order.
    pub fn submatrix_keep(&self, rows: &Select, cols: &Select) -> Result<Mat> {
        let r = Self::resolve(rows, self.rows, "row")?;
        let c = Self::resolve(cols, self.cols, "column")?;
        Ok(self.select(&r, &c))
    }

    /// `A(rows|cols)`: strikes out the given rows and columns.
    pub fn submatrix_drop(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Mat> {
        Self::check_bounds(rows, self.rows, "row")?;
        Self::check_bounds(cols, self.cols, "column")?;
        let r: Vec<usize> = (1..=self.rows).filter(|i| !rows.contains(*i)).collect();
        let c: Vec<usize> = (1..=self.cols).filter(|j| !cols.contains(*j)).collect();
        Ok(self.select(&r, &c))
    }

    /// Selection by 1-based index lists, in the given order; indices are trusted.
    pub(crate) fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.at(i - 1, j - 1).clone());
            }
        }
        Mat { rows: rows.len(), cols: cols.len(), field: self.field, data }
    }

    /// `A(|j]`, the `j`-th column as an `n x 1` matrix.
    pub fn column_mat(&self, j: usize) -> Result<Mat> {
        self.submatrix_keep(&Select::All, &Select::Only(IndexSet::new(self.cols, vec![j])?))
    }

    /// Horizontal concatenation `A|B`.
    pub fn hcat(&self, other: &Mat) -> Result<Mat> {
        self.check_field(other.field)?;
        if self.rows != other.rows {
            return Err(Error::Shape(format!("hcat of {} and {} rows", self.rows, other.rows)));
        }
        Ok(Mat::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Mat) -> Result<Mat> {
        self.check_field(other.field)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!("vcat of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Mat { rows: self.rows + other.rows, cols: self.cols, field: self.field, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Parses the text format; errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Mat> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (mat, rest) = Self::parse_block(&mut lines)?;
        if let Some((ln, _)) = rest {
            return Err(Error::Parse { line: ln + 1, message: "trailing content after matrix".into() });
        }
        Ok(mat)
    }

    /// Parses one matrix block from a line iterator, returning the first unconsumed line.
    pub(crate) fn parse_block<'a, I>(lines: &mut I) -> Result<(Mat, Option<(usize, &'a str)>)>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let header_err = |m: &str| Error::Parse { line: hl + 1, message: m.to_string() };
        if parts.len() != 3 {
            return Err(header_err("header must be `n k field`"));
        }
        let rows: usize = parts[0].parse().map_err(|_| header_err("bad row count"))?;
        let cols: usize = parts[1].parse().map_err(|_| header_err("bad column count"))?;
        let field: FieldSpec = parts[2].parse().map_err(|e: Error| e.at_line(hl + 1))?;
        let mut data = Vec::with_capacity(rows * cols);
        let mut last_line = hl + 1;
        for r in 0..rows {
            let (ln, line) = lines
                .next()
                .ok_or(Error::Parse { line: last_line + 1, message: format!("expected {rows} rows, found {r}") })?;
            last_line = ln + 1;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != cols {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: format!("expected {cols} entries, found {}", tokens.len()),
                });
            }
            for t in tokens {
                data.push(Scalar::parse(field, t).map_err(|e| e.at_line(ln + 1))?);
            }
        }
        Ok((Mat { rows, cols, field, data }, lines.next()))
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row_slice(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Mat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mat> {
        Mat::parse(s)
    }
}

pub(crate) fn format_vector(v: &[Scalar]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn set(n: usize, v: &[usize]) -> IndexSet {
        IndexSet::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn keep_examples() {
        let i3 = Mat::identity(q(), 3);
        let got = i3.submatrix_keep(&Select::Only(set(3, &[1, 2])), &Select::Only(set(3, &[1, 2]))).unwrap();
        assert_eq!(got, Mat::identity(q(), 2));

        let a = Mat::from_i64_rows(q(), &[&[1, 2], &[3, 4], &[5, 6]]);
        let got = a.submatrix_keep(&Select::Only(set(3, &[1, 3])), &Select::All).unwrap();
        assert_eq!(got, Mat::from_i64_rows(q(), &[&[1, 2], &[5, 6]]));

        let i2 = Mat::identity(q(), 2);
        let got = i2.submatrix_keep(&Select::Only(set(2, &[2])), &Select::Only(set(2, &[1]))).unwrap();
        assert_eq!(got, Mat::from_i64_rows(q(), &[&[0]]));
    }

    #[test]
    fn drop_examples() {
        let i3 = Mat::identity(q(), 3);
        assert_eq!(i3.submatrix_drop(&set(3, &[2]), &set(3, &[2])).unwrap(), Mat::identity(q(), 2));
        let a = Mat::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        assert_eq!(a.submatrix_drop(&set(2, &[1]), &IndexSet::empty(2)).unwrap(), Mat::from_i64_rows(q(), &[&[3, 4]]));
        assert_eq!(
            a.submatrix_drop(&IndexSet::empty(2), &set(2, &[2])).unwrap(),
            Mat::from_i64_rows(q(), &[&[1], &[3]])
        );
    }

    #[test]
    fn out_of_range_selection_is_a_bounds_error() {
        let a = Mat::identity(q(), 2);
        let err = a.submatrix_keep(&Select::Only(set(5, &[3])), &Select::All).unwrap_err();
        assert!(matches!(err, Error::Bounds(_)));
        assert!(matches!(a.submatrix_drop(&IndexSet::empty(2), &set(4, &[4])), Err(Error::Bounds(_))));
    }

    #[test]
    fn text_format() {
        let text = "2 3 Q\n1 -2 3/4\n0 5 -1/2\n";
        let m = Mat::parse(text).unwrap();
        assert_eq!(m.to_string(), text);
        let f3 = Mat::parse("1 2 F3\n-1 7\n").unwrap();
        assert_eq!(f3.to_string(), "1 2 F3\n2 1\n");
        let empty = Mat::parse("0 3 F2\n").unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 3));
        assert_eq!(empty.to_string(), "0 3 F2\n");
    }

    #[test]
    fn parse_errors_report_lines() {
        let err = Mat::parse("2 2 Q\n1 2\n3\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "expected 2 entries, found 1".into() });
        let err = Mat::parse("2 2 F4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Mat::parse("1 1 Q\nx\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Mat::parse("2 1 Q\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn products() {
        let a = Mat::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        let b = Mat::from_i64_rows(q(), &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), Mat::from_i64_rows(q(), &[&[2, 1], &[4, 3]]));
        let v = vec![Scalar::from_i64(q(), 1), Scalar::from_i64(q(), -1)];
        assert_eq!(a.mul_vec(&v).unwrap(), vec![Scalar::from_i64(q(), -1), Scalar::from_i64(q(), -1)]);
        assert_eq!(a.left_mul_vec(&v).unwrap(), vec![Scalar::from_i64(q(), -2), Scalar::from_i64(q(), -2)]);
        assert!(a.mul(&Mat::identity(q(), 3)).is_err());
    }
}
