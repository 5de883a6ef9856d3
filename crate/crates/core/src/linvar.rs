//! Linear varieties `AS(A, b) = {x : A x = b}` in coordinate spaces `F^E`.
//!
//! A variety is stored by its constraints together with one point of it. Constructions
//! that can produce the empty set return `Option`, with `None` meaning empty.
//!
//! Text format:
//!
//! ```text
//! space 3 2
//! 1 6 F2
//! 1 0 1 0 1 0
//! b: 0
//! ```
//!
//! `space n k` declares the ground set `[n] x [k]` (row-major), `space n` declares `[n]`.
//! The matrix block follows the matrix text format and the `b:` line lists the
//! right-hand side.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg;
use crate::mat::{format_vector, Mat};
use crate::matroid::{vector_matroid, ElementSet, GroundSet, Label, Matroid};

pub const DEFAULT_POINT_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateSpace {
    field: FieldSpec,
    ground: GroundSet,
    shape: Option<(usize, usize)>,
}

impl CoordinateSpace {
    pub fn new(field: FieldSpec, ground: GroundSet) -> Result<Self> {
        if ground.is_empty() {
            return Err(Error::GroundSet("a coordinate space needs at least one coordinate".into()));
        }
        Ok(CoordinateSpace { field, ground, shape: None })
    }

    /// `F^n` with coordinates `1..=n`.
    pub fn vectors(field: FieldSpec, n: usize) -> Result<Self> {
        CoordinateSpace::new(field, GroundSet::indices(n)?)
    }

    /// `M_{n,k}(F)` with coordinates `(i, j)` in row-major order.
    pub fn matrices(field: FieldSpec, n: usize, k: usize) -> Result<Self> {
        let mut space = CoordinateSpace::new(field, GroundSet::cells(n, k)?)?;
        space.shape = Some((n, k));
        Ok(space)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn dim(&self) -> usize {
        self.ground.len()
    }

    /// `(n, k)` for matrix spaces.
    pub fn shape(&self) -> Option<(usize, usize)> {
        self.shape
    }

    fn require_shape(&self) -> Result<(usize, usize)> {
        self.shape.ok_or_else(|| Error::Unsupported("operation needs a matrix space".into()))
    }

    pub fn point_to_mat(&self, point: &[Scalar]) -> Result<Mat> {
        let (n, k) = self.require_shape()?;
        self.check_point(point)?;
        Mat::new(self.field, n, k, point.to_vec())
    }

    pub fn mat_to_point(&self, x: &Mat) -> Result<Vec<Scalar>> {
        let (n, k) = self.require_shape()?;
        if (x.rows(), x.cols()) != (n, k) {
            return Err(Error::Shape(format!("{}x{} matrix in a space of {n}x{k} matrices", x.rows(), x.cols())));
        }
        x.check_field(self.field)?;
        Ok(x.entries().to_vec())
    }

    fn check_point(&self, point: &[Scalar]) -> Result<()> {
        if point.len() != self.dim() {
            return Err(Error::Shape(format!(
                "point of length {} in a space of dimension {}",
                point.len(),
                self.dim()
            )));
        }
        if let Some(bad) = point.iter().find(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch(format!("{} in a space over {}", bad.field(), self.field)));
        }
        Ok(())
    }

    fn header(&self) -> String {
        match self.shape {
            Some((n, k)) => format!("space {n} {k}"),
            None => format!("space {}", self.dim()),
        }
    }
}

/// `A x = b` with the columns of `A` labelled by the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    space: CoordinateSpace,
    a: Mat,
    b: Vec<Scalar>,
}

impl ConstraintSystem {
    pub fn new(space: CoordinateSpace, a: Mat, b: Vec<Scalar>) -> Result<Self> {
        if a.cols() != space.dim() {
            return Err(Error::Shape(format!("{} columns for {} coordinates", a.cols(), space.dim())));
        }
        if b.len() != a.rows() {
            return Err(Error::Shape(format!("{} right-hand sides for {} equations", b.len(), a.rows())));
        }
        a.check_field(space.field())?;
        if let Some(bad) = b.iter().find(|s| s.field() != space.field()) {
            return Err(Error::FieldMismatch(format!("right-hand side over {}", bad.field())));
        }
        Ok(ConstraintSystem { space, a, b })
    }

    /// No equations: the whole space.
    pub fn whole(space: CoordinateSpace) -> Self {
        let a = Mat::zeros(space.field(), 0, space.dim());
        ConstraintSystem { space, a, b: Vec::new() }
    }

    pub fn space(&self) -> &CoordinateSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Mat {
        &self.a
    }

    pub fn rhs(&self) -> &[Scalar] {
        &self.b
    }

    /// Appends the rows of `other` (same space).
    pub fn stack(&self, a: &Mat, b: &[Scalar]) -> Result<Self> {
        ConstraintSystem::new(self.space.clone(), self.a.vcat(a)?, self.b.iter().chain(b).cloned().collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
        let bad_header = || Error::Parse { line: hl + 1, message: "expected `space n k` or `space n`".into() };
        let dims: Vec<usize> = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["space", rest @ ..] if (1..=2).contains(&rest.len()) => {
                rest.iter().map(|t| t.parse().map_err(|_| bad_header())).collect::<Result<_>>()?
            }
            _ => return Err(bad_header()),
        };
        let (a, next) = Mat::parse_block(&mut lines)?;
        let space = match dims.as_slice() {
            [n, k] => CoordinateSpace::matrices(a.field(), *n, *k),
            [n] => CoordinateSpace::vectors(a.field(), *n),
            _ => unreachable!(),
        }
        .map_err(|e| e.at_line(hl + 1))?;
        let (bl, bline) = next.ok_or(Error::Parse { line: hl + a.rows() + 3, message: "missing `b:` line".into() })?;
        let values = bline
            .trim()
            .strip_prefix("b:")
            .ok_or(Error::Parse { line: bl + 1, message: "expected `b: ...`".into() })?;
        let b = values
            .split_whitespace()
            .map(|t| Scalar::parse(a.field(), t).map_err(|e| e.at_line(bl + 1)))
            .collect::<Result<Vec<_>>>()?;
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln + 1, message: "trailing content after `b:` line".into() });
        }
        ConstraintSystem::new(space, a, b).map_err(|e| e.at_line(bl + 1))
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.space.header())?;
        write!(f, "{}", self.a)?;
        if self.b.is_empty() {
            writeln!(f, "b:")
        } else {
            writeln!(f, "b: {}", format_vector(&self.b))
        }
    }
}

impl FromStr for ConstraintSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstraintSystem::parse(s)
    }
}

/// Coordinate pins `x_e = c_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pins: Vec<(usize, Scalar)>,
}

impl Slice {
    pub fn new(space: &CoordinateSpace, pins: &[(Label, Scalar)]) -> Result<Self> {
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(pins.len());
        for (label, value) in pins {
            let pos = space.ground().position(*label)?;
            if out.iter().any(|(p, _)| *p == pos) {
                return Err(Error::GroundSet(format!("{label} pinned twice")));
            }
            if value.field() != space.field() {
                return Err(Error::FieldMismatch(format!("pin value over {}", value.field())));
            }
            out.push((pos, value.clone()));
        }
        Ok(Slice { pins: out })
    }

    /// Pins the elements of `set`, in ground order, to `values`.
    pub fn on_set(space: &CoordinateSpace, set: ElementSet, values: &[Scalar]) -> Result<Self> {
        if set.len() != values.len() {
            return Err(Error::Shape(format!("{} values for {} pinned coordinates", values.len(), set.len())));
        }
        let labels = space.ground().labels_of(set);
        let pins: Vec<(Label, Scalar)> = labels.into_iter().zip(values.iter().cloned()).collect();
        Slice::new(space, &pins)
    }

    pub fn pinned(&self) -> ElementSet {
        ElementSet::from_positions(self.pins.iter().map(|(p, _)| *p))
    }

    pub fn is_empty(&self) -> bool {
        self.pins.is_empty()
    }
}

/// An injection `f : from -> to` between ground sets. Projecting along `f` reads the
/// coordinates of a point of `F^to` at `f(e)` for every `e` in `from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexInjection {
    from: GroundSet,
    to: GroundSet,
    map: Vec<usize>,
}

impl IndexInjection {
    pub fn new(from: GroundSet, to: GroundSet, f: impl Fn(Label) -> Label) -> Result<Self> {
        let map = from.labels().iter().map(|&l| to.position(f(l))).collect::<Result<Vec<_>>>()?;
        let mut sorted = map.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::GroundSet("map is not injective".into()));
        }
        Ok(IndexInjection { from, to, map })
    }

    /// Selects the listed coordinates of `to`, in the given order, as `1..=m`.
    pub fn selecting(to: GroundSet, labels: &[Label]) -> Result<Self> {
        let from = GroundSet::indices(labels.len())?;
        IndexInjection::new(from, to, |l| match l {
            Label::Index(i) => labels[i - 1],
            Label::Cell(..) => unreachable!(),
        })
    }

    pub fn from(&self) -> &GroundSet {
        &self.from
    }

    pub fn to(&self) -> &GroundSet {
        &self.to
    }

    pub fn apply(&self, label: Label) -> Result<Label> {
        Ok(self.to.label(self.map[self.from.position(label)?]))
    }

    /// `f(X)` as a subset of `to`.
    pub fn image_of(&self, set: ElementSet) -> ElementSet {
        ElementSet::from_positions(set.positions().map(|p| self.map[p]))
    }

    pub fn image(&self) -> ElementSet {
        self.image_of(self.from.full())
    }

    /// `f^{-1}(Y)` as a subset of `from`.
    pub fn preimage_of(&self, set: ElementSet) -> ElementSet {
        ElementSet::from_positions((0..self.map.len()).filter(|&p| set.contains(self.map[p])))
    }

    /// `π_f(x)`.
    pub fn project_point(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.map.iter().map(|&p| x[p].clone()).collect()
    }
}

/// The injection `[n-1] x [k-1] -> [n] x [k]` whose image avoids row `i` and column `j`.
pub fn ins_map(n: usize, k: usize, i: usize, j: usize) -> Result<IndexInjection> {
    if k < 2 || n < k {
        return Err(Error::Bounds(format!("striking out needs n >= k > 1, got n={n} k={k}")));
    }
    if i == 0 || i > n || j == 0 || j > k {
        return Err(Error::Bounds(format!("cell ({i},{j}) outside [{n}]x[{k}]")));
    }
    IndexInjection::new(GroundSet::cells(n - 1, k - 1)?, GroundSet::cells(n, k)?, |l| match l {
        Label::Cell(a, b) => Label::Cell(if a >= i { a + 1 } else { a }, if b >= j { b + 1 } else { b }),
        Label::Index(_) => unreachable!(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearVariety {
    rep: ConstraintSystem,
    witness: Vec<Scalar>,
    codim: usize,
}

impl LinearVariety {
    /// The solution set of `cs`, or `None` when the system is inconsistent.
    pub fn from_constraints(cs: ConstraintSystem) -> Option<Self> {
        let witness = linalg::solve_affine(&cs.a, &cs.b).expect("validated shapes")?;
        let codim = linalg::rank(&cs.a);
        Some(LinearVariety { rep: cs, witness, codim })
    }

    pub fn whole(space: CoordinateSpace) -> Self {
        LinearVariety::from_constraints(ConstraintSystem::whole(space)).expect("consistent")
    }

    pub fn space(&self) -> &CoordinateSpace {
        &self.rep.space
    }

    pub fn constraints(&self) -> &ConstraintSystem {
        &self.rep
    }

    pub fn witness(&self) -> &[Scalar] {
        &self.witness
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn dim(&self) -> usize {
        self.space().dim() - self.codim
    }

    /// A basis of the direction space `{x : A x = 0}`.
    pub fn direction_basis(&self) -> Vec<Vec<Scalar>> {
        linalg::nullspace_basis(&self.rep.a)
    }

    pub fn contains(&self, x: &[Scalar]) -> Result<bool> {
        self.space().check_point(x)?;
        Ok(self.rep.a.mul_vec(x)? == self.rep.b)
    }

    /// True when both varieties are the same subset of the same space.
    pub fn same_set(&self, other: &LinearVariety) -> bool {
        self.space() == other.space()
            && self.codim == other.codim
            && other.contains(&self.witness).unwrap_or(false)
            && self.rep.a.vcat(&other.rep.a).map(|m| linalg::rank(&m) == self.codim).unwrap_or(false)
    }

    /// Keeps the first linearly independent rows of `A`, in order.
    pub fn reduce_full_rank(&self) -> LinearVariety {
        let a = &self.rep.a;
        let mut kept: Vec<usize> = Vec::new();
        for r in 1..=a.rows() {
            let mut trial = kept.clone();
            trial.push(r);
            if linalg::rank(&a.select(&trial, &(1..=a.cols()).collect::<Vec<_>>())) == trial.len() {
                kept = trial;
            }
        }
        let rows = a.select(&kept, &(1..=a.cols()).collect::<Vec<_>>());
        let b = kept.iter().map(|&r| self.rep.b[r - 1].clone()).collect();
        LinearVariety {
            rep: ConstraintSystem { space: self.rep.space.clone(), a: rows, b },
            witness: self.witness.clone(),
            codim: self.codim,
        }
    }

    /// `M(K)`, the dual of the vector matroid of the constraint matrix.
    pub fn matroid(&self) -> Matroid {
        vector_matroid(&self.rep.a, self.space().ground().clone()).expect("column count matches the ground set").dual()
    }

    /// `K ∩ U`, or `None` when empty.
    pub fn intersect_slice(&self, slice: &Slice) -> Option<LinearVariety> {
        if slice.is_empty() {
            return Some(self.clone());
        }
        let field = self.space().field();
        let dim = self.space().dim();
        let pins =
            Mat::from_fn(
                field,
                slice.pins.len(),
                dim,
                |r, c| {
                    if slice.pins[r].0 == c {
                        field.one()
                    } else {
                        field.zero()
                    }
                },
            );
        let values: Vec<Scalar> = slice.pins.iter().map(|(_, v)| v.clone()).collect();
        LinearVariety::from_constraints(self.rep.stack(&pins, &values).expect("same space"))
    }

    /// A point of `K` taking the values `c` on `set`, which must be independent in `M(K)`.
    pub fn independent_assignment_witness(&self, set: ElementSet, c: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.matroid().is_independent(set)? {
            return Err(Error::Precondition(format!(
                "{} is dependent in the matroid of the variety",
                self.space().ground().format(set)
            )));
        }
        let slice = Slice::on_set(self.space(), set, c)?;
        let point = self.intersect_slice(&slice).ok_or(Error::EmptyVariety)?;
        Ok(point.witness)
    }

    /// `π_f(K)` in `F^{from(f)}`.
    pub fn project(&self, f: &IndexInjection) -> Result<LinearVariety> {
        if f.to() != self.space().ground() {
            return Err(Error::GroundSet("injection does not land in the variety's ground set".into()));
        }
        let field = self.space().field();
        let target = CoordinateSpace {
            field,
            ground: f.from().clone(),
            shape: match f.from().labels().last() {
                Some(Label::Cell(n, k)) if *f.from() == GroundSet::cells(*n, *k)? => Some((*n, *k)),
                _ => None,
            },
        };
        if target.ground.is_empty() {
            return Err(Error::GroundSet("projection onto an empty ground set".into()));
        }
        let images: Vec<Vec<Scalar>> = self.direction_basis().iter().map(|v| f.project_point(v)).collect();
        let spanning = Mat::from_rows(field, target.dim(), &images)?;
        let normals = linalg::nullspace_basis(&spanning);
        let a = Mat::from_rows(field, target.dim(), &normals)?;
        let witness = f.project_point(&self.witness);
        let b = a.mul_vec(&witness)?;
        let codim = normals.len();
        Ok(LinearVariety { rep: ConstraintSystem { space: target, a, b }, witness, codim })
    }

    /// An equivalent full-rank system whose columns at `cobasis` form an identity block.
    pub fn reduce_wrt_cobasis(&self, cobasis: ElementSet) -> Result<ConstraintSystem> {
        if !self.matroid().is_cobasis(cobasis)? {
            return Err(Error::Rank(format!("{} is not a cobasis", self.space().ground().format(cobasis))));
        }
        let full = self.reduce_full_rank();
        let a = &full.rep.a;
        let rows: Vec<usize> = (1..=a.rows()).collect();
        let block = a.select(&rows, &cobasis.positions().map(|p| p + 1).collect::<Vec<_>>());
        let c = linalg::inverse(&block)?.ok_or_else(|| Error::Rank("cobasis block is singular".into()))?;
        let reduced = c.mul(a)?;
        let b = c.mul_vec(&full.rep.b)?;
        ConstraintSystem::new(self.space().clone(), reduced, b)
    }

    /// Substitutes `x = C^{-1} y`: the result is `{C x : x in K}`.
    pub fn change_of_variables(&self, c: &Mat) -> Result<LinearVariety> {
        let inv = linalg::inverse(c)?.ok_or_else(|| Error::Rank("change of variables is not invertible".into()))?;
        let a = self.rep.a.mul(&inv)?;
        let witness = c.mul_vec(&self.witness)?;
        Ok(LinearVariety {
            rep: ConstraintSystem::new(self.space().clone(), a, self.rep.b.clone())?,
            witness,
            codim: self.codim,
        })
    }

    /// Every point, for prime fields with at most `cap` points.
    pub fn enumerate_points(&self, cap: u128) -> Result<Points> {
        let q = self
            .space()
            .field()
            .modulus()
            .ok_or_else(|| Error::Unsupported("point enumeration over the rationals".into()))?;
        let dim = self.dim();
        let count = (q as u128).checked_pow(dim as u32).filter(|&c| c <= cap);
        let count = count.ok_or_else(|| Error::SizeCap(format!("{q}^{dim} points exceeds the cap of {cap}")))?;
        Ok(Points {
            field: self.space().field(),
            q,
            basis: self.direction_basis(),
            witness: self.witness.clone(),
            digits: vec![0; dim],
            remaining: count,
        })
    }
}

/// Points `s + Σ t_l v_l` over all coefficient vectors `t`, in lexicographic order.
pub struct Points {
    field: FieldSpec,
    q: u32,
    basis: Vec<Vec<Scalar>>,
    witness: Vec<Scalar>,
    digits: Vec<u32>,
    remaining: u128,
}

impl Iterator for Points {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let mut point = self.witness.clone();
        for (t, v) in self.digits.iter().zip(&self.basis) {
            if *t != 0 {
                let coeff = Scalar::from_i64(self.field, *t as i64);
                for (x, e) in point.iter_mut().zip(v) {
                    *x += &(&coeff * e);
                }
            }
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.q {
                break;
            }
            *d = 0;
        }
        Some(point)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, usize::try_from(self.remaining).ok())
    }
}

/// Pins column `j` of a matrix variety to `c`, then strikes out row `i` and column `j`.
pub fn strike_out_lift(k_var: &LinearVariety, i: usize, j: usize, c: &[Scalar]) -> Result<Option<LinearVariety>> {
    let (n, k) = k_var.space().require_shape()?;
    let f = ins_map(n, k, i, j)?;
    if c.len() != n {
        return Err(Error::Shape(format!("{} pin values for {n} rows", c.len())));
    }
    let pins: Vec<(Label, Scalar)> = (1..=n).map(|r| (Label::Cell(r, j), c[r - 1].clone())).collect();
    let slice = Slice::new(k_var.space(), &pins)?;
    match k_var.intersect_slice(&slice) {
        Some(sliced) => sliced.project(&f).map(Some),
        None => Ok(None),
    }
}

/// The symmetric difference `B* △ {e_old, e_new}`, where `e_old` is the cobasis element
/// hit by row `row` of a system reduced with respect to `cobasis`.
pub fn cobasis_exchange(cs: &ConstraintSystem, cobasis: ElementSet, row: usize, e_new: Label) -> Result<ElementSet> {
    let a = &cs.a;
    if row == 0 || row > a.rows() {
        return Err(Error::Bounds(format!("row {row} outside [1, {}]", a.rows())));
    }
    let ground = cs.space.ground();
    let new_pos = ground.position(e_new)?;
    let cols: Vec<usize> = cobasis.positions().collect();
    let is_permutation = cols.len() == a.rows()
        && (0..a.rows()).all(|r| {
            let row_hits = cols.iter().filter(|&&c| !a.at(r, c).is_zero()).count();
            row_hits == 1 && cols.iter().all(|&c| a.at(r, c).is_zero() || a.at(r, c).is_one())
        })
        && cols.iter().all(|&c| (0..a.rows()).filter(|&r| !a.at(r, c).is_zero()).count() == 1);
    if !is_permutation {
        return Err(Error::Precondition(format!("system is not reduced with respect to {}", ground.format(cobasis))));
    }
    if a.at(row - 1, new_pos).is_zero() {
        return Err(Error::Precondition(format!("entry ({row}, {e_new}) is zero")));
    }
    let old_pos = *cols.iter().find(|&&c| !a.at(row - 1, c).is_zero()).expect("permutation row");
    let exchanged = if old_pos == new_pos { cobasis } else { cobasis.remove(old_pos).insert(new_pos) };
    let m = vector_matroid(a, ground.clone())?;
    if !m.is_basis(exchanged)? {
        return Err(Error::Rank(format!("{} is not a cobasis", ground.format(exchanged))));
    }
    Ok(exchanged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    fn sc(f: FieldSpec, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_i64(f, x)).collect()
    }

    fn variety(f: FieldSpec, n: usize, rows: &[&[i64]], b: &[i64]) -> Option<LinearVariety> {
        let a = if rows.is_empty() { Mat::zeros(f, 0, n) } else { Mat::from_i64_rows(f, rows) };
        LinearVariety::from_constraints(
            ConstraintSystem::new(CoordinateSpace::vectors(f, n).unwrap(), a, sc(f, b)).unwrap(),
        )
    }

    fn points(k: &LinearVariety) -> Vec<Vec<Scalar>> {
        let mut all: Vec<_> = k.enumerate_points(DEFAULT_POINT_CAP).unwrap().collect();
        all.sort_by_key(|p| p.iter().map(|s| s.residue().unwrap()).collect::<Vec<_>>());
        all
    }

    fn set(ps: &[usize]) -> ElementSet {
        ElementSet::from_positions(ps.iter().map(|p| p - 1))
    }

    #[test]
    fn construction() {
        let k = variety(f2(), 2, &[&[1, 1]], &[1]).unwrap();
        assert_eq!(k.codim(), 1);
        assert_eq!(points(&k), vec![sc(f2(), &[0, 1]), sc(f2(), &[1, 0])]);
        assert!(variety(f2(), 2, &[&[1, 1], &[1, 1]], &[0, 1]).is_none());
        assert_eq!(variety(f2(), 2, &[], &[]).unwrap().codim(), 0);
    }

    #[test]
    fn membership() {
        let k = variety(f2(), 2, &[&[1, 1]], &[1]).unwrap();
        assert!(k.contains(k.witness()).unwrap());
        assert!(!k.contains(&sc(f2(), &[1, 1])).unwrap());
        assert!(k.contains(&sc(f2(), &[0, 1])).unwrap());
        assert!(k.contains(&sc(f2(), &[1])).is_err());
    }

    #[test]
    fn full_rank_reduction() {
        let k = variety(f2(), 2, &[&[1, 1], &[1, 1]], &[1, 1]).unwrap().reduce_full_rank();
        assert_eq!(k.constraints().matrix(), &Mat::from_i64_rows(f2(), &[&[1, 1]]));
        assert_eq!(k.constraints().rhs(), sc(f2(), &[1]).as_slice());
        let already = variety(f3(), 3, &[&[1, 0, 2], &[0, 1, 1]], &[1, 2]).unwrap();
        assert_eq!(already.reduce_full_rank(), already);
        let zero = variety(f2(), 2, &[&[0, 0]], &[0]).unwrap().reduce_full_rank();
        assert_eq!(zero.constraints().matrix().rows(), 0);
        assert_eq!(zero.codim(), 0);
    }

    #[test]
    fn variety_matroids() {
        let whole = variety(f2(), 2, &[], &[]).unwrap().matroid();
        assert_eq!(whole.independent_sets(20).unwrap().len(), 4);
        let line = variety(f2(), 2, &[&[1, 1]], &[1]).unwrap().matroid();
        assert_eq!(line.independent_sets(20).unwrap(), vec![set(&[]), set(&[1]), set(&[2])]);
        let point = variety(f2(), 2, &[&[1, 0], &[0, 1]], &[1, 0]).unwrap().matroid();
        assert_eq!(point.independent_sets(20).unwrap(), vec![ElementSet::EMPTY]);
    }

    #[test]
    fn assignment_witness() {
        let k = variety(f2(), 2, &[&[1, 1]], &[1]).unwrap();
        assert_eq!(k.independent_assignment_witness(ElementSet::EMPTY, &[]).unwrap(), k.witness());
        assert_eq!(k.independent_assignment_witness(set(&[1]), &sc(f2(), &[0])).unwrap(), sc(f2(), &[0, 1]));
        assert_eq!(k.independent_assignment_witness(set(&[1]), &sc(f2(), &[1])).unwrap(), sc(f2(), &[1, 0]));
        assert!(matches!(
            k.independent_assignment_witness(set(&[1, 2]), &sc(f2(), &[0, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn slices() {
        let k = variety(f2(), 2, &[&[1, 1]], &[1]).unwrap();
        let space = k.space().clone();
        assert_eq!(k.intersect_slice(&Slice::new(&space, &[]).unwrap()), Some(k.clone()));
        let pinned = k.intersect_slice(&Slice::new(&space, &[(Label::Index(1), f2().one())]).unwrap()).unwrap();
        assert_eq!(points(&pinned), vec![sc(f2(), &[1, 0])]);
        let h = variety(f2(), 2, &[&[1, 1]], &[0]).unwrap();
        let both = Slice::new(&space, &[(Label::Index(1), f2().zero()), (Label::Index(2), f2().one())]).unwrap();
        assert!(h.intersect_slice(&both).is_none());
        assert!(Slice::new(&space, &[(Label::Index(3), f2().one())]).is_err());
    }

    #[test]
    fn projections() {
        let k = variety(f2(), 3, &[&[1, 1, 0]], &[0]).unwrap();
        let ground = k.space().ground().clone();
        let id = IndexInjection::selecting(ground.clone(), ground.labels()).unwrap();
        assert!(k.project(&id).unwrap().same_set(&k));

        let whole = variety(f2(), 3, &[], &[]).unwrap();
        let f13 = IndexInjection::selecting(ground.clone(), &[Label::Index(1), Label::Index(3)]).unwrap();
        assert_eq!(whole.project(&f13).unwrap().codim(), 0);

        let f12 = IndexInjection::selecting(ground, &[Label::Index(1), Label::Index(2)]).unwrap();
        let image = k.project(&f12).unwrap();
        assert!(image.same_set(&variety(f2(), 2, &[&[1, 1]], &[0]).unwrap()));
    }

    #[test]
    fn striking_out_map() {
        let f = ins_map(3, 2, 2, 1).unwrap();
        assert_eq!(f.apply(Label::Cell(1, 1)).unwrap(), Label::Cell(1, 2));
        assert_eq!(f.apply(Label::Cell(2, 1)).unwrap(), Label::Cell(3, 2));
        let g = ins_map(3, 2, 1, 1).unwrap();
        assert_eq!(g.to().labels_of(g.image()), vec![Label::Cell(2, 2), Label::Cell(3, 2)]);
        assert!(ins_map(3, 1, 1, 1).is_err());
        assert!(ins_map(3, 2, 4, 1).is_err());
    }

    #[test]
    fn cobasis_reduction() {
        let k = variety(f3(), 2, &[&[2, 1]], &[0]).unwrap();
        let reduced = k.reduce_wrt_cobasis(set(&[1])).unwrap();
        assert_eq!(reduced.matrix(), &Mat::from_i64_rows(f3(), &[&[1, 2]]));
        let swapped = variety(f3(), 3, &[&[0, 1, 1], &[1, 0, 2]], &[1, 1]).unwrap();
        let again = swapped.reduce_wrt_cobasis(set(&[1, 2])).unwrap();
        assert_eq!(again.matrix(), &Mat::from_i64_rows(f3(), &[&[1, 0, 2], &[0, 1, 1]]));
        let whole = variety(f3(), 2, &[], &[]).unwrap();
        assert_eq!(whole.reduce_wrt_cobasis(ElementSet::EMPTY).unwrap().matrix().rows(), 0);
        assert!(matches!(k.reduce_wrt_cobasis(set(&[1, 2])), Err(Error::Rank(_))));
    }

    #[test]
    fn exchange() {
        let cs = ConstraintSystem::new(
            CoordinateSpace::vectors(f2(), 2).unwrap(),
            Mat::from_i64_rows(f2(), &[&[1, 1]]),
            sc(f2(), &[0]),
        )
        .unwrap();
        assert_eq!(cobasis_exchange(&cs, set(&[1]), 1, Label::Index(1)).unwrap(), set(&[1]));
        assert_eq!(cobasis_exchange(&cs, set(&[1]), 1, Label::Index(2)).unwrap(), set(&[2]));
        let sparse = ConstraintSystem::new(
            CoordinateSpace::vectors(f2(), 2).unwrap(),
            Mat::from_i64_rows(f2(), &[&[1, 0]]),
            sc(f2(), &[0]),
        )
        .unwrap();
        assert!(matches!(cobasis_exchange(&sparse, set(&[1]), 1, Label::Index(2)), Err(Error::Precondition(_))));
    }

    fn matrix_variety(f: FieldSpec, n: usize, k: usize, rows: &[&[i64]], b: &[i64]) -> Option<LinearVariety> {
        let space = CoordinateSpace::matrices(f, n, k).unwrap();
        let a = if rows.is_empty() { Mat::zeros(f, 0, n * k) } else { Mat::from_i64_rows(f, rows) };
        LinearVariety::from_constraints(ConstraintSystem::new(space, a, sc(f, b)).unwrap())
    }

    /// Brute force: project every point of `K ∩ U` and collect.
    fn lifted_points(k: &LinearVariety, i: usize, j: usize, c: &[Scalar]) -> Vec<Vec<Scalar>> {
        let (n, kk) = k.space().shape().unwrap();
        let f = ins_map(n, kk, i, j).unwrap();
        let mut out: Vec<Vec<Scalar>> = k
            .enumerate_points(DEFAULT_POINT_CAP)
            .unwrap()
            .filter(|p| (1..=n).all(|r| p[(r - 1) * kk + j - 1] == c[r - 1]))
            .map(|p| f.project_point(&p))
            .collect();
        out.sort_by_key(|p| p.iter().map(|s| s.residue().unwrap()).collect::<Vec<_>>());
        out.dedup();
        out
    }

    #[test]
    fn strike_out_whole_space() {
        let whole = matrix_variety(f2(), 3, 2, &[], &[]).unwrap();
        let lifted = strike_out_lift(&whole, 1, 1, &sc(f2(), &[1, 0, 0])).unwrap().unwrap();
        assert_eq!(lifted.space().shape(), Some((2, 1)));
        assert_eq!(lifted.codim(), 0);
    }

    #[test]
    fn strike_out_against_enumeration() {
        // (1,1,1) X = 0 over F2
        let rows: &[&[i64]] = &[&[1, 0, 1, 0, 1, 0], &[0, 1, 0, 1, 0, 1]];
        let k = matrix_variety(f2(), 3, 2, rows, &[0, 0]).unwrap();
        assert_eq!(k.enumerate_points(DEFAULT_POINT_CAP).unwrap().count(), 16);
        let delta = sc(f2(), &[1, 0, 0]);
        assert!(strike_out_lift(&k, 1, 1, &delta).unwrap().is_none());
        assert!(lifted_points(&k, 1, 1, &delta).is_empty());
        let c = sc(f2(), &[1, 1, 0]);
        let lifted = strike_out_lift(&k, 1, 1, &c).unwrap().unwrap();
        assert_eq!(points(&lifted), lifted_points(&k, 1, 1, &c));
    }

    #[test]
    fn point_enumeration() {
        let single = variety(f2(), 2, &[&[1, 0], &[0, 1]], &[1, 1]).unwrap();
        assert_eq!(points(&single), vec![sc(f2(), &[1, 1])]);
        assert_eq!(variety(f3(), 2, &[], &[]).unwrap().enumerate_points(DEFAULT_POINT_CAP).unwrap().count(), 9);
        assert!(matches!(variety(f3(), 2, &[], &[]).unwrap().enumerate_points(8), Err(Error::SizeCap(_))));
        let q = LinearVariety::whole(CoordinateSpace::vectors(FieldSpec::rationals(), 1).unwrap());
        assert!(matches!(q.enumerate_points(DEFAULT_POINT_CAP), Err(Error::Unsupported(_))));
    }

    #[test]
    fn text_format() {
        let text = "space 3 2\n1 6 F2\n1 0 1 0 1 0\nb: 1\n";
        let cs = ConstraintSystem::parse(text).unwrap();
        assert_eq!(cs.space().shape(), Some((3, 2)));
        assert_eq!(cs.to_string(), text);
        let empty = "space 2\n0 2 Q\nb:\n";
        assert_eq!(ConstraintSystem::parse(empty).unwrap().to_string(), empty);
        let err = ConstraintSystem::parse("space 2\n1 2 Q\n1 1\nb: x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        assert!(matches!(ConstraintSystem::parse("space 3\n1 2 Q\n1 1\nb: 0\n"), Err(Error::Parse { .. })));
    }
}
