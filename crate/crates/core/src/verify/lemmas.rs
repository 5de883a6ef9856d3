//! Registered lemma checks. Each lemma is a list of numbered cases; case `c` of lemma
//! number `l` draws its randomness from stream `l << 32 | c` of the suite seed, so any
//! case can be replayed on its own.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fp::{find_nonzero_det, FpDet, FpVariety};
use super::report::{Counterexample, Replay, Section, VerificationReport};
use super::subspaces::{for_each_with_pivots, pivot_sets};
use super::theorems::{alt_row_sum_space, annihilates_det, variety_from_residues};
use super::{case_rng, with_pool};
use crate::cullis::{
    alternating_row_sum, cyclic_shift, det_injection_sum, det_laplace, det_minor_sum, scs_apply, scs_transport_z,
    semicyclic_shift, with_ones_column,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{inverse, square_det};
use crate::linvar::{
    ins_map, strike_out_lift, ConstraintSystem, CoordinateSpace, IndexInjection, LinearVariety, Slice,
};
use crate::mat::Mat;
use crate::matroid::{column_matroid, vector_matroid, ElementSet, GroundSet, Label, Matroid};

pub type DetFn = fn(&Mat) -> Result<Scalar>;
pub type LaplaceFn = fn(&Mat, usize) -> Result<Scalar>;

/// The determinant implementations under test. Swapping one out lets a test confirm
/// that the suite notices a broken algorithm.
#[derive(Clone, Copy)]
pub struct DetSuite {
    pub injection: DetFn,
    pub minor: DetFn,
    pub laplace: LaplaceFn,
}

impl Default for DetSuite {
    fn default() -> Self {
        DetSuite { injection: det_injection_sum, minor: det_minor_sum, laplace: det_laplace }
    }
}

impl DetSuite {
    const NAMES: [&'static str; 3] = ["injection", "minor", "laplace"];

    fn eval(&self, which: usize, x: &Mat) -> Result<Scalar> {
        match which {
            0 => (self.injection)(x),
            1 => (self.minor)(x),
            _ => (self.laplace)(x, 1),
        }
    }
}

#[derive(Clone)]
pub struct LemmaSuiteConfig {
    pub seed: u64,
    pub jobs: usize,
    /// Lemma names to run; empty runs all.
    pub only: Vec<String>,
    pub dets: DetSuite,
}

impl Default for LemmaSuiteConfig {
    fn default() -> Self {
        LemmaSuiteConfig { seed: 0, jobs: 1, only: Vec::new(), dets: DetSuite::default() }
    }
}

enum Outcome {
    Pass,
    Skip(String),
    Fail(String),
}

type CaseFn = fn(&DetSuite, &mut ChaCha8Rng, u64) -> Result<Outcome>;

struct Lemma {
    name: &'static str,
    cases: fn() -> u64,
    run: CaseFn,
}

const LEMMAS: &[Lemma] = &[
    Lemma { name: "det-agreement", cases: || 15 * 2 * 100, run: det_agreement },
    Lemma { name: "det-basic-properties", cases: || 5 * 2 * 100, run: det_basic_properties },
    Lemma { name: "ones-column", cases: || 15 * 2 * 50, run: ones_column },
    Lemma { name: "shift-lemmas", cases: || shift_triples().len() as u64 * 4, run: shift_lemmas },
    Lemma { name: "scs-properties", cases: || scs_entries().len() as u64, run: scs_properties },
    Lemma { name: "matroid-axioms", cases: || 20, run: matroid_axioms },
    Lemma { name: "cobase-restriction", cases: || 20, run: cobase_restriction },
    Lemma { name: "variety-matroid", cases: || 20, run: variety_matroid },
    Lemma { name: "striking-out", cases: || 100, run: striking_out },
    Lemma { name: "cap-le1", cases: || cap_cases().len() as u64, run: cap_le1 },
];

pub fn lemma_names() -> Vec<&'static str> {
    LEMMAS.iter().map(|l| l.name).collect()
}

fn find_lemma(name: &str) -> Result<(usize, &'static Lemma)> {
    LEMMAS
        .iter()
        .enumerate()
        .find(|(_, l)| l.name == name)
        .ok_or_else(|| Error::Unsupported(format!("unknown lemma {name:?}; known: {}", lemma_names().join(", "))))
}

fn run_case(index: usize, lemma: &Lemma, seed: u64, case: u64, dets: &DetSuite) -> Outcome {
    let mut rng = case_rng(seed, (index as u64) << 32 | case);
    match (lemma.run)(dets, &mut rng, case) {
        Ok(o) => o,
        Err(e) => Outcome::Fail(format!("error: {e}")),
    }
}

/// Runs every selected lemma at its configured size.
pub fn verify_lemma_suite(cfg: &LemmaSuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let selected: Vec<(usize, &Lemma)> = if cfg.only.is_empty() {
        LEMMAS.iter().enumerate().collect()
    } else {
        cfg.only.iter().map(|n| find_lemma(n)).collect::<Result<_>>()?
    };
    let mut report = VerificationReport::new("lemmas");
    report.param("seed", cfg.seed);
    report.param("lemmas", selected.iter().map(|(_, l)| l.name).collect::<Vec<_>>().join(","));
    for (index, lemma) in selected {
        let total = (lemma.cases)();
        let outcomes: Vec<Outcome> = with_pool(cfg.jobs, || {
            (0..total).into_par_iter().map(|case| run_case(index, lemma, cfg.seed, case, &cfg.dets)).collect()
        });
        let mut section = Section { name: lemma.name.into(), cases: total, skipped: 0, failures: 0, note: None };
        for (case, outcome) in outcomes.into_iter().enumerate() {
            match outcome {
                Outcome::Pass => {}
                Outcome::Skip(why) => {
                    section.skipped += 1;
                    report.notes.push(format!("{} case {case} skipped: {why}", lemma.name));
                }
                Outcome::Fail(why) => {
                    section.failures += 1;
                    report.counterexamples.push(Counterexample {
                        key: format!("{}/{case:06}", lemma.name),
                        description: why,
                        replay: Replay::Lemma { lemma: lemma.name.into(), seed: cfg.seed, case: case as u64 },
                    });
                }
            }
        }
        report.cases += total;
        report.sections.push(section);
    }
    report.finish();
    report.wall_time = start.elapsed();
    Ok(report)
}

/// True when the case still fails.
pub(crate) fn replay_case(name: &str, seed: u64, case: u64, dets: &DetSuite) -> Result<bool> {
    let (index, lemma) = find_lemma(name)?;
    if case >= (lemma.cases)() {
        return Err(Error::Bounds(format!("{name} has {} cases, asked for {case}", (lemma.cases)())));
    }
    Ok(matches!(run_case(index, lemma, seed, case, dets), Outcome::Fail(_)))
}

// ---- random inputs -------------------------------------------------------------------

fn f2() -> FieldSpec {
    FieldSpec::prime(2).expect("prime")
}

fn f3() -> FieldSpec {
    FieldSpec::prime(3).expect("prime")
}

fn f5() -> FieldSpec {
    FieldSpec::prime(5).expect("prime")
}

/// Uniform over `F_p`; integers in `[-9, 9]` over `Q`.
fn rand_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field.modulus() {
        Some(q) => Scalar::from_i64(field, rng.gen_range(0..q) as i64),
        None => Scalar::from_i64(field, rng.gen_range(-9..=9)),
    }
}

fn rand_nonzero(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    loop {
        let s = rand_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

fn rand_vec(rng: &mut ChaCha8Rng, field: FieldSpec, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| rand_scalar(rng, field)).collect()
}

fn rand_mat(rng: &mut ChaCha8Rng, field: FieldSpec, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(field, rows, cols, |_, _| rand_scalar(rng, field))
}

fn rand_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Mat {
    loop {
        let c = rand_mat(rng, field, n, n);
        if !square_det(&c).expect("square").is_zero() {
            return c;
        }
    }
}

fn compact(x: &Mat) -> String {
    (1..=x.rows())
        .map(|r| x.row(r).iter().map(Scalar::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn with_column(x: &Mat, j: usize, col: &[Scalar]) -> Mat {
    Mat::from_fn(
        x.field(),
        x.rows(),
        x.cols(),
        |r, c| if c == j - 1 { col[r].clone() } else { x.entry(r + 1, c + 1).clone() },
    )
}

fn combine(a: &Scalar, u: &[Scalar], b: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    u.iter().zip(v).map(|(x, y)| &(a * x) + &(b * y)).collect()
}

fn shapes(max_n: usize) -> Vec<(usize, usize)> {
    (1..=max_n).flat_map(|n| (1..=n).map(move |k| (n, k))).collect()
}

fn mismatch(what: &str, x: &Mat, lhs: &Scalar, rhs: &Scalar) -> Outcome {
    Outcome::Fail(format!("{what}: {lhs} != {rhs} at [{}] over {}", compact(x), x.field()))
}

// ---- determinants ----------------------------------------------------------------------

fn det_agreement(d: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let (n, k) = shapes(5)[(case / 200) as usize];
    let field = [f5(), FieldSpec::rationals()][(case / 100 % 2) as usize];
    let x = rand_mat(rng, field, n, k);
    let by_injection = (d.injection)(&x)?;
    let by_minors = (d.minor)(&x)?;
    if by_injection != by_minors {
        return Ok(mismatch("injection sum vs minor sum", &x, &by_injection, &by_minors));
    }
    for col in 1..=k {
        let by_laplace = (d.laplace)(&x, col)?;
        if by_laplace != by_injection {
            return Ok(mismatch(
                &format!("laplace along column {col} vs injection sum"),
                &x,
                &by_laplace,
                &by_injection,
            ));
        }
    }
    Ok(Outcome::Pass)
}

fn det_basic_properties(d: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let item = case / 200 + 1;
    let field = [f3(), FieldSpec::rationals()][(case / 100 % 2) as usize];
    let (n, k) = match item {
        1 => {
            let n = rng.gen_range(1..=5);
            (n, n)
        }
        3 | 4 => {
            let n = rng.gen_range(2..=5);
            (n, rng.gen_range(2..=n))
        }
        _ => {
            let n = rng.gen_range(1..=5);
            (n, rng.gen_range(1..=n))
        }
    };
    let x = rand_mat(rng, field, n, k);
    let j = rng.gen_range(1..=k);
    let others: Vec<usize> = (1..=k).filter(|&c| c != j).collect();
    for which in 0..3 {
        let det = |m: &Mat| d.eval(which, m);
        let name = DetSuite::NAMES[which];
        match item {
            1 => {
                let (lhs, rhs) = (det(&x)?, square_det(&x)?);
                if lhs != rhs {
                    return Ok(mismatch(&format!("{name}: square case vs classical determinant"), &x, &lhs, &rhs));
                }
            }
            2 => {
                let (u, v) = (rand_vec(rng, field, n), rand_vec(rng, field, n));
                let (a, b) = (rand_scalar(rng, field), rand_scalar(rng, field));
                let mixed = with_column(&x, j, &combine(&a, &u, &b, &v));
                let lhs = det(&mixed)?;
                let rhs = &(&a * &det(&with_column(&x, j, &u))?) + &(&b * &det(&with_column(&x, j, &v))?);
                if lhs != rhs {
                    return Ok(mismatch(&format!("{name}: linearity in column {j}"), &mixed, &lhs, &rhs));
                }
            }
            3 => {
                let repeated = if rng.gen_bool(0.5) {
                    let src = *others.choose(rng).expect("k >= 2");
                    with_column(&x, j, &x.column(src))
                } else {
                    let mut col = vec![field.zero(); n];
                    for &o in &others {
                        col = combine(&field.one(), &col, &rand_scalar(rng, field), &x.column(o));
                    }
                    with_column(&x, j, &col)
                };
                let value = det(&repeated)?;
                if !value.is_zero() {
                    return Ok(mismatch(&format!("{name}: dependent columns"), &repeated, &value, &field.zero()));
                }
            }
            4 => {
                let o = *others.choose(rng).expect("k >= 2");
                let swapped = with_column(&with_column(&x, j, &x.column(o)), o, &x.column(j));
                let (lhs, rhs) = (det(&swapped)?, -det(&x)?);
                if lhs != rhs {
                    return Ok(mismatch(&format!("{name}: swapping columns {j} and {o}"), &swapped, &lhs, &rhs));
                }
            }
            _ => {
                let mut col = x.column(j);
                for &o in &others {
                    col = combine(&field.one(), &col, &rand_scalar(rng, field), &x.column(o));
                }
                let shifted = with_column(&x, j, &col);
                let (lhs, rhs) = (det(&shifted)?, det(&x)?);
                if lhs != rhs {
                    return Ok(mismatch(
                        &format!("{name}: adding a column combination to column {j}"),
                        &shifted,
                        &lhs,
                        &rhs,
                    ));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

fn ones_column(d: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let pairs: Vec<(usize, usize)> = (2..=6).flat_map(|n| (1..n).map(move |k| (n, k))).collect();
    let (n, k) = pairs[(case / 100) as usize];
    let field = [f3(), FieldSpec::rationals()][(case / 50 % 2) as usize];
    let x = rand_mat(rng, field, n, k);
    let lhs = (d.minor)(&with_ones_column(&x))?;
    let rhs = if (n + k) % 2 == 1 { (d.minor)(&x)? } else { field.zero() };
    Ok(if lhs == rhs { Outcome::Pass } else { mismatch(&format!("ones column, n+k={}", n + k), &x, &lhs, &rhs) })
}

/// Random nonzero `z` and `X` with `zᵗX = 0`, by solving for the row at a nonzero entry of `z`.
fn kernel_pair(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, k: usize) -> (Vec<Scalar>, Mat) {
    let mut z = rand_vec(rng, field, n);
    let p = rng.gen_range(0..n);
    z[p] = rand_nonzero(rng, field);
    let mut x = rand_mat(rng, field, n, k);
    let scale = -(&field.one() / &z[p]);
    for c in 1..=k {
        let mut acc = field.zero();
        for r in (0..n).filter(|&r| r != p) {
            acc += &(&z[r] * x.entry(r + 1, c));
        }
        x.set_entry(p + 1, c, &scale * &acc);
    }
    (z, x)
}

fn shift_triples() -> Vec<(usize, usize, usize)> {
    shapes(6).into_iter().flat_map(|(n, k)| (1..=n).map(move |i| (n, k, i))).collect()
}

fn shift_lemmas(d: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let (n, k, i) = shift_triples()[(case / 4) as usize];
    let field = [f3(), FieldSpec::rationals()][(case % 2) as usize];
    let x = if case / 2 % 2 == 0 { rand_mat(rng, field, n, k) } else { kernel_pair(rng, field, n, k).1 };
    let odd = (n + k) % 2 == 1;
    let (shifted, sign) = if odd { cyclic_shift(&x, i)? } else { semicyclic_shift(&x, i)? };
    let wrong_parity = if odd { semicyclic_shift(&x, i) } else { cyclic_shift(&x, i) };
    if !matches!(wrong_parity, Err(Error::Parity(_))) {
        return Ok(Outcome::Fail(format!("shift of the wrong parity accepted at n={n} k={k}")));
    }
    let lhs = &sign * &(d.minor)(&shifted)?;
    let rhs = (d.minor)(&x)?;
    if lhs != rhs {
        let kind = if odd { "cyclic" } else { "semi-cyclic" };
        return Ok(mismatch(&format!("{kind} shift at row {i}"), &x, &lhs, &rhs));
    }
    if scs_apply(&x, i)? != shifted {
        return Ok(Outcome::Fail(format!("scs_apply differs from the shift at row {i}: [{}]", compact(&x))));
    }
    Ok(Outcome::Pass)
}

#[derive(Clone, Copy)]
enum ScsProperty {
    Transport,
    ZeroPreserved,
    AltSumPulledBack,
}

fn scs_entries() -> Vec<(ScsProperty, usize, usize, usize, FieldSpec)> {
    let mut out = Vec::new();
    for (n, k, i0) in shift_triples() {
        for field in [f3(), FieldSpec::rationals()] {
            out.push((ScsProperty::Transport, n, k, i0, field));
            out.push((ScsProperty::ZeroPreserved, n, k, i0, field));
            if k % 2 == 1 {
                out.push((ScsProperty::AltSumPulledBack, n, k, i0, field));
            }
        }
    }
    out
}

fn flatten(x: &Mat) -> Vec<Scalar> {
    x.entries().to_vec()
}

/// Preimage of `y` under the linear map `X -> scs_apply(X, i0)`, found by inverting the
/// map's matrix on the standard basis rather than undoing the row moves.
fn scs_preimage(y: &Mat, i0: usize) -> Result<Mat> {
    let (n, k, field) = (y.rows(), y.cols(), y.field());
    let len = n * k;
    let mut columns = Vec::with_capacity(len);
    for p in 0..len {
        let unit = Mat::from_fn(field, n, k, |r, c| if r * k + c == p { field.one() } else { field.zero() });
        columns.push(flatten(&scs_apply(&unit, i0)?));
    }
    let map = Mat::from_rows(field, len, &columns)?.transpose();
    let inv = inverse(&map)?.ok_or_else(|| Error::Rank("shift map is singular".into()))?;
    let x = inv.mul_vec(&flatten(y))?;
    Mat::new(field, n, k, x)
}

/// Det-zero `X`: the determinant is affine in any single entry, so solve for one entry of
/// column 1. If no entry of column 1 moves the determinant, it is already zero.
fn det_zero_matrix(d: &DetSuite, rng: &mut ChaCha8Rng, field: FieldSpec, n: usize, k: usize) -> Result<Mat> {
    let mut x = rand_mat(rng, field, n, k);
    for r in 1..=n {
        x.set_entry(r, 1, field.zero());
        let at_zero = (d.minor)(&x)?;
        x.set_entry(r, 1, field.one());
        let slope = &(d.minor)(&x)? - &at_zero;
        if !slope.is_zero() {
            x.set_entry(r, 1, -(&at_zero / &slope));
            return Ok(x);
        }
        x.set_entry(r, 1, rand_scalar(rng, field));
    }
    Ok(x)
}

fn scs_properties(d: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let (prop, n, k, i0, field) = scs_entries()[case as usize];
    match prop {
        ScsProperty::Transport => {
            let (z, x) = kernel_pair(rng, field, n, k);
            let moved = scs_transport_z(&z, i0, n, k)?;
            let product = scs_apply(&x, i0)?.left_mul_vec(&moved)?;
            if product.iter().any(|s| !s.is_zero()) {
                return Ok(Outcome::Fail(format!(
                    "transported relation fails at n={n} k={k} i0={i0}: [{}]",
                    compact(&x)
                )));
            }
        }
        ScsProperty::ZeroPreserved => {
            let x = det_zero_matrix(d, rng, field, n, k)?;
            let before = (d.minor)(&x)?;
            if !before.is_zero() {
                return Ok(mismatch("det-zero construction", &x, &before, &field.zero()));
            }
            let after = (d.minor)(&scs_apply(&x, i0)?)?;
            if !after.is_zero() {
                return Ok(mismatch(&format!("zero preservation at i0={i0}"), &x, &after, &field.zero()));
            }
        }
        ScsProperty::AltSumPulledBack => {
            let mut image = rand_mat(rng, field, n, k);
            let sums = alternating_row_sum(&image);
            for c in 1..=k {
                // subtract the current sum through row n, whose sign is (-1)^n
                let fix = image.entry(n, c) - &(&Scalar::sign_power(field, n) * &sums[c - 1]);
                image.set_entry(n, c, fix);
            }
            let x = scs_preimage(&image, i0)?;
            if scs_apply(&x, i0)? != image {
                return Ok(Outcome::Fail(format!("preimage check failed at i0={i0}")));
            }
            if alternating_row_sum(&x).iter().any(|s| !s.is_zero()) {
                return Ok(Outcome::Fail(format!(
                    "alternating row sum not pulled back at n={n} k={k} i0={i0}: [{}]",
                    compact(&x)
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

// ---- matroids --------------------------------------------------------------------------

fn random_f2_matroid(rng: &mut ChaCha8Rng) -> Result<Matroid> {
    column_matroid(&rand_mat(rng, f2(), 3, 7))
}

fn pairs_of_sets(size: usize) -> impl Iterator<Item = (ElementSet, ElementSet)> {
    let full = ElementSet::full(size);
    full.subsets().flat_map(move |x| full.subsets().map(move |y| (x, y)))
}

fn matroid_axioms(_: &DetSuite, rng: &mut ChaCha8Rng, _: u64) -> Result<Outcome> {
    let m = random_f2_matroid(rng)?;
    let e = m.ground().full();
    let size = m.ground().len();
    let indep = m.independent_sets(20)?;
    let g = m.ground();
    if !indep.contains(&ElementSet::EMPTY) {
        return Ok(Outcome::Fail("I1: empty set is dependent".into()));
    }
    for &i in &indep {
        for p in i.positions() {
            if !m.is_independent(i.remove(p))? {
                return Ok(Outcome::Fail(format!("I2: {} independent, subset dependent", g.format(i))));
            }
        }
        for &j in indep.iter().filter(|j| j.len() > i.len()) {
            if !j.difference(i).positions().any(|p| m.is_independent(i.insert(p)).unwrap_or(false)) {
                return Ok(Outcome::Fail(format!("I3: no augmentation of {} from {}", g.format(i), g.format(j))));
            }
        }
    }
    for (x, y) in pairs_of_sets(size) {
        let (rx, ry) = (m.rank(x)?, m.rank(y)?);
        if rx > x.len() || (x.is_subset(y) && rx > ry) {
            return Ok(Outcome::Fail(format!("R1/R2 at {} and {}", g.format(x), g.format(y))));
        }
        if m.rank(x.union(y))? + m.rank(x.intersection(y))? > rx + ry {
            return Ok(Outcome::Fail(format!("R3 at {} and {}", g.format(x), g.format(y))));
        }
    }
    // cobases from brute force: complements of the full-rank sets of size r(E)
    let r = m.full_rank();
    let cobases: Vec<ElementSet> =
        e.subsets().filter(|b| b.len() == r && m.rank(*b).unwrap_or(0) == r).map(|b| e.difference(b)).collect();
    let dual = m.dual();
    for x in e.subsets() {
        let by_cobases = cobases.iter().map(|b| b.intersection(x).len()).max().unwrap_or(0);
        if dual.rank(x)? != by_cobases {
            return Ok(Outcome::Fail(format!("dual rank identity at {}", g.format(x))));
        }
    }
    for t in e.subsets() {
        let (by_formula, by_dual) = (m.contract(t)?, m.contract_via_dual(t)?);
        for x in by_formula.ground().full().subsets() {
            if by_formula.rank(x)? != by_dual.rank(x)? {
                return Ok(Outcome::Fail(format!("contraction of {} disagrees with (M*\\T)*", g.format(t))));
            }
        }
    }
    for &i in &indep {
        for i_star in e.difference(i).subsets().filter(|s| dual.is_independent(*s).unwrap_or(false)) {
            let separated = cobases.iter().any(|&b_star| i_star.is_subset(b_star) && i.is_subset(e.difference(b_star)));
            if !separated {
                return Ok(Outcome::Fail(format!(
                    "no basis/cobasis pair separates {} and {}",
                    g.format(i),
                    g.format(i_star)
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Positions of `set` (a subset of `keep`) in the compressed ground of a minor on `keep`.
fn compress(set: ElementSet, keep: ElementSet) -> ElementSet {
    ElementSet::from_positions(keep.positions().enumerate().filter(|(_, p)| set.contains(*p)).map(|(i, _)| i))
}

fn expand(set: ElementSet, keep: ElementSet) -> ElementSet {
    ElementSet::from_positions(keep.positions().enumerate().filter(|(i, _)| set.contains(*i)).map(|(_, p)| p))
}

fn cobase_restriction(_: &DetSuite, rng: &mut ChaCha8Rng, _: u64) -> Result<Outcome> {
    let m = random_f2_matroid(rng)?;
    let e = m.ground().full();
    let g = m.ground().clone();
    let dual = m.dual();
    let coindependent = dual.independent_sets(20)?;
    let corank = m.corank();
    for s in e.subsets() {
        let restricted = m.restrict(s)?;
        let local_corank = restricted.corank();
        for local in restricted.cobases(20)? {
            let b_star = expand(local, s);
            for &i_star in &coindependent {
                let candidate = i_star.difference(s).union(b_star);
                if !dual.is_independent(candidate)? {
                    return Ok(Outcome::Fail(format!(
                        "(a): S={} B'*={} I*={} gives a dependent set in M*",
                        g.format(s),
                        g.format(b_star),
                        g.format(i_star)
                    )));
                }
                if local_corank + i_star.difference(s).len() > corank {
                    return Ok(Outcome::Fail(format!("(b): S={} I*={}", g.format(s), g.format(i_star))));
                }
            }
        }
    }
    // the same statements through a contraction first
    for t in e.subsets() {
        let contracted = m.contract(t)?;
        let rest = e.difference(t);
        let contracted_dual = contracted.dual();
        for s in rest.subsets() {
            let minor = contracted.restrict(compress(s, rest))?;
            let minor_corank = minor.corank();
            for local in minor.cobases(20)? {
                let b_star = expand(expand(local, compress(s, rest)), rest);
                for &i_star in &coindependent {
                    let kept = i_star.difference(t).difference(s);
                    let candidate = kept.union(b_star);
                    if !dual.is_independent(candidate)? || !contracted_dual.is_independent(compress(candidate, rest))? {
                        return Ok(Outcome::Fail(format!(
                            "contraction (a): T={} S={} B'*={} I*={}",
                            g.format(t),
                            g.format(s),
                            g.format(b_star),
                            g.format(i_star)
                        )));
                    }
                    if minor_corank + kept.len() > corank {
                        return Ok(Outcome::Fail(format!(
                            "contraction (b): T={} S={} I*={}",
                            g.format(t),
                            g.format(s),
                            g.format(i_star)
                        )));
                    }
                }
            }
        }
    }
    Ok(Outcome::Pass)
}

// ---- varieties -------------------------------------------------------------------------

/// The matroid of a variety straight from its definition: the rank of `X` is the rank of
/// the coordinate functionals on `X` restricted to the direction space, i.e. the column
/// rank of a direction basis read on `X`.
fn matroid_by_definition(k: &LinearVariety) -> Result<Matroid> {
    let basis = k.direction_basis();
    let m = Mat::from_rows(k.space().field(), k.space().dim(), &basis)?;
    vector_matroid(&m, k.space().ground().clone())
}

fn same_ranks(a: &Matroid, b: &Matroid, within: ElementSet) -> Result<Option<ElementSet>> {
    for x in within.subsets() {
        if a.rank(x)? != b.rank(x)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn random_system(rng: &mut ChaCha8Rng, field: FieldSpec, space: CoordinateSpace, rows: usize) -> Result<LinearVariety> {
    let len = space.dim();
    let a = rand_mat(rng, field, rows, len);
    let s = rand_vec(rng, field, len);
    let b = a.mul_vec(&s)?;
    Ok(LinearVariety::from_constraints(ConstraintSystem::new(space, a, b)?).expect("consistent by construction"))
}

fn random_injection(rng: &mut ChaCha8Rng, to: &GroundSet) -> Result<IndexInjection> {
    let size = rng.gen_range(1..=to.len());
    let mut positions: Vec<usize> = (0..to.len()).collect();
    positions.shuffle(rng);
    let labels: Vec<Label> = positions[..size].iter().map(|&p| to.label(p)).collect();
    IndexInjection::selecting(to.clone(), &labels)
}

fn variety_matroid(_: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let field = if case % 2 == 0 { f2() } else { f3() };
    let len = rng.gen_range(4..=8);
    let rows = rng.gen_range(1..=len);
    let space = CoordinateSpace::vectors(field, len)?;
    let k = random_system(rng, field, space.clone(), rows)?;
    let e = space.ground().full();
    let g = space.ground().clone();
    let by_def = matroid_by_definition(&k)?;
    let of_constraints = vector_matroid(k.constraints().matrix(), g.clone())?;

    if let Some(x) = same_ranks(&by_def, &k.matroid(), e)? {
        return Ok(Outcome::Fail(format!("M(K) != M*[A] at {}", g.format(x))));
    }
    if let Some(x) = same_ranks(&of_constraints, &by_def.dual(), e)? {
        return Ok(Outcome::Fail(format!("M[A] != M*(K) at {}", g.format(x))));
    }
    let dim = by_def.full_rank();
    for x in e.subsets() {
        if of_constraints.rank(x)? + dim != x.len() + by_def.rank(e.difference(x))? {
            return Ok(Outcome::Fail(format!("rank identity between M[A] and M(K) at {}", g.format(x))));
        }
    }

    // projections
    let f = random_injection(rng, &g)?;
    let projected = matroid_by_definition(&k.project(&f)?)?;
    for x in f.from().full().subsets() {
        if projected.rank(x)? != by_def.rank(f.image_of(x))? {
            return Ok(Outcome::Fail(format!("projection matroid differs at {}", f.from().format(x))));
        }
    }

    // slices at independent sets
    let independent = by_def.independent_sets(20)?;
    for &i in &independent {
        let values = rand_vec(rng, field, i.len());
        let Some(sliced) = k.intersect_slice(&Slice::on_set(&space, i, &values)?) else {
            return Ok(Outcome::Fail(format!("slice at independent {} is empty", g.format(i))));
        };
        let lhs = matroid_by_definition(&sliced)?.delete(i)?;
        let rhs = by_def.contract(i)?;
        if let Some(x) = same_ranks(&lhs, &rhs, lhs.ground().full())? {
            return Ok(Outcome::Fail(format!(
                "M(K_I)\\I != M(K)/I for I={} at {}",
                g.format(i),
                lhs.ground().format(x)
            )));
        }
    }
    for _ in 0..8 {
        let i = *independent.choose(rng).expect("empty set is independent");
        let values = rand_vec(rng, field, i.len());
        let sliced = k.intersect_slice(&Slice::on_set(&space, i, &values)?).ok_or(Error::EmptyVariety)?;
        let f = random_injection(rng, &g)?;
        let projected = matroid_by_definition(&sliced.project(&f)?)?;
        let contracted = by_def.contract(i)?;
        let rest = e.difference(i);
        let domain = f.from().full().difference(f.preimage_of(i));
        for x in domain.subsets() {
            if projected.rank(x)? != contracted.rank(compress(f.image_of(x), rest))? {
                return Ok(Outcome::Fail(format!(
                    "projected slice at I={} differs at {}",
                    g.format(i),
                    f.from().format(x)
                )));
            }
        }
    }

    // other representations of the same variety
    let m = k.constraints().matrix().rows();
    let c = rand_invertible(rng, field, m);
    let mixed =
        ConstraintSystem::new(space.clone(), c.mul(k.constraints().matrix())?, c.mul_vec(k.constraints().rhs())?)?;
    let mixed = LinearVariety::from_constraints(mixed).ok_or(Error::EmptyVariety)?;
    if !mixed.same_set(&k) {
        return Ok(Outcome::Fail("row-mixed system describes a different set".into()));
    }
    let mixed_columns = vector_matroid(mixed.constraints().matrix(), g.clone())?;
    if let Some(x) = same_ranks(&mixed_columns, &of_constraints, e)? {
        return Ok(Outcome::Fail(format!("M[CA] != M[A] at {}", g.format(x))));
    }

    // change of variables
    let c = rand_invertible(rng, field, len);
    let moved = k.change_of_variables(&c)?;
    if moved.codim() != k.codim() || moved.dim() != k.dim() {
        return Ok(Outcome::Fail("change of variables changed the codimension".into()));
    }
    for x in k.enumerate_points(1 << 16)? {
        if !moved.contains(&c.mul_vec(&x)?)? {
            return Ok(Outcome::Fail("image point missing after change of variables".into()));
        }
    }
    Ok(Outcome::Pass)
}

// ---- striking out ----------------------------------------------------------------------

fn cell_set(n: usize, k: usize, cells: impl Iterator<Item = (usize, usize)>) -> ElementSet {
    debug_assert!(n > 0);
    ElementSet::from_positions(cells.map(|(r, c)| (r - 1) * k + (c - 1)))
}

fn row_cells(n: usize, k: usize, i: usize) -> ElementSet {
    cell_set(n, k, (1..=k).map(|c| (i, c)))
}

fn column_cells(n: usize, k: usize, j: usize) -> ElementSet {
    cell_set(n, k, (1..=n).map(|r| (r, j)))
}

/// A cobasis avoiding `avoid`: extend `avoid` greedily (in `order`) to a basis and take
/// the complement. None when `avoid` is dependent.
fn cobasis_avoiding(m: &Matroid, avoid: ElementSet, order: &[usize]) -> Result<Option<ElementSet>> {
    if !m.is_independent(avoid)? {
        return Ok(None);
    }
    let mut basis = avoid;
    for &p in order {
        if !basis.contains(p) && m.is_independent(basis.insert(p))? {
            basis = basis.insert(p);
        }
    }
    Ok(Some(m.ground().full().difference(basis)))
}

fn sorted_points(k: &LinearVariety) -> Result<Vec<Vec<u32>>> {
    let mut pts: Vec<Vec<u32>> =
        k.enumerate_points(u128::MAX)?.map(|p| p.iter().map(|s| s.residue().expect("prime")).collect()).collect();
    pts.sort();
    Ok(pts)
}

struct StrikeCase {
    k: LinearVariety,
    b_star: ElementSet,
    row: usize,
    col: usize,
    pins: Vec<Scalar>,
    annihilator: bool,
}

fn check_strike(case: &StrikeCase) -> Result<Outcome> {
    let (n, k) = case.k.space().shape().expect("matrix space");
    let g = case.k.space().ground();
    let tag = format!(
        "K={} B*={} i'={} j'={}",
        case.k.constraints().to_string().replace('\n', " | "),
        g.format(case.b_star),
        case.row,
        case.col
    );
    let Some(lifted) = strike_out_lift(&case.k, case.row, case.col, &case.pins)? else {
        return Ok(Outcome::Skip(format!("K' is empty for {tag}")));
    };
    let ins = ins_map(n, k, case.row, case.col)?;
    let q = case.k.space().field().modulus().expect("prime field");
    if (q as u128).pow(case.k.dim() as u32) <= 1 << 12 {
        let pinned: Vec<u32> = case.pins.iter().map(|s| s.residue().expect("prime")).collect();
        let mut direct: Vec<Vec<u32>> = sorted_points(&case.k)?
            .into_iter()
            .filter(|x| (0..n).all(|r| x[r * k + case.col - 1] == pinned[r]))
            .map(|x| {
                let scalars: Vec<Scalar> =
                    x.iter().map(|&v| Scalar::from_i64(case.k.space().field(), v as i64)).collect();
                ins.project_point(&scalars).iter().map(|s| s.residue().expect("prime")).collect()
            })
            .collect();
        direct.sort();
        direct.dedup();
        if direct != sorted_points(&lifted)? {
            return Ok(Outcome::Fail(format!("(a): lifted variety differs from the pointwise image for {tag}")));
        }
    }
    let on_row = case.b_star.intersection(row_cells(n, k, case.row)).len();
    if lifted.codim() + on_row > case.k.codim() {
        return Ok(Outcome::Fail(format!(
            "(b): codim(K')={} but codim(K)={} and |B* on row|={on_row} for {tag}",
            lifted.codim(),
            case.k.codim()
        )));
    }
    let outer = case.k.matroid();
    let row_part = case.b_star.intersection(row_cells(n, k, case.row));
    for inner in lifted.matroid().cobases(20)? {
        let combined = row_part.union(ins.image_of(inner));
        if !outer.is_coindependent(combined)? {
            return Ok(Outcome::Fail(format!("(c): {} is not coindependent for {tag}", g.format(combined))));
        }
    }
    if case.annihilator {
        if !annihilates_det(&case.k, u128::MAX)? {
            return Ok(Outcome::Fail(format!("premise: K does not annihilate the determinant for {tag}")));
        }
        if !annihilates_det(&lifted, u128::MAX)? {
            return Ok(Outcome::Fail(format!("(d): K' does not annihilate det_{{{},{}}} for {tag}", n - 1, k - 1)));
        }
    }
    Ok(Outcome::Pass)
}

fn delta(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    (1..=n).map(|r| if r == i { field.one() } else { field.zero() }).collect()
}

/// Picks a column (in random order) that some cobasis avoids, and such a cobasis.
fn pick_column(rng: &mut ChaCha8Rng, var: &LinearVariety) -> Result<Option<(usize, ElementSet)>> {
    let (n, k) = var.space().shape().expect("matrix space");
    let m = var.matroid();
    let mut cols: Vec<usize> = (1..=k).collect();
    cols.shuffle(rng);
    let mut order: Vec<usize> = (0..n * k).collect();
    order.shuffle(rng);
    for j in cols {
        if let Some(b) = cobasis_avoiding(&m, column_cells(n, k, j), &order)? {
            return Ok(Some((j, b)));
        }
    }
    Ok(None)
}

fn striking_out(_: &DetSuite, rng: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let field = if rng.gen_bool(0.5) { f2() } else { f3() };
    let (var, annihilator, n) = match case % 4 {
        0 | 1 => {
            let n = rng.gen_range(2..=4);
            let k = rng.gen_range(2..=n.min(3));
            let rows = rng.gen_range(0..=(n - 1) * k);
            (random_system(rng, field, CoordinateSpace::matrices(field, n, k)?, rows)?, false, n)
        }
        2 => {
            // columns 1 and 2 equal
            let n = rng.gen_range(3..=4);
            let a = Mat::from_fn(field, n, 2 * n, |r, c| {
                if c == 2 * r {
                    field.one()
                } else if c == 2 * r + 1 {
                    -field.one()
                } else {
                    field.zero()
                }
            });
            let cs = ConstraintSystem::new(CoordinateSpace::matrices(field, n, 2)?, a, vec![field.zero(); n])?;
            (LinearVariety::from_constraints(cs).expect("homogeneous"), true, n)
        }
        _ => {
            let alt = alt_row_sum_space(5, 3, field)?;
            let mut point = alt.witness().to_vec();
            for v in alt.direction_basis() {
                let t = rand_scalar(rng, field);
                for (x, e) in point.iter_mut().zip(&v) {
                    *x += &(&t * e);
                }
            }
            let pinned = rng.gen_range(0..=3);
            let mut cells: Vec<usize> = (0..15).collect();
            cells.shuffle(rng);
            let set = ElementSet::from_positions(cells[..pinned].iter().copied());
            let values: Vec<Scalar> = set.positions().map(|p| point[p].clone()).collect();
            let slice = Slice::on_set(alt.space(), set, &values)?;
            (alt.intersect_slice(&slice).ok_or(Error::EmptyVariety)?, true, 5)
        }
    };
    let Some((col, b_star)) = pick_column(rng, &var)? else {
        return Ok(Outcome::Skip("every cobasis meets every column".into()));
    };
    let row = rng.gen_range(1..=n);
    let pins = if annihilator { delta(field, n, row) } else { rand_vec(rng, field, n) };
    check_strike(&StrikeCase { k: var, b_star, row, col, pins, annihilator })
}

// ---- row caps of codim-k annihilators ---------------------------------------------------

fn cap_cases() -> Vec<(usize, usize, u32, Vec<usize>)> {
    let mut out = Vec::new();
    for (n, k, q) in [(3, 2, 2), (4, 2, 2), (3, 2, 3)] {
        for p in pivot_sets(n * k, k) {
            out.push((n, k, q, p));
        }
    }
    out
}

fn cap_le1(_: &DetSuite, _: &mut ChaCha8Rng, case: u64) -> Result<Outcome> {
    let (n, k, q, pivots) = cap_cases().swap_remove(case as usize);
    let len = n * k;
    let det = FpDet::new(n, k, q);
    let fp = det.fp().clone();
    let field = FieldSpec::prime(q)?;
    let mut annihilators = Vec::new();
    for_each_with_pivots(len, q, &pivots, |a| {
        for idx in 0..(q as u64).pow(k as u32) {
            let b: Vec<u32> = (0..k).map(|r| ((idx / (q as u64).pow(r as u32)) % q as u64) as u32).collect();
            let var = FpVariety::from_rref(&fp, a, &pivots, &b, len);
            if find_nonzero_det(&var, &det).0.is_none() {
                annihilators.push((a.chunks(len).map(<[u32]>::to_vec).collect::<Vec<_>>(), b));
            }
        }
    });
    for (a, b) in annihilators {
        let var = variety_from_residues(n, k, field, &a, &b).expect("consistent");
        let g = var.space().ground().clone();
        for b_star in var.matroid().cobases(20)? {
            let free_column = (1..=k).any(|j| b_star.intersection(column_cells(n, k, j)).is_empty());
            if !free_column {
                continue;
            }
            if let Some(i) = (1..=n).find(|&i| b_star.intersection(row_cells(n, k, i)).len() > 1) {
                return Ok(Outcome::Fail(format!(
                    "cobasis {} meets row {i} twice in annihilator {}",
                    g.format(b_star),
                    var.constraints().to_string().replace('\n', " | ")
                )));
            }
        }
    }
    Ok(Outcome::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flipped_minor(x: &Mat) -> Result<Scalar> {
        // negate the first minor's contribution
        let v = det_minor_sum(x)?;
        if x.rows() <= x.cols() {
            return Ok(v);
        }
        let keep: Vec<usize> = (1..=x.cols()).collect();
        let first = square_det(&x.select(&keep, &keep))?;
        Ok(&v - &(&first + &first))
    }

    #[test]
    fn registry_lists_every_lemma_once() {
        let names = lemma_names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(matches!(replay_case("no-such", 0, 0, &DetSuite::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn quick_lemmas_pass() {
        let cfg = LemmaSuiteConfig {
            only: vec!["ones-column".into(), "shift-lemmas".into(), "scs-properties".into(), "cap-le1".into()],
            ..Default::default()
        };
        let r = verify_lemma_suite(&cfg).unwrap();
        assert!(r.passed(), "{}", r.to_text(false));
    }

    #[test]
    fn mutation_is_caught_and_replays() {
        let dets = DetSuite { minor: flipped_minor, ..DetSuite::default() };
        let cfg = LemmaSuiteConfig { only: vec!["det-agreement".into()], dets, ..Default::default() };
        let r = verify_lemma_suite(&cfg).unwrap();
        assert!(!r.passed());
        let first = &r.counterexamples[0];
        let Replay::Lemma { lemma, seed, case } = &first.replay else { panic!("lemma replay expected") };
        assert!(replay_case(lemma, *seed, *case, &dets).unwrap());
        assert!(!replay_case(lemma, *seed, *case, &DetSuite::default()).unwrap());
    }

    #[test]
    fn compress_and_expand_invert() {
        let keep = ElementSet::from_positions([1, 3, 4, 6]);
        let set = ElementSet::from_positions([3, 6]);
        assert_eq!(compress(set, keep), ElementSet::from_positions([1, 3]));
        assert_eq!(expand(compress(set, keep), keep), set);
    }
}
