//! Timing of the three determinant algorithms over a grid of shapes.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::cullis::{det, Algorithm};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::mat::Mat;

pub const CSV_HEADER: &str = "algo,n,k,field,reps,total_ns,mean_ns,value";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub algo: Algorithm,
    pub n: usize,
    pub k: usize,
    pub field: FieldSpec,
    pub reps: u32,
    pub total_ns: u128,
    pub value: Scalar,
}

impl BenchRow {
    pub fn mean_ns(&self) -> u128 {
        self.total_ns / u128::from(self.reps.max(1))
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.algo,
            self.n,
            self.k,
            self.field,
            self.reps,
            self.total_ns,
            self.mean_ns(),
            self.value
        )
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub grid: Vec<(usize, usize)>,
    pub field: FieldSpec,
    pub reps: u32,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { grid: default_grid(), field: FieldSpec::prime(5).expect("prime"), reps: 10, seed: 0, jobs: 1 }
    }
}

/// `1 <= k <= min(n, 4)` for `n <= 10`.
pub fn default_grid() -> Vec<(usize, usize)> {
    (1..=10).flat_map(|n| (1..=n.min(4)).map(move |k| (n, k))).collect()
}

/// Parses `"10x4,6x3"`.
pub fn parse_grid(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|cell| {
            let (n, k) = cell
                .trim()
                .split_once('x')
                .ok_or_else(|| Error::Shape(format!("grid cell {cell:?} is not of the form NxK")))?;
            let parse =
                |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Shape(format!("bad grid cell {cell:?}")));
            let (n, k) = (parse(n)?, parse(k)?);
            if k == 0 || n < k {
                return Err(Error::Shape(format!("grid cell {n}x{k} needs n >= k >= 1")));
            }
            Ok((n, k))
        })
        .collect()
}

fn sample_matrix(field: FieldSpec, n: usize, k: usize, seed: u64) -> Mat {
    let mut rng = super::verify::case_rng(seed, (n as u64) << 32 | k as u64);
    Mat::from_fn(field, n, k, |_, _| match field.modulus() {
        Some(q) => Scalar::from_i64(field, rng.gen_range(0..q) as i64),
        None => Scalar::from_i64(field, rng.gen_range(-9..=9)),
    })
}

/// One row per algorithm and grid cell, in grid order. Every algorithm sees the same matrix.
pub fn run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    for &(n, k) in &cfg.grid {
        if k == 0 || n < k || n > 63 {
            return Err(Error::Shape(format!("cannot benchmark {n}x{k}")));
        }
    }
    let cells: Vec<Result<Vec<BenchRow>>> = super::verify::with_pool(cfg.jobs, || {
        cfg.grid
            .par_iter()
            .map(|&(n, k)| {
                let x = sample_matrix(cfg.field, n, k, cfg.seed);
                Algorithm::ALL
                    .iter()
                    .map(|&algo| {
                        let start = Instant::now();
                        let mut value = det(&x, algo)?;
                        for _ in 1..cfg.reps {
                            value = det(&x, algo)?;
                        }
                        Ok(BenchRow {
                            algo,
                            n,
                            k,
                            field: cfg.field,
                            reps: cfg.reps,
                            total_ns: start.elapsed().as_nanos(),
                            value,
                        })
                    })
                    .collect()
            })
            .collect()
    });
    Ok(cells.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("10x4, 3x1").unwrap(), vec![(10, 4), (3, 1)]);
        assert!(parse_grid("2x3").is_err());
        assert!(parse_grid("ten").is_err());
    }

    #[test]
    fn rows_agree_across_algorithms() {
        let cfg = BenchConfig { grid: vec![(4, 2), (5, 3)], reps: 2, ..Default::default() };
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 6);
        for cell in rows.chunks(3) {
            assert!(cell.iter().all(|r| r.value == cell[0].value));
        }
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 8);
    }
}
