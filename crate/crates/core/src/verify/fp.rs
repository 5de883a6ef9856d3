//! Word-sized prime-field kernels for the sweeps. These compute the same quantities as
//! the generic `Scalar` code (`det_minor_sum`, point enumeration) and are cross-checked
//! against it in tests.

use crate::field::Scalar;
use crate::index::k_subsets;
use crate::linvar::LinearVariety;

#[derive(Clone, Debug)]
pub(crate) struct Fp {
    q: u32,
    inv: Vec<u32>,
}

impl Fp {
    pub(crate) fn new(q: u32) -> Self {
        let mut inv = vec![0; q as usize];
        for a in 1..q {
            inv[a as usize] = (1..q).find(|b| (a as u64 * *b as u64) % q as u64 == 1).expect("prime modulus");
        }
        Fp { q, inv }
    }

    pub(crate) fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub(crate) fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `(-1)^e` as a residue.
    pub(crate) fn sign(&self, e: usize) -> u32 {
        if e % 2 == 0 {
            1
        } else {
            self.q - 1
        }
    }
}

/// Determinant of a `k x k` row-major block, destroying it.
fn small_det(fp: &Fp, m: &mut [u32], k: usize) -> u32 {
    let mut det = 1;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| m[r * k + c] != 0) else {
            return 0;
        };
        if p != c {
            for j in c..k {
                m.swap(p * k + j, c * k + j);
            }
            det = fp.neg(det);
        }
        let pivot = m[c * k + c];
        det = fp.mul(det, pivot);
        let inv = fp.inv(pivot);
        for r in c + 1..k {
            let lead = m[r * k + c];
            if lead == 0 {
                continue;
            }
            let factor = fp.mul(lead, inv);
            for j in c + 1..k {
                m[r * k + j] = fp.sub(m[r * k + j], fp.mul(factor, m[c * k + j]));
            }
        }
    }
    det
}

/// `det_{n,k}` over `F_q` of row-major `n x k` residue arrays, as a signed minor sum.
#[derive(Clone, Debug)]
pub(crate) struct FpDet {
    n: usize,
    k: usize,
    fp: Fp,
    minors: Vec<(Vec<usize>, bool)>,
}

impl FpDet {
    pub(crate) fn new(n: usize, k: usize, q: u32) -> Self {
        let minors = k_subsets(n, k)
            .map(|c| {
                let e: usize = c.iter().enumerate().map(|(a, &r)| r - (a + 1)).sum();
                (c.into_iter().map(|r| r - 1).collect(), e % 2 == 1)
            })
            .collect();
        FpDet { n, k, fp: Fp::new(q), minors }
    }

    pub(crate) fn fp(&self) -> &Fp {
        &self.fp
    }

    pub(crate) fn det(&self, x: &[u32]) -> u32 {
        let k = self.k;
        let fp = &self.fp;
        if k == 1 {
            return (0..self.n).fold(0, |acc, r| if r % 2 == 0 { fp.add(acc, x[r]) } else { fp.sub(acc, x[r]) });
        }
        let mut block = [0u32; 64];
        let mut total = 0;
        for (rows, negative) in &self.minors {
            for (a, &r) in rows.iter().enumerate() {
                block[a * k..(a + 1) * k].copy_from_slice(&x[r * k..(r + 1) * k]);
            }
            let d = small_det(fp, &mut block[..k * k], k);
            total = if *negative { fp.sub(total, d) } else { fp.add(total, d) };
        }
        total
    }
}

/// A variety over `F_q` as witness plus direction basis, in residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpVariety {
    pub(crate) q: u32,
    pub(crate) witness: Vec<u32>,
    pub(crate) basis: Vec<Vec<u32>>,
}

impl FpVariety {
    /// `AS(A, b)` for a full-rank RREF `A` (`c x len`, row-major) with pivot columns `pivots`.
    pub(crate) fn from_rref(fp: &Fp, a: &[u32], pivots: &[usize], b: &[u32], len: usize) -> Self {
        let mut witness = vec![0; len];
        for (r, &p) in pivots.iter().enumerate() {
            witness[p] = b[r];
        }
        let basis = (0..len)
            .filter(|col| !pivots.contains(col))
            .map(|free| {
                let mut v = vec![0; len];
                v[free] = 1;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = fp.neg(a[r * len + free]);
                }
                v
            })
            .collect();
        FpVariety { q: fp.q(), witness, basis }
    }

    pub(crate) fn from_variety(k: &LinearVariety) -> Option<Self> {
        let q = k.space().field().modulus()?;
        let conv = |v: &[Scalar]| v.iter().map(|s| s.residue().expect("prime field")).collect::<Vec<u32>>();
        Some(FpVariety { q, witness: conv(k.witness()), basis: k.direction_basis().iter().map(|v| conv(v)).collect() })
    }

    pub(crate) fn point_count(&self) -> Option<u128> {
        (self.q as u128).checked_pow(self.basis.len() as u32)
    }

    /// Visits every point until `visit` returns false. Returns the number visited.
    ///
    /// Points are produced by a mixed-radix counter over basis coefficients; every digit
    /// step, including a wrap from `q - 1` to `0`, adds one basis vector.
    pub(crate) fn for_each_point(&self, fp: &Fp, mut visit: impl FnMut(&[u32]) -> bool) -> u64 {
        let mut point = self.witness.clone();
        let mut digits = vec![0u32; self.basis.len()];
        let mut visited = 0u64;
        loop {
            visited += 1;
            if !visit(&point) {
                return visited;
            }
            let mut d = digits.len();
            loop {
                if d == 0 {
                    return visited;
                }
                d -= 1;
                for (x, v) in point.iter_mut().zip(&self.basis[d]) {
                    *x = fp.add(*x, *v);
                }
                digits[d] += 1;
                if digits[d] < self.q {
                    break;
                }
                digits[d] = 0;
            }
        }
    }
}

/// The first point (in enumeration order) with nonzero determinant, and the number of
/// points examined.
pub(crate) fn find_nonzero_det(var: &FpVariety, det: &FpDet) -> (Option<Vec<u32>>, u64) {
    let mut found = None;
    let visited = var.for_each_point(det.fp(), |x| {
        if det.det(x) != 0 {
            found = Some(x.to_vec());
            false
        } else {
            true
        }
    });
    (found, visited)
}
