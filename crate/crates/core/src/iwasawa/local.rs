//! Linear algebra over the chain ring `Z/l^B`.
//!
//! Submodules of `(Z/l^B)^d` are the images of lattices of `Z^d` that
//! contain `l^B Z^d`, so finite `l`-groups and their homomorphisms can be
//! handled exactly once `B` bounds every exponent involved.  Vectors act on
//! matrices from the left (row convention).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub(crate) type Mat = Vec<Vec<BigInt>>;

#[derive(Debug, Clone)]
pub(crate) struct Ring {
    ell: BigInt,
    exp: u32,
    modulus: BigInt,
}

impl Ring {
    pub(crate) fn new(ell: u64, exp: u32) -> Self {
        let ell = BigInt::from(ell);
        let modulus = num_traits::pow(ell.clone(), exp as usize);
        Ring { ell, exp, modulus }
    }

    pub(crate) fn exp(&self) -> u32 {
        self.exp
    }

    pub(crate) fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub(crate) fn ell_pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.ell.clone(), k as usize)
    }

    /// Valuation of a residue; `exp` for zero.
    pub(crate) fn val(&self, x: &BigInt) -> u32 {
        if x.is_zero() {
            return self.exp;
        }
        let mut x = x.clone();
        let mut v = 0;
        while x.is_multiple_of(&self.ell) {
            x /= &self.ell;
            v += 1;
        }
        v.min(self.exp)
    }

    fn unit_inverse(&self, u: &BigInt) -> BigInt {
        u.modinv(&self.modulus).expect("unit modulo l^B")
    }

    pub(crate) fn identity(&self, d: usize) -> Mat {
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    }

    pub(crate) fn reduce_mat(&self, a: &Mat) -> Mat {
        a.iter().map(|r| r.iter().map(|x| self.reduce(x)).collect()).collect()
    }

    pub(crate) fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                let mut out = vec![BigInt::zero(); n];
                for (k, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (o, y) in out.iter_mut().zip(&b[k]) {
                        *o += x * y;
                    }
                }
                out.iter().map(|x| self.reduce(x)).collect()
            })
            .collect()
    }

    pub(crate) fn mat_add(&self, a: &Mat, b: &Mat) -> Mat {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| self.reduce(&(x + y))).collect())
            .collect()
    }

    pub(crate) fn mat_sub(&self, a: &Mat, b: &Mat) -> Mat {
        a.iter()
            .zip(b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| self.reduce(&(x - y))).collect())
            .collect()
    }

    pub(crate) fn mat_pow(&self, a: &Mat, mut e: u64) -> Mat {
        let mut base = a.clone();
        let mut acc = self.identity(a.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mat_mul(&base, &base);
            }
        }
        acc
    }

    /// Howell form of the submodule generated by `rows`.
    pub(crate) fn howell(&self, rows: &[Vec<BigInt>], cols: usize) -> Howell {
        let mut pending: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|x| self.reduce(x)).collect::<Vec<_>>())
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        for col in 0..cols {
            let best = pending
                .iter()
                .enumerate()
                .map(|(i, r)| (self.val(&r[col]), i))
                .min();
            let Some((v, idx)) = best.filter(|&(v, _)| v < self.exp) else {
                continue;
            };
            let mut p = pending.swap_remove(idx);
            let unit = &p[col] / self.ell_pow(v);
            let inv = self.unit_inverse(&unit);
            for x in p.iter_mut() {
                *x = self.reduce(&(&*x * &inv));
            }
            let lead = self.ell_pow(v);
            for r in pending.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = &r[col] / &lead;
                for (x, y) in r.iter_mut().zip(&p) {
                    *x = self.reduce(&(&*x - &q * y));
                }
            }
            let annihilator = self.ell_pow(self.exp - v);
            let saturated: Vec<BigInt> = p.iter().map(|x| self.reduce(&(x * &annihilator))).collect();
            pending.push(saturated);
            pending.retain(|r| r.iter().any(|x| !x.is_zero()));
            pivots.push(Pivot { col, val: v, row: p });
        }
        Howell { exp: self.exp, pivots }
    }

    /// Image of the submodule spanned by `rows` under `x -> x a`.
    pub(crate) fn image(&self, rows: &[Vec<BigInt>], a: &Mat) -> Vec<Vec<BigInt>> {
        self.mat_mul(&rows.to_vec(), a)
    }

    /// Generators of `{x : x a in span(target)}`, a submodule of `(Z/l^B)^d`.
    pub(crate) fn preimage(&self, a: &Mat, target: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let d = a.len();
        let c = a.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(d + target.len());
        for (i, ai) in a.iter().enumerate() {
            let mut r = ai.clone();
            r.extend((0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            rows.push(r);
        }
        for t in target {
            let mut r = t.clone();
            r.resize(c + d, BigInt::zero());
            rows.push(r);
        }
        self.howell(&rows, c + d)
            .pivots
            .into_iter()
            .filter(|p| p.col >= c)
            .map(|p| p.row[c..].to_vec())
            .collect()
    }

    /// Smith form of the relation module `(Z/l^B)^r / span(rels)`.
    ///
    /// Returns, for each new coordinate, the exponent of its cyclic order,
    /// together with `V` and `V^{-1}` such that new coordinates are `y = x V`.
    pub(crate) fn smith(&self, rels: &[Vec<BigInt>], r: usize) -> SmithForm {
        let mut m: Mat = self.reduce_mat(&rels.to_vec());
        let mut v = self.identity(r);
        let mut vinv = self.identity(r);
        let mut exps = vec![self.exp; r];
        let mut k = 0;
        while k < r {
            // Entry of least valuation in the remaining block.
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(k) {
                for (j, x) in row.iter().enumerate().skip(k) {
                    let vx = self.val(x);
                    if vx < self.exp && best.map_or(true, |(b, _, _)| vx < b) {
                        best = Some((vx, i, j));
                    }
                }
            }
            let Some((val, pi, pj)) = best else { break };
            m.swap(k, pi);
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(k, pj);
                }
                for row in v.iter_mut() {
                    row.swap(k, pj);
                }
                vinv.swap(k, pj);
            }
            let lead = self.ell_pow(val);
            let unit = &m[k][k] / &lead;
            let inv = self.unit_inverse(&unit);
            for x in m[k].iter_mut() {
                *x = self.reduce(&(&*x * &inv));
            }
            // Clear the pivot column with row operations.
            let pivot_row = m[k].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == k || row[k].is_zero() {
                    continue;
                }
                let q = &row[k] / &lead;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = self.reduce(&(&*x - &q * y));
                }
            }
            // Clear the pivot row with column operations: col_j -= q col_k.
            for j in (k + 1)..r {
                if m[k][j].is_zero() {
                    continue;
                }
                let q = &m[k][j] / &lead;
                for row in m.iter_mut() {
                    let t = &row[k] * &q;
                    row[j] = self.reduce(&(&row[j] - t));
                }
                for row in v.iter_mut() {
                    let t = &row[k] * &q;
                    row[j] = self.reduce(&(&row[j] - t));
                }
                let (head, tail) = vinv.split_at_mut(j);
                for (x, y) in head[k].iter_mut().zip(&tail[0]) {
                    *x = self.reduce(&(&*x + &q * y));
                }
            }
            exps[k] = val;
            k += 1;
        }
        SmithForm { exps, v, vinv }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Pivot {
    pub col: usize,
    pub val: u32,
    pub row: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub(crate) struct Howell {
    exp: u32,
    pub pivots: Vec<Pivot>,
}

impl Howell {
    /// `log_l` of the order of the submodule.
    pub(crate) fn order_exp(&self) -> u64 {
        self.pivots.iter().map(|p| u64::from(self.exp - p.val)).sum()
    }

    pub(crate) fn rows(&self) -> Vec<Vec<BigInt>> {
        self.pivots.iter().map(|p| p.row.clone()).collect()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SmithForm {
    pub exps: Vec<u32>,
    pub v: Mat,
    pub vinv: Mat,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn howell_orders() {
        let ring = Ring::new(3, 4);
        // span of (3, 0), (0, 9) in (Z/81)^2 has order 27 * 9.
        let h = ring.howell(&m(&[&[3, 0], &[0, 9]]), 2);
        assert_eq!(h.order_exp(), 3 + 2);
        // (1, 1) and (0, 27): saturation is needed to see (0, 27).
        let h = ring.howell(&m(&[&[27, 27], &[0, 27]]), 2);
        assert_eq!(h.order_exp(), 2);
        assert_eq!(ring.howell(&[], 3).order_exp(), 0);
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let ring = Ring::new(3, 3);
        // x -> 3x on (Z/27)^2 has kernel of order 9.
        let a = m(&[&[3, 0], &[0, 3]]);
        let k = ring.preimage(&a, &[]);
        assert_eq!(ring.howell(&k, 2).order_exp(), 2);
        // x -> (x1 + x2) * (1, 1): kernel is the antidiagonal, order 27.
        let a = m(&[&[1, 1], &[1, 1]]);
        let k = ring.preimage(&a, &[]);
        assert_eq!(ring.howell(&k, 2).order_exp(), 3);
    }

    #[test]
    fn smith_transforms() {
        let ring = Ring::new(5, 3);
        let rels = m(&[&[5, 10], &[25, 0]]);
        let s = ring.smith(&rels, 2);
        let mut e = s.exps.clone();
        e.sort();
        // det = -250 = -2 * 5^3: invariant factors 5 and 25.
        assert_eq!(e, [1, 2]);
        assert_eq!(ring.mat_mul(&s.v, &s.vinv), ring.identity(2));
    }
}
