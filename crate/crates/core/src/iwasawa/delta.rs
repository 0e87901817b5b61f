//! Semi-simple splitting by a cyclic group `Delta = <tau>` of order `d | l - 1`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::local::{Mat, Ring};
use super::{check_ell, FiniteModule, IwasawaError};
use crate::arith;
use crate::padic::{teichmuller, PadicContext};

/// Element `sum_k c_k tau^k` of `(Z/l^N)[Delta]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    ell: u64,
    precision: u32,
    coeffs: Vec<BigUint>,
}

impl GroupAlgebraElement {
    fn modulus(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.ell), self.precision as usize)
    }

    pub fn new(ell: u64, precision: u32, coeffs: Vec<BigUint>) -> Self {
        let mut e = GroupAlgebraElement { ell, precision, coeffs };
        let m = e.modulus();
        for c in e.coeffs.iter_mut() {
            *c %= &m;
        }
        e
    }

    pub fn one(ell: u64, precision: u32, d: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); d];
        coeffs[0] = BigUint::one();
        Self::new(ell, precision, coeffs)
    }

    pub fn zero(ell: u64, precision: u32, d: usize) -> Self {
        Self::new(ell, precision, vec![BigUint::zero(); d])
    }

    /// Coefficient of `tau^k`.
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self::new(self.ell, self.precision, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.order();
        let mut out = vec![BigUint::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[(i + j) % d] += a * b;
            }
        }
        Self::new(self.ell, self.precision, out)
    }

    /// The matrix of this element acting through `tau` on row vectors.
    fn act(&self, ring: &Ring, tau: &Mat) -> Mat {
        let mut acc: Mat = vec![vec![BigInt::zero(); tau.len()]; tau.len()];
        let mut p = ring.identity(tau.len());
        for c in &self.coeffs {
            let scaled: Mat = p.iter().map(|r| r.iter().map(|x| x * BigInt::from(c.clone())).collect()).collect();
            acc = ring.mat_add(&acc, &scaled);
            p = ring.mat_mul(&p, tau);
        }
        acc
    }
}

fn primitive_root(ell: u64) -> u64 {
    let phi = ell - 1;
    let mut factors = Vec::new();
    let mut n = phi;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            factors.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..ell)
        .find(|&g| factors.iter().all(|&q| arith::pow_mod(g, phi / q, ell) != 1))
        .expect("a primitive root exists")
}

/// Primitive idempotents `e_j = (1/d) sum_k zeta^{jk} tau^{-k}` of
/// `Z_l[Delta]` at precision `N`, for the characters `tau -> zeta^j`, where
/// `zeta` is the Teichmuller lift of a primitive `d`-th root of unity.
pub fn idempotents(d: u64, ell: u64, precision: u32) -> Result<Vec<GroupAlgebraElement>, IwasawaError> {
    check_ell(ell)?;
    if d == 0 || (ell - 1) % d != 0 {
        return Err(IwasawaError::UnsupportedDelta { d, ell });
    }
    let precision = precision.max(1);
    let ctx = PadicContext::unchecked(BigUint::from(ell), precision);
    let zeta0 = arith::pow_mod(primitive_root(ell), (ell - 1) / d, ell);
    let zeta = teichmuller(&ctx.from_u64(zeta0)).expect("unit");
    let d_inv = ctx.from_u64(d).inverse().expect("l does not divide d");
    let n = d as usize;
    let out = (0..d)
        .map(|j| {
            let mut coeffs = vec![BigUint::zero(); n];
            for k in 0..d {
                let c = &d_inv * &zeta.pow_u64(j * k);
                coeffs[((d - k) % d) as usize] = c.residue().clone();
            }
            GroupAlgebraElement::new(ell, precision, coeffs)
        })
        .collect();
    Ok(out)
}

/// A finite `Lambda[Delta]`-module: `tau` acts on row vectors and commutes
/// with `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaModule {
    module: FiniteModule,
    tau: Mat,
    order: u64,
}

impl DeltaModule {
    pub fn new(module: FiniteModule, tau: Vec<Vec<BigInt>>, order: u64) -> Result<Self, IwasawaError> {
        let ell = module.ell();
        if order == 0 || (ell - 1) % order != 0 {
            return Err(IwasawaError::UnsupportedDelta { d: order, ell });
        }
        let r = module.exps().len();
        if tau.len() != r || tau.iter().any(|row| row.len() != r) {
            return Err(IwasawaError::DimensionMismatch);
        }
        if r == 0 {
            return Ok(DeltaModule { module, tau, order });
        }
        let tr = module.truncated();
        let ring = &tr.ring;
        let tau = ring.reduce_mat(&tau);
        // Relations preserved, tau^d = 1, and tau T = T tau.
        let ok_rel = tr.maps_into(&ring.image(&tr.base, &tau), Vec::new());
        let id = ring.identity(r);
        let ok_order = tr.maps_into(&ring.mat_sub(&ring.mat_pow(&tau, order), &id), Vec::new());
        let t = module.t_action().to_vec();
        let comm = ring.mat_sub(&ring.mat_mul(&tau, &t), &ring.mat_mul(&t, &tau));
        let ok_comm = tr.maps_into(&comm, Vec::new());
        if !(ok_rel && ok_order && ok_comm) {
            return Err(IwasawaError::BadDeltaAction);
        }
        Ok(DeltaModule { module, tau, order })
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn order(&self) -> u64 {
        self.order
    }
}

/// The component `e_j M` for the `j`-th character, as a finite module with
/// its own cyclic decomposition and `T`-action.
pub fn phi_component(m: &DeltaModule, j: u64) -> Result<FiniteModule, IwasawaError> {
    let ell = m.module.ell();
    if j >= m.order {
        return Err(IwasawaError::UnsupportedDelta { d: m.order, ell });
    }
    let r = m.module.exps().len();
    if r == 0 {
        return Ok(m.module.clone());
    }
    let tr = m.module.truncated();
    let ring = &tr.ring;
    let e = idempotents(m.order, ell, ring.exp())?.swap_remove(j as usize);
    // e M = M / (1 - e) M.
    let complement = ring.mat_sub(&ring.identity(r), &e.act(ring, &m.tau));
    let mut rels = tr.base.clone();
    rels.extend(complement);
    let smith = ring.smith(&rels, r);
    let t = m.module.t_action().to_vec();
    let t_new = ring.mat_mul(&ring.mat_mul(&smith.vinv, &t), &smith.v);
    let keep: Vec<usize> = (0..r).filter(|&i| smith.exps[i] > 0).collect();
    let exps = keep.iter().map(|&i| smith.exps[i]).collect();
    let t_kept = keep.iter().map(|&i| keep.iter().map(|&k| t_new[i][k].clone()).collect()).collect();
    FiniteModule::new(ell, exps, t_kept)
}
