//! Finitely generated torsion modules over `Lambda = Z_l[[T]]`, `T = gamma - 1`.
//!
//! A module is given up to its elementary decomposition
//! `M = (+)_i Lambda/(f_i) (+) F`, where each `f_i` is either a power
//! `l^mu` or a distinguished polynomial and `F` is a finite `l`-group with an
//! explicit action of `T`.  Everything below is exact:
//!
//! * `Lambda/(P)` for a distinguished `P` of degree `d` is `Z_l^d` with `T`
//!   acting by the companion matrix, so `|Lambda/(P, g)| = l^{v(Res(P, g))}`
//!   is the determinant valuation of `g(T)` on that lattice.  It is computed
//!   in `Z/l^B` with `B` raised until the truncated group is visibly smaller
//!   than `l^B`.
//! * `Lambda/(l^mu, omega_n)` is free of rank `l^n` over `Z/l^mu`.
//! * `F` is `Z^r / diag(l^{a_i})` with `T` given by a matrix acting on row
//!   vectors, and every quotient, kernel and image is a Howell-form
//!   computation over `Z/l^B`.
//!
//! On the orientation of the Herbrand quotient: the pair
//! `(|M^Gamma|, |M_Gamma|)` is reported as two exponents together with the
//! pseudo-nullity flag, never as a signed ratio.  For `Lambda/(f)` the
//! invariants are trivial and the coinvariants have order `|Z_l / f(0)|`, so
//! `q = |M^Gamma| / |M_Gamma|` equals `(Z_l : chi(0) Z_l)^{-1}`; the formula
//! `q(X) = (Z_l : chi(0) Z_l)` found in the literature uses the reciprocal convention.

mod delta;
mod local;
mod poly;

pub use delta::{idempotents, phi_component, DeltaModule, GroupAlgebraElement};
pub use poly::{IntPoly, ParsePolyError};

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith;
use local::{Mat, Ring};

/// Largest level accepted by the tower computations.
pub const MAX_LEVEL: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IwasawaError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("elementary part {0} is neither l^mu (mu >= 1) nor a distinguished polynomial")]
    InvalidElementaryPart(IntPoly),
    #[error("T-action matrix has the wrong shape")]
    DimensionMismatch,
    #[error("T-action does not preserve the relations of the finite part")]
    IllDefinedAction,
    #[error("T does not act nilpotently on the finite part")]
    NotNilpotent,
    #[error("gamma - 1 divides the characteristic polynomial")]
    GammaMinusOneDivides,
    #[error("characteristic polynomial shares a root with omega_{level}")]
    NotCoprime { level: u32 },
    #[error("level {0} is out of range")]
    LevelOutOfRange(u32),
    #[error("levels must satisfy n <= m (got n = {n}, m = {m})")]
    BadLevels { n: u32, m: u32 },
    #[error("no stable (mu, lambda, nu) fit")]
    NoStableFit,
    #[error("Delta of order {d} is not supported for l = {ell} (need d | l - 1)")]
    UnsupportedDelta { d: u64, ell: u64 },
    #[error("Delta-action is not a well-defined automorphism of order d commuting with T")]
    BadDeltaAction,
}

fn check_ell(ell: u64) -> Result<(), IwasawaError> {
    if ell == 2 || !arith::is_prime_u64(ell) {
        return Err(IwasawaError::NotOddPrime(ell));
    }
    Ok(())
}

fn check_level(n: u32) -> Result<(), IwasawaError> {
    if n > MAX_LEVEL {
        return Err(IwasawaError::LevelOutOfRange(n));
    }
    Ok(())
}

/// `omega_n = (1 + T)^{l^n} - 1`.
pub fn omega(n: u32, ell: u64) -> IntPoly {
    IntPoly::one_plus_t_pow(ell.pow(n)).sub(&IntPoly::one())
}

/// `omega_n / omega_{n0}`, an exact polynomial quotient.
///
/// # Panics
/// If `n < n0`.
pub fn omega_quotient(n: u32, n0: u32, ell: u64) -> IntPoly {
    assert!(n >= n0, "omega_quotient needs n >= n0");
    let (q, r) = omega(n, ell).div_rem_monic(&omega(n0, ell));
    debug_assert!(r.is_zero());
    q
}

/// The first level `k` at which `omega_k` and `p` share a root, if any.
///
/// Roots of `omega_n` are `zeta - 1` for `l^k`-th roots of unity `zeta`, with
/// minimal polynomial `omega_k / omega_{k-1}` of degree `l^{k-1}(l-1)`, so only
/// finitely many `k` need checking.
fn shared_cyclotomic_level(p: &IntPoly, ell: u64, from: u32) -> Option<u32> {
    let deg = p.degree().unwrap_or(0) as u64;
    if from == 0 && p.constant_term().is_zero() {
        return Some(0);
    }
    let mut k = from.max(1);
    while ell.pow(k - 1) * (ell - 1) <= deg {
        let (_, r) = p.div_rem_monic(&omega_quotient(k, k - 1, ell));
        if r.is_zero() {
            return Some(k);
        }
        k += 1;
    }
    None
}

/// Companion matrix of a monic polynomial, acting on row vectors in the
/// basis `1, T, ..., T^{d-1}`.
fn companion(p: &IntPoly) -> Mat {
    let d = p.degree().expect("nonzero polynomial");
    (0..d)
        .map(|i| {
            let mut row = vec![BigInt::zero(); d];
            if i + 1 < d {
                row[i + 1] = BigInt::one();
            } else {
                for (j, c) in row.iter_mut().enumerate() {
                    *c = -p.coeff(j);
                }
            }
            row
        })
        .collect()
}

/// `gamma^{l^k}` for `k = 0..levels`, where `gamma = 1 + t`.
fn gamma_powers(ring: &Ring, t: &Mat, levels: u32, ell: u64) -> Vec<Mat> {
    let mut g = ring.mat_add(&ring.identity(t.len()), t);
    let mut out = Vec::with_capacity(levels as usize + 1);
    out.push(g.clone());
    for _ in 0..levels {
        g = ring.mat_pow(&g, ell);
        out.push(g.clone());
    }
    out
}

/// Matrix of `omega_n / omega_{n0}` evaluated at `t`.
fn quotient_matrix(ring: &Ring, t: &Mat, n0: u32, n: u32, ell: u64) -> Mat {
    let gammas = gamma_powers(ring, t, n, ell);
    let id = ring.identity(t.len());
    let mut acc = id.clone();
    for g in &gammas[n0 as usize..n as usize] {
        // 1 + g + ... + g^{l-1}
        let mut s = id.clone();
        let mut p = id.clone();
        for _ in 1..ell {
            p = ring.mat_mul(&p, g);
            s = ring.mat_add(&s, &p);
        }
        acc = ring.mat_mul(&acc, &s);
    }
    acc
}

/// Matrix of `omega_n` evaluated at `t`.
fn omega_matrix(ring: &Ring, t: &Mat, n: u32, ell: u64) -> Mat {
    let g = gamma_powers(ring, t, n, ell).pop().expect("nonempty");
    ring.mat_sub(&g, &ring.identity(t.len()))
}

/// A finite module `Z/l^B`-truncated: generators `e_i`, relations `base`
/// (together with `l^B`) and `T` acting by `t`.
struct Truncated<'a> {
    ring: Ring,
    ell: u64,
    base: Vec<Vec<BigInt>>,
    t: &'a Mat,
}

impl Truncated<'_> {
    fn dim(&self) -> usize {
        self.t.len()
    }

    fn sub_exp(&self, rows: &[Vec<BigInt>]) -> u64 {
        self.ring.howell(rows, self.dim()).order_exp()
    }

    fn total_exp(&self) -> u64 {
        u64::from(self.ring.exp()) * self.dim() as u64
    }

    fn with_rows(&self, extra: Mat) -> Vec<Vec<BigInt>> {
        let mut rows = self.base.clone();
        rows.extend(extra);
        rows
    }

    /// `log_l |G / omega_n G|`.
    fn level_exp(&self, n: u32) -> u64 {
        let l = self.with_rows(omega_matrix(&self.ring, self.t, n, self.ell));
        self.total_exp() - self.sub_exp(&l)
    }

    /// `log_l |G / g G|` for an endomorphism `g`.
    fn coker_exp(&self, g: Mat) -> u64 {
        self.total_exp() - self.sub_exp(&self.with_rows(g))
    }

    /// `log_l |ker g|` on `G`.
    fn ker_exp(&self, g: &Mat) -> u64 {
        self.sub_exp(&self.ring.preimage(g, &self.base)) - self.sub_exp(&self.base)
    }

    /// `log_l` of the kernel of `G/omega_n G -> G/omega_m G`, `x -> (omega_m/omega_n) x`.
    fn capitulation_exp(&self, n: u32, m: u32) -> u64 {
        let ln = self.with_rows(omega_matrix(&self.ring, self.t, n, self.ell));
        let lm = self.with_rows(omega_matrix(&self.ring, self.t, m, self.ell));
        let nu = quotient_matrix(&self.ring, self.t, n, m, self.ell);
        let k = self.ring.preimage(&nu, &lm);
        self.sub_exp(&k) - self.sub_exp(&ln)
    }

    /// Whether `g` maps `G` into the submodule spanned by `base + extra`.
    fn maps_into(&self, g: &Mat, extra: Mat) -> bool {
        let target = self.ring.howell(&self.with_rows(extra), self.dim());
        let mut all = target.rows();
        all.extend(g.iter().cloned());
        self.sub_exp(&all) == target.order_exp()
    }
}

/// A finite abelian `l`-group `(+)_i Z/l^{a_i}` with an action of `T`.
///
/// Row `i` of `t_action` is the image `T e_i` in terms of the generators;
/// entry `(i, j)` is read modulo `l^{a_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    ell: u64,
    exps: Vec<u32>,
    t_action: Mat,
}

impl FiniteModule {
    pub fn new(ell: u64, exps: Vec<u32>, t_action: Vec<Vec<BigInt>>) -> Result<Self, IwasawaError> {
        check_ell(ell)?;
        let r = exps.len();
        if t_action.len() != r || t_action.iter().any(|row| row.len() != r) {
            return Err(IwasawaError::DimensionMismatch);
        }
        let ellb = BigInt::from(ell);
        let pw = |k: u32| num_traits::pow(ellb.clone(), k as usize);
        let mut t = t_action;
        for (i, row) in t.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                // l^{a_i} e_i = 0 must map to 0 in Z/l^{a_j}.
                if !(&*x * pw(exps[i])).is_multiple_of(&pw(exps[j])) {
                    return Err(IwasawaError::IllDefinedAction);
                }
                *x = x.mod_floor(&pw(exps[j]));
            }
        }
        let module = FiniteModule { ell, exps, t_action: t };
        if !module.is_nilpotent() {
            return Err(IwasawaError::NotNilpotent);
        }
        Ok(module)
    }

    pub fn from_i64(ell: u64, exps: Vec<u32>, t_action: &[&[i64]]) -> Result<Self, IwasawaError> {
        let t = t_action.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(ell, exps, t)
    }

    /// `(+)_i Z/l^{a_i}` with `T` acting as zero.
    pub fn trivial_action(ell: u64, exps: Vec<u32>) -> Result<Self, IwasawaError> {
        let r = exps.len();
        Self::new(ell, exps, vec![vec![BigInt::zero(); r]; r])
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn t_action(&self) -> &[Vec<BigInt>] {
        &self.t_action
    }

    /// `log_l |F|`.
    pub fn order_exp(&self) -> u64 {
        self.exps.iter().map(|&a| u64::from(a)).sum()
    }

    fn ring(&self) -> Ring {
        Ring::new(self.ell, self.exps.iter().copied().max().unwrap_or(0).max(1))
    }

    fn truncated(&self) -> Truncated<'_> {
        let ring = self.ring();
        let r = self.exps.len();
        let base = self
            .exps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let mut row = vec![BigInt::zero(); r];
                row[i] = ring.ell_pow(a);
                row
            })
            .collect();
        Truncated { ring, ell: self.ell, base, t: &self.t_action }
    }

    fn is_nilpotent(&self) -> bool {
        let tr = self.truncated();
        let tp = tr.ring.mat_pow(&self.t_action, self.order_exp().max(1));
        tr.maps_into(&tp, Vec::new())
    }

    /// `log_l |F / omega_n F|`.
    pub fn quotient_exp(&self, n: u32) -> u64 {
        if self.exps.is_empty() {
            return 0;
        }
        self.truncated().level_exp(n)
    }

    /// `(log_l |F^Gamma|, log_l |F_Gamma|)`.
    pub fn herbrand_exps(&self) -> (u64, u64) {
        if self.exps.is_empty() {
            return (0, 0);
        }
        let tr = self.truncated();
        (tr.ker_exp(&self.t_action), tr.coker_exp(self.t_action.clone()))
    }

    /// Least `n` with `omega_n F = 0`.
    pub fn stable_level(&self) -> u32 {
        if self.exps.is_empty() {
            return 0;
        }
        let tr = self.truncated();
        (0..)
            .find(|&n| tr.maps_into(&omega_matrix(&tr.ring, &self.t_action, n, self.ell), Vec::new()))
            .expect("T is nilpotent, so gamma has l-power order")
    }

    /// `log_l` of the kernel of `F/omega_n F -> F/omega_m F`.
    pub fn capitulation_exp(&self, n: u32, m: u32) -> u64 {
        if self.exps.is_empty() {
            return 0;
        }
        self.truncated().capitulation_exp(n, m)
    }

    /// Whether `omega_m / omega_n` maps `F` into `omega_m F`; from then on the
    /// kernel of `F/omega_n F -> F/omega_m F` is everything.
    fn norm_saturates(&self, n: u32, m: u32) -> bool {
        if self.exps.is_empty() {
            return true;
        }
        let tr = self.truncated();
        let nu = quotient_matrix(&tr.ring, &self.t_action, n, m, self.ell);
        let om = omega_matrix(&tr.ring, &self.t_action, m, self.ell);
        tr.maps_into(&nu, om)
    }
}

/// One summand `Lambda/(f)` of the elementary decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Elementary {
    Mu(u32),
    Distinguished(IntPoly),
}

fn classify(f: &IntPoly, ell: u64) -> Result<Elementary, IwasawaError> {
    if f.degree() == Some(0) {
        let c = f.constant_term();
        if let Some(v) = arith::valuation(&c, &ell.into()) {
            if v >= 1 && c == num_traits::pow(BigInt::from(ell), v as usize) {
                return Ok(Elementary::Mu(v));
            }
        }
    } else if f.is_distinguished(ell) {
        return Ok(Elementary::Distinguished(f.clone()));
    }
    Err(IwasawaError::InvalidElementaryPart(f.clone()))
}

/// Exact `v_l(Res(p, g))` for a monic `p`, where `g(T)` is given by
/// `eval` as a matrix over `Z/l^B` and is known to be coprime to `p`.
fn resultant_exp(p: &IntPoly, ell: u64, eval: impl Fn(&Ring, &Mat) -> Mat) -> u64 {
    let c = companion(p);
    if c.is_empty() {
        return 0;
    }
    let d = c.len() as u64;
    let mut b = 8u32;
    loop {
        let ring = Ring::new(ell, b);
        let t = ring.reduce_mat(&c);
        let g = eval(&ring, &t);
        let e = u64::from(b) * d - ring.howell(&g, c.len()).order_exp();
        if e < u64::from(b) {
            return e;
        }
        b = b.saturating_mul(2);
    }
}

/// `v_l(Res(p, omega_n))`.
fn omega_resultant_exp(p: &IntPoly, n: u32, ell: u64) -> u64 {
    resultant_exp(p, ell, |ring, t| omega_matrix(ring, t, n, ell))
}

/// `log_l |Lambda/(rho, omega_n/omega_0)|`, the order of the circular
/// quotient at level `n`.
pub fn circular_quotient_order(rho: &IntPoly, n: u32, ell: u64) -> Result<u64, IwasawaError> {
    check_ell(ell)?;
    check_level(n)?;
    if rho == &IntPoly::one() {
        return Ok(0);
    }
    if !rho.is_distinguished(ell) {
        return Err(IwasawaError::InvalidElementaryPart(rho.clone()));
    }
    if let Some(level) = shared_cyclotomic_level(rho, ell, 1).filter(|&k| k <= n) {
        return Err(IwasawaError::NotCoprime { level });
    }
    Ok(resultant_exp(rho, ell, |ring, t| quotient_matrix(ring, t, 0, n, ell)))
}

/// `(inv, coinv)` exponents of `M^Gamma` and `M_Gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Herbrand {
    pub inv_exp: u64,
    pub coinv_exp: u64,
    pub pseudo_null: bool,
}

/// `e_n = mu l^n + lambda n + nu` for `n >= start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IwasawaInvariants {
    pub mu: u64,
    pub lambda: u64,
    pub nu: i64,
    pub start: u32,
}

impl IwasawaInvariants {
    pub fn predict(&self, ell: u64, n: u32) -> i128 {
        i128::from(self.mu) * i128::from(ell).pow(n) + i128::from(self.lambda) * i128::from(n) + i128::from(self.nu)
    }
}

/// The three readings of pseudo-nullity, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreenbergEquivalence {
    pub herbrand_trivial: bool,
    pub char_poly_trivial: bool,
    pub bounded_growth: bool,
}

impl GreenbergEquivalence {
    pub fn consistent(&self) -> bool {
        self.herbrand_trivial == self.char_poly_trivial && self.char_poly_trivial == self.bounded_growth
    }
}

/// `(+)_i Lambda/(f_i) (+) F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaModule {
    ell: u64,
    parts: Vec<IntPoly>,
    elementary: Vec<Elementary>,
    finite: Option<FiniteModule>,
}

impl LambdaModule {
    pub fn new(ell: u64, parts: Vec<IntPoly>, finite: Option<FiniteModule>) -> Result<Self, IwasawaError> {
        check_ell(ell)?;
        if finite.as_ref().is_some_and(|f| f.ell != ell) {
            return Err(IwasawaError::NotOddPrime(ell));
        }
        let elementary = parts.iter().map(|f| classify(f, ell)).collect::<Result<_, _>>()?;
        Ok(LambdaModule { ell, parts, elementary, finite })
    }

    pub fn finite(finite: FiniteModule) -> Self {
        LambdaModule { ell: finite.ell, parts: Vec::new(), elementary: Vec::new(), finite: Some(finite) }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn parts(&self) -> &[IntPoly] {
        &self.parts
    }

    pub fn finite_part(&self) -> Option<&FiniteModule> {
        self.finite.as_ref()
    }

    fn distinguished(&self) -> impl Iterator<Item = &IntPoly> {
        self.elementary.iter().filter_map(|e| match e {
            Elementary::Distinguished(p) => Some(p),
            Elementary::Mu(_) => None,
        })
    }

    /// Product of the elementary parts; the finite part contributes 1.
    pub fn char_poly(&self) -> IntPoly {
        self.parts.iter().fold(IntPoly::one(), |acc, f| acc.mul(f))
    }

    /// `(mu, lambda)` read off the characteristic polynomial.
    pub fn mu_lambda(&self) -> (u64, u64) {
        let chi = self.char_poly();
        let mu = arith::valuation(&chi.content(), &self.ell.into()).unwrap_or(0);
        (u64::from(mu), chi.degree().unwrap_or(0) as u64)
    }

    fn require_coprime(&self) -> Result<(), IwasawaError> {
        for p in self.distinguished() {
            if let Some(level) = shared_cyclotomic_level(p, self.ell, 0) {
                return Err(IwasawaError::NotCoprime { level });
            }
        }
        Ok(())
    }

    pub fn herbrand(&self) -> Result<Herbrand, IwasawaError> {
        if self.char_poly().constant_term().is_zero() {
            return Err(IwasawaError::GammaMinusOneDivides);
        }
        let (inv, mut coinv) = self.finite.as_ref().map_or((0, 0), FiniteModule::herbrand_exps);
        for e in &self.elementary {
            // T is injective on Lambda/(f) when f(0) != 0; the cokernel is Z_l/f(0).
            coinv += match e {
                Elementary::Mu(mu) => u64::from(*mu),
                Elementary::Distinguished(p) => {
                    u64::from(arith::valuation(&p.constant_term(), &self.ell.into()).expect("nonzero"))
                }
            };
        }
        Ok(Herbrand { inv_exp: inv, coinv_exp: coinv, pseudo_null: inv == coinv })
    }

    /// `e_n` with `|M / omega_n M| = l^{e_n}`.
    pub fn quotient_order(&self, n: u32) -> Result<u64, IwasawaError> {
        check_level(n)?;
        self.require_coprime()?;
        Ok(self.quotient_order_unchecked(n))
    }

    fn quotient_order_unchecked(&self, n: u32) -> u64 {
        let mut e = self.finite.as_ref().map_or(0, |f| f.quotient_exp(n));
        for part in &self.elementary {
            e += match part {
                Elementary::Mu(mu) => u64::from(*mu) * self.ell.pow(n),
                Elementary::Distinguished(p) => omega_resultant_exp(p, n, self.ell),
            };
        }
        e
    }

    /// A level from which `e_{n+1} - e_n = mu (l^{n+1} - l^n) + lambda` holds.
    ///
    /// For a root `a` of a distinguished `P` of degree `d`, `v(a) >= 1/d`, and
    /// raising `1 + a` to the `l`-th power multiplies the valuation of
    /// `(1 + a)^{l^k} - 1` by `l` until it exceeds `1/(l - 1)`, after which
    /// each step adds exactly 1.  That happens once `l^k (l - 1) > d`.  The
    /// finite part is stationary once `omega_n F = 0`.
    pub fn stable_level(&self) -> u32 {
        let mut start = self.finite.as_ref().map_or(0, FiniteModule::stable_level);
        for p in self.distinguished() {
            let d = p.degree().unwrap_or(0) as u64;
            let k = (0..).find(|&k| self.ell.pow(k) * (self.ell - 1) > d).expect("terminates");
            start = start.max(k);
        }
        start
    }

    /// Fits `(mu, lambda, nu)` on three consecutive stable levels and checks
    /// the fit on the next two.
    pub fn iwasawa_invariants(&self) -> Result<IwasawaInvariants, IwasawaError> {
        self.require_coprime()?;
        let n = self.stable_level();
        check_level(n + 4)?;
        let e: Vec<i128> = (n..n + 5).map(|k| i128::from(self.quotient_order_unchecked(k))).collect();
        let ell = i128::from(self.ell);
        let ln = ell.pow(n);
        let (d1, d2) = (e[1] - e[0], e[2] - e[1]);
        let scale = ln * (ell - 1) * (ell - 1);
        if (d2 - d1) % scale != 0 {
            return Err(IwasawaError::NoStableFit);
        }
        let mu = (d2 - d1) / scale;
        let lambda = d1 - mu * ln * (ell - 1);
        let nu = e[0] - mu * ln - lambda * i128::from(n);
        if mu < 0 || lambda < 0 {
            return Err(IwasawaError::NoStableFit);
        }
        let inv = IwasawaInvariants {
            mu: mu as u64,
            lambda: lambda as u64,
            nu: i64::try_from(nu).map_err(|_| IwasawaError::NoStableFit)?,
            start: n,
        };
        for (k, &ek) in e.iter().enumerate() {
            if inv.predict(self.ell, n + k as u32) != ek {
                return Err(IwasawaError::NoStableFit);
            }
        }
        Ok(inv)
    }

    /// `log_l |ker(M/omega_n M -> M/omega_m M)|` for the map induced by
    /// multiplication by `omega_m / omega_n`.
    ///
    /// On `Lambda/(l^mu)` the map is injective: `omega_m/omega_n` is not
    /// divisible by `l`, and `l` is prime in the factorial ring `Lambda`.
    /// The distinguished summands and `F` are computed on their truncated
    /// presentations.
    pub fn capitulation_kernel(&self, n: u32, m: u32) -> Result<u64, IwasawaError> {
        if n > m {
            return Err(IwasawaError::BadLevels { n, m });
        }
        check_level(m)?;
        self.require_coprime()?;
        let mut k = self.finite.as_ref().map_or(0, |f| f.capitulation_exp(n, m));
        for p in self.distinguished() {
            let em = omega_resultant_exp(p, m, self.ell);
            let c = companion(p);
            let ring = Ring::new(self.ell, em as u32 + 1);
            let t = ring.reduce_mat(&c);
            let tr = Truncated { ring, ell: self.ell, base: Vec::new(), t: &t };
            k += tr.capitulation_exp(n, m);
        }
        Ok(k)
    }

    /// The eventual value of `capitulation_kernel(n, m)` as `m` grows, which
    /// is `|F / omega_n F|`.
    pub fn stabilized_kernel(&self, n: u32) -> Result<u64, IwasawaError> {
        check_level(n)?;
        let m = match &self.finite {
            None => n,
            Some(f) => (n..=MAX_LEVEL)
                .find(|&m| f.norm_saturates(n, m))
                .ok_or(IwasawaError::LevelOutOfRange(MAX_LEVEL))?,
        };
        self.capitulation_kernel(n, m)
    }

    /// Evaluates pseudo-nullity three ways: trivial Herbrand pair, trivial
    /// characteristic polynomial, and stationary `e_n` (checked on
    /// `n <= max(8, stable level + 1)`).
    pub fn greenberg_equivalence(&self) -> Result<GreenbergEquivalence, IwasawaError> {
        let herbrand_trivial = self.herbrand()?.pseudo_null;
        let (mu, lambda) = self.mu_lambda();
        let char_poly_trivial = mu == 0 && lambda == 0;
        self.require_coprime()?;
        let top = (self.stable_level() + 1).max(8);
        check_level(top)?;
        let bounded_growth = self.quotient_order_unchecked(top) == self.quotient_order_unchecked(top - 1);
        Ok(GreenbergEquivalence { herbrand_trivial, char_poly_trivial, bounded_growth })
    }
}
