//! `l`-adic integers known modulo `l^N`.
//!
//! A [`PadicInt`] stores the canonical residue in `[0, l^N)` together with
//! its context and cached valuation.  Values are immutable; every operation
//! returns a new value.  All arithmetic is exact big-integer arithmetic.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

/// Smallest precision accepted by [`PadicContext::new`].
pub const MIN_PRECISION: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigUint),
    #[error("precision {0} is below the minimum of {MIN_PRECISION}")]
    PrecisionTooSmall(u32),
    #[error("argument is not a unit")]
    NonUnit,
    #[error("argument is not a quadratic residue mod l")]
    NotAResidue,
    #[error("branch does not square to the argument mod l")]
    BadBranch,
}

/// The prime `l` and the number of `l`-adic digits carried.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicContext {
    ell: BigUint,
    precision: u32,
    modulus: BigUint,
}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}/{}^{}", self.ell, self.ell, self.precision)
    }
}

impl PadicContext {
    pub fn new(ell: impl Into<BigUint>, precision: u32) -> Result<Self, PadicError> {
        let ell = ell.into();
        if ell == BigUint::from(2u32) || !arith::is_prime(&ell) {
            return Err(PadicError::NotOddPrime(ell));
        }
        if precision < MIN_PRECISION {
            return Err(PadicError::PrecisionTooSmall(precision));
        }
        Ok(Self::unchecked(ell, precision))
    }

    /// Builds a context without validating `ell` or the precision floor.
    /// Used internally for intermediate moduli such as `l^{N+g}`.
    pub(crate) fn unchecked(ell: BigUint, precision: u32) -> Self {
        let modulus = num_traits::pow(ell.clone(), precision as usize);
        Self { ell, precision, modulus }
    }

    pub fn ell(&self) -> &BigUint {
        &self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `l^N`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Same prime, different number of digits. The precision floor of
    /// [`PadicContext::new`] is not enforced here.
    pub fn with_precision(&self, precision: u32) -> Self {
        if precision == self.precision {
            return self.clone();
        }
        Self::unchecked(self.ell.clone(), precision)
    }

    pub fn zero(&self) -> PadicInt {
        PadicInt::from_biguint(BigUint::zero(), self)
    }

    pub fn one(&self) -> PadicInt {
        PadicInt::from_biguint(BigUint::one(), self)
    }

    pub fn from_u64(&self, n: u64) -> PadicInt {
        PadicInt::from_biguint(BigUint::from(n), self)
    }

    pub fn from_i64(&self, n: i64) -> PadicInt {
        PadicInt::from_bigint(&BigInt::from(n), self)
    }
}

/// An element of `Z_l / l^N Z_l`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicInt {
    residue: BigUint,
    ctx: PadicContext,
    /// `None` when the residue is zero, i.e. the value is indistinguishable
    /// from 0 at this precision.
    valuation: Option<u32>,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.ctx.ell, self.ctx.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

fn residue_valuation(residue: &BigUint, ell: &BigUint) -> Option<u32> {
    if residue.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut r = residue.clone();
    loop {
        let (q, rem) = r.div_rem(ell);
        if !rem.is_zero() {
            return Some(v);
        }
        r = q;
        v += 1;
    }
}

impl PadicInt {
    pub fn from_biguint(n: BigUint, ctx: &PadicContext) -> Self {
        let residue = n % ctx.modulus();
        let valuation = residue_valuation(&residue, ctx.ell());
        Self { residue, ctx: ctx.clone(), valuation }
    }

    pub fn from_bigint(n: &BigInt, ctx: &PadicContext) -> Self {
        let m = BigInt::from(ctx.modulus().clone());
        let r = n.mod_floor(&m);
        Self::from_biguint(r.to_biguint().expect("mod_floor is nonnegative"), ctx)
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.ctx.precision
    }

    /// Exact `l`-adic valuation of the residue, or `None` if it is zero.
    pub fn valuation(&self) -> Option<u32> {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation == Some(0)
    }

    /// Reduces to fewer digits. Asking for more digits than are known is an
    /// error in the caller; it is clamped to the current precision.
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.ctx.precision);
        Self::from_biguint(self.residue.clone(), &self.ctx.with_precision(precision))
    }

    /// Reinterprets the canonical residue at a higher precision. The new
    /// digits are zero, which is one valid lift among many.
    pub fn lift(&self, precision: u32) -> Self {
        Self::from_biguint(self.residue.clone(), &self.ctx.with_precision(precision))
    }

    fn check_ctx(&self, other: &Self) {
        assert!(
            self.ctx == other.ctx,
            "p-adic operands with different contexts: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        Self::from_biguint(self.residue.modpow(exp, self.ctx.modulus()), &self.ctx)
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    pub fn inverse(&self) -> Result<Self, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NonUnit);
        }
        let inv = self
            .residue
            .modinv(self.ctx.modulus())
            .ok_or(PadicError::NonUnit)?;
        Ok(Self::from_biguint(inv, &self.ctx))
    }

    /// Exact division by `l^k`; the result has `k` fewer digits.
    pub fn div_ell_power(&self, k: u32) -> Result<Self, PadicError> {
        match self.valuation {
            Some(v) if v < k => Err(PadicError::NonUnit),
            _ => {
                let q = &self.residue / num_traits::pow(self.ctx.ell.clone(), k as usize);
                let ctx = self.ctx.with_precision(self.ctx.precision.saturating_sub(k));
                Ok(Self::from_biguint(q, &ctx))
            }
        }
    }

    /// Signed representative in `(-l^N/2, l^N/2]`.
    pub fn to_signed(&self) -> BigInt {
        let half = self.ctx.modulus() >> 1usize;
        if self.residue > half {
            BigInt::from_biguint(Sign::Plus, self.residue.clone())
                - BigInt::from(self.ctx.modulus().clone())
        } else {
            BigInt::from(self.residue.clone())
        }
    }
}

impl<'a> Add<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &'a PadicInt) -> PadicInt {
        self.check_ctx(rhs);
        PadicInt::from_biguint(&self.residue + &rhs.residue, &self.ctx)
    }
}

impl<'a> Sub<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &'a PadicInt) -> PadicInt {
        self.check_ctx(rhs);
        PadicInt::from_biguint(&self.residue + self.ctx.modulus() - &rhs.residue, &self.ctx)
    }
}

impl<'a> Mul<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &'a PadicInt) -> PadicInt {
        self.check_ctx(rhs);
        PadicInt::from_biguint(&self.residue * &rhs.residue, &self.ctx)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::from_biguint(self.ctx.modulus() - &self.residue, &self.ctx)
    }
}

fn mod_ell(x: &PadicInt) -> BigUint {
    &x.residue % x.ctx.ell()
}

/// Square root of a unit `a` congruent to `branch` mod `l`, by Newton
/// iteration `s <- (s + a/s)/2`.
pub fn hensel_sqrt(a: &PadicInt, branch: &BigUint) -> Result<PadicInt, PadicError> {
    let ctx = a.context();
    let ell = ctx.ell();
    if !a.is_unit() {
        return Err(PadicError::NonUnit);
    }
    let a0 = mod_ell(a);
    let euler = (ell - 1u32) >> 1usize;
    if a0.modpow(&euler, ell) != BigUint::one() {
        return Err(PadicError::NotAResidue);
    }
    let b0 = branch % ell;
    if (&b0 * &b0) % ell != a0 {
        return Err(PadicError::BadBranch);
    }
    let half = ctx.from_u64(2).inverse()?;
    let mut s = PadicInt::from_biguint(b0, ctx);
    // Each step doubles the number of correct digits.
    let mut correct = 1u32;
    while correct < ctx.precision() {
        let q = &s.inverse()? * a;
        s = &(&s + &q) * &half;
        correct = correct.saturating_mul(2);
    }
    debug_assert!((&s * &s) == *a);
    Ok(s)
}

/// The `(l-1)`-st root of unity congruent to `u` mod `l`, as the limit of
/// `u^{l^k}`.
pub fn teichmuller(u: &PadicInt) -> Result<PadicInt, PadicError> {
    if !u.is_unit() {
        return Err(PadicError::NonUnit);
    }
    let ell = u.context().ell().clone();
    let mut x = u.clone();
    loop {
        let next = x.pow(&ell);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// Guard digits used by [`iwasawa_log`] at output precision `n`:
/// `floor(log_l n) + 1`.
pub fn guard_digits(ell: &BigUint, n: u32) -> u32 {
    match ell.to_u64() {
        Some(l) => arith::ilog(n as u64, l) + 1,
        None => 1,
    }
}

/// Iwasawa logarithm of `l^e * x` for a unit `x`, with the convention
/// `Log(l) = 0` (the exponent `e` is accepted and ignored).
///
/// The result is known to the same precision `N` as `x`.  Internally the
/// series `log(1+t)` with `t = x/omega(x) - 1` is summed modulo
/// `l^{N+g+j}`, where `g` are the guard digits and `j` bounds the
/// valuations of the denominators `k` that occur.
pub fn iwasawa_log(x: &PadicInt, _ell_exponent: i64) -> Result<PadicInt, PadicError> {
    if !x.is_unit() {
        return Err(PadicError::NonUnit);
    }
    let out_ctx = x.context().clone();
    let n = out_ctx.precision();
    let ell = out_ctx.ell().clone();
    let t = &(x * &teichmuller(x)?.inverse()?) - &out_ctx.one();
    let vt = match t.valuation() {
        None => return Ok(out_ctx.zero()),
        Some(v) => v,
    };
    debug_assert!(vt >= 1);
    let guard = guard_digits(&ell, n);
    let target = n + guard;
    let ell_small = ell.to_u64();
    let vk = |k: u64| -> u32 {
        match ell_small {
            Some(l) => arith::valuation_u64(k, l),
            None => 0,
        }
    };
    let logk = |k: u64| -> u32 {
        match ell_small {
            Some(l) => arith::ilog(k, l),
            None => 0,
        }
    };
    // Terms with k > last all have valuation >= target.
    let mut last = 1u64;
    while (last as u128 * vt as u128) < (target + logk(last)) as u128 {
        last += 1;
    }
    let work = target + logk(last);
    let acc_ctx = out_ctx.with_precision(target);
    let t_work = t.lift(work);
    let mut power = t_work.clone();
    let mut acc = acc_ctx.zero();
    for k in 1..=last {
        if k > 1 {
            power = &power * &t_work;
        }
        let j = vk(k);
        let unit_part = k / num_traits::pow(ell_small.unwrap_or(1), j as usize);
        let reduced = power.div_ell_power(j)?.truncate(target);
        let inv = acc_ctx.from_u64(unit_part).inverse()?;
        let term = &reduced * &inv;
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    Ok(acc.truncate(n))
}

/// Outcome of [`log_valuation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogValuation {
    Resolved(u32),
    /// The value is zero at this precision; recompute with more digits.
    Escalate,
}

/// Valuation of a logarithm.  A nonzero residue has an exact valuation; a
/// zero residue cannot be resolved at this precision.
pub fn log_valuation(x: &PadicInt) -> LogValuation {
    match x.valuation() {
        Some(v) if v < x.precision() => LogValuation::Resolved(v),
        _ => LogValuation::Escalate,
    }
}

/// Digits of `x` in base `l`, least significant first.
pub fn digits(x: &PadicInt) -> Vec<BigUint> {
    let ell = x.context().ell();
    let mut r = x.residue().clone();
    let mut out = Vec::with_capacity(x.precision() as usize);
    for _ in 0..x.precision() {
        let (q, d) = r.div_rem(ell);
        out.push(d);
        r = q;
    }
    out
}
