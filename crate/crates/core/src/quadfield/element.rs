use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An algebraic integer `(x + y*sqrt(m)) / den` with `den` in `{1, 2}`.
///
/// `den = 2` only occurs for `m = 1 mod 4` with `x = y mod 2`.  The radicand
/// is not stored; arithmetic takes it as an argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    pub x: BigInt,
    pub y: BigInt,
    pub den: u8,
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y.is_negative() { '-' } else { '+' };
        if self.den == 1 {
            write!(f, "{} {} {}*sqrt(m)", self.x, sign, self.y.abs())
        } else {
            write!(f, "({} {} {}*sqrt(m))/2", self.x, sign, self.y.abs())
        }
    }
}

impl QuadElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, den: u8) -> Self {
        Self::normalized(x.into(), y.into(), BigInt::from(den))
    }

    pub fn one() -> Self {
        Self { x: BigInt::one(), y: BigInt::zero(), den: 1 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self { x: n.into(), y: BigInt::zero(), den: 1 }
    }

    /// Brings `(x + y*sqrt(m)) / den` to lowest terms with `den` in `{1, 2}`.
    ///
    /// Panics if the value is not an algebraic integer of that shape.
    pub(crate) fn normalized(mut x: BigInt, mut y: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            x = -x;
            y = -y;
            den = -den;
        }
        let g = x.gcd(&y).gcd(&den);
        if !g.is_zero() && !g.is_one() {
            x /= &g;
            y /= &g;
            den /= &g;
        }
        let den = if den.is_one() {
            1
        } else if den == BigInt::from(2) {
            2
        } else {
            panic!("({x} + {y} sqrt(m)) / {den} is not integral");
        };
        Self { x, y, den }
    }

    pub fn conj(&self) -> Self {
        Self { x: self.x.clone(), y: -&self.y, den: self.den }
    }

    pub fn neg(&self) -> Self {
        Self { x: -&self.x, y: -&self.y, den: self.den }
    }

    pub fn mul(&self, other: &Self, m: u64) -> Self {
        let m = BigInt::from(m);
        let x = &self.x * &other.x + &m * &self.y * &other.y;
        let y = &self.x * &other.y + &self.y * &other.x;
        Self::normalized(x, y, BigInt::from(self.den as u32 * other.den as u32))
    }

    pub fn pow(&self, mut exp: u64, m: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, m);
            }
            base = base.mul(&base, m);
            exp >>= 1;
        }
        acc
    }

    /// Exact norm `(x^2 - m y^2) / den^2`.
    pub fn norm(&self, m: u64) -> BigInt {
        let num = &self.x * &self.x - BigInt::from(m) * &self.y * &self.y;
        let d2 = BigInt::from(self.den as u32 * self.den as u32);
        debug_assert!((&num % &d2).is_zero());
        num / d2
    }

    /// Whether the element is a unit of the maximal order.
    pub fn is_unit(&self, m: u64) -> bool {
        self.norm(m).abs().is_one()
    }
}
