use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial with integer coefficients, stored from the constant term up.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient
/// is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `T`.
    pub fn t() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `T - a`.
    pub fn linear(a: i64) -> Self {
        Self::from_i64s(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Monic of positive degree with every lower coefficient divisible by `ell`.
    pub fn is_distinguished(&self, ell: u64) -> bool {
        let ell = BigInt::from(ell);
        self.is_monic()
            && self.degree() > Some(0)
            && self.coeffs[..self.coeffs.len() - 1].iter().all(|c| c.is_multiple_of(&ell))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder by a monic divisor.
    ///
    /// # Panics
    /// If `divisor` is not monic.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "division by a non-monic polynomial");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let q = core::mem::take(&mut rem[k + dd]);
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs[..dd].iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quo[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quo), Self::new(rem))
    }

    /// Binomial expansion of `(1 + T)^e`.
    pub fn one_plus_t_pow(e: u64) -> Self {
        let mut coeffs = Vec::with_capacity(e as usize + 1);
        let mut c = BigInt::one();
        coeffs.push(c.clone());
        for k in 0..e {
            c = c * BigInt::from(e - k) / BigInt::from(k + 1);
            coeffs.push(c.clone());
        }
        Self::new(coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str("T")?,
                (_, false) => write!(f, "{mag}*T")?,
            }
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePolyError(pub String);

impl fmt::Display for ParsePolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse polynomial: {}", self.0)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParsePolyError {}

/// Parses sums of monomials in `T`, e.g. `T^2 + 3*T + 3`, `T-3`, `-2T^3+9`.
impl FromStr for IntPoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePolyError(s.into());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut negative = false;
        let bytes = compact.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
                terms.push((negative, &compact[start..i]));
                negative = b == b'-';
                start = i + 1;
            } else if i == 0 && (b == b'+' || b == b'-') {
                negative = b == b'-';
                start = 1;
            }
        }
        terms.push((negative, &compact[start..]));

        let mut coeffs: Vec<BigInt> = Vec::new();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(err());
            }
            let (coef, power) = match term.find(['T', 't']) {
                None => (term, 0usize),
                Some(pos) => {
                    let coef = term[..pos].trim_end_matches('*');
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').and_then(|p| p.parse().ok()).ok_or_else(err)?
                    };
                    (if coef.is_empty() { "1" } else { coef }, power)
                }
            };
            let mut c: BigInt = coef.parse().map_err(|_| err())?;
            if neg {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += c;
        }
        Ok(Self::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn arithmetic() {
        let p = IntPoly::from_i64s(&[3, 3, 1]);
        let t = IntPoly::t();
        assert_eq!(p.mul(&t), IntPoly::from_i64s(&[0, 3, 3, 1]));
        let (q, r) = IntPoly::from_i64s(&[0, 3, 3, 1]).div_rem_monic(&t);
        assert_eq!((q, r), (p, IntPoly::zero()));
        assert_eq!(IntPoly::one_plus_t_pow(3), IntPoly::from_i64s(&[1, 3, 3, 1]));
        assert_eq!(IntPoly::linear(3).pow(2), IntPoly::from_i64s(&[9, -6, 1]));
        assert!(IntPoly::linear(3).is_distinguished(3));
        assert!(!IntPoly::linear(1).is_distinguished(3));
        assert!(!IntPoly::from_i64s(&[9]).is_distinguished(3));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["T^2 + 3*T + 3", "T - 3", "9", "-T^3 + 2*T", "0"] {
            let p: IntPoly = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert_eq!("t-3".parse::<IntPoly>().unwrap(), IntPoly::linear(3));
        assert_eq!("3T+T".parse::<IntPoly>().unwrap(), IntPoly::from_i64s(&[0, 4]));
        assert!("T^".parse::<IntPoly>().is_err());
        assert!("".parse::<IntPoly>().is_err());
        assert!("x+1".parse::<IntPoly>().is_err());
    }
}
