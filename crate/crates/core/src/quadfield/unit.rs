use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::element::QuadElement;
use super::FieldSpec;

/// The fundamental unit `eps > 1` of the maximal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub unit: QuadElement,
    pub norm: i8,
    /// Length of the continued-fraction period that produced it.
    pub period: usize,
}

/// Fundamental unit from the continued fraction of `w = (s + sqrt D)/2`,
/// `s = D mod 2`.
///
/// The complete quotients are `(P + sqrt D)/Q` with integer `P`, `Q`; the
/// period closes at the first `Q = 2`, where the convergent `p/q` yields
/// `eps = p - q * conj(w)`.  Everything is exact integer arithmetic.
pub fn fundamental_unit(spec: &FieldSpec) -> FundamentalUnit {
    let d = spec.disc() as i64;
    let r = spec.isqrt_disc() as i64;
    let s = spec.disc_parity() as i64;
    let (mut big_p, mut big_q) = (s, 2i64);
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    let mut period = 0usize;
    loop {
        debug_assert!(big_q > 0);
        let a = (big_p + r) / big_q;
        let a_big = BigInt::from(a);
        let p = &a_big * &p1 + &p2;
        let q = &a_big * &q1 + &q2;
        p2 = core::mem::replace(&mut p1, p);
        q2 = core::mem::replace(&mut q1, q);
        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
        period += 1;
        if big_q == 2 {
            break;
        }
    }
    // eps = p - q (s - sqrt D)/2 = (2p - q s + q sqrt D) / 2
    let x = &p1 * 2 - &q1 * s;
    let y = q1;
    let unit = if s == 0 {
        // sqrt D = 2 sqrt m
        QuadElement::new(x / 2, y, 1)
    } else {
        QuadElement::new(x, y, 2)
    };
    let norm = unit.norm(spec.m());
    debug_assert!(norm.abs().is_one());
    FundamentalUnit { unit, norm: if norm.is_positive() { 1 } else { -1 }, period }
}

#[cfg(test)]
mod tests {
    use super::super::discriminant;
    use super::*;

    #[test]
    fn examples() {
        let u = fundamental_unit(&discriminant(2).unwrap());
        assert_eq!((u.unit, u.norm), (QuadElement::new(1, 1, 1), -1));
        let u = fundamental_unit(&discriminant(7).unwrap());
        assert_eq!((u.unit, u.norm), (QuadElement::new(8, 3, 1), 1));
        let u = fundamental_unit(&discriminant(5).unwrap());
        assert_eq!((u.unit, u.norm), (QuadElement::new(1, 1, 2), -1));
        let u = fundamental_unit(&discriminant(10).unwrap());
        assert_eq!((u.unit, u.norm), (QuadElement::new(3, 1, 1), -1));
    }

    #[test]
    fn large_regulator() {
        // m = 94: eps = 2143295 + 221064 sqrt(94).
        let u = fundamental_unit(&discriminant(94).unwrap());
        assert_eq!(u.unit, QuadElement::new(2143295, 221064, 1));
        // m = 9949 has a unit with dozens of digits; only the norm is checked.
        let u = fundamental_unit(&discriminant(9949).unwrap());
        assert!(u.unit.is_unit(9949));
    }
}
