use crate::arith::xgcd;

/// A primitive indefinite binary quadratic form `a x^2 + b xy + c y^2`.
///
/// Discriminants stay below [`super::DISCRIMINANT_BOUND`], so reduced
/// coefficients fit comfortably in `i64`; composition works in `i128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// Normalizes `b` modulo `2|c|` for the rho step.  `r = floor(sqrt(D))`.
pub(crate) fn normalize_b(b: i64, c: i64, r: i64) -> i64 {
    let two_c = 2 * c.abs();
    if c.abs() > r {
        // -|c| < b' <= |c|
        let mut t = b.rem_euclid(two_c);
        if t > c.abs() {
            t -= two_c;
        }
        t
    } else {
        // sqrt(D) - 2|c| < b' < sqrt(D)
        r - (r - b).rem_euclid(two_c)
    }
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// Form with leading coefficient `a` and discriminant `d`, solving for `c`.
    pub fn from_ab(a: i64, b: i64, d: i64) -> Self {
        let num = b as i128 * b as i128 - d as i128;
        debug_assert!(num % (4 * a as i128) == 0, "b^2 != D mod 4a");
        Self { a, b, c: (num / (4 * a as i128)) as i64 }
    }

    pub fn discriminant(&self) -> i64 {
        (self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128) as i64
    }

    /// The reduced principal form `(1, b0, c0)` of discriminant `d`.
    pub fn principal(d: i64) -> Self {
        let r = crate::arith::isqrt(d as u64) as i64;
        let b0 = if (r - d) % 2 == 0 { r } else { r - 1 };
        Self::from_ab(1, b0, d)
    }

    /// `(-1, b0, -c0)`: principal in the wide sense, and properly equivalent
    /// to the principal form exactly when the fundamental unit has norm -1.
    pub fn negative_principal(d: i64) -> Self {
        let p = Self::principal(d);
        Self { a: -1, b: p.b, c: -p.c }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.a, b: -self.b, c: self.c }
    }

    /// `0 < b < sqrt(D)` and `sqrt(D) - b < 2|a| < sqrt(D) + b`.
    pub fn is_reduced(&self, r: i64) -> bool {
        let two_a = 2 * self.a.abs();
        self.b > 0 && self.b <= r && two_a + self.b > r && two_a - self.b <= r
    }

    /// One reduction step `(a, b, c) -> (c, b', (b'^2 - D) / 4c)`.
    pub fn rho(&self, d: i64, r: i64) -> Self {
        let b = normalize_b(-self.b, self.c, r);
        Self::from_ab(self.c, b, d)
    }

    pub fn reduce(self, d: i64, r: i64) -> Self {
        let mut f = self;
        while !f.is_reduced(r) {
            f = f.rho(d, r);
        }
        f
    }

    /// Dirichlet composition.  The result has the product class but is not
    /// reduced.
    pub fn compose(&self, other: &Self, d: i64) -> Self {
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let s = (b1 + b2) / 2;
        let (g1, x1, y1) = xgcd(a1, a2);
        let (g, x2, y2) = xgcd(g1, s);
        let (e, f, h) = (x2 * x1, x2 * y1, y2);
        let big_a = a1 * a2 / (g * g);
        let two_a = 2 * big_a.abs();
        // B = (e a1 b2 + f a2 b1 + h (b1 b2 + D)/2) / g, reduced mod 2A
        // term by term to keep the products in range.
        let md = |x: i128| x.rem_euclid(two_a * g);
        let term1 = md(md(e * a1) * b2);
        let term2 = md(md(f * a2) * b1);
        let term3 = md(h.rem_euclid(two_a * g) * md((b1 * b2 + d as i128) / 2));
        let num = md(term1 + term2 + term3);
        debug_assert!(num % g == 0);
        let mut big_b = (num / g).rem_euclid(two_a);
        if big_b > big_a.abs() {
            big_b -= two_a;
        }
        Self::from_ab(big_a as i64, big_b as i64, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::isqrt;

    #[test]
    fn principal_forms_are_reduced() {
        for d in [5i64, 8, 12, 13, 21, 28, 40, 316, 9997 * 4] {
            let r = isqrt(d as u64) as i64;
            let p = Form::principal(d);
            assert_eq!(p.discriminant(), d);
            assert!(p.is_reduced(r), "{p:?}");
            assert!(Form::negative_principal(d).is_reduced(r));
        }
    }

    #[test]
    fn rho_preserves_discriminant_and_reaches_reduced() {
        let d = 316;
        let r = isqrt(d as u64) as i64;
        let f = Form::from_ab(3, 2, d).compose(&Form::from_ab(3, 2, d), d);
        assert_eq!(f.discriminant(), d);
        let g = f.reduce(d, r);
        assert_eq!(g.discriminant(), d);
        assert!(g.is_reduced(r));
    }

    #[test]
    fn composition_with_identity_and_inverse() {
        let d = 40;
        let r = isqrt(d as u64) as i64;
        let f = Form::from_ab(3, 2, d);
        let one = Form::principal(d);
        let fr = f.reduce(d, r);
        let prod = f.compose(&one, d).reduce(d, r);
        // Same cycle as f.
        let mut g = fr;
        let mut found = false;
        for _ in 0..64 {
            if g == prod {
                found = true;
                break;
            }
            g = g.rho(d, r);
        }
        assert!(found);
        let inv = f.compose(&f.inverse(), d).reduce(d, r);
        let mut g = one;
        let mut found = false;
        for _ in 0..64 {
            if g == inv {
                found = true;
                break;
            }
            g = g.rho(d, r);
        }
        assert!(found);
    }
}
