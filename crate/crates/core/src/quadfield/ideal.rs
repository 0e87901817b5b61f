use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::element::QuadElement;
use super::{require_split, root_branch, to_i64, FieldSpec, QuadError};

/// The integral ideal `content * (a Z + (b + sqrt D)/2 Z)` with `a > 0` and
/// `b^2 = D (mod 4a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealRep {
    pub a: BigInt,
    pub b: BigInt,
    pub content: BigInt,
}

/// `(x + y sqrt D) / z` with rational coefficients; used to accumulate the
/// generator while walking a cycle of reduced ideals.
#[derive(Debug, Clone)]
struct DiscFraction {
    x: BigInt,
    y: BigInt,
    z: BigInt,
}

impl DiscFraction {
    fn one() -> Self {
        Self { x: BigInt::one(), y: BigInt::zero(), z: BigInt::one() }
    }

    /// Multiplies by `(b + sqrt D) / (2c)`.
    fn mul_step(&mut self, b: &BigInt, c: &BigInt, d: &BigInt) {
        let x = &self.x * b + &self.y * d;
        let y = &self.x + &self.y * b;
        self.x = x;
        self.y = y;
        self.z = &self.z * c * 2;
        if self.z.is_negative() {
            self.x = -&self.x;
            self.y = -&self.y;
            self.z = -&self.z;
        }
        let g = self.x.gcd(&self.y).gcd(&self.z);
        if !g.is_one() {
            self.x /= &g;
            self.y /= &g;
            self.z /= &g;
        }
    }
}

/// `(g, x, y)` with `g = x a + y b >= 0`.
fn xgcd_big(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn normalize_b_big(b: &BigInt, c: &BigInt, r: &BigInt) -> BigInt {
    let abs_c = c.abs();
    let two_c = &abs_c * 2;
    if &abs_c > r {
        let mut t = b.mod_floor(&two_c);
        if t > abs_c {
            t -= &two_c;
        }
        t
    } else {
        r - (r - b).mod_floor(&two_c)
    }
}

fn is_reduced_big(a: &BigInt, b: &BigInt, r: &BigInt) -> bool {
    let two_a = a.abs() * 2;
    b.is_positive() && b <= r && &(&two_a + b) > r && &(&two_a - b) <= r
}

/// State of the rho walk over primitive ideals.
struct Walk {
    d: BigInt,
    r: BigInt,
    a: BigInt,
    b: BigInt,
}

impl Walk {
    fn new(spec: &FieldSpec, a: &BigInt, b: &BigInt) -> Self {
        Self {
            d: BigInt::from(spec.disc()),
            r: BigInt::from(spec.isqrt_disc()),
            a: a.clone(),
            b: b.clone(),
        }
    }

    /// `I = (beta / c) J` with `beta = (b + sqrt D)/2`, `c = N(beta)/a`, and
    /// `J = [|c|, (-b + sqrt D)/2]`.  Returns `(b, c)` so callers can track
    /// the factor.
    fn step(&mut self) -> (BigInt, BigInt) {
        let c = (&self.b * &self.b - &self.d) / (&self.a * 4);
        let nb = normalize_b_big(&(-&self.b), &c, &self.r);
        let old_b = core::mem::replace(&mut self.b, nb);
        self.a = c.abs();
        (old_b, c)
    }

    fn is_reduced(&self) -> bool {
        is_reduced_big(&self.a, &self.b, &self.r)
    }
}

impl IdealRep {
    /// The maximal order, `[1, (b0 + sqrt D)/2]`.
    pub fn unit(spec: &FieldSpec) -> Self {
        let p = super::forms::Form::principal(spec.disc() as i64);
        Self { a: BigInt::one(), b: BigInt::from(p.b), content: BigInt::one() }
    }

    /// The prime `l = (ell, (b + sqrt D)/2)` above a split `ell`, with
    /// `0 < b < 2 ell`.  Under the embedding `sqrt(m) -> s` with `s` the
    /// smallest positive root of `m` mod `ell`, `l` is the place where the
    /// embedding has positive valuation; the conjugate is `(ell, -b)`.
    pub fn prime_above(spec: &FieldSpec, ell: u64) -> Result<Self, QuadError> {
        require_split(spec, ell)?;
        let s = root_branch(spec.m(), ell)? as i64;
        let ell_i = ell as i64;
        // sqrt(D) maps to 2s or s; b must map (b + sqrt D)/2 into l.
        let target = if spec.disc_parity() == 0 { -2 * s } else { -s };
        let parity = spec.disc_parity() as i64;
        let b = (0..2 * ell_i)
            .find(|&b| b > 0 && (b - target).rem_euclid(ell_i) == 0 && b % 2 == parity)
            .expect("a residue class mod 2l has one representative of each parity");
        debug_assert_eq!((b * b - spec.disc() as i64).rem_euclid(4 * ell_i), 0);
        Ok(Self { a: BigInt::from(ell), b: BigInt::from(b), content: BigInt::one() })
    }

    pub fn conjugate(&self) -> Self {
        Self { a: self.a.clone(), b: -&self.b, content: self.content.clone() }
    }

    /// Absolute norm.
    pub fn norm(&self) -> BigInt {
        &self.content * &self.content * &self.a
    }

    /// Dirichlet composition of the primitive parts; common factors move
    /// into the content.
    pub fn mul(&self, other: &Self, spec: &FieldSpec) -> Self {
        let d = BigInt::from(spec.disc());
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        let s = (b1 + b2) / 2;
        let (g1, x1, y1) = xgcd_big(a1, a2);
        let (g, x2, y2) = xgcd_big(&g1, &s);
        let (e, f, h) = (&x2 * &x1, &x2 * &y1, y2);
        let a3 = a1 * a2 / (&g * &g);
        let num = &e * a1 * b2 + &f * a2 * b1 + &h * ((b1 * b2 + &d) / 2);
        let two_a3: BigInt = &a3 * 2;
        let q: BigInt = num / &g;
        let b3 = q.mod_floor(&two_a3);
        Self { a: a3, b: b3, content: &self.content * &other.content * g }
    }

    pub fn pow(&self, k: u64, spec: &FieldSpec) -> Self {
        let mut acc = Self::unit(spec);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, spec);
            }
            base = base.mul(&base, spec);
            k >>= 1;
        }
        acc
    }

    /// Hermite normal form `[[A, 0], [B, C]]` of the ideal as a lattice in
    /// the basis `1, w` with `w = (D mod 2 + sqrt D)/2`.
    pub fn hnf(&self, spec: &FieldSpec) -> [BigInt; 3] {
        let parity = BigInt::from(spec.disc_parity());
        let a = &self.content * &self.a;
        let shift: BigInt = &self.content * ((&self.b - &parity) / 2);
        let b = shift.mod_floor(&a);
        [a, b, self.content.clone()]
    }

    /// Reduced `(a, b)` in the same ideal class, as machine integers.
    pub(crate) fn reduced_ab(&self, spec: &FieldSpec) -> (i64, i64) {
        let mut w = Walk::new(spec, &self.a, &self.b);
        while !w.is_reduced() {
            w.step();
        }
        (to_i64(&w.a).expect("reduced"), to_i64(&w.b).expect("reduced"))
    }
}

/// HNF of the principal ideal `(x)` in the basis `1, w`.
fn principal_hnf(x: &QuadElement, spec: &FieldSpec) -> [BigInt; 3] {
    // x = u + v w with sqrt m expressed through w.
    let parity = BigInt::from(spec.disc_parity());
    let (u, v) = if spec.disc_parity() == 0 {
        // w = sqrt m, den = 1
        (x.x.clone(), x.y.clone())
    } else {
        // w = (1 + sqrt m)/2: (x + y sqrt m)/den = (x - y)/den + (2y/den) w
        let den = BigInt::from(x.den);
        ((&x.x - &x.y) / &den, &x.y * 2 / &den)
    };
    // w^2 = parity * w + (D - parity)/4
    let n0 = (BigInt::from(spec.disc()) - &parity) / 4;
    let rows = [[u.clone(), v.clone()], [&v * &n0, &u + &v * &parity]];
    hnf2(rows)
}

/// HNF `[[A, 0], [B, C]]` of the lattice spanned by two rows `(p, q)`
/// meaning `p + q w`.
fn hnf2(rows: [[BigInt; 2]; 2]) -> [BigInt; 3] {
    let [[p1, q1], [p2, q2]] = rows;
    // Column on w: gcd of q's.
    let (c, x, y) = xgcd_big(&q1, &q2);
    let b = &x * &p1 + &y * &p2;
    // The other combination kills the w-coordinate.
    let (k1, k2) = if c.is_zero() {
        (BigInt::one(), BigInt::zero())
    } else {
        (&q2 / &c, -(&q1 / &c))
    };
    let a = (&k1 * &p1 + &k2 * &p2).abs();
    let b = if a.is_zero() { b } else { b.mod_floor(&a) };
    [a, b, c.abs()]
}

/// A generator of `ideal^k`, which must be principal.
///
/// The power is formed by composition, then reduced with the rho operator
/// while the factors `(b + sqrt D)/(2c)` are accumulated; once the walk hits
/// the maximal order the accumulated product generates the ideal.  The
/// result is checked by comparing Hermite normal forms.
pub fn principal_generator(
    spec: &FieldSpec,
    ideal: &IdealRep,
    k: u64,
) -> Result<QuadElement, QuadError> {
    let target = ideal.pow(k, spec);
    let mut walk = Walk::new(spec, &target.a, &target.b);
    let mut theta = DiscFraction::one();
    while !walk.is_reduced() {
        let (b, c) = walk.step();
        theta.mul_step(&b, &c, &walk.d);
    }
    let start = (walk.a.clone(), walk.b.clone());
    while !walk.a.is_one() {
        let (b, c) = walk.step();
        theta.mul_step(&b, &c, &walk.d);
        if walk.a == start.0 && walk.b == start.1 {
            return Err(QuadError::NotPrincipal);
        }
    }
    // theta = (x + y sqrt D)/z; rewrite over sqrt m.
    let (x, y, z) = (&theta.x * &target.content, &theta.y * &target.content, theta.z);
    let (x, y) = if spec.disc_parity() == 0 { (x, y * 2) } else { (x, y) };
    let g = x.gcd(&y).gcd(&z);
    let (x, y, z) = (x / &g, y / &g, z / &g);
    if !(z.is_one() || z == BigInt::from(2)) {
        return Err(QuadError::NotPrincipal);
    }
    let pi = QuadElement::normalized(x, y, z);
    if principal_hnf(&pi, spec) != target.hnf(spec) {
        return Err(QuadError::NotPrincipal);
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::super::discriminant;
    use super::*;

    #[test]
    fn prime_above_examples() {
        let spec = discriminant(7).unwrap();
        let l = IdealRep::prime_above(&spec, 3).unwrap();
        assert_eq!((l.a.clone(), l.b.clone()), (BigInt::from(3), BigInt::from(4)));
        let spec = discriminant(10).unwrap();
        let l = IdealRep::prime_above(&spec, 3).unwrap();
        assert_eq!(l.a, BigInt::from(3));
        let sq: BigInt = &l.b * &l.b - 40;
        assert_eq!(sq.mod_floor(&BigInt::from(12)), BigInt::zero());
        assert!(matches!(
            IdealRep::prime_above(&discriminant(5).unwrap(), 3),
            Err(QuadError::Inert { .. })
        ));
    }

    #[test]
    fn powers_of_split_primes_stay_primitive() {
        let spec = discriminant(79).unwrap();
        let l = IdealRep::prime_above(&spec, 3).unwrap();
        let l5 = l.pow(5, &spec);
        assert_eq!(l5.a, BigInt::from(243));
        assert!(l5.content.is_one());
        let n = l.mul(&l.conjugate(), &spec);
        assert_eq!(n.norm(), BigInt::from(9));
        assert_eq!(n.content, BigInt::from(3));
    }

    #[test]
    fn generator_examples() {
        let spec = discriminant(7).unwrap();
        let l = IdealRep::prime_above(&spec, 3).unwrap();
        let pi = principal_generator(&spec, &l, 1).unwrap();
        assert_eq!(pi.norm(7).abs(), BigInt::from(3));
        let one = principal_generator(&spec, &IdealRep::unit(&spec), 1).unwrap();
        assert!(one.is_unit(7));

        let spec = discriminant(10).unwrap();
        let l = IdealRep::prime_above(&spec, 3).unwrap();
        assert_eq!(principal_generator(&spec, &l, 1), Err(QuadError::NotPrincipal));
        let pi = principal_generator(&spec, &l.conjugate(), 2).unwrap();
        assert_eq!(pi.norm(10).abs(), BigInt::from(9));
    }
}
