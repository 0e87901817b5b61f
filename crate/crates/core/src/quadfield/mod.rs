//! Real quadratic fields `Q(sqrt(m))`.
//!
//! Class groups are computed with indefinite binary quadratic forms of the
//! field discriminant `D`.  Form classes under proper equivalence give the
//! narrow class group; the ordinary (wide) class number follows from the
//! norm of the fundamental unit.  For odd `l` the `l`-Sylow subgroups of the
//! two groups coincide, so every `l`-part answer is read off the form group.

mod classgroup;
mod element;
mod forms;
mod ideal;
mod unit;

pub use classgroup::{class_group, ClassGroup, ClassGroupData, EllClassData};
pub use element::QuadElement;
pub use forms::Form;
pub use ideal::{principal_generator, IdealRep};
pub use unit::{fundamental_unit, FundamentalUnit};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith;

/// Largest discriminant accepted by the class group machinery.
pub const DISCRIMINANT_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not a squarefree integer greater than 1")]
    NotSquarefree(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("l = {ell} ramifies in Q(sqrt({m}))")]
    Ramified { m: u64, ell: u64 },
    #[error("l = {ell} is inert in Q(sqrt({m}))")]
    Inert { m: u64, ell: u64 },
    #[error("discriminant {0} exceeds the supported bound {DISCRIMINANT_BOUND}")]
    BoundExceeded(u64),
    #[error("ideal power is not principal")]
    NotPrincipal,
}

/// A real quadratic field given by its squarefree radicand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    m: u64,
    disc: u64,
}

impl FieldSpec {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Fundamental discriminant: `m` if `m = 1 mod 4`, else `4m`.
    pub fn disc(&self) -> u64 {
        self.disc
    }

    /// `D mod 2`, the parity shared by the middle coefficients of all forms.
    pub fn disc_parity(&self) -> u64 {
        self.disc & 1
    }

    pub fn isqrt_disc(&self) -> u64 {
        arith::isqrt(self.disc)
    }
}

pub fn discriminant(m: u64) -> Result<FieldSpec, QuadError> {
    if m < 2 || !arith::is_squarefree(m) {
        return Err(QuadError::NotSquarefree(m));
    }
    let disc = if m % 4 == 1 { m } else { 4 * m };
    Ok(FieldSpec { m, disc })
}

fn check_odd_prime(ell: u64) -> Result<(), QuadError> {
    if ell == 2 || !arith::is_prime_u64(ell) {
        return Err(QuadError::NotOddPrime(ell));
    }
    Ok(())
}

/// Whether the odd prime `ell` splits in `Q(sqrt(m))`.  Fails when `ell`
/// divides the discriminant.
pub fn splits(m: u64, ell: u64) -> Result<bool, QuadError> {
    check_odd_prime(ell)?;
    let spec = discriminant(m)?;
    match arith::legendre((spec.disc % ell) as i64, ell) {
        0 => Err(QuadError::Ramified { m, ell }),
        s => Ok(s == 1),
    }
}

pub(crate) fn require_split(spec: &FieldSpec, ell: u64) -> Result<(), QuadError> {
    if splits(spec.m, ell)? {
        Ok(())
    } else {
        Err(QuadError::Inert { m: spec.m, ell })
    }
}

/// Smallest positive `r` with `r^2 = m (mod ell)`: the branch that fixes
/// the embedding `sqrt(m) -> s` used for the place `l` above `ell`.
pub fn root_branch(m: u64, ell: u64) -> Result<u64, QuadError> {
    let spec = discriminant(m)?;
    require_split(&spec, ell)?;
    let target = m % ell;
    Ok((1..ell).find(|r| r * r % ell == target).expect("ell splits"))
}

pub(crate) fn to_i64(x: &num_bigint::BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(5).unwrap().disc(), 5);
        assert_eq!(discriminant(7).unwrap().disc(), 28);
        assert_eq!(discriminant(10).unwrap().disc(), 40);
        assert_eq!(discriminant(12), Err(QuadError::NotSquarefree(12)));
        assert_eq!(discriminant(1), Err(QuadError::NotSquarefree(1)));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splits(7, 3), Ok(true));
        assert_eq!(splits(5, 3), Ok(false));
        assert_eq!(splits(10, 3), Ok(true));
        assert_eq!(splits(6, 3), Err(QuadError::Ramified { m: 6, ell: 3 }));
        assert_eq!(splits(7, 2), Err(QuadError::NotOddPrime(2)));
        // For l = 3, splitting is exactly m = 1 mod 3.
        for m in (2..500u64).filter(|&m| arith::is_squarefree(m) && m % 3 != 0) {
            assert_eq!(splits(m, 3).unwrap(), m % 3 == 1, "m = {m}");
        }
    }

    #[test]
    fn branch_choice() {
        assert_eq!(root_branch(7, 3), Ok(1));
        assert_eq!(root_branch(11, 7), Ok(2));
        assert!(root_branch(5, 3).is_err());
    }
}
