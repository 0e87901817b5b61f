//! Logarithmic class groups of split real quadratic fields.
//!
//! For an odd prime `l` that splits in `K = Q(sqrt(m))`, the `l`-group of
//! logarithmic classes of `K` is trivial exactly when the wild quotient
//! `Cl'_K` of the `l`-class group vanishes and the `l`-units of `K` fill the
//! principal local units at one of the places above `l`.  This crate decides
//! that condition with exact arithmetic:
//!
//! * [`padic`] provides `l`-adic integers with explicit precision, Hensel
//!   square roots, Teichmuller lifts and the Iwasawa logarithm.
//! * [`quadfield`] computes discriminants, fundamental units, form class
//!   groups and generators of principal powers of the primes above `l`.
//! * [`greenberg`] combines both into a per-field verdict ([`GrasReport`]).
//! * [`iwasawa`] is a calculator for torsion modules over `Z_l[[T]]`:
//!   Herbrand quotients, quotient orders along the cyclotomic tower,
//!   `(mu, lambda, nu)` fits, capitulation kernels and idempotent splitting.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod greenberg;
pub mod iwasawa;
pub mod padic;
pub mod quadfield;

pub use greenberg::{gras_criterion, GrasError, GrasReport};
pub use padic::{PadicContext, PadicError, PadicInt};
pub use quadfield::{ClassGroupData, FieldSpec, QuadElement, QuadError};
pub use iwasawa::{FiniteModule, IntPoly, IwasawaError, LambdaModule};
