//! Triviality of the logarithmic `l`-class group of a split real quadratic
//! field.
//!
//! Let `K = Q(sqrt m)` with `l` odd and split, `l = l * conj(l)`.  Each
//! completion at a place above `l` is `Q_l`, so the principal local units
//! form a free `Z_l`-module of rank one generated by `1 + l`, and the Iwasawa
//! logarithm maps them onto `l Z_l`.
//!
//! The group of `l`-units is generated by `-1`, the fundamental unit `eps`,
//! `l` itself and a generator `pi` of `l^k` where `k` is the order of the
//! class of `l`.  The logarithm kills `-1` and `l`, and for every `l`-unit
//! `x` we have `Log(x_l) + Log(x_conj(l)) = Log(N x) = 0`.  Hence the
//! semi-local image of the `l`-adified `l`-units, after dividing out the
//! norm-one torsion, is the anti-diagonal spanned by `Log eps_l` and
//! `Log pi_l`, and it fills `l Z_l` exactly when
//!
//! ```text
//!     min(v_l(Log eps_l), v_l(Log pi_l)) = 1.
//! ```
//!
//! The logarithmic class group surjects onto the wild quotient `Cl'_K` with
//! kernel the classes of degree-zero divisors supported above `l`, which is
//! `Z_l (l - conj l)` modulo the logarithmic divisors of `l`-units.  So the
//! logarithmic class group is trivial iff `Cl'_K(l) = 1` and the minimum
//! above equals 1.  That is what [`gras_criterion`] evaluates.
//!
//! Two further quantities are reported:
//!
//! * the norm index of the `l`-units in the first layer `K_1` of the
//!   cyclotomic `Z_l`-tower, computed from the local norm group
//!   `<l> x mu x (1 + l^2 Z_l)` of the first layer over `Q_l`; the
//!   ambiguous class formula turns it into a level-one verdict that must
//!   agree with the logarithmic one;
//! * the order of the Bertrandias-Payan torsion module, the stabilized genus
//!   number `|Cl_K(l)| * l^{v(Log eps_l) - 1}`.
//!
//! Whether `Cl^{[l]}_K = 1` forces the Bertrandias-Payan module to vanish is
//! a statement about the whole tower; both quantities are reported and no
//! implication between them is asserted.

use alloc::format;
use alloc::string::String;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::padic::{
    hensel_sqrt, iwasawa_log, log_valuation, LogValuation, PadicContext, PadicError, PadicInt,
};
use crate::quadfield::{
    discriminant, fundamental_unit, principal_generator, require_split, root_branch,
    ClassGroup, EllClassData, FieldSpec, FundamentalUnit, IdealRep, QuadElement, QuadError,
};

pub const DEFAULT_PRECISION: u32 = 16;
pub const PRECISION_CAP: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrasError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("m = {m}: logarithm valuations unresolved at precision cap {cap}")]
    PrecisionCapExceeded { m: u64, ell: u64, cap: u32 },
}

/// The two embeddings `K -> Q_l`, `sqrt(m) -> s` and `sqrt(m) -> -s`.
#[derive(Debug, Clone)]
pub struct EmbeddingPair {
    m: u64,
    branch: u64,
    s: PadicInt,
}

/// Embeddings at precision `precision`, with `s` congruent to the smallest
/// positive square root of `m` mod `ell`.
pub fn embeddings(m: u64, ell: u64, precision: u32) -> Result<EmbeddingPair, GrasError> {
    EmbeddingPair::with_branch(m, ell, precision, false)
}

impl EmbeddingPair {
    /// `flip` selects the other root, swapping the roles of the two places.
    pub fn with_branch(m: u64, ell: u64, precision: u32, flip: bool) -> Result<Self, GrasError> {
        let spec = discriminant(m)?;
        require_split(&spec, ell)?;
        let r = root_branch(m, ell)?;
        let branch = if flip { ell - r } else { r };
        let ctx = PadicContext::new(BigUint::from(ell), 4)?.with_precision(precision);
        let s = hensel_sqrt(&ctx.from_u64(m), &BigUint::from(branch))?;
        Ok(Self { m, branch, s })
    }

    pub fn root(&self) -> &PadicInt {
        &self.s
    }

    pub fn precision(&self) -> u32 {
        self.s.precision()
    }

    fn ell(&self) -> u64 {
        self.s.context().ell().to_u64().expect("small prime")
    }

    /// Image of `x` at the place `l` (or its conjugate), modulo `l^N`.
    pub fn image(&self, x: &QuadElement, conjugate: bool) -> PadicInt {
        let ctx = self.s.context();
        let a = PadicInt::from_bigint(&x.x, ctx);
        let b = PadicInt::from_bigint(&x.y, ctx);
        let bs = &b * &self.s;
        let num = if conjugate { &a - &bs } else { &a + &bs };
        let den = ctx.from_u64(x.den as u64).inverse().expect("den is 1 or 2, l is odd");
        &num * &den
    }

    /// Image of a nonzero `x` split as `l^e * u` with `u` a unit known to
    /// the full precision `N`.
    pub fn split_image(
        &self,
        x: &QuadElement,
        conjugate: bool,
    ) -> Result<(u32, PadicInt), GrasError> {
        let ell = self.ell();
        let norm = x.norm(self.m);
        let total = arith::valuation(&norm, &BigUint::from(ell)).ok_or(PadicError::NonUnit)?;
        let n = self.precision();
        let lifted = if total == 0 {
            self.clone()
        } else {
            let ctx = self.s.context().with_precision(n + total);
            let s = hensel_sqrt(&ctx.from_u64(self.m), &BigUint::from(self.branch))?;
            Self { m: self.m, branch: self.branch, s }
        };
        let img = lifted.image(x, conjugate);
        let v = img.valuation().ok_or(PadicError::NonUnit)?;
        let unit = img.div_ell_power(v)?.truncate(n);
        Ok((v, unit))
    }

    /// `Log` of `x` at one place.
    pub fn log_at(&self, x: &QuadElement, conjugate: bool) -> Result<PadicInt, GrasError> {
        let (e, u) = self.split_image(x, conjugate)?;
        Ok(iwasawa_log(&u, e as i64)?)
    }
}

/// Everything about the field that does not depend on the precision.
#[derive(Debug, Clone)]
pub struct FieldData {
    pub spec: FieldSpec,
    pub ell: u64,
    pub class_group: ClassGroup,
    pub ell_data: EllClassData,
    pub unit: FundamentalUnit,
    /// Prime above `ell` whose `l`-adic embedding is the chosen branch.
    pub prime: IdealRep,
    /// Order of `[prime]` in `Cl_K`.
    pub prime_order: u64,
    /// Generator of `prime^prime_order`.
    pub pi: QuadElement,
    pub flipped: bool,
}

impl FieldData {
    pub fn new(m: u64, ell: u64) -> Result<Self, GrasError> {
        Self::with_branch(m, ell, false)
    }

    pub fn with_branch(m: u64, ell: u64, flip: bool) -> Result<Self, GrasError> {
        let spec = discriminant(m)?;
        require_split(&spec, ell)?;
        let class_group = ClassGroup::new(&spec)?;
        let ell_data = class_group.ell_class_data(ell)?;
        let unit = fundamental_unit(&spec);
        let l = IdealRep::prime_above(&spec, ell)?;
        let prime = if flip { l.conjugate() } else { l };
        let prime_order = class_group.class_order(&prime);
        let pi = principal_generator(&spec, &prime, prime_order)?;
        Ok(Self {
            spec,
            ell,
            class_group,
            ell_data,
            unit,
            prime,
            prime_order,
            pi,
            flipped: flip,
        })
    }

    pub fn embeddings(&self, precision: u32) -> Result<EmbeddingPair, GrasError> {
        EmbeddingPair::with_branch(self.spec.m(), self.ell, precision, self.flipped)
    }
}

/// Logarithms of `eps` and `pi` at both places and their valuations.
#[derive(Debug, Clone)]
pub struct LogData {
    pub v_eps: u32,
    pub v_pi: u32,
    pub log_eps: (PadicInt, PadicInt),
    pub log_pi: (PadicInt, PadicInt),
    pub precision_used: u32,
    pub escalations: u32,
}

/// Valuation of `Log x_l`, or `Escalate` if it vanishes at this precision.
pub fn unit_log_valuation(
    emb: &EmbeddingPair,
    x: &QuadElement,
) -> Result<LogValuation, GrasError> {
    Ok(log_valuation(&emb.log_at(x, false)?))
}

/// Computes both logarithm valuations, doubling the precision from `start`
/// until both resolve.
pub fn log_data_for(field: &FieldData, start: u32, cap: u32) -> Result<LogData, GrasError> {
    let mut precision = start;
    let mut escalations = 0;
    loop {
        let emb = field.embeddings(precision)?;
        let le = emb.log_at(&field.unit.unit, false)?;
        let lp = emb.log_at(&field.pi, false)?;
        if let (LogValuation::Resolved(v_eps), LogValuation::Resolved(v_pi)) =
            (log_valuation(&le), log_valuation(&lp))
        {
            let le_bar = emb.log_at(&field.unit.unit, true)?;
            let lp_bar = emb.log_at(&field.pi, true)?;
            return Ok(LogData {
                v_eps,
                v_pi,
                log_eps: (le, le_bar),
                log_pi: (lp, lp_bar),
                precision_used: precision,
                escalations,
            });
        }
        escalations += 1;
        precision *= 2;
        if precision > cap {
            return Err(GrasError::PrecisionCapExceeded { m: field.spec.m(), ell: field.ell, cap });
        }
    }
}

pub fn log_data(m: u64, ell: u64) -> Result<LogData, GrasError> {
    log_data_for(&FieldData::new(m, ell)?, DEFAULT_PRECISION, PRECISION_CAP)
}

/// Result of the first-layer norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level1 {
    /// `(E' : E' cap N_{K_1/K}(K_1^x)) = l^t`, `t` in `{0, 1}`.
    pub t: u32,
    /// `|Cl'_{K_1}^Gamma| = l^{predicted_ambiguous_exponent}`.
    pub predicted_ambiguous_exponent: u32,
    /// No ambiguous `l`-classes in `Cl'_{K_1}`.
    pub trivial: bool,
}

/// Whether `l^e u` lies in the norm group `<l> x mu x (1 + l^2 Z_l)` of the
/// first cyclotomic layer over `Q_l`: `u^{l-1} = 1 (mod l^2)`.
fn is_first_layer_norm(u: &PadicInt, ell: u64) -> bool {
    let u2 = u.truncate(2);
    u2.pow_u64(ell - 1) == u2.context().one()
}

pub fn norm_index_level1_for(field: &FieldData) -> Result<Level1, GrasError> {
    let emb = field.embeddings(4)?;
    let ell = field.ell;
    let (_, ue) = emb.split_image(&field.unit.unit, false)?;
    let (_, up) = emb.split_image(&field.pi, false)?;
    let all_norms = is_first_layer_norm(&ue, ell) && is_first_layer_norm(&up, ell);
    // The index divides l^{n(d-1)} = l.
    let t = if all_norms { 0 } else { 1 };
    let cl_prime_exponent = cl_prime_exponent(&field.ell_data, ell);
    let predicted = cl_prime_exponent + 1 - t;
    Ok(Level1 { t, predicted_ambiguous_exponent: predicted, trivial: predicted == 0 })
}

pub fn norm_index_level1(m: u64, ell: u64) -> Result<Level1, GrasError> {
    norm_index_level1_for(&FieldData::new(m, ell)?)
}

fn cl_prime_exponent(data: &EllClassData, ell: u64) -> u32 {
    arith::valuation_u64(data.h_ell / data.ord_l, ell)
}

/// Order of the Bertrandias-Payan torsion module as powers of `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BpOrder {
    pub h_ell_exponent: u32,
    /// `v(Log eps_l) - 1`.
    pub unit_exponent: u32,
    /// `|T^bp| = l^total_exponent`; zero means `K` is `l`-rational.
    pub total_exponent: u32,
}

impl BpOrder {
    pub fn from_parts(h_ell: u64, ell: u64, v_eps: u32) -> Self {
        let h_ell_exponent = arith::valuation_u64(h_ell, ell);
        let unit_exponent = v_eps - 1;
        Self { h_ell_exponent, unit_exponent, total_exponent: h_ell_exponent + unit_exponent }
    }

    pub fn is_ell_rational(&self) -> bool {
        self.total_exponent == 0
    }
}

pub fn bp_torsion_order(m: u64, ell: u64) -> Result<BpOrder, GrasError> {
    let field = FieldData::new(m, ell)?;
    let logs = log_data_for(&field, DEFAULT_PRECISION, PRECISION_CAP)?;
    Ok(BpOrder::from_parts(field.ell_data.h_ell, ell, logs.v_eps))
}

/// Per-field verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrasReport {
    pub m: u64,
    pub ell: u64,
    pub precision_used: u32,
    pub escalations: u32,
    pub h: u64,
    pub unit_norm: i8,
    pub h_ell: u64,
    pub ord_l: u64,
    pub cl_prime_trivial: bool,
    pub wild_trivial: bool,
    pub v_eps: u32,
    pub v_pi: u32,
    pub min_v: u32,
    pub log_class_trivial: bool,
    pub bp_order_exponent: u32,
    pub level1_norm_index_exponent: u32,
    pub level1_trivial: bool,
}

impl GrasReport {
    /// Checks the report's internal consistency.
    pub fn validate(&self) -> Result<(), String> {
        if self.min_v != self.v_eps.min(self.v_pi) {
            return Err(format!("m = {}: min_v != min(v_eps, v_pi)", self.m));
        }
        if self.min_v < 1 {
            return Err(format!("m = {}: logarithm valuation below 1", self.m));
        }
        if self.log_class_trivial != (self.cl_prime_trivial && self.min_v == 1) {
            return Err(format!("m = {}: verdict disagrees with its inputs", self.m));
        }
        if self.cl_prime_trivial != (self.h_ell == self.ord_l) {
            return Err(format!("m = {}: Cl' flag disagrees with h_ell/ord_l", self.m));
        }
        if self.wild_trivial != (self.ord_l == 1) {
            return Err(format!("m = {}: wild flag disagrees with ord_l", self.m));
        }
        if self.level1_trivial != self.log_class_trivial {
            return Err(format!("m = {}: level-one and logarithmic verdicts differ", self.m));
        }
        if !self.log_class_trivial && self.bp_order_exponent == 0 {
            return Err(format!("m = {}: nontrivial classes but trivial T^bp", self.m));
        }
        Ok(())
    }
}

/// Tunables for [`gras_criterion_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriterionOptions {
    pub precision_start: u32,
    pub precision_cap: u32,
    /// Use the other square root of `m`, relabeling the two places.
    pub flip_branch: bool,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        Self {
            precision_start: DEFAULT_PRECISION,
            precision_cap: PRECISION_CAP,
            flip_branch: false,
        }
    }
}

pub fn gras_criterion(m: u64, ell: u64) -> Result<GrasReport, GrasError> {
    gras_criterion_with(m, ell, CriterionOptions::default())
}

pub fn gras_criterion_with(
    m: u64,
    ell: u64,
    opts: CriterionOptions,
) -> Result<GrasReport, GrasError> {
    let field = FieldData::with_branch(m, ell, opts.flip_branch)?;
    report_for(&field, opts)
}

pub fn report_for(field: &FieldData, opts: CriterionOptions) -> Result<GrasReport, GrasError> {
    let logs = log_data_for(field, opts.precision_start, opts.precision_cap)?;
    let level1 = norm_index_level1_for(field)?;
    let data = field.ell_data;
    let min_v = logs.v_eps.min(logs.v_pi);
    let bp = BpOrder::from_parts(data.h_ell, field.ell, logs.v_eps);
    Ok(GrasReport {
        m: field.spec.m(),
        ell: field.ell,
        precision_used: logs.precision_used,
        escalations: logs.escalations,
        h: field.class_group.data().h,
        unit_norm: field.unit.norm,
        h_ell: data.h_ell,
        ord_l: data.ord_l,
        cl_prime_trivial: data.cl_prime_trivial,
        wild_trivial: data.wild_trivial,
        v_eps: logs.v_eps,
        v_pi: logs.v_pi,
        min_v,
        log_class_trivial: data.cl_prime_trivial && min_v == 1,
        bp_order_exponent: bp.total_exponent,
        level1_norm_index_exponent: level1.t,
        level1_trivial: level1.trivial,
    })
}

/// `true` if `Log x_l + Log x_conj(l) = 0` at the pair's precision.
pub fn log_sum_vanishes(pair: &(PadicInt, PadicInt)) -> bool {
    (&pair.0 + &pair.1).residue().is_zero()
}
