//! Parsing helpers for the `lambda` command line family.

use greenberg_core::iwasawa::{FiniteModule, IntPoly, LambdaModule};
use num_bigint::BigInt;

use crate::ScanError;

fn invalid(s: impl Into<String>) -> ScanError {
    ScanError::InvalidConfig(s.into())
}

/// `"1,2"` into `[1, 2]`; empty input gives an empty list.
pub fn parse_exps(s: &str) -> Result<Vec<u32>, ScanError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| invalid(format!("bad exponent {x:?}"))))
        .collect()
}

/// Row-major matrix `"0,3;0,0"`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<BigInt>>, ScanError> {
    s.split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse().map_err(|_| invalid(format!("bad matrix entry {x:?}"))))
                .collect()
        })
        .collect()
}

/// Builds a module from polynomial strings and an optional finite part
/// given by its cyclic exponents and `T`-matrix (zero matrix if omitted).
pub fn build_module(
    ell: u64,
    parts: &[String],
    finite_exps: Option<&str>,
    finite_t: Option<&str>,
) -> Result<LambdaModule, ScanError> {
    let polys = parts
        .iter()
        .map(|p| p.parse::<IntPoly>().map_err(|e| invalid(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let finite = match finite_exps {
        None => {
            if finite_t.is_some() {
                return Err(invalid("--finite-t needs --finite-exps"));
            }
            None
        }
        Some(e) => {
            let exps = parse_exps(e)?;
            let r = exps.len();
            let t = match finite_t {
                Some(t) => parse_matrix(t)?,
                None => vec![vec![BigInt::default(); r]; r],
            };
            Some(FiniteModule::new(ell, exps, t)?)
        }
    };
    Ok(LambdaModule::new(ell, polys, finite)?)
}
