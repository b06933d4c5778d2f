use serde::Serialize;

use super::PiecewisePermutation;
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::poly::{interpolate_subfield, UniPoly};

/// What to interpolate: the whole map or one branch extended to the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Full,
    Branch(usize),
}

/// The polynomial of degree below the field order agreeing with `f` everywhere.
pub fn interpolate_function(ctx: &FieldCtx, f: impl Fn(Elem) -> Elem) -> UniPoly {
    interpolate_subfield(ctx, ctx.order() as u64, f)
}

/// Branches with a closed form are interpolated from that form on the whole
/// field; table-only branches agree with the map on their class and vanish
/// elsewhere.
pub fn interpolate_univariate(perm: &PiecewisePermutation, domain: Domain) -> Result<UniPoly> {
    let ctx = perm.field();
    match domain {
        Domain::Full => Ok(interpolate_function(ctx, |x| perm.eval(x))),
        Domain::Branch(b) => {
            if b >= perm.branches().len() {
                return Err(Error::IndexOutOfRange { index: b, len: perm.branches().len() });
            }
            Ok(interpolate_function(ctx, |x| perm.eval_branch_extended(b, x)))
        }
    }
}

/// `P = x^r h(x^s)` with `s` as large as possible, and index `ell = (N-1)/s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexDecomposition {
    pub r: u64,
    pub s: u64,
    pub ell: u64,
    pub h: UniPoly,
}

pub fn index_decompose(ctx: &FieldCtx, p: &UniPoly) -> Result<IndexDecomposition> {
    if p.is_zero() {
        return Err(Error::ZeroPoly);
    }
    if !p.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let nm1 = ctx.order() as u64 - 1;
    let exps: Vec<u64> = p.terms().map(|(e, _)| e as u64).collect();
    let r = exps[0];
    let s = exps.iter().fold(nm1, |g, &e| gcd(g, e - r));
    let h = UniPoly::from_terms(ctx, p.terms().map(|(e, c)| (((e as u64 - r) / s) as usize, c)));
    Ok(IndexDecomposition { r, s, ell: nm1 / s, h })
}
