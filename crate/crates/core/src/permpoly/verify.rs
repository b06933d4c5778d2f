use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::PiecewisePermutation;
use crate::arith::gcd;
use crate::field::{Elem, FieldCtx};
use crate::gmt::{InverseRoute, MuElement};
use crate::poly::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationReport {
    pub is_permutation: bool,
    /// Two inputs sharing an image, with that image.
    pub collision: Option<(Elem, Elem, Elem)>,
    /// An input whose image falls outside the domain.
    pub escape: Option<Elem>,
}

/// Exhaustive check that `f` permutes the whole field.
pub fn verify_permutation(ctx: &FieldCtx, f: impl Fn(Elem) -> Elem) -> PermutationReport {
    verify_permutation_on(ctx.elements(), f)
}

/// Exhaustive check that `f` permutes a finite domain.
pub fn verify_permutation_on(
    domain: impl IntoIterator<Item = Elem>,
    f: impl Fn(Elem) -> Elem,
) -> PermutationReport {
    let domain: Vec<Elem> = domain.into_iter().collect();
    let members: HashSet<Elem> = domain.iter().copied().collect();
    let mut seen: HashMap<Elem, Elem> = HashMap::with_capacity(domain.len());
    let mut collision = None;
    let mut escape = None;
    for &x in &domain {
        let y = f(x);
        if escape.is_none() && !members.contains(&y) {
            escape = Some(x);
        }
        if let Some(&prev) = seen.get(&y) {
            if collision.is_none() {
                collision = Some((prev, x, y));
            }
        } else {
            seen.insert(y, x);
        }
    }
    PermutationReport { is_permutation: collision.is_none() && escape.is_none(), collision, escape }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub is_homogeneous: bool,
    /// First `(lambda, x)` with `f(lambda x) != lambda^r f(x)`.
    pub failure: Option<(Elem, Elem)>,
}

/// Checks `f(lambda x) = lambda^r f(x)` for all `lambda` in `F_q^*` and all `x`.
pub fn verify_homogeneous_fn(ctx: &FieldCtx, r: u64, f: impl Fn(Elem) -> Elem) -> HomogeneityReport {
    let table: Vec<Elem> = ctx.elements().map(&f).collect();
    for lambda in ctx.base_elements().skip(1) {
        let lr = ctx.pow(lambda, r);
        for x in ctx.elements() {
            let lhs = table[ctx.mul(lambda, x).index() as usize];
            let rhs = ctx.mul(lr, table[x.index() as usize]);
            if lhs != rhs {
                return HomogeneityReport { is_homogeneous: false, failure: Some((lambda, x)) };
            }
        }
    }
    HomogeneityReport { is_homogeneous: true, failure: None }
}

pub fn verify_homogeneous(perm: &PiecewisePermutation) -> HomogeneityReport {
    verify_homogeneous_fn(perm.field(), perm.r(), |x| perm.eval(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgwReport {
    pub gcd_ok: bool,
    /// `x^r h(x)^(q-1)` permutes the roots of unity.
    pub mu_permuted: bool,
    /// Roots of unity where `x^r h(x)^(q-1)` differs from `psi_Y(g(psi_W^-1(x)))`.
    pub eq_failures: Vec<Elem>,
    /// `f(x) = x^r h(x^(q-1))` on the whole field.
    pub consistent_with_f: bool,
    pub criterion: bool,
    pub exhaustive: bool,
    pub agree: bool,
}

impl AgwReport {
    pub fn passed(&self) -> bool {
        self.criterion && self.exhaustive && self.agree && self.eq_failures.is_empty() && self.consistent_with_f
    }
}

pub fn verify_agw(perm: &PiecewisePermutation) -> AgwReport {
    verify_agw_with_h(perm, &perm.h_table())
}

/// [`verify_agw`] with `h` supplied as a table indexed by element.
pub fn verify_agw_with_h(perm: &PiecewisePermutation, h: &[Elem]) -> AgwReport {
    let ctx = perm.field();
    let gmt = perm.gmt();
    let r = perm.r();
    let qm1 = ctx.q() as u64 - 1;
    let gcd_ok = gcd(r, qm1) == 1;
    let g = |x: Elem| ctx.mul(ctx.pow(x, r), ctx.pow(h[x.index() as usize], qm1));

    let mu = ctx.mu_elements();
    let mu_permuted = verify_permutation_on(mu.iter().copied(), g).is_permutation;
    let eq_failures = mu
        .iter()
        .copied()
        .filter(|&x| {
            let p = gmt.psi_inverse(MuElement::new(ctx, x).expect("in mu"), InverseRoute::TPoly);
            let image = perm.y().combine(ctx, perm.pg_map().raw_image(&p));
            g(x) != ctx.pow(image, qm1)
        })
        .collect();
    let consistent_with_f = ctx.elements().all(|x| {
        let via_h = if x.is_zero() {
            Elem::ZERO
        } else {
            ctx.mul(ctx.pow(x, r), h[ctx.pow(x, qm1).index() as usize])
        };
        via_h == perm.eval(x)
    });
    let criterion = gcd_ok && mu_permuted;
    let exhaustive = verify_permutation(ctx, |x| perm.eval(x)).is_permutation;
    AgwReport {
        gcd_ok,
        mu_permuted,
        eq_failures,
        consistent_with_f,
        criterion,
        exhaustive,
        agree: criterion == exhaustive,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgwPolyReport {
    pub gcd_ok: bool,
    pub mu_permuted: bool,
    pub criterion: bool,
    pub exhaustive: bool,
    pub agree: bool,
}

/// The multiplicative criterion for `f(x) = x^r h(x^(q-1))` against an
/// exhaustive check of `f`.
pub fn agw_for_polynomial(ctx: &FieldCtx, r: u64, h: &UniPoly) -> AgwPolyReport {
    let qm1 = ctx.q() as u64 - 1;
    let gcd_ok = gcd(r, qm1) == 1;
    let mu_permuted = verify_permutation_on(ctx.mu_elements(), |x| {
        ctx.mul(ctx.pow(x, r), ctx.pow(h.eval(ctx, x), qm1))
    })
    .is_permutation;
    let criterion = gcd_ok && mu_permuted;
    let exhaustive = verify_permutation(ctx, |x| {
        ctx.mul(ctx.pow(x, r), h.eval(ctx, ctx.pow(x, qm1)))
    })
    .is_permutation;
    AgwPolyReport { gcd_ok, mu_permuted, criterion, exhaustive, agree: criterion == exhaustive }
}
