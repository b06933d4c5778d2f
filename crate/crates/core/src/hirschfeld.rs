//! Subprimitive roots, the cyclic-projectivity orbit map they induce on
//! projective space, and the count of such maps against the count of
//! generalized Möbius transformations.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::arith::euler_phi;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{determinant, moore_matrix};
use crate::poly::UniPoly;
use crate::projective::{canonical, enumerate_pg, pg_size, ProjPoint};

/// A monic irreducible polynomial over `F_q` whose roots are subprimitive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubprimitivePoly {
    /// Ascending coefficients in `F_q`, leading one included.
    pub coeffs: Vec<Elem>,
    pub roots: Vec<Elem>,
}

/// Minimal polynomial of `x` over `F_q`, ascending and monic.
pub fn minimal_polynomial(ctx: &FieldCtx, x: Elem) -> Vec<Elem> {
    let mut conj = vec![x];
    loop {
        let next = ctx.frob(*conj.last().unwrap(), 1);
        if next == x {
            break;
        }
        conj.push(next);
    }
    let p = conj.iter().fold(UniPoly::monomial(Elem::ONE, 0), |acc, &c| {
        acc.mul(ctx, &UniPoly::from_coeffs(vec![ctx.neg(c), Elem::ONE]))
    });
    p.coeffs().to_vec()
}

/// All subprimitive polynomials of degree `n` over `F_q`, found by scanning
/// the minimal polynomials of subprimitive field elements.
pub fn list_subprimitive(ctx: &FieldCtx) -> Vec<SubprimitivePoly> {
    let ell = ctx.mu_order();
    let mut polys: BTreeMap<Vec<Elem>, Vec<Elem>> = BTreeMap::new();
    for x in ctx.nonzero_elements() {
        if ctx.subprimitive_order(x).expect("nonzero") == ell {
            polys.entry(minimal_polynomial(ctx, x)).or_default().push(x);
        }
    }
    polys.into_iter().map(|(coeffs, roots)| SubprimitivePoly { coeffs, roots }).collect()
}

/// A subprimitive root with its companion matrix and the orbit of
/// `(1, 0, ..., 0)` under it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubprimitiveRoot {
    pub alpha: Elem,
    pub minpoly: Vec<Elem>,
    /// Row-vector convention: `e_0 T = e_1`.
    pub companion: Vec<Vec<Elem>>,
    /// Row `i` is `(1, 0, ..., 0) T^i` for `i < (q^n-1)/(q-1)`.
    pub orbit: Vec<Vec<Elem>>,
}

impl SubprimitiveRoot {
    pub fn new(ctx: &FieldCtx, alpha: Elem) -> Result<SubprimitiveRoot> {
        let ell = ctx.mu_order();
        if ctx.subprimitive_order(alpha)? != ell {
            return Err(Error::BadParams(format!("{} is not subprimitive", ctx.render(alpha))));
        }
        let minpoly = minimal_polynomial(ctx, alpha);
        let n = ctx.n();
        let mut companion = vec![vec![Elem::ZERO; n]; n];
        for (i, row) in companion.iter_mut().enumerate().take(n - 1) {
            row[i + 1] = Elem::ONE;
        }
        for j in 0..n {
            companion[n - 1][j] = ctx.neg(minpoly[j]);
        }
        let mut row = vec![Elem::ZERO; n];
        row[0] = Elem::ONE;
        let mut orbit = Vec::with_capacity(ell as usize);
        for _ in 0..ell {
            let next = (0..n)
                .map(|j| {
                    (0..n).fold(Elem::ZERO, |acc, k| ctx.add(acc, ctx.mul(row[k], companion[k][j])))
                })
                .collect();
            orbit.push(std::mem::replace(&mut row, next));
        }
        Ok(SubprimitiveRoot { alpha, minpoly, companion, orbit })
    }
}

/// The map `canonical(y^(i)) -> alpha^i` with its checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HirschfeldMap {
    pub alpha: Elem,
    pub table: Vec<(ProjPoint, Elem)>,
    /// `sum_k y_k^(i) alpha^k = alpha^i` for every row.
    pub power_identity: bool,
    /// Orbit rows are pairwise inequivalent and cover projective space.
    pub bijective: bool,
    /// The image `{alpha^i}` equals the roots of unity.
    pub image_is_mu: bool,
}

impl HirschfeldMap {
    pub fn eval(&self, p: &ProjPoint) -> Option<Elem> {
        self.table.iter().find(|(k, _)| k == p).map(|&(_, v)| v)
    }
}

pub fn hirschfeld_map(ctx: &FieldCtx, s: &SubprimitiveRoot) -> HirschfeldMap {
    let mut power = Elem::ONE;
    let mut power_identity = true;
    let mut table = Vec::with_capacity(s.orbit.len());
    for row in &s.orbit {
        let lhs = row
            .iter()
            .enumerate()
            .fold(Elem::ZERO, |acc, (k, &y)| ctx.add(acc, ctx.mul(y, ctx.pow(s.alpha, k as u64))));
        power_identity &= lhs == power;
        let p = canonical(ctx, row).expect("orbit rows are nonzero");
        table.push((p, power));
        power = ctx.mul(power, s.alpha);
    }
    let points: HashSet<&ProjPoint> = table.iter().map(|(p, _)| p).collect();
    let bijective = points.len() == pg_size(ctx) && table.len() == pg_size(ctx);
    let image: HashSet<Elem> = table.iter().map(|&(_, v)| v).collect();
    let mu: HashSet<Elem> = ctx.mu_elements().into_iter().collect();
    HirschfeldMap { alpha: s.alpha, table, power_identity, bijective, image_is_mu: image == mu }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub n: usize,
    pub q: u64,
    /// Number of distinct generalized Möbius transformations.
    pub m: u128,
    /// Number of subprimitive roots, i.e. of cyclic-projectivity maps.
    pub h: u128,
    /// `q^(n-1) prod_{i=1}^{n-2} (q^n - q^i)`.
    pub bound: u128,
    /// `M / H > bound`.
    pub ratio_exceeds_bound: bool,
}

/// Closed-form counts for degree `n` over `F_q`.
pub fn counts(n: usize, q: u64) -> Counts {
    let qn = (q as u128).pow(n as u32);
    let qi = |i: usize| (q as u128).pow(i as u32);
    let m = (0..n).map(|i| qn - qi(i)).product::<u128>() / (q as u128 - 1);
    let ell = ((qn - 1) / (q as u128 - 1)) as u64;
    let h = (q as u128 - 1) * euler_phi(ell) as u128;
    let bound = qi(n - 1) * (1..n.saturating_sub(1)).map(|i| qn - qi(i)).product::<u128>();
    Counts { n, q, m, h, bound, ratio_exceeds_bound: m > h * bound }
}

/// Counts distinct `psi_W` tables over every ordered basis of the field.
pub fn enumerate_distinct_psi_tables(ctx: &FieldCtx, limit: u64) -> Result<u64> {
    let n = ctx.n();
    let total = (ctx.order() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > limit {
        return Err(Error::FieldTooLarge { order: total, limit });
    }
    let points = enumerate_pg(ctx);
    let qm1 = ctx.q() as u64 - 1;
    let mut tables: HashSet<Vec<Elem>> = HashSet::new();
    let mut tuple = vec![0u32; n];
    loop {
        let w: Vec<Elem> = tuple.iter().map(|&i| Elem(i)).collect();
        let (m, _) = moore_matrix(ctx, &w)?;
        if !determinant(ctx, &m).is_zero() {
            let t = points
                .iter()
                .map(|p| {
                    let s = p.coords().iter().zip(&w).fold(Elem::ZERO, |acc, (&c, &b)| ctx.add(acc, ctx.mul(c, b)));
                    ctx.pow(s, qm1)
                })
                .collect();
            tables.insert(t);
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(tables.len() as u64);
            }
            tuple[k] += 1;
            if tuple[k] < ctx.order() {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

/// Number of subprimitive roots, by scanning the field.
pub fn enumerate_subprimitive_roots(ctx: &FieldCtx) -> u64 {
    let ell = ctx.mu_order();
    ctx.nonzero_elements().filter(|&x| ctx.subprimitive_order(x).expect("nonzero") == ell).count() as u64
}

/// Distinct roots give maps that already differ at `(0 : 1 : 0 : ... : 0)`.
pub fn distinct_at_second_point(ctx: &FieldCtx, maps: &[HirschfeldMap]) -> bool {
    let mut e1 = vec![Elem::ZERO; ctx.n()];
    e1[1] = Elem::ONE;
    let p = canonical(ctx, &e1).expect("nonzero");
    let images: HashSet<Elem> = maps.iter().map(|m| m.eval(&p).expect("covers PG")).collect();
    images.len() == maps.len() && maps.iter().all(|m| m.eval(&p) == Some(m.alpha))
}

/// For subprimitive `gamma` and `1 <= i < (q^n-1)/(q-1)`, the scaled table
/// `gamma^i H_alpha` never equals any `H_beta`.
pub fn not_closed_under_scaling(ctx: &FieldCtx, maps: &[HirschfeldMap]) -> bool {
    let ell = ctx.mu_order();
    for gamma in maps.iter().map(|m| m.alpha) {
        let mut c = gamma;
        for _ in 1..ell {
            for a in maps {
                for b in maps {
                    if a.table.iter().all(|(p, v)| b.eval(p) == Some(ctx.mul(c, *v))) {
                        return false;
                    }
                }
            }
            c = ctx.mul(c, gamma);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_has_four_roots_in_two_polynomials() {
        let ctx = FieldCtx::auto(3, 1, 2).unwrap();
        let polys = list_subprimitive(&ctx);
        assert_eq!(polys.len(), 2);
        let roots: Vec<Elem> = polys.iter().flat_map(|p| p.roots.clone()).collect();
        assert_eq!(roots.len(), 4);
        for &a in &roots {
            assert_eq!(ctx.order_of(a).unwrap(), 8);
            let s = SubprimitiveRoot::new(&ctx, a).unwrap();
            let map = hirschfeld_map(&ctx, &s);
            assert!(map.power_identity && map.bijective);
            assert!(!map.image_is_mu);
            assert_eq!(map.table[0].1, Elem::ONE);
            assert_eq!(s.orbit[1], vec![Elem::ZERO, Elem::ONE]);
        }
    }

    #[test]
    fn counts_match_enumeration() {
        let c = counts(2, 3);
        assert_eq!((c.m, c.h), (24, 4));
        assert!(c.ratio_exceeds_bound);
        assert_eq!(counts(3, 2).m, 168);
        let f9 = FieldCtx::auto(3, 1, 2).unwrap();
        assert_eq!(enumerate_distinct_psi_tables(&f9, 1 << 20).unwrap(), 24);
        assert_eq!(enumerate_subprimitive_roots(&f9), 4);
        let f8 = FieldCtx::auto(2, 1, 3).unwrap();
        assert_eq!(enumerate_distinct_psi_tables(&f8, 1 << 20).unwrap(), 168);
    }

    #[test]
    fn subprimitive_equals_primitive_in_characteristic_two_base() {
        let ctx = FieldCtx::auto(2, 1, 4).unwrap();
        let ell = ctx.mu_order();
        for x in ctx.nonzero_elements() {
            assert_eq!(ctx.subprimitive_order(x).unwrap() == ell, ctx.order_of(x).unwrap() == 15);
        }
    }
}
