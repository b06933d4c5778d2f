use std::collections::HashMap;

use super::{Elem, FieldCtx, Modulus};
use crate::error::{Error, Result};

/// Conway polynomials for small prime powers, ascending coefficients.
const TABLE: &[(u32, &[u32])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[1, 2, 0, 0, 0, 1]),
    (3, &[2, 2, 1, 0, 2, 0, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 1, 4, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
    (7, &[4, 0, 6, 1]),
];

/// The tabulated Conway polynomial of degree `d` over `F_p`, if present.
pub fn conway_polynomial(p: u32, d: usize) -> Option<Vec<u32>> {
    TABLE
        .iter()
        .find(|(pp, c)| *pp == p && c.len() == d + 1)
        .map(|(_, c)| c.to_vec())
}

fn poly_mul(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

fn product_of_linears(ctx: &FieldCtx, roots: impl Iterator<Item = Elem>) -> Vec<Elem> {
    roots.fold(vec![Elem::ONE], |acc, r| poly_mul(ctx, &acc, &[ctx.neg(r), Elem::ONE]))
}

pub(crate) fn conway_tower(p: u64, m: usize, n: usize, limit: u64) -> Result<FieldCtx> {
    let d = m * n;
    let c = u32::try_from(p)
        .ok()
        .and_then(|p| conway_polynomial(p, d))
        .ok_or_else(|| Error::BadParams(format!("no Conway polynomial tabulated for {p}^{d}")))?;
    let flat = FieldCtx::with_limit(p, Modulus::Coeffs(vec![0, 1]), Modulus::Coeffs(c), limit)?;
    let omega = flat.y();
    let full = flat.order() as u64 - 1;
    if flat.order_of(omega)? != full {
        return Err(Error::Internal("tabulated Conway polynomial is not primitive".into()));
    }
    let q = p.pow(m as u32);
    let t = flat.pow(omega, full / (q - 1));

    let base = product_of_linears(&flat, (0..m).map(|k| flat.frob(t, k)));
    let base: Vec<u32> = base
        .iter()
        .map(|e| {
            if (e.0 as u64) < p {
                Ok(e.0)
            } else {
                Err(Error::InternalSubfieldViolation("base modulus outside F_p".into()))
            }
        })
        .collect::<Result<_>>()?;

    // value of sum a_j t^j in the flat field -> packed digit index
    let mut lookup = HashMap::with_capacity(q as usize);
    for idx in 0..q as u32 {
        let mut rem = idx;
        let mut val = Elem::ZERO;
        let mut tp = Elem::ONE;
        for _ in 0..m {
            val = flat.add(val, flat.mul(Elem(rem % p as u32), tp));
            rem /= p as u32;
            tp = flat.mul(tp, t);
        }
        lookup.insert(val, idx);
    }
    let ext = product_of_linears(&flat, (0..n).map(|k| flat.frob(omega, m * k)));
    let ext: Vec<u32> = ext
        .iter()
        .map(|e| {
            lookup
                .get(e)
                .copied()
                .ok_or_else(|| Error::InternalSubfieldViolation("ext modulus outside F_q".into()))
        })
        .collect::<Result<_>>()?;
    Ok(FieldCtx::with_limit(p, Modulus::Coeffs(base), Modulus::Coeffs(ext), limit)?.mark_conway())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries_are_primitive() {
        for (p, c) in TABLE {
            if c.len() < 3 {
                // degree one: the root itself must generate F_p^*
                let root = (p - c[0]) % p;
                let mut order = 1;
                let mut x = root as u64;
                while x != 1 {
                    x = x * root as u64 % *p as u64;
                    order += 1;
                }
                assert_eq!(order, p - 1, "p={p}");
                continue;
            }
            let f = FieldCtx::new(*p as u64, Modulus::Coeffs(vec![0, 1]), Modulus::Coeffs(c.to_vec()))
                .unwrap();
            assert_eq!(f.order_of(f.y()).unwrap(), f.order() as u64 - 1, "p={p} c={c:?}");
        }
    }

    #[test]
    fn table_entries_are_norm_compatible() {
        for (p, c) in TABLE {
            let d = c.len() - 1;
            if d < 2 {
                continue;
            }
            let f = FieldCtx::new(*p as u64, Modulus::Coeffs(vec![0, 1]), Modulus::Coeffs(c.to_vec()))
                .unwrap();
            let full = f.order() as u64 - 1;
            for e in (1..d).filter(|e| d % e == 0) {
                let Some(small) = conway_polynomial(*p, e) else { continue };
                let sub = (*p as u64).pow(e as u32) - 1;
                let r = f.pow(f.y(), full / sub);
                let val = small
                    .iter()
                    .rev()
                    .fold(Elem::ZERO, |acc, &k| f.add(f.mul(acc, r), Elem(k)));
                assert_eq!(val, Elem::ZERO, "p={p} d={d} e={e}");
            }
        }
    }

    #[test]
    fn tower_generator_matches_flat_root() {
        let tower = FieldCtx::conway(2, 3, 3).unwrap();
        assert!(tower.is_conway());
        // y is a root of the degree-9 Conway polynomial
        let c = conway_polynomial(2, 9).unwrap();
        let val = c.iter().rev().fold(Elem::ZERO, |acc, &k| {
            tower.add(tower.mul(acc, tower.y()), Elem(k))
        });
        assert_eq!(val, Elem::ZERO);
        // and t is the corresponding root of the cubic one
        let c3 = conway_polynomial(2, 3).unwrap();
        assert_eq!(tower.base_modulus(), c3.as_slice());
    }
}
