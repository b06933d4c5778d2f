//! Dense univariate polynomials over the top field.

use serde::{Deserialize, Serialize};

use crate::field::{Elem, FieldCtx};

/// Polynomial with ascending coefficients; never carries trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly::default()
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn monomial(c: Elem, e: usize) -> UniPoly {
        let mut coeffs = vec![Elem::ZERO; e + 1];
        coeffs[e] = c;
        UniPoly::from_coeffs(coeffs)
    }

    /// Sums repeated exponents.
    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (usize, Elem)>) -> UniPoly {
        let mut coeffs = Vec::new();
        for (e, c) in terms {
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Elem::ZERO);
            }
            coeffs[e] = ctx.add(coeffs[e], c);
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> Elem {
        self.coeffs.get(e).copied().unwrap_or(Elem::ZERO)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Elem)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, &c)| (e, c))
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..len).map(|e| ctx.add(self.coeff(e), other.coeff(e))).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Elem) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        UniPoly::from_coeffs(out)
    }

    /// Reduction modulo `x^size - x`: the unique representative of degree
    /// below `size` inducing the same function on a field of that size.
    pub fn reduce_mod_frobenius(&self, ctx: &FieldCtx, size: u64) -> UniPoly {
        UniPoly::from_terms(
            ctx,
            self.terms().map(|(e, c)| {
                let e = e as u64;
                let r = if e < size { e } else { (e - 1) % (size - 1) + 1 };
                (r as usize, c)
            }),
        )
    }

    /// Renders as e.g. `g^154*x^128 + g^147*x^16` using logs to the table
    /// generator, or raw indices when `logs` is false.
    pub fn render(&self, ctx: &FieldCtx, logs: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let coef = if logs {
                format!("g^{}", ctx.log(c).unwrap_or(0))
            } else {
                let s = ctx.render(c);
                if s.contains('+') { format!("({s})") } else { s }
            };
            parts.push(match (e, c == Elem::ONE && !logs) {
                (0, _) => coef,
                (1, true) => "x".into(),
                (1, false) => format!("{coef}*x"),
                (_, true) => format!("x^{e}"),
                (_, false) => format!("{coef}*x^{e}"),
            });
        }
        parts.join(" + ")
    }
}

/// The interpolating polynomial of degree below `size` of a function on the
/// subfield with `size` elements (packed indices `0..size`), from the closed
/// form of the Lagrange basis over a full finite field:
/// `c_0 = f(0)`, `c_k = -sum_{a != 0} f(a) a^(-k)` for `0 < k < size - 1`,
/// and `c_{size-1} = -sum_a f(a)`.
pub fn interpolate_subfield(ctx: &FieldCtx, size: u64, f: impl Fn(Elem) -> Elem) -> UniPoly {
    let values: Vec<Elem> = (0..size as u32).map(|i| f(Elem(i))).collect();
    interpolate_values(ctx, size, &values)
}

/// As [`interpolate_subfield`] with the values already tabulated by index.
pub fn interpolate_values(ctx: &FieldCtx, size: u64, values: &[Elem]) -> UniPoly {
    assert_eq!(values.len() as u64, size);
    let gm1 = size - 1;
    if gm1 == 0 {
        return UniPoly::from_coeffs(values.to_vec());
    }
    // zeta generates the subfield's multiplicative group; a = zeta^i
    let full = ctx.order() as u64 - 1;
    let zeta = ctx.exp(full / gm1);
    let by_log: Vec<Elem> = (0..gm1).map(|i| values[ctx.pow(zeta, i).index() as usize]).collect();
    let total = values.iter().fold(Elem::ZERO, |acc, &v| ctx.add(acc, v));
    let mut coeffs = vec![Elem::ZERO; size as usize];
    coeffs[0] = values[0];
    let zeta_inv = ctx.inv(zeta).expect("generator is nonzero");
    // sum_i F_i (zeta^-k)^i by Horner in zeta^-k
    let mut point = Elem::ONE;
    for k in 1..gm1 {
        point = ctx.mul(point, zeta_inv);
        let s = by_log.iter().rev().fold(Elem::ZERO, |acc, &v| ctx.add(ctx.mul(acc, point), v));
        coeffs[k as usize] = ctx.neg(s);
    }
    coeffs[gm1 as usize] = ctx.add(coeffs[gm1 as usize], ctx.neg(total));
    UniPoly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_function() {
        let ctx = FieldCtx::auto(3, 1, 3).unwrap();
        let f = |x: Elem| ctx.add(ctx.pow(x, 5), ctx.mul(ctx.y(), x));
        let poly = interpolate_subfield(&ctx, ctx.order() as u64, f);
        for x in ctx.elements() {
            assert_eq!(poly.eval(&ctx, x), f(x));
        }
        assert_eq!(poly.terms().count(), 2);
        assert_eq!(poly.coeff(5), Elem::ONE);
    }

    #[test]
    fn interpolation_on_subfield() {
        let ctx = FieldCtx::auto(2, 2, 2).unwrap();
        let f = |x: Elem| ctx.add(ctx.pow(x, 2), Elem::ONE);
        let poly = interpolate_subfield(&ctx, 4, f);
        assert_eq!(poly.coeffs(), &[Elem::ONE, Elem::ZERO, Elem::ONE]);
    }

    #[test]
    fn frobenius_reduction_keeps_values() {
        let ctx = FieldCtx::auto(2, 1, 3).unwrap();
        let p = UniPoly::from_terms(&ctx, [(9, Elem(3)), (8, Elem(5)), (1, Elem(1))]);
        let r = p.reduce_mod_frobenius(&ctx, 8);
        assert!(r.degree().unwrap() < 8);
        for x in ctx.elements() {
            assert_eq!(p.eval(&ctx, x), r.eval(&ctx, x));
        }
    }
}
