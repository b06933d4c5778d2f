//! The tower `F_p ⊂ F_q ⊂ F_{q^n}` with `q = p^m`.
//!
//! Every element of the top field is a packed index: the coefficient vector
//! over `F_q` read as base-`q` digits, each digit itself the coefficient
//! vector over `F_p` read in base `p`. Subfields are therefore prefixes of the
//! index range: `F_q` is `0..q` and `F_p` is `0..p`.

mod conway;
mod dlog;
mod spec;
pub(crate) mod tables;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, prime_factors};
use crate::error::{Error, Result};
use tables::{build_extension, first_irreducible, is_irreducible, GfTables, Ground, PrimeGround};

pub use conway::conway_polynomial;
pub use dlog::bsgs;
pub use spec::{FieldSpec, Modulus};

/// Largest top-field order the library will build tables for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of the top field, stored as its packed index.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Which level of the tower an element is declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Prime,
    Base,
    Ext,
}

/// An element tagged with its level, for the level-checked arithmetic entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub level: Level,
    pub value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
    Inv,
    Neg,
}

/// Field context for one tower. Immutable once built and safe to share.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    m: usize,
    n: usize,
    q: u32,
    order: u32,
    base_modulus: Vec<u32>,
    ext_modulus: Vec<u32>,
    ext: GfTables,
    /// `q^k mod (order - 1)` for `k < n`.
    qpow_mod: Vec<u64>,
    conway: bool,
}

impl FieldCtx {
    /// Builds the tower from a prime and a choice of modulus at each level.
    /// Explicit extension coefficients are packed `F_q` indices.
    pub fn new(p: u64, base: Modulus, ext: Modulus) -> Result<FieldCtx> {
        Self::build(p, base, ext, MAX_FIELD_ORDER)
    }

    /// Same as [`FieldCtx::new`] with a caller-chosen size cap.
    pub fn with_limit(p: u64, base: Modulus, ext: Modulus, limit: u64) -> Result<FieldCtx> {
        Self::build(p, base, ext, limit.min(MAX_FIELD_ORDER))
    }

    /// Convenience constructor with automatically chosen moduli.
    pub fn auto(p: u64, m: usize, n: usize) -> Result<FieldCtx> {
        Self::new(p, Modulus::Auto(m), Modulus::Auto(n))
    }

    /// The tower whose top field is defined by the Conway polynomial of degree
    /// `m n`, with `F_q` generated by the matching norm of its root.
    pub fn conway(p: u64, m: usize, n: usize) -> Result<FieldCtx> {
        conway::conway_tower(p, m, n, MAX_FIELD_ORDER)
    }

    fn build(p: u64, base: Modulus, ext: Modulus, limit: u64) -> Result<FieldCtx> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        let m = base.degree();
        let n = ext.degree();
        if m < 1 {
            return Err(Error::DegreeTooSmall("base degree must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::DegreeTooSmall("extension degree must be at least 2".into()));
        }
        let q = checked_pow(p, m).filter(|&q| q <= limit);
        let order = q.and_then(|q| checked_pow(q, n)).filter(|&o| o <= limit);
        let (q, order) = match (q, order) {
            (Some(q), Some(o)) => (q as u32, o as u32),
            _ => {
                return Err(Error::FieldTooLarge {
                    order: checked_pow(p, m * n).unwrap_or(u64::MAX),
                    limit,
                })
            }
        };
        let prime = PrimeGround(p as u32);
        let base_modulus = match base {
            Modulus::Auto(_) => first_irreducible(&prime, m),
            Modulus::Coeffs(c) => {
                check_monic(&c, p as u32)?;
                if !is_irreducible(&prime, &c) {
                    return Err(Error::ReducibleModulus(format!("{c:?} over F_{p}")));
                }
                c
            }
        };
        let base_tables = build_extension(&prime, &base_modulus)?;
        let ext_modulus = match ext {
            Modulus::Auto(_) => first_irreducible(&base_tables, n),
            Modulus::Coeffs(c) => {
                check_monic(&c, q)?;
                if !is_irreducible(&base_tables, &c) {
                    return Err(Error::ReducibleModulus(format!("{c:?} over F_{q}")));
                }
                c
            }
        };
        let ext_tables = build_extension(&base_tables, &ext_modulus)?;
        let ord = (order - 1) as u64;
        let mut qpow_mod = Vec::with_capacity(n);
        let mut acc = 1u64 % ord.max(1);
        for _ in 0..n {
            qpow_mod.push(acc);
            acc = acc * q as u64 % ord;
        }
        Ok(FieldCtx {
            p: p as u32,
            m,
            n,
            q,
            order,
            base_modulus,
            ext_modulus,
            ext: ext_tables,
            qpow_mod,
            conway: false,
        })
    }

    pub(crate) fn mark_conway(mut self) -> Self {
        self.conway = true;
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Number of elements of the top field.
    pub fn order(&self) -> u32 {
        self.order
    }
    pub fn is_conway(&self) -> bool {
        self.conway
    }
    /// Modulus of `F_q` over `F_p`, ascending.
    pub fn base_modulus(&self) -> &[u32] {
        &self.base_modulus
    }
    /// Modulus of the top field over `F_q`, ascending packed `F_q` indices.
    pub fn ext_modulus(&self) -> &[u32] {
        &self.ext_modulus
    }

    /// `(q^n - 1) / (q - 1)`, the order of the subgroup of `(q-1)`-th powers.
    pub fn mu_order(&self) -> u64 {
        (self.order as u64 - 1) / (self.q as u64 - 1)
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.order as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::BadCoefficient(index))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }
    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.order).map(Elem)
    }
    pub fn base_elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }
    pub fn prime_elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.p).map(Elem)
    }

    pub fn level_of(&self, x: Elem) -> Level {
        if x.0 < self.p {
            Level::Prime
        } else if x.0 < self.q {
            Level::Base
        } else {
            Level::Ext
        }
    }

    pub fn in_base(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// The element `y` adjoined to `F_q` (a root of the extension modulus).
    pub fn y(&self) -> Elem {
        Elem(self.q)
    }

    /// The element `t` adjoined to `F_p` (a root of the base modulus); equals
    /// an element of `F_p` when `m = 1`.
    pub fn t(&self) -> Elem {
        if self.m == 1 {
            Elem((self.p - self.base_modulus[0]) % self.p)
        } else {
            Elem(self.p)
        }
    }

    /// The generator of the top multiplicative group used by the tables:
    /// the smallest index of full order.
    pub fn generator(&self) -> Elem {
        Elem(self.ext.generator())
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.ext.add(a.0, b.0))
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.ext.sub(a.0, b.0))
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.ext.neg(a.0))
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.ext.mul(a.0, b.0))
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a.0 != 0).then(|| Elem(self.ext.inv(a.0)))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        Elem(self.ext.pow(a.0, e))
    }

    /// `a^e` for a possibly negative exponent; `None` for `0^(negative)`.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Option<Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(ai, e.unsigned_abs()))
        }
    }

    /// `g^k` for the table generator `g`.
    #[inline]
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.ext.exp(k))
    }

    /// Table logarithm to the base [`FieldCtx::generator`].
    pub fn log(&self, a: Elem) -> Result<u64> {
        if a.0 == 0 {
            Err(Error::LogOfZero)
        } else {
            Ok(self.ext.log(a.0) as u64)
        }
    }

    /// `x^(q^k)`.
    #[inline]
    pub fn frob(&self, x: Elem, k: usize) -> Elem {
        if x.0 == 0 {
            return x;
        }
        let ord = self.order as u64 - 1;
        let e = self.ext.log(x.0) as u64 * self.qpow_mod[k % self.n] % ord;
        Elem(self.ext.exp(e))
    }

    /// `x^q`, applied `k` times.
    pub fn frob_iter(&self, x: Elem, k: usize) -> Elem {
        (0..k).fold(x, |acc, _| self.pow(acc, self.q as u64))
    }

    /// Trace from the top field down to `F_q`.
    #[inline]
    pub fn trace(&self, x: Elem) -> Elem {
        (0..self.n).fold(Elem::ZERO, |acc, k| self.add(acc, self.frob(x, k)))
    }

    /// Trace with the landing-in-`F_q` check made explicit.
    pub fn trace_checked(&self, x: Elem) -> Result<Elem> {
        let t = self.trace(x);
        if self.in_base(t) {
            Ok(t)
        } else {
            Err(Error::InternalSubfieldViolation(format!("trace of {} is {}", x.0, t.0)))
        }
    }

    /// Norm from the top field down to `F_q`.
    pub fn norm(&self, x: Elem) -> Elem {
        self.pow(x, self.mu_order())
    }

    pub fn norm_checked(&self, x: Elem) -> Result<Elem> {
        let nm = self.norm(x);
        if self.in_base(nm) {
            Ok(nm)
        } else {
            Err(Error::InternalSubfieldViolation(format!("norm of {} is {}", x.0, nm.0)))
        }
    }

    /// Membership in the subgroup of `(q-1)`-th powers.
    pub fn is_in_mu(&self, x: Elem) -> bool {
        x.0 != 0 && self.pow(x, self.mu_order()) == Elem::ONE
    }

    /// Elements of the subgroup of `(q-1)`-th powers, sorted by index.
    pub fn mu_elements(&self) -> Vec<Elem> {
        let step = self.q as u64 - 1;
        let mut v: Vec<Elem> = (0..self.mu_order()).map(|k| self.exp(k * step)).collect();
        v.sort_unstable();
        v
    }

    /// Some `w` with `w^(q-1) = x`, if one exists.
    pub fn qm1_root(&self, x: Elem) -> Option<Elem> {
        if x.0 == 0 {
            return None;
        }
        let l = self.ext.log(x.0) as u64;
        let step = self.q as u64 - 1;
        l.is_multiple_of(step).then(|| self.exp(l / step))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, x: Elem) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::ZeroInput);
        }
        let mut o = self.order as u64 - 1;
        for l in prime_factors(o) {
            while o.is_multiple_of(l) && self.pow(x, o / l) == Elem::ONE {
                o /= l;
            }
        }
        Ok(o)
    }

    /// `ord(x) / gcd(ord(x), q - 1)`: the order of `x` in the group modulo `F_q^*`.
    pub fn subprimitive_order(&self, x: Elem) -> Result<u64> {
        let o = self.order_of(x)?;
        Ok(o / gcd(o, self.q as u64 - 1))
    }

    /// A generator of `F_q^*`: a power of the top generator.
    pub fn base_generator(&self) -> Elem {
        self.exp(self.mu_order())
    }

    /// Coefficients of `x` over `F_q` in the basis `1, y, ..., y^(n-1)`.
    pub fn ext_coeffs(&self, x: Elem) -> Vec<Elem> {
        let mut idx = x.0;
        (0..self.n)
            .map(|_| {
                let d = idx % self.q;
                idx /= self.q;
                Elem(d)
            })
            .collect()
    }

    pub fn from_ext_coeffs(&self, coeffs: &[Elem]) -> Result<Elem> {
        if coeffs.len() != self.n {
            return Err(Error::WrongLength { expected: self.n, got: coeffs.len() });
        }
        let mut idx = 0u64;
        for c in coeffs.iter().rev() {
            if c.0 >= self.q {
                return Err(Error::BadCoefficient(c.0 as u64));
            }
            idx = idx * self.q as u64 + c.0 as u64;
        }
        Ok(Elem(idx as u32))
    }

    /// Coefficients over `F_p` of an element of `F_q`, in the basis `1, t, ..., t^(m-1)`.
    pub fn base_coeffs(&self, b: Elem) -> Vec<u32> {
        let mut idx = b.0 % self.q;
        (0..self.m)
            .map(|_| {
                let d = idx % self.p;
                idx /= self.p;
                d
            })
            .collect()
    }

    /// Nested coefficient vector: `n` lists of `m` integers in `0..p`.
    pub fn to_nested(&self, x: Elem) -> Vec<Vec<u32>> {
        self.ext_coeffs(x).into_iter().map(|c| self.base_coeffs(c)).collect()
    }

    pub fn from_nested(&self, v: &[Vec<u32>]) -> Result<Elem> {
        if v.len() != self.n {
            return Err(Error::WrongLength { expected: self.n, got: v.len() });
        }
        let coeffs = v
            .iter()
            .map(|digits| self.base_from_digits(digits))
            .collect::<Result<Vec<_>>>()?;
        self.from_ext_coeffs(&coeffs)
    }

    pub fn base_from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.m {
            return Err(Error::WrongLength { expected: self.m, got: digits.len() });
        }
        let mut idx = 0u32;
        for &d in digits.iter().rev() {
            if d >= self.p {
                return Err(Error::BadCoefficient(d as u64));
            }
            idx = idx * self.p + d;
        }
        Ok(Elem(idx))
    }

    /// Human-readable rendering as a polynomial in `y` with `F_q` coefficients
    /// written as polynomials in `t`.
    pub fn render(&self, x: Elem) -> String {
        if x.0 == 0 {
            return "0".into();
        }
        let coeffs = self.ext_coeffs(x);
        let mut parts = Vec::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.0 == 0 {
                continue;
            }
            let cs = self.render_base(*c);
            let needs_paren = cs.contains('+');
            let coef = match (k, c.0) {
                (0, _) => cs,
                (_, 1) => String::new(),
                _ if needs_paren => format!("({cs})"),
                _ => cs,
            };
            let mono = match k {
                0 => String::new(),
                1 => "y".into(),
                _ => format!("y^{k}"),
            };
            parts.push(format!("{coef}{mono}"));
        }
        parts.join(" + ")
    }

    fn render_base(&self, b: Elem) -> String {
        if self.m == 1 {
            return b.0.to_string();
        }
        let digits = self.base_coeffs(b);
        let mut parts = Vec::new();
        for (k, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            parts.push(match (k, d) {
                (0, _) => d.to_string(),
                (_, 1) => mono,
                _ => format!("{d}{mono}"),
            });
        }
        parts.join("+")
    }

    /// Level-checked arithmetic. Both operands of a binary operation must
    /// carry the same level tag and lie in that level.
    pub fn arith(&self, op: ArithOp, a: FieldElem, b: Option<FieldElem>) -> Result<FieldElem> {
        self.check_level(a)?;
        if let Some(b) = b {
            self.check_level(b)?;
            if b.level != a.level {
                return Err(Error::LevelMismatch);
            }
        }
        let need_b = || b.map(|b| b.value).ok_or(Error::BadParams("missing operand".into()));
        let value = match op {
            ArithOp::Add => self.add(a.value, need_b()?),
            ArithOp::Sub => self.sub(a.value, need_b()?),
            ArithOp::Mul => self.mul(a.value, need_b()?),
            ArithOp::Div => self.div(a.value, need_b()?)?,
            ArithOp::Pow(e) => self.pow(a.value, e),
            ArithOp::Inv => self.inv(a.value).ok_or(Error::DivisionByZero)?,
            ArithOp::Neg => self.neg(a.value),
        };
        Ok(FieldElem { level: a.level, value })
    }

    fn check_level(&self, a: FieldElem) -> Result<()> {
        let ok = match a.level {
            Level::Prime => a.value.0 < self.p,
            Level::Base => a.value.0 < self.q,
            Level::Ext => a.value.0 < self.order,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::LevelMismatch)
        }
    }

    /// Discrete logarithm of `x` to an arbitrary base by baby-step giant-step.
    /// Returns `None` when `x` is not in the group generated by `base`.
    pub fn dlog(&self, base: Elem, x: Elem) -> Result<Option<u64>> {
        if x.0 == 0 || base.0 == 0 {
            return Err(Error::LogOfZero);
        }
        let ord = self.order_of(base)?;
        Ok(bsgs(self, base, x, ord))
    }

    /// A generator of the top multiplicative group together with the
    /// logarithm of `x` to that base. A caller-supplied generator is checked.
    pub fn generator_and_log(&self, generator: Option<Elem>, x: Elem) -> Result<(Elem, u64)> {
        let g = match generator {
            Some(g) => {
                if self.order_of(g)? != self.order as u64 - 1 {
                    return Err(Error::BadParams(format!("{} is not a primitive element", g.0)));
                }
                g
            }
            None => self.generator(),
        };
        let k = self
            .dlog(g, x)?
            .ok_or_else(|| Error::Internal("log not found for a primitive base".into()))?;
        Ok((g, k))
    }

    /// The canonical textual description of this tower.
    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p as u64,
            base: Modulus::Coeffs(self.base_modulus.clone()),
            ext: Modulus::Coeffs(self.ext_modulus.clone()),
            conway: false,
        }
    }
}

fn checked_pow(b: u64, e: usize) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(b)?;
    }
    Some(acc)
}

fn check_monic(c: &[u32], bound: u32) -> Result<()> {
    if c.last() != Some(&1) {
        return Err(Error::NotMonic);
    }
    if let Some(&bad) = c.iter().find(|&&x| x >= bound) {
        return Err(Error::BadCoefficient(bad as u64));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_moduli() {
        let f = FieldCtx::auto(3, 1, 2).unwrap();
        assert_eq!(f.ext_modulus(), &[1, 0, 1]);
        let f = FieldCtx::auto(2, 1, 3).unwrap();
        assert_eq!(f.ext_modulus(), &[1, 1, 0, 1]);
        let f = FieldCtx::auto(2, 2, 2).unwrap();
        assert_eq!(f.base_modulus(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(FieldCtx::auto(4, 1, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            FieldCtx::new(3, Modulus::Auto(1), Modulus::Coeffs(vec![0, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert_eq!(
            FieldCtx::new(3, Modulus::Auto(1), Modulus::Coeffs(vec![1, 0, 2])).unwrap_err(),
            Error::NotMonic
        );
        assert!(matches!(FieldCtx::auto(3, 1, 1), Err(Error::DegreeTooSmall(_))));
        assert!(matches!(FieldCtx::auto(2, 1, 21), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn subfields_are_index_prefixes() {
        let f = FieldCtx::auto(2, 2, 3).unwrap();
        for a in f.base_elements() {
            for b in f.base_elements() {
                assert!(f.in_base(f.mul(a, b)));
                assert!(f.in_base(f.add(a, b)));
            }
            assert_eq!(f.pow(a, 4), a);
        }
        for x in f.elements() {
            assert!(f.in_base(f.trace_checked(x).unwrap()));
            assert!(f.in_base(f.norm_checked(x).unwrap()));
        }
    }

    #[test]
    fn frobenius_matches_iterated_powering() {
        let f = FieldCtx::auto(3, 2, 2).unwrap();
        for x in f.elements() {
            for k in 0..3 {
                assert_eq!(f.frob(x, k), f.frob_iter(x, k));
            }
        }
    }

    #[test]
    fn base_coefficients_roundtrip() {
        let f = FieldCtx::auto(3, 2, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_nested(&f.to_nested(x)).unwrap(), x);
        }
    }

    #[test]
    fn mu_and_roots() {
        let f = FieldCtx::auto(2, 2, 3).unwrap();
        let mu = f.mu_elements();
        assert_eq!(mu.len() as u64, f.mu_order());
        for &x in &mu {
            assert!(f.is_in_mu(x));
            let w = f.qm1_root(x).unwrap();
            assert_eq!(f.pow(w, 3), x);
        }
    }

    #[test]
    fn level_checked_arith() {
        let f = FieldCtx::auto(3, 1, 2).unwrap();
        let a = FieldElem { level: Level::Prime, value: Elem(2) };
        let b = FieldElem { level: Level::Ext, value: Elem(5) };
        assert_eq!(f.arith(ArithOp::Add, a, Some(b)), Err(Error::LevelMismatch));
        let z = FieldElem { level: Level::Prime, value: Elem(0) };
        assert_eq!(f.arith(ArithOp::Div, a, Some(z)), Err(Error::DivisionByZero));
        let r = f.arith(ArithOp::Mul, a, Some(a)).unwrap();
        assert_eq!(r.value, Elem(1));
    }

    #[test]
    fn dlog_inverts_pow() {
        let f = FieldCtx::auto(5, 1, 2).unwrap();
        let g = f.generator();
        for k in 0..24u64 {
            assert_eq!(f.dlog(g, f.pow(g, k)).unwrap(), Some(k));
        }
        assert_eq!(f.dlog(g, Elem::ZERO), Err(Error::LogOfZero));
    }
}
