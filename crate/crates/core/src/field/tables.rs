//! Table-driven arithmetic for one level of the tower, plus the polynomial
//! routines over a ground field needed to validate and pick moduli.

use crate::arith::prime_factors;
use crate::error::{Error, Result};

/// Arithmetic of a ground field whose elements are `0..size()`.
pub(crate) trait Ground {
    fn size(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

/// Integers modulo a prime.
pub(crate) struct PrimeGround(pub u32);

impl Ground for PrimeGround {
    fn size(&self) -> u32 {
        self.0
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }
    fn neg(&self, a: u32) -> u32 {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let p = self.0 as u64;
        let mut e = p - 2;
        let (mut base, mut acc) = (a as u64 % p, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

const NONE: u32 = u32::MAX;

/// Exp / log / Zech-log tables of a finite field of order `size`, with
/// elements encoded as packed coefficient vectors over the ground field
/// (least significant coefficient first).
#[derive(Clone, Debug)]
pub(crate) struct GfTables {
    size: u32,
    /// `exp[k] = g^k`, stored twice over so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NONE` when `1 + g^k = 0`.
    zech: Vec<u32>,
    log_neg_one: u32,
    generator: u32,
}

impl GfTables {
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.size - 1
    }

    #[inline]
    pub fn generator(&self) -> u32 {
        self.generator
    }

    #[inline]
    pub fn log(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.log[a as usize]
    }

    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % self.group_order() as u64) as usize]
    }

    #[inline]
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let ord = self.group_order() as u64;
        let k = (self.log[a as usize] as u64 * (e % ord)) % ord;
        self.exp[k as usize]
    }
}

impl Ground for GfTables {
    #[inline]
    fn size(&self) -> u32 {
        self.size
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let ord = self.group_order();
        let (la, lb) = (self.log[a as usize], self.log[b as usize]);
        let d = if lb >= la { lb - la } else { lb + ord - la };
        let z = self.zech[d as usize];
        if z == NONE {
            0
        } else {
            self.exp[(la + z) as usize]
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log_neg_one) as usize]
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    #[inline]
    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let ord = self.group_order();
        self.exp[((ord - self.log[a as usize]) % ord) as usize]
    }
}

fn digits(mut idx: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = idx % base;
        idx /= base;
    }
    out
}

fn pack(ds: &[u32], base: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Multiplication in `ground[x]/(modulus)` on packed indices.
struct SlowExt<'a, G: Ground> {
    ground: &'a G,
    modulus: &'a [u32],
}

impl<G: Ground> SlowExt<'_, G> {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let d = self.degree();
        let s = self.ground.size();
        let (da, db) = (digits(a, s, d), digits(b, s, d));
        let mut prod = vec![0u32; 2 * d - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = self.ground.add(prod[i + j], self.ground.mul(x, y));
            }
        }
        // modulus is monic: x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        for top in (d..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for k in 0..d {
                let t = self.ground.mul(c, self.modulus[k]);
                prod[top - d + k] = self.ground.sub(prod[top - d + k], t);
            }
        }
        pack(&prod[..d], s)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Builds the tables of `ground[x]/(modulus)`. The modulus must be monic and
/// irreducible; the generator is the smallest packed index of full order.
pub(crate) fn build_extension<G: Ground>(ground: &G, modulus: &[u32]) -> Result<GfTables> {
    let d = modulus.len() - 1;
    let s = ground.size();
    let size = (s as u64).pow(d as u32);
    let size = u32::try_from(size).map_err(|_| Error::FieldTooLarge {
        order: size,
        limit: u32::MAX as u64,
    })?;
    let ord = size - 1;
    let slow = SlowExt { ground, modulus };
    let factors = prime_factors(ord as u64);
    let generator = (1..size)
        .find(|&c| {
            slow.pow(c, ord as u64) == 1
                && factors.iter().all(|&l| slow.pow(c, ord as u64 / l) != 1)
        })
        .ok_or_else(|| Error::ReducibleModulus(format!("{modulus:?}")))?;

    let mut exp = vec![0u32; 2 * ord as usize];
    let mut log = vec![NONE; size as usize];
    let mut cur = 1u32;
    for k in 0..ord {
        if log[cur as usize] != NONE {
            return Err(Error::Internal("generator walk repeated an element".into()));
        }
        exp[k as usize] = cur;
        exp[(k + ord) as usize] = cur;
        log[cur as usize] = k;
        cur = slow.mul(cur, generator);
    }
    // adding 1 only touches the least significant digit
    let one_plus = |idx: u32| {
        let d0 = idx % s;
        idx - d0 + ground.add(d0, 1)
    };
    let zech = (0..ord)
        .map(|k| {
            let v = one_plus(exp[k as usize]);
            if v == 0 {
                NONE
            } else {
                log[v as usize]
            }
        })
        .collect();
    let log_neg_one = log[ground.neg(1) as usize];
    Ok(GfTables {
        size,
        exp,
        log,
        zech,
        log_neg_one,
        generator,
    })
}

// ---------------------------------------------------------------------------
// Polynomials over a ground field, ascending coefficient vectors.

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

pub(crate) fn poly_rem<G: Ground>(g: &G, a: &[u32], b: &[u32]) -> Vec<u32> {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = g.inv(b[db]);
    let mut r = trim(a.to_vec());
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = g.mul(r[dr], lead_inv);
        for k in 0..=db {
            let t = g.mul(c, b[k]);
            r[dr - db + k] = g.sub(r[dr - db + k], t);
        }
        r = trim(r);
        if dr == 0 {
            break;
        }
    }
    r
}

/// Monic polynomial of the given degree whose lower coefficients are the
/// base-`size` digits of `k` (constant term fastest).
pub(crate) fn monic_from_counter(k: u64, size: u32, degree: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(degree + 1);
    let mut k = k;
    for _ in 0..degree {
        v.push((k % size as u64) as u32);
        k /= size as u64;
    }
    v.push(1);
    v
}

/// Exhaustive trial division by every monic polynomial of degree at most
/// half the degree of `f`.
pub(crate) fn is_irreducible<G: Ground>(g: &G, f: &[u32]) -> bool {
    let f = trim(f.to_vec());
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    let s = g.size();
    for d in 1..=deg / 2 {
        let count = (s as u64).pow(d as u32);
        for k in 0..count {
            let cand = monic_from_counter(k, s, d);
            let r = poly_rem(g, &f, &cand);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

/// First irreducible monic polynomial of `degree` in counting order.
pub(crate) fn first_irreducible<G: Ground>(g: &G, degree: usize) -> Vec<u32> {
    let s = g.size();
    let count = (s as u64).pow(degree as u32);
    (0..count)
        .map(|k| monic_from_counter(k, s, degree))
        .find(|f| is_irreducible(g, f))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_ground_inverse() {
        let g = PrimeGround(7);
        for a in 1..7 {
            assert_eq!(g.mul(a, g.inv(a)), 1);
        }
    }

    #[test]
    fn lex_first_quadratic_over_f3_is_x2_plus_1() {
        // scan x^2 + b x + c with c fastest: x^2 has root 0, x^2+1 has no root in F_3
        let g = PrimeGround(3);
        assert_eq!(first_irreducible(&g, 2), vec![1, 0, 1]);
        assert!(!is_irreducible(&g, &[0, 0, 1]));
    }

    #[test]
    fn x3_x_1_irreducible_over_f2() {
        let g = PrimeGround(2);
        // no root in F_2: f(0) = 1, f(1) = 1
        assert!(is_irreducible(&g, &[1, 1, 0, 1]));
        assert_eq!(first_irreducible(&g, 3), vec![1, 1, 0, 1]);
        assert!(!is_irreducible(&g, &[1, 0, 0, 1]));
    }

    #[test]
    fn zech_addition_matches_slow_addition() {
        let g = PrimeGround(3);
        let t = build_extension(&g, &[1, 0, 1]).unwrap();
        for a in 0..9u32 {
            for b in 0..9u32 {
                let (da, db) = (digits(a, 3, 2), digits(b, 3, 2));
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(t.add(a, b), pack(&sum, 3));
            }
        }
    }
}
