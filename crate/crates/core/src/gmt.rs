//! The generalized Möbius transformation `psi_W(x_0 : ... : x_{n-1}) =
//! (sum x_j w_j)^(q-1)` from `PG(n-1, q)` onto the `(q^n-1)/(q-1)`-th roots
//! of unity, its inverse through the projective polynomials `T_{W,i}`, and the
//! partitions of the field, the roots of unity and projective space by class.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{det_and_cofactors, moore_matrix, Basis, FFMatrix};
use crate::poly::UniPoly;
use crate::projective::{canonical, enumerate_pg, ProjPoint};

/// An element known to satisfy `x^((q^n-1)/(q-1)) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MuElement(Elem);

impl MuElement {
    pub fn new(ctx: &FieldCtx, x: Elem) -> Result<MuElement> {
        if ctx.is_in_mu(x) {
            Ok(MuElement(x))
        } else {
            Err(Error::NotInMu)
        }
    }

    pub fn elem(self) -> Elem {
        self.0
    }
}

/// How [`GmtContext::psi_inverse`] recovers the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseRoute {
    /// Ratios of the `T_{W,i}(x)` against the last nonzero one.
    TPoly,
    /// Coordinates `Tr(beta_i y)` of any `y` with `y^(q-1) = x`.
    Trace,
}

/// Everything derived from one basis `W`.
#[derive(Clone, Debug)]
pub struct GmtContext {
    ctx: Arc<FieldCtx>,
    w: Basis,
    moore: FFMatrix,
    det: Elem,
    cofactors: Vec<Elem>,
    dual: Basis,
    /// `t_coeffs[i][k] = (-1)^(k(n-1)) c_i^(q^k)`.
    t_coeffs: Vec<Vec<Elem>>,
    /// `(q^k - 1) / (q - 1)` for `k < n`.
    exponents: Vec<u64>,
    /// `sigma` with `w_i = w_0^(q^sigma(i))` when `W` is a Frobenius orbit.
    normal_order: Option<Vec<usize>>,
}

impl GmtContext {
    pub fn new(ctx: Arc<FieldCtx>, w: Basis) -> Result<GmtContext> {
        let n = ctx.n();
        let (moore, is_basis) = moore_matrix(&ctx, w.elems())?;
        if !is_basis {
            return Err(Error::NotABasis);
        }
        let (det, cofactors) = det_and_cofactors(&ctx, &moore);
        let det_inv = ctx.inv(det).ok_or(Error::NotABasis)?;
        let dual = Basis::new_unchecked(cofactors.iter().map(|&c| ctx.mul(det_inv, c)).collect());
        let normal_order = frobenius_order(&ctx, w.elems());
        if let Some(sigma) = &normal_order {
            for (i, &s) in sigma.iter().enumerate() {
                let mut v = ctx.frob(cofactors[0], s);
                if (n - 1) * s % 2 == 1 {
                    v = ctx.neg(v);
                }
                if v != cofactors[i] {
                    return Err(Error::Internal(format!(
                        "normal-basis cofactor shortcut disagrees at i={i}"
                    )));
                }
            }
        }
        let t_coeffs = cofactors
            .iter()
            .map(|&c| {
                (0..n)
                    .map(|k| {
                        let v = ctx.frob(c, k);
                        if k * (n - 1) % 2 == 1 {
                            ctx.neg(v)
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let q = ctx.q() as u64;
        let mut exponents = Vec::with_capacity(n);
        let mut e = 0u64;
        for k in 0..n {
            exponents.push(e);
            e += q.pow(k as u32);
        }
        Ok(GmtContext { ctx, w, moore, det, cofactors, dual, t_coeffs, exponents, normal_order })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn basis(&self) -> &Basis {
        &self.w
    }
    pub fn moore(&self) -> &FFMatrix {
        &self.moore
    }
    pub fn det(&self) -> Elem {
        self.det
    }
    pub fn cofactors(&self) -> &[Elem] {
        &self.cofactors
    }
    pub fn dual(&self) -> &Basis {
        &self.dual
    }
    pub fn is_normal(&self) -> bool {
        self.normal_order.is_some()
    }
    /// Exponents `(q^k - 1)/(q - 1)` of the projective polynomials.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }
    /// Coefficients of `T_{W,i}` against [`GmtContext::exponents`].
    pub fn t_coeffs(&self, i: usize) -> Result<&[Elem]> {
        self.t_coeffs
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange { index: i, len: self.t_coeffs.len() })
    }

    /// `T_{W,i}` as an expanded polynomial.
    pub fn t_poly(&self, i: usize) -> Result<UniPoly> {
        let c = self.t_coeffs(i)?;
        Ok(UniPoly::from_terms(
            &self.ctx,
            self.exponents.iter().zip(c).map(|(&e, &c)| (e as usize, c)),
        ))
    }

    /// `T_{W,i}(x)`; defined for every field element.
    pub fn t_eval(&self, i: usize, x: Elem) -> Result<Elem> {
        let c = self.t_coeffs(i)?;
        Ok(self.t_eval_unchecked(c, x))
    }

    fn t_eval_unchecked(&self, c: &[Elem], x: Elem) -> Elem {
        let ctx = &self.ctx;
        c.iter()
            .zip(&self.exponents)
            .fold(Elem::ZERO, |acc, (&c, &e)| ctx.add(acc, ctx.mul(c, ctx.pow(x, e))))
    }

    /// `T_{W,0}(x), ..., T_{W,n-1}(x)`.
    pub fn t_all(&self, x: Elem) -> Vec<Elem> {
        self.t_coeffs.iter().map(|c| self.t_eval_unchecked(c, x)).collect()
    }

    /// Coordinates `Tr(beta_i y)` of `y` in the basis `W`.
    pub fn traces(&self, y: Elem) -> Vec<Elem> {
        self.dual.elems().iter().map(|&b| self.ctx.trace(self.ctx.mul(b, y))).collect()
    }

    pub fn psi(&self, p: &ProjPoint) -> MuElement {
        let s = self.w.combine(&self.ctx, p.coords());
        MuElement(self.ctx.pow(s, self.ctx.q() as u64 - 1))
    }

    /// `psi` on an arbitrary nonzero coordinate vector.
    pub fn psi_vec(&self, v: &[Elem]) -> Result<MuElement> {
        let p = canonical(&self.ctx, v)?;
        Ok(self.psi(&p))
    }

    pub fn psi_inverse(&self, x: MuElement, route: InverseRoute) -> ProjPoint {
        let coords = match route {
            InverseRoute::TPoly => self.t_all(x.0),
            InverseRoute::Trace => {
                let y = self.ctx.qm1_root(x.0).expect("elements of mu have (q-1)-th roots");
                self.traces(y)
            }
        };
        canonical(&self.ctx, &coords).expect("T polynomials have no common root on mu")
    }

    /// `psi_inverse` for an unchecked element.
    pub fn psi_inverse_elem(&self, x: Elem, route: InverseRoute) -> Result<ProjPoint> {
        Ok(self.psi_inverse(MuElement::new(&self.ctx, x)?, route))
    }

    /// Class of an element of `mu`: the largest `i` with `T_{W,i}(x) != 0`.
    pub fn partition_index_mu(&self, x: MuElement) -> usize {
        let t = self.t_all(x.0);
        t.iter().rposition(|v| !v.is_zero()).expect("T polynomials have no common root on mu")
    }

    /// Class of a nonzero element: the largest `i` with `Tr(beta_i y) != 0`.
    pub fn partition_index(&self, y: Elem) -> Result<usize> {
        if y.is_zero() {
            return Err(Error::ZeroInput);
        }
        let t = self.traces(y);
        t.iter()
            .rposition(|v| !v.is_zero())
            .ok_or_else(|| Error::Internal("all coordinates of a nonzero element vanish".into()))
    }

    /// Exhaustive check of the three partitions and of
    /// `Z_j = psi(C_j) = S_j^(q-1)`.
    pub fn verify_partitions(&self) -> Result<PartitionReport> {
        let ctx = &self.ctx;
        let n = ctx.n();
        let q = ctx.q() as u64;
        let size = ctx.order() as usize;
        let fail = |msg: String| Err(Error::PartitionViolation(msg));

        let mut s_sizes = vec![0u64; n];
        let mut s_class = vec![usize::MAX; size];
        for y in ctx.nonzero_elements() {
            let j = self.partition_index(y)?;
            s_sizes[j] += 1;
            s_class[y.0 as usize] = j;
        }
        // S_j as the set of lambda (x_0 w_0 + ... + x_{j-1} w_{j-1} + w_j)
        for p in enumerate_pg(ctx) {
            let j = p.level();
            for lambda in ctx.base_elements().skip(1) {
                let v: Vec<Elem> = p.coords().iter().map(|&c| ctx.mul(c, lambda)).collect();
                let y = self.w.combine(ctx, &v);
                if s_class[y.0 as usize] != j {
                    return fail(format!("element {} of the span form lies outside S_{j}", y.0));
                }
            }
        }

        let mut z_sizes = vec![0u64; n];
        let mut z_class = vec![usize::MAX; size];
        for x in ctx.mu_elements() {
            let j = self.partition_index_mu(MuElement(x));
            z_sizes[j] += 1;
            z_class[x.0 as usize] = j;
        }

        let mut c_sizes = vec![0u64; n];
        let mut hit = vec![false; size];
        for p in enumerate_pg(ctx) {
            let j = p.level();
            c_sizes[j] += 1;
            let x = self.psi(&p).0;
            if hit[x.0 as usize] {
                return fail(format!("psi is not injective at {:?}", p.coords()));
            }
            hit[x.0 as usize] = true;
            if z_class[x.0 as usize] != j {
                return fail(format!("psi maps class {j} outside Z_{j}"));
            }
        }
        for y in ctx.nonzero_elements() {
            let x = ctx.pow(y, q - 1);
            if z_class[x.0 as usize] != s_class[y.0 as usize] {
                return fail(format!("(q-1)-th power of {} leaves its class", y.0));
            }
        }
        for j in 0..n {
            let qj = q.pow(j as u32);
            if s_sizes[j] != (q - 1) * qj || z_sizes[j] != qj || c_sizes[j] != qj {
                return fail(format!(
                    "class {j} sizes S={} Z={} C={}",
                    s_sizes[j], z_sizes[j], c_sizes[j]
                ));
            }
        }
        Ok(PartitionReport { s_sizes, z_sizes, c_sizes })
    }
}

/// Class sizes confirmed by [`GmtContext::verify_partitions`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub s_sizes: Vec<u64>,
    pub z_sizes: Vec<u64>,
    pub c_sizes: Vec<u64>,
}

fn frobenius_order(ctx: &FieldCtx, w: &[Elem]) -> Option<Vec<usize>> {
    let n = ctx.n();
    let orbit: Vec<Elem> = (0..n).map(|k| ctx.frob(w[0], k)).collect();
    let sigma: Vec<usize> = w
        .iter()
        .map(|x| orbit.iter().position(|o| o == x))
        .collect::<Option<_>>()?;
    let mut seen = vec![false; n];
    for &s in &sigma {
        if std::mem::replace(&mut seen[s], true) {
            return None;
        }
    }
    Some(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9_gmt() -> GmtContext {
        let ctx = Arc::new(FieldCtx::auto(3, 1, 2).unwrap());
        let w = Basis::new(&ctx, vec![Elem::ONE, ctx.y()]).unwrap();
        GmtContext::new(ctx, w).unwrap()
    }

    #[test]
    fn projective_polynomials_small_example() {
        let g = f9_gmt();
        let ctx = g.field();
        let i = ctx.y();
        let mi = ctx.neg(i);
        // T_0 = -i x - i, T_1 = x - 1
        assert_eq!(g.t_coeffs(0).unwrap(), &[mi, mi]);
        assert_eq!(g.t_coeffs(1).unwrap(), &[ctx.neg(Elem::ONE), Elem::ONE]);
        assert_eq!(g.t_eval(0, i).unwrap(), ctx.sub(Elem::ONE, i));
        assert_eq!(g.t_eval(1, Elem::ONE).unwrap(), Elem::ZERO);
        assert_eq!(g.t_eval(1, Elem::ZERO).unwrap(), g.cofactors()[1]);
        assert!(matches!(g.t_eval(2, i), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn psi_small_example() {
        let g = f9_gmt();
        let ctx = g.field();
        let i = ctx.y();
        let pt = |a: u32, b: u32| canonical(ctx, &[Elem(a), Elem(b)]).unwrap();
        assert_eq!(g.psi(&pt(1, 0)).elem(), Elem::ONE);
        assert_eq!(g.psi(&pt(1, 1)).elem(), ctx.neg(i));
        assert_eq!(g.psi(&pt(2, 1)).elem(), i);
        for route in [InverseRoute::TPoly, InverseRoute::Trace] {
            assert_eq!(g.psi_inverse_elem(Elem::ONE, route).unwrap(), pt(1, 0));
            assert_eq!(g.psi_inverse_elem(i, route).unwrap(), pt(2, 1));
            assert_eq!(g.psi_inverse_elem(ctx.neg(Elem::ONE), route).unwrap(), pt(0, 1));
        }
        assert_eq!(g.psi_inverse_elem(ctx.add(Elem::ONE, i), InverseRoute::TPoly), Err(Error::NotInMu));
    }

    #[test]
    fn partition_index_small_example() {
        let g = f9_gmt();
        let ctx = g.field();
        assert_eq!(g.partition_index(Elem(2)).unwrap(), 0);
        assert_eq!(g.partition_index(ctx.y()).unwrap(), 1);
        assert_eq!(g.partition_index(Elem::ZERO), Err(Error::ZeroInput));
        let rep = g.verify_partitions().unwrap();
        assert_eq!(rep.s_sizes, vec![2, 6]);
    }

    #[test]
    fn normal_basis_cubic_closed_form() {
        // for a normal basis of a cubic extension, T_i has coefficients
        // alpha^(q^(i+1)), alpha^(q^(i+2)), alpha^(q^(i+3)) with alpha = w^(q+1) - w^(2q^2)
        let ctx = Arc::new(FieldCtx::auto(2, 2, 3).unwrap());
        let mut tested = 0;
        for w in ctx.nonzero_elements() {
            let Ok(b) = Basis::normal(&ctx, w) else { continue };
            let g = GmtContext::new(ctx.clone(), b).unwrap();
            assert!(g.is_normal());
            let q = ctx.q() as u64;
            let alpha = ctx.sub(ctx.pow(w, q + 1), ctx.pow(w, 2 * q * q));
            for i in 0..3 {
                let expect: Vec<Elem> = (1..=3).map(|s| ctx.frob(alpha, i + s)).collect();
                assert_eq!(g.t_coeffs(i).unwrap(), expect.as_slice());
            }
            tested += 1;
        }
        assert!(tested > 0);
    }
}
