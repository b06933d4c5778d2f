//! Square matrices over the top field: Moore matrices, determinants,
//! first-column cofactors and dual bases.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FFMatrix {
    n: usize,
    entries: Vec<Elem>,
}

impl FFMatrix {
    pub fn zeros(n: usize) -> FFMatrix {
        FFMatrix { n, entries: vec![Elem::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> FFMatrix {
        let mut m = FFMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<FFMatrix> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::WrongLength { expected: n, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(FFMatrix { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> FFMatrix {
        let mut t = FFMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &FFMatrix) -> FFMatrix {
        assert_eq!(self.n, other.n);
        let mut out = FFMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let s = (0..self.n).fold(Elem::ZERO, |acc, k| {
                    ctx.add(acc, ctx.mul(self.get(i, k), other.get(k, j)))
                });
                out.set(i, j, s);
            }
        }
        out
    }

    /// The matrix with row `r` and column `c` deleted.
    pub fn minor(&self, r: usize, c: usize) -> FFMatrix {
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in (0..self.n).filter(|&i| i != r) {
            for j in (0..self.n).filter(|&j| j != c) {
                entries.push(self.get(i, j));
            }
        }
        FFMatrix { n, entries }
    }
}

/// Determinant by Gaussian elimination, pivoting on the first nonzero entry.
pub fn determinant(ctx: &FieldCtx, m: &FFMatrix) -> Elem {
    let n = m.n;
    let mut a = m.clone();
    let mut det = Elem::ONE;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
            return Elem::ZERO;
        };
        if piv != col {
            for j in 0..n {
                let (x, y) = (a.get(piv, j), a.get(col, j));
                a.set(piv, j, y);
                a.set(col, j, x);
            }
            det = ctx.neg(det);
        }
        let p = a.get(col, col);
        det = ctx.mul(det, p);
        let p_inv = ctx.inv(p).expect("pivot is nonzero");
        for r in col + 1..n {
            let f = ctx.mul(a.get(r, col), p_inv);
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let v = ctx.sub(a.get(r, j), ctx.mul(f, a.get(col, j)));
                a.set(r, j, v);
            }
        }
    }
    det
}

/// Determinant and the `(i, 0)` cofactors `(-1)^i det(minor(i, 0))`, each
/// minor eliminated on its own. Singular input is fine.
pub fn det_and_cofactors(ctx: &FieldCtx, m: &FFMatrix) -> (Elem, Vec<Elem>) {
    let det = determinant(ctx, m);
    let cof = (0..m.n)
        .map(|i| {
            let d = if m.n == 1 { Elem::ONE } else { determinant(ctx, &m.minor(i, 0)) };
            if i % 2 == 1 {
                ctx.neg(d)
            } else {
                d
            }
        })
        .collect();
    (det, cof)
}

/// Determinant by the permutation expansion. Factorial cost; an oracle for
/// small matrices only.
pub fn determinant_leibniz(ctx: &FieldCtx, m: &FFMatrix) -> Elem {
    let n = m.n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Elem::ZERO;
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let term = (0..n).fold(Elem::ONE, |acc, i| ctx.mul(acc, m.get(i, p[i])));
        total = if inversions % 2 == 0 { ctx.add(total, term) } else { ctx.sub(total, term) };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Moore matrix `(s_i^(q^k))` and whether it is non-singular.
pub fn moore_matrix(ctx: &FieldCtx, s: &[Elem]) -> Result<(FFMatrix, bool)> {
    let n = ctx.n();
    if s.len() != n {
        return Err(Error::WrongLength { expected: n, got: s.len() });
    }
    let mut m = FFMatrix::zeros(n);
    for (i, &x) in s.iter().enumerate() {
        for k in 0..n {
            m.set(i, k, ctx.frob(x, k));
        }
    }
    let is_basis = !determinant(ctx, &m).is_zero();
    Ok((m, is_basis))
}

/// Determinant of the `len(s) x len(s)` Moore matrix of `s` (any length up to `n`).
fn moore_det_small(ctx: &FieldCtx, s: &[Elem]) -> Elem {
    let k = s.len();
    if k == 0 {
        return Elem::ONE;
    }
    let mut m = FFMatrix::zeros(k);
    for (i, &x) in s.iter().enumerate() {
        for j in 0..k {
            m.set(i, j, ctx.frob(x, j));
        }
    }
    determinant_leibniz(ctx, &m)
}

/// First-column cofactors from the smaller Moore determinants:
/// `c_i = (-1)^i det(M_{W \ w_i})^q`, expanded by the permutation formula.
pub fn cofactors_leibniz(ctx: &FieldCtx, w: &[Elem]) -> Vec<Elem> {
    (0..w.len())
        .map(|i| {
            let rest: Vec<Elem> =
                w.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            let d = ctx.frob(moore_det_small(ctx, &rest), 1);
            if i % 2 == 1 {
                ctx.neg(d)
            } else {
                d
            }
        })
        .collect()
}

/// `prod_j prod_{x_0..x_{j-1} in F_q} (x_0 s_0 + ... + x_{j-1} s_{j-1} + s_j)`.
pub fn moore_product_formula(ctx: &FieldCtx, s: &[Elem]) -> Elem {
    let q = ctx.q() as u64;
    let mut acc = Elem::ONE;
    for j in 0..s.len() {
        let count = q.pow(j as u32);
        for idx in 0..count {
            let mut rem = idx;
            let mut v = s[j];
            for &si in &s[..j] {
                let x = Elem((rem % q) as u32);
                rem /= q;
                v = ctx.add(v, ctx.mul(x, si));
            }
            acc = ctx.mul(acc, v);
        }
    }
    acc
}

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub fn invert(ctx: &FieldCtx, m: &FFMatrix) -> Option<FFMatrix> {
    let n = m.n;
    let mut a = m.clone();
    let mut inv = FFMatrix::identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
        for j in 0..n {
            let (x, y) = (a.get(piv, j), a.get(col, j));
            a.set(piv, j, y);
            a.set(col, j, x);
            let (x, y) = (inv.get(piv, j), inv.get(col, j));
            inv.set(piv, j, y);
            inv.set(col, j, x);
        }
        let p_inv = ctx.inv(a.get(col, col))?;
        for j in 0..n {
            a.set(col, j, ctx.mul(a.get(col, j), p_inv));
            inv.set(col, j, ctx.mul(inv.get(col, j), p_inv));
        }
        for r in (0..n).filter(|&r| r != col) {
            let f = a.get(r, col);
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                a.set(r, j, ctx.sub(a.get(r, j), ctx.mul(f, a.get(col, j))));
                inv.set(r, j, ctx.sub(inv.get(r, j), ctx.mul(f, inv.get(col, j))));
            }
        }
    }
    Some(inv)
}

/// An ordered `F_q`-basis of the top field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis(Vec<Elem>);

impl Basis {
    pub fn new(ctx: &FieldCtx, elems: Vec<Elem>) -> Result<Basis> {
        let (_, ok) = moore_matrix(ctx, &elems)?;
        if ok {
            Ok(Basis(elems))
        } else {
            Err(Error::NotABasis)
        }
    }

    pub(crate) fn new_unchecked(elems: Vec<Elem>) -> Basis {
        Basis(elems)
    }

    /// `1, y, ..., y^(n-1)`.
    pub fn standard(ctx: &FieldCtx) -> Basis {
        let q = ctx.q();
        Basis((0..ctx.n() as u32).map(|k| Elem(q.pow(k))).collect())
    }

    /// `1, w, ..., w^(n-1)`.
    pub fn powers(ctx: &FieldCtx, w: Elem) -> Result<Basis> {
        Basis::new(ctx, (0..ctx.n() as u64).map(|k| ctx.pow(w, k)).collect())
    }

    /// `w, w^q, ..., w^(q^(n-1))`.
    pub fn normal(ctx: &FieldCtx, w: Elem) -> Result<Basis> {
        Basis::new(ctx, (0..ctx.n()).map(|k| ctx.frob(w, k)).collect())
    }

    /// Uniformly random ordered basis (rejection sampling).
    pub fn random<R: Rng>(ctx: &FieldCtx, rng: &mut R) -> Basis {
        loop {
            let elems: Vec<Elem> =
                (0..ctx.n()).map(|_| Elem(rng.gen_range(0..ctx.order()))).collect();
            if let Ok(b) = Basis::new(ctx, elems) {
                return b;
            }
        }
    }

    pub fn elems(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum x_j w_j` for coordinates over `F_q`.
    pub fn combine(&self, ctx: &FieldCtx, coords: &[Elem]) -> Elem {
        coords
            .iter()
            .zip(&self.0)
            .fold(Elem::ZERO, |acc, (&x, &w)| ctx.add(acc, ctx.mul(x, w)))
    }

    /// `(c w_0, ..., c w_(n-1))`.
    pub fn scaled(&self, ctx: &FieldCtx, c: Elem) -> Result<Basis> {
        Basis::new(ctx, self.0.iter().map(|&w| ctx.mul(c, w)).collect())
    }
}

impl std::ops::Index<usize> for Basis {
    type Output = Elem;
    fn index(&self, i: usize) -> &Elem {
        &self.0[i]
    }
}

fn check_duality(ctx: &FieldCtx, w: &Basis, b: &[Elem]) -> bool {
    (0..w.len()).all(|i| {
        (0..w.len()).all(|j| {
            let t = ctx.trace(ctx.mul(b[i], w[j]));
            t == if i == j { Elem::ONE } else { Elem::ZERO }
        })
    })
}

/// Dual basis from the first-column cofactors: `beta_i = det^-1 c_i`,
/// checked against the trace conditions before returning.
pub fn dual_basis(ctx: &FieldCtx, w: &Basis) -> Result<Basis> {
    let (m, _) = moore_matrix(ctx, w.elems())?;
    let (det, cof) = det_and_cofactors(ctx, &m);
    let det_inv = ctx.inv(det).ok_or(Error::NotABasis)?;
    let beta: Vec<Elem> = cof.iter().map(|&c| ctx.mul(det_inv, c)).collect();
    if !check_duality(ctx, w, &beta) {
        return Err(Error::Internal("cofactor dual basis fails the trace conditions".into()));
    }
    Ok(Basis(beta))
}

/// Dual basis by solving `sum_l b_il Tr(y^l w_j) = [i = j]` over `F_q`.
pub fn dual_basis_by_solve(ctx: &FieldCtx, w: &Basis) -> Result<Basis> {
    let n = ctx.n();
    let y = ctx.y();
    let mut a = FFMatrix::zeros(n);
    for l in 0..n {
        let yl = ctx.pow(y, l as u64);
        for j in 0..n {
            a.set(l, j, ctx.trace(ctx.mul(yl, w[j])));
        }
    }
    let b = invert(ctx, &a).ok_or(Error::NotABasis)?;
    let beta: Vec<Elem> = (0..n)
        .map(|i| {
            (0..n).fold(Elem::ZERO, |acc, l| {
                ctx.add(acc, ctx.mul(b.get(i, l), ctx.pow(y, l as u64)))
            })
        })
        .collect();
    if !check_duality(ctx, w, &beta) {
        return Err(Error::Internal("solved dual basis fails the trace conditions".into()));
    }
    Ok(Basis(beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldCtx {
        FieldCtx::auto(3, 1, 2).unwrap()
    }

    #[test]
    fn moore_matrix_small_example() {
        let ctx = f9();
        let i = ctx.y();
        let (m, ok) = moore_matrix(&ctx, &[Elem::ONE, i]).unwrap();
        assert!(ok);
        assert_eq!(m.rows(), vec![vec![Elem::ONE, Elem::ONE], vec![i, ctx.neg(i)]]);
        let (_, ok) = moore_matrix(&ctx, &[Elem::ONE, Elem(2)]).unwrap();
        assert!(!ok);
        let (_, ok) = moore_matrix(&ctx, &[Elem::ZERO, i]).unwrap();
        assert!(!ok);
        assert!(matches!(moore_matrix(&ctx, &[i]), Err(Error::WrongLength { .. })));
    }

    #[test]
    fn det_and_cofactors_small_example() {
        let ctx = f9();
        let i = ctx.y();
        let (m, _) = moore_matrix(&ctx, &[Elem::ONE, i]).unwrap();
        let (det, cof) = det_and_cofactors(&ctx, &m);
        assert_eq!(det, i);
        assert_eq!(cof, vec![ctx.neg(i), ctx.neg(Elem::ONE)]);
        assert_eq!(determinant_leibniz(&ctx, &m), det);
        assert_eq!(cofactors_leibniz(&ctx, &[Elem::ONE, i]), cof);
        assert_eq!(determinant(&ctx, &FFMatrix::identity(3)), Elem::ONE);
    }

    #[test]
    fn dual_basis_small_example() {
        let ctx = f9();
        let w = Basis::new(&ctx, vec![Elem::ONE, ctx.y()]).unwrap();
        let b = dual_basis(&ctx, &w).unwrap();
        assert_eq!(b.elems(), &[Elem(2), ctx.y()]);
        assert_eq!(dual_basis_by_solve(&ctx, &w).unwrap(), b);
    }

    #[test]
    fn product_formula_and_inverse() {
        let ctx = FieldCtx::auto(2, 1, 3).unwrap();
        let mut seen = 0;
        for a in ctx.elements() {
            for b in ctx.elements() {
                let s = [Elem::ONE, a, b];
                let (m, _) = moore_matrix(&ctx, &s).unwrap();
                let d = determinant(&ctx, &m);
                assert_eq!(d, moore_product_formula(&ctx, &s));
                if let Some(inv) = invert(&ctx, &m) {
                    assert_eq!(m.mul(&ctx, &inv), FFMatrix::identity(3));
                    seen += 1;
                } else {
                    assert!(d.is_zero());
                }
            }
        }
        assert!(seen > 0);
    }
}
