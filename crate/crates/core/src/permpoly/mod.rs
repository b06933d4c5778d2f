//! Homogeneous permutations of the top field assembled class by class from a
//! bijection of projective space, the concrete families built that way, and
//! the verifiers and interpolation used to check them.

mod build;
mod interp;
mod verify;

use std::sync::Arc;

use crate::field::{Elem, FieldCtx};
use crate::gmt::{GmtContext, InverseRoute, MuElement};
use crate::linalg::Basis;
use crate::poly::UniPoly;
use crate::projective::{canonical, PgMap};

pub use build::{
    build_from_bijection, construct_prop312, construct_thm310, construct_thm36,
    construct_thm36_tables, construct_thm37, Thm37Params,
};
pub use interp::{index_decompose, interpolate_function, interpolate_univariate, Domain, IndexDecomposition};
pub use verify::{
    agw_for_polynomial, verify_agw, verify_agw_with_h, verify_homogeneous, verify_homogeneous_fn,
    verify_permutation, verify_permutation_on, AgwPolyReport, AgwReport, HomogeneityReport,
    PermutationReport,
};

/// An `F_q`-linear form `x -> sum_k a_k x^(q^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinForm {
    pub coeffs: Vec<Elem>,
}

impl LinForm {
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Elem::ZERO, |acc, (k, &a)| ctx.add(acc, ctx.mul(a, ctx.frob(x, k))))
    }

    /// `Tr(beta x)`.
    pub fn trace_of(ctx: &FieldCtx, beta: Elem) -> LinForm {
        LinForm { coeffs: (0..ctx.n()).map(|k| ctx.frob(beta, k)).collect() }
    }

    /// `x^q - c x`.
    pub fn frob_minus(c: Elem, ctx: &FieldCtx) -> LinForm {
        let mut coeffs = vec![Elem::ZERO; ctx.n()];
        coeffs[0] = ctx.neg(c);
        coeffs[1] = Elem::ONE;
        LinForm { coeffs }
    }

    pub fn x(ctx: &FieldCtx) -> LinForm {
        let mut coeffs = vec![Elem::ZERO; ctx.n()];
        coeffs[0] = Elem::ONE;
        LinForm { coeffs }
    }
}

/// A branch written as `sum_m c_m prod_i L_i(x)^(e_mi)` over named linear forms.
/// Valid on every field element, so a branch can be interpolated on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchForm {
    pub forms: Vec<LinForm>,
    pub form_names: Vec<String>,
    pub terms: Vec<(Elem, Vec<u64>)>,
}

impl BranchForm {
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let vals: Vec<Elem> = self.forms.iter().map(|f| f.eval(ctx, x)).collect();
        self.terms.iter().fold(Elem::ZERO, |acc, (c, es)| {
            let mono = vals
                .iter()
                .zip(es)
                .fold(*c, |m, (&v, &e)| if e == 0 { m } else { ctx.mul(m, ctx.pow(v, e)) });
            ctx.add(acc, mono)
        })
    }

    pub fn render(&self, ctx: &FieldCtx) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, es)| {
                let mut s = if *c == Elem::ONE { String::new() } else { format!("({})", ctx.render(*c)) };
                for (name, &e) in self.form_names.iter().zip(es) {
                    match e {
                        0 => {}
                        1 => s.push_str(name),
                        _ => s.push_str(&format!("{name}^{e}")),
                    }
                }
                if s.is_empty() {
                    "1".into()
                } else {
                    s
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// One piece of a piecewise permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchInfo {
    pub label: String,
    /// Class `j` of the inputs this branch is used on.
    pub class: usize,
    /// Closed form; `None` when the branch is only defined through a table.
    pub form: Option<BranchForm>,
}

/// Which construction produced a permutation, with its defining parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Any bijection of projective space.
    Generic,
    /// Class-preserving, `H_j` tabulated on `F_q` for `j = 1..n-1`.
    Thm36 { h: Vec<Vec<Elem>> },
    /// Quadratic extensions from `(H, a, b, u, v, w)`.
    Thm37 { params: Thm37Params, monomial_shortcut: bool },
    /// Parity twist on class 1.
    Thm310 { delta: Elem, alpha: Elem, d: u64 },
    /// Three-set swap on `PG(2, q)`.
    Prop312,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Generic => "generic",
            Family::Thm36 { .. } => "thm36",
            Family::Thm37 { .. } => "thm37",
            Family::Thm310 { .. } => "thm310",
            Family::Prop312 => "prop312",
        }
    }
}

/// A map on the top field defined on each class by its own branch:
/// `f(0) = 0` and, on class `j`,
/// `f(x) = Tr(beta_j x)^r sum_k g_k(Tr(beta_0 x)/Tr(beta_j x), ..., 1, 0, ...) gamma_k`.
#[derive(Clone, Debug)]
pub struct PiecewisePermutation {
    gmt: Arc<GmtContext>,
    y: Basis,
    r: u64,
    pg_map: PgMap,
    family: Family,
    branches: Vec<BranchInfo>,
}

impl PiecewisePermutation {
    pub fn field(&self) -> &FieldCtx {
        self.gmt.field()
    }
    pub fn gmt(&self) -> &Arc<GmtContext> {
        &self.gmt
    }
    pub fn y(&self) -> &Basis {
        &self.y
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn pg_map(&self) -> &PgMap {
        &self.pg_map
    }
    pub fn family(&self) -> &Family {
        &self.family
    }
    pub fn branches(&self) -> &[BranchInfo] {
        &self.branches
    }

    /// Which branch handles `x`; `None` for zero.
    pub fn branch_of(&self, x: Elem) -> Option<usize> {
        if x.is_zero() {
            return None;
        }
        let ctx = self.field();
        let t = self.gmt.traces(x);
        let j = t.iter().rposition(|v| !v.is_zero()).expect("nonzero element");
        Some(match &self.family {
            Family::Generic | Family::Thm36 { .. } | Family::Thm37 { .. } => j,
            Family::Thm310 { delta, .. } => match j {
                0 => 0,
                1 => {
                    let x0 = ctx.mul(t[0], ctx.inv(t[1]).expect("nonzero"));
                    let even = x0.is_zero()
                        || crate::field::bsgs(ctx, *delta, x0, ctx.q() as u64 - 1)
                            .expect("delta generates F_q^*").is_multiple_of(2);
                    if even {
                        2
                    } else {
                        1
                    }
                }
                j => j + 1,
            },
            Family::Prop312 => {
                let z: Vec<bool> = t.iter().map(|v| v.is_zero()).collect();
                match (z[0], z[1], z[2]) {
                    (true, true, false) => 0,
                    (false, true, true) => 1,
                    (false, true, false) => 2,
                    (_, false, true) => 3,
                    (_, false, false) => 4,
                    (true, true, true) => unreachable!("nonzero element"),
                }
            }
        })
    }

    /// Evaluates through the closed branch forms where available.
    pub fn eval(&self, x: Elem) -> Elem {
        match self.branch_of(x) {
            None => Elem::ZERO,
            Some(b) => match &self.branches[b].form {
                Some(form) => form.eval(self.field(), x),
                None => self.eval_via_pg(x),
            },
        }
    }

    /// Evaluates through the table of the projective bijection.
    pub fn eval_via_pg(&self, x: Elem) -> Elem {
        if x.is_zero() {
            return Elem::ZERO;
        }
        let ctx = self.field();
        let t = self.gmt.traces(x);
        let p = canonical(ctx, &t).expect("nonzero element");
        let tj = t[p.level()];
        let g = self.pg_map.raw_image(&p);
        let s = self.y.combine(ctx, g);
        ctx.mul(ctx.pow(tj, self.r), s)
    }

    /// A branch evaluated on any input: its closed form if it has one,
    /// otherwise the map restricted to the branch and zero elsewhere.
    pub fn eval_branch_extended(&self, b: usize, x: Elem) -> Elem {
        match &self.branches[b].form {
            Some(form) => form.eval(self.field(), x),
            None if self.branch_of(x) == Some(b) => self.eval_via_pg(x),
            None => Elem::ZERO,
        }
    }

    /// The branch polynomial on the class-`j` part of the roots of unity:
    /// `h_j(x) = det^-r T_{W,j}(x)^r sum_k g_k(phi_W(x)) gamma_k`.
    pub fn h_on_mu(&self, x: MuElement) -> Elem {
        let ctx = self.field();
        let p = self.gmt.psi_inverse(x, InverseRoute::TPoly);
        let j = p.level();
        let tj = self.gmt.t_eval(j, x.elem()).expect("valid class");
        let det_inv = ctx.inv(self.gmt.det()).expect("basis");
        let g = self.pg_map.raw_image(&p);
        let s = self.y.combine(ctx, g);
        ctx.mul(ctx.pow(ctx.mul(det_inv, tj), self.r), s)
    }

    /// `h` on the whole field, zero off the roots of unity.
    pub fn h_table(&self) -> Vec<Elem> {
        let ctx = self.field();
        ctx.elements()
            .map(|x| match MuElement::new(ctx, x) {
                Ok(m) => self.h_on_mu(m),
                Err(_) => Elem::ZERO,
            })
            .collect()
    }

    /// `h` as a polynomial of degree below the field order.
    pub fn h_poly(&self) -> UniPoly {
        let ctx = self.field();
        crate::poly::interpolate_values(ctx, ctx.order() as u64, &self.h_table())
    }
}
