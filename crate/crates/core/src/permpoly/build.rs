use std::sync::Arc;

use super::{BranchForm, BranchInfo, Family, LinForm, PiecewisePermutation};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::gmt::GmtContext;
use crate::linalg::Basis;
use crate::poly::{interpolate_values, UniPoly};
use crate::projective::{check_pg_map, is_permutation_of_fq, ParityParams, PgMap, PgVerdict};

fn check_r(ctx: &FieldCtx, r: u64) -> Result<()> {
    let qm1 = ctx.q() as u64 - 1;
    if r == 0 || gcd(r, qm1) != 1 {
        return Err(Error::BadR { r, qm1 });
    }
    Ok(())
}

fn trace_forms(gmt: &GmtContext) -> (Vec<LinForm>, Vec<String>) {
    let ctx = gmt.field();
    let forms = gmt.dual().elems().iter().map(|&b| LinForm::trace_of(ctx, b)).collect();
    let names = (0..ctx.n()).map(|i| format!("Tr{i}")).collect();
    (forms, names)
}

/// Exponent vector over the trace forms with the given nonzero entries.
fn exps(n: usize, entries: &[(usize, u64)]) -> Vec<u64> {
    let mut e = vec![0; n];
    for &(i, v) in entries {
        e[i] += v;
    }
    e
}

fn class_label(j: usize) -> String {
    format!("class {j}")
}

/// The generic builder: any projective bijection, any second basis `Y`, any
/// `r` coprime to `q - 1`.
pub fn build_from_bijection(
    gmt: Arc<GmtContext>,
    y: Basis,
    g: PgMap,
    r: u64,
) -> Result<PiecewisePermutation> {
    let ctx = gmt.field();
    check_r(ctx, r)?;
    check_y(ctx, &y)?;
    match check_pg_map(ctx, &g) {
        PgVerdict::Bijection(_) => {}
        other => return Err(Error::NotBijection(format!("{other:?}"))),
    }
    let branches = (0..ctx.n())
        .map(|j| BranchInfo { label: class_label(j), class: j, form: None })
        .collect();
    Ok(PiecewisePermutation { gmt, y, r, pg_map: g, family: Family::Generic, branches })
}

fn check_y(ctx: &FieldCtx, y: &Basis) -> Result<()> {
    if y.len() != ctx.n() {
        return Err(Error::WrongLength { expected: ctx.n(), got: y.len() });
    }
    Ok(())
}

/// Tabulates a polynomial on `F_q`, requiring it to permute `F_q`.
fn table_on_fq(ctx: &FieldCtx, h: &UniPoly, name: &str) -> Result<Vec<Elem>> {
    let t: Vec<Elem> = ctx.base_elements().map(|x| h.eval(ctx, x)).collect();
    if is_permutation_of_fq(ctx, &t) {
        Ok(t)
    } else {
        Err(Error::NotPermutationOfFq(name.into()))
    }
}

/// Class-preserving family: on class `j`,
/// `Tr_j^r (sum_{k<j} H_j(Tr_k / Tr_j) gamma_k + gamma_j)`.
pub fn construct_thm36(
    gmt: Arc<GmtContext>,
    y: Basis,
    h: &[UniPoly],
    r: u64,
) -> Result<PiecewisePermutation> {
    let ctx = gmt.field();
    if h.len() + 1 != ctx.n() {
        return Err(Error::BadParams(format!(
            "expected {} polynomials H_1..H_(n-1), got {}",
            ctx.n() - 1,
            h.len()
        )));
    }
    let tables = h
        .iter()
        .enumerate()
        .map(|(j, p)| table_on_fq(ctx, p, &format!("H_{}", j + 1)))
        .collect::<Result<Vec<_>>>()?;
    construct_thm36_tables(gmt, y, tables, r)
}

/// [`construct_thm36`] with each `H_j` given as its table on `F_q`.
pub fn construct_thm36_tables(
    gmt: Arc<GmtContext>,
    y: Basis,
    tables: Vec<Vec<Elem>>,
    r: u64,
) -> Result<PiecewisePermutation> {
    let ctx = gmt.field();
    let n = ctx.n();
    check_r(ctx, r)?;
    check_y(ctx, &y)?;
    if tables.len() + 1 != n {
        return Err(Error::BadParams(format!("expected {} tables, got {}", n - 1, tables.len())));
    }
    let mut reduced = Vec::with_capacity(tables.len());
    for (j, t) in tables.iter().enumerate() {
        if !is_permutation_of_fq(ctx, t) {
            return Err(Error::NotPermutationOfFq(format!("H_{}", j + 1)));
        }
        let p = interpolate_values(ctx, ctx.q() as u64, t);
        let d = p.degree().unwrap_or(0) as u64;
        if d > r {
            return Err(Error::BadR { r, qm1: ctx.q() as u64 - 1 });
        }
        reduced.push(p);
    }
    let pg_map = PgMap::coordinatewise_h(ctx, tables.clone())?;
    let (forms, names) = trace_forms(&gmt);
    let branches = (0..n)
        .map(|j| {
            let mut terms = Vec::new();
            for k in 0..j {
                for (e, c) in reduced[j - 1].terms() {
                    let e = e as u64;
                    terms.push((ctx.mul(c, y[k]), exps(n, &[(k, e), (j, r - e)])));
                }
            }
            terms.push((y[j], exps(n, &[(j, r)])));
            BranchInfo {
                label: class_label(j),
                class: j,
                form: Some(BranchForm { forms: forms.clone(), form_names: names.clone(), terms }),
            }
        })
        .collect();
    Ok(PiecewisePermutation {
        gmt,
        y,
        r,
        pg_map,
        family: Family::Thm36 { h: tables },
        branches,
    })
}

/// Parameters of the quadratic-extension family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm37Params {
    pub h: UniPoly,
    pub r: u64,
    pub a: Elem,
    pub b: Elem,
    pub u: Elem,
    pub v: Elem,
    pub w: Elem,
}

/// Over `F_{q^2}`: `F(x) = a w^(r-d) (v-u)^r x^r` when `x^q = v x`, and
/// `(x^q - v x)^r (a w^-d H(w (x^q - u x)/(x^q - v x)) + b)` otherwise.
pub fn construct_thm37(ctx: Arc<FieldCtx>, params: Thm37Params) -> Result<PiecewisePermutation> {
    if ctx.n() != 2 {
        return Err(Error::WrongN { expected: 2, got: ctx.n() });
    }
    let Thm37Params { h, r, a, b, u, v, w } = params.clone();
    let q = ctx.q() as u64;
    let bad = |m: String| Err(Error::BadParams(m));
    let d = h.degree().ok_or_else(|| Error::BadParams("H is the zero polynomial".into()))? as u64;
    if r < d {
        return bad(format!("r={r} is smaller than deg H={d}"));
    }
    if gcd(r, q - 1) != 1 {
        return bad(format!("gcd(r={r}, q-1={}) != 1", q - 1));
    }
    if a.is_zero() || b.is_zero() {
        return bad("a and b must be nonzero".into());
    }
    for (name, x) in [("u", u), ("v", v)] {
        if x.is_zero() || ctx.pow(x, q + 1) != Elem::ONE {
            return bad(format!("{name} is not a (q+1)-th root of unity"));
        }
    }
    if u == v {
        return bad("u must differ from v".into());
    }
    let u_over_v = ctx.div(u, v)?;
    let a_over_b = ctx.div(a, b)?;
    if ctx.pow(u_over_v, d) == ctx.pow(a_over_b, q - 1) {
        return bad("(u/v)^d equals (a/b)^(q-1)".into());
    }
    if w.is_zero() || ctx.pow(w, q - 1) != u_over_v {
        return bad("w^(q-1) must equal u/v".into());
    }
    let h_table: Vec<Elem> = ctx.base_elements().map(|x| h.eval(&ctx, x)).collect();
    if !is_permutation_of_fq(&ctx, &h_table) {
        return bad("H does not permute F_q".into());
    }

    // w0^(q-1) = v and w1 = -w w0 give a basis with w1^(q-1) = u
    let w0 = ctx.qm1_root(v).expect("v lies in mu_(q+1)");
    let w1 = ctx.neg(ctx.mul(w, w0));
    let wb = Basis::new(&ctx, vec![w0, w1])?;
    let gmt = Arc::new(GmtContext::new(ctx.clone(), wb)?);
    let w0_inv_r = ctx.pow(ctx.inv(w0).expect("nonzero"), r);
    let w_inv_d = ctx.pow(ctx.inv(w).expect("nonzero"), d);
    let det_r = ctx.pow(gmt.det(), r);
    let gamma0 = ctx.mul(det_r, ctx.mul(a, ctx.mul(w_inv_d, w0_inv_r)));
    let gamma1 = ctx.mul(det_r, ctx.mul(b, w0_inv_r));
    let y = Basis::new(&ctx, vec![gamma0, gamma1])
        .map_err(|_| Error::Internal("derived second basis is degenerate".into()))?;
    let pg_map = PgMap::coordinatewise_h(&ctx, vec![h_table])?;

    let monomial_shortcut =
        h.terms().count() == 1 && h.coeff(d as usize) == Elem::ONE && gcd(d, q - 1) == 1;
    let c0 = ctx.mul(
        a,
        ctx.mul(ctx.pow_signed(w, r as i64 - d as i64).expect("w nonzero"), ctx.pow(ctx.sub(v, u), r)),
    );
    let br0 = BranchForm {
        forms: vec![LinForm::x(&ctx)],
        form_names: vec!["x".into()],
        terms: vec![(c0, vec![r])],
    };
    let mut terms: Vec<(Elem, Vec<u64>)> = if monomial_shortcut {
        vec![(a, vec![d, r - d])]
    } else {
        let aw = ctx.mul(a, w_inv_d);
        h.terms()
            .map(|(e, c)| {
                let coef = ctx.mul(aw, ctx.mul(c, ctx.pow(w, e as u64)));
                (coef, vec![e as u64, r - e as u64])
            })
            .collect()
    };
    terms.push((b, vec![0, r]));
    let br1 = BranchForm {
        forms: vec![LinForm::frob_minus(u, &ctx), LinForm::frob_minus(v, &ctx)],
        form_names: vec!["(x^q-ux)".into(), "(x^q-vx)".into()],
        terms,
    };
    let branches = vec![
        BranchInfo { label: "x^q = v x".into(), class: 0, form: Some(br0) },
        BranchInfo { label: "x^q != v x".into(), class: 1, form: Some(br1) },
    ];
    Ok(PiecewisePermutation {
        gmt,
        y,
        r,
        pg_map,
        family: Family::Thm37 { params, monomial_shortcut },
        branches,
    })
}

/// Parity-twist family: class 1 inputs whose coordinate ratio `x_0` is zero or
/// an even power of `delta` use `alpha Tr_0^d Tr_1^(r-d) gamma_0 + Tr_1^r gamma_1`;
/// every other input uses `sum_{k<=j} Tr_k Tr_j^(r-1) gamma_k`.
pub fn construct_thm310(
    gmt: Arc<GmtContext>,
    y: Basis,
    delta: Elem,
    alpha: Elem,
    r: u64,
    d: u64,
) -> Result<PiecewisePermutation> {
    let ctx = gmt.field();
    let n = ctx.n();
    ParityParams::new(ctx, delta, alpha, d)?;
    let q = ctx.q() as u64;
    if gcd(r, q - 1) != 1 {
        return Err(Error::BadParams(format!("gcd(r={r}, q-1) != 1")));
    }
    if r < d {
        return Err(Error::BadParams(format!("r={r} is smaller than d={d}")));
    }
    check_y(ctx, &y)?;
    let pg_map = PgMap::parity_twist(ctx, delta, alpha, d)?;
    let (forms, names) = trace_forms(&gmt);
    let form = |terms| Some(BranchForm { forms: forms.clone(), form_names: names.clone(), terms });
    let identity_terms = |j: usize| -> Vec<(Elem, Vec<u64>)> {
        (0..=j)
            .map(|k| {
                let e = if k == j { exps(n, &[(j, r)]) } else { exps(n, &[(k, 1), (j, r - 1)]) };
                (y[k], e)
            })
            .collect()
    };
    let mut branches = vec![
        BranchInfo { label: class_label(0), class: 0, form: form(identity_terms(0)) },
        BranchInfo {
            label: "class 1, x_0 an odd power of delta".into(),
            class: 1,
            form: form(identity_terms(1)),
        },
        BranchInfo {
            label: "class 1, x_0 zero or an even power of delta".into(),
            class: 1,
            form: form(vec![
                (ctx.mul(alpha, y[0]), exps(n, &[(0, d), (1, r - d)])),
                (y[1], exps(n, &[(1, r)])),
            ]),
        },
    ];
    for j in 2..n {
        branches.push(BranchInfo { label: class_label(j), class: j, form: form(identity_terms(j)) });
    }
    Ok(PiecewisePermutation {
        gmt,
        y,
        r,
        pg_map,
        family: Family::Thm310 { delta, alpha, d },
        branches,
    })
}

/// Five-branch family on `F_{q^3}` built on the three-set swap of `PG(2, q)`.
pub fn construct_prop312(gmt: Arc<GmtContext>, y: Basis, r: u64) -> Result<PiecewisePermutation> {
    let ctx = gmt.field();
    if ctx.n() != 3 {
        return Err(Error::WrongN { expected: 3, got: ctx.n() });
    }
    check_r(ctx, r)?;
    check_y(ctx, &y)?;
    let pg_map = PgMap::three_set_swap(ctx)?;
    let (forms, names) = trace_forms(&gmt);
    let mk = |label: &str, class: usize, terms: Vec<(Elem, Vec<u64>)>| BranchInfo {
        label: label.into(),
        class,
        form: Some(BranchForm { forms: forms.clone(), form_names: names.clone(), terms }),
    };
    let branches = vec![
        mk("x = x_2 w_2", 2, vec![(y[0], exps(3, &[(2, r)]))]),
        mk("x = x_0 w_0", 0, vec![(y[1], exps(3, &[(0, r)]))]),
        mk(
            "x = x_0 w_0 + x_2 w_2, x_0 x_2 != 0",
            2,
            vec![(y[0], exps(3, &[(0, 1), (2, r - 1)])), (y[1], exps(3, &[(2, r)]))],
        ),
        mk(
            "x = x_0 w_0 + x_1 w_1, x_1 != 0",
            1,
            vec![(y[0], exps(3, &[(0, 1), (1, r - 1)])), (y[2], exps(3, &[(1, r)]))],
        ),
        mk(
            "x_1 x_2 != 0",
            2,
            vec![
                (y[0], exps(3, &[(0, 1), (2, r - 1)])),
                (y[1], exps(3, &[(1, 1), (2, r - 1)])),
                (y[2], exps(3, &[(2, r)])),
            ],
        ),
    ];
    Ok(PiecewisePermutation { gmt, y, r, pg_map, family: Family::Prop312, branches })
}
