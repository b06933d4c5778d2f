//! JSON forms of fields, elements, bases, polynomials, projective maps and
//! permutations. Elements are written as nested coefficient vectors: `n`
//! lists of `m` integers mod `p`, lowest degree first at both levels.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, FieldSpec};
use crate::gmt::GmtContext;
use crate::linalg::Basis;
use crate::permpoly::{
    build_from_bijection, construct_prop312, construct_thm310, construct_thm36_tables,
    construct_thm37, Family, PiecewisePermutation, Thm37Params,
};
use crate::poly::UniPoly;
use crate::projective::{PgMap, PgMapKind};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing \"{key}\"")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

pub fn elem_to_json(ctx: &FieldCtx, x: Elem) -> Value {
    json!(ctx.to_nested(x))
}

/// Accepts nested coefficient vectors, a packed index, or the strings
/// `"0"`, `"1"` and `"g^k"` (power of the fixed generator).
pub fn elem_from_json(ctx: &FieldCtx, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(_) => ctx.elem(as_u64(v, "element index")?),
        Value::String(s) => parse_elem_str(ctx, s),
        Value::Array(rows) => {
            let nested = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| parse_err("element rows must be arrays"))?
                        .iter()
                        .map(|d| as_u64(d, "coefficient").map(|d| d as u32))
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            ctx.from_nested(&nested)
        }
        _ => Err(parse_err(format!("cannot read an element from {v}"))),
    }
}

pub fn parse_elem_str(ctx: &FieldCtx, s: &str) -> Result<Elem> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("g^") {
        let k: u64 = k.parse().map_err(|_| parse_err(format!("bad exponent in {s:?}")))?;
        return Ok(ctx.pow(ctx.generator(), k));
    }
    if s == "g" {
        return Ok(ctx.generator());
    }
    if let Some(k) = s.strip_prefix('#') {
        let k: u64 = k.parse().map_err(|_| parse_err(format!("bad index in {s:?}")))?;
        return ctx.elem(k);
    }
    if let Ok(k) = s.parse::<u64>() {
        return ctx.elem(k);
    }
    let v: Value = serde_json::from_str(s).map_err(|e| parse_err(format!("bad element {s:?}: {e}")))?;
    elem_from_json(ctx, &v)
}

pub fn elems_to_json(ctx: &FieldCtx, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|&x| elem_to_json(ctx, x)).collect())
}

pub fn elems_from_json(ctx: &FieldCtx, v: &Value) -> Result<Vec<Elem>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected a list of elements"))?
        .iter()
        .map(|x| elem_from_json(ctx, x))
        .collect()
}

/// `F_q` element as its `m` digits.
fn base_to_json(ctx: &FieldCtx, x: Elem) -> Value {
    json!(ctx.base_coeffs(x))
}

fn base_from_json(ctx: &FieldCtx, v: &Value) -> Result<Elem> {
    match v {
        Value::Array(_) => {
            let digits: Vec<u32> = serde_json::from_value(v.clone()).map_err(|e| parse_err(e.to_string()))?;
            ctx.base_from_digits(&digits)
        }
        _ => {
            let x = elem_from_json(ctx, v)?;
            if ctx.in_base(x) {
                Ok(x)
            } else {
                Err(parse_err(format!("{} is not in F_q", ctx.render(x))))
            }
        }
    }
}

fn base_vec_to_json(ctx: &FieldCtx, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|&x| base_to_json(ctx, x)).collect())
}

fn base_vec_from_json(ctx: &FieldCtx, v: &Value) -> Result<Vec<Elem>> {
    v.as_array()
        .ok_or_else(|| parse_err("expected a list of F_q elements"))?
        .iter()
        .map(|x| base_from_json(ctx, x))
        .collect()
}

pub fn field_to_json(ctx: &FieldCtx) -> Value {
    json!(ctx.spec().to_string())
}

pub fn field_from_json(v: &Value) -> Result<FieldCtx> {
    let s = v.as_str().ok_or_else(|| parse_err("\"field\" must be a spec string"))?;
    s.parse::<FieldSpec>()?.build()
}

/// Polynomial with `{"field", "terms": [{"e", "c"}]}`; with a generator each
/// term also carries `"log"`, the exponent of the coefficient in that generator.
pub fn poly_to_json(ctx: &FieldCtx, p: &UniPoly, generator: Option<Elem>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(e, c)| {
            let mut t = Map::new();
            t.insert("e".into(), json!(e));
            t.insert("c".into(), elem_to_json(ctx, c));
            if let Some(g) = generator {
                if let Ok(Some(k)) = ctx.dlog(g, c) {
                    t.insert("log".into(), json!(k));
                }
            }
            Value::Object(t)
        })
        .collect();
    json!({ "field": field_to_json(ctx), "terms": terms })
}

pub fn poly_terms_from_json(ctx: &FieldCtx, v: &Value) -> Result<UniPoly> {
    let terms = field(v, "terms")?.as_array().ok_or_else(|| parse_err("\"terms\" must be a list"))?;
    let terms = terms
        .iter()
        .map(|t| Ok((as_u64(field(t, "e")?, "exponent")? as usize, elem_from_json(ctx, field(t, "c")?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::from_terms(ctx, terms))
}

pub fn poly_from_json(v: &Value) -> Result<(FieldCtx, UniPoly)> {
    let ctx = field_from_json(field(v, "field")?)?;
    let p = poly_terms_from_json(&ctx, v)?;
    Ok((ctx, p))
}

/// Parses `"x^3 + g^5*x + 2"`-style text: terms joined by `+`, each an
/// optional element coefficient (as in [`parse_elem_str`]) times `x^e`.
/// A JSON `{"terms": ...}` document or bare term list is also accepted.
pub fn parse_poly_str(ctx: &FieldCtx, s: &str) -> Result<UniPoly> {
    let s = s.trim();
    if s.starts_with('{') || s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| parse_err(format!("bad polynomial: {e}")))?;
        let v = if v.is_array() { json!({ "terms": v }) } else { v };
        return poly_terms_from_json(ctx, &v);
    }
    let mut terms = Vec::new();
    for term in s.split('+').map(str::trim) {
        if term.is_empty() {
            return Err(parse_err(format!("empty term in {s:?}")));
        }
        let (coef, mono) = match term.rsplit_once('*') {
            Some((c, m)) => (Some(c.trim()), m.trim()),
            None if term.contains('x') => (None, term),
            None => (Some(term), ""),
        };
        let e = match mono {
            "" => 0,
            "x" => 1,
            m => m
                .strip_prefix("x^")
                .and_then(|e| e.parse::<usize>().ok())
                .ok_or_else(|| parse_err(format!("bad monomial {m:?}")))?,
        };
        let c = match coef {
            Some(c) => parse_elem_str(ctx, c)?,
            None => Elem::ONE,
        };
        terms.push((e, c));
    }
    Ok(UniPoly::from_terms(ctx, terms))
}

pub fn basis_to_json(ctx: &FieldCtx, b: &Basis) -> Value {
    elems_to_json(ctx, b.elems())
}

/// A list of elements, or one of `"std"`, `"poly"` (powers of the generator),
/// `"normal"` (first normal element in enumeration order), `"random:<seed>"`.
pub fn basis_from_json(ctx: &FieldCtx, v: &Value) -> Result<Basis> {
    match v {
        Value::String(s) => parse_basis_str(ctx, s),
        _ => Basis::new(ctx, elems_from_json(ctx, v)?),
    }
}

pub fn parse_basis_str(ctx: &FieldCtx, s: &str) -> Result<Basis> {
    use rand::SeedableRng;
    let s = s.trim();
    match s {
        "std" => Ok(Basis::standard(ctx)),
        "poly" => Basis::powers(ctx, ctx.generator()),
        "normal" => ctx
            .nonzero_elements()
            .find_map(|w| Basis::normal(ctx, w).ok())
            .ok_or(Error::NotABasis),
        _ => {
            if let Some(seed) = s.strip_prefix("random:") {
                let seed: u64 = seed.parse().map_err(|_| parse_err(format!("bad seed in {s:?}")))?;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                return Ok(Basis::random(ctx, &mut rng));
            }
            let v: Value =
                serde_json::from_str(s).map_err(|e| parse_err(format!("bad basis {s:?}: {e}")))?;
            basis_from_json(ctx, &v)
        }
    }
}

pub fn gmt_to_json(gmt: &GmtContext) -> Value {
    let ctx = gmt.field();
    let t_polys: Vec<Value> = (0..ctx.n())
        .map(|i| {
            let p = gmt.t_poly(i).expect("valid index");
            Value::Array(p.terms().map(|(e, c)| json!({ "e": e, "c": elem_to_json(ctx, c) })).collect())
        })
        .collect();
    json!({
        "field": field_to_json(ctx),
        "basis": basis_to_json(ctx, gmt.basis()),
        "det": elem_to_json(ctx, gmt.det()),
        "det_text": ctx.render(gmt.det()),
        "cofactors": elems_to_json(ctx, gmt.cofactors()),
        "dual": basis_to_json(ctx, gmt.dual()),
        "normal": gmt.is_normal(),
        "t_polys": t_polys,
    })
}

pub fn gmt_from_json(v: &Value) -> Result<GmtContext> {
    let ctx = Arc::new(field_from_json(field(v, "field")?)?);
    let w = basis_from_json(&ctx, field(v, "basis")?)?;
    GmtContext::new(ctx, w)
}

pub fn pgmap_to_json(ctx: &FieldCtx, g: &PgMap) -> Value {
    let pairs: Vec<Value> = g
        .pairs(ctx)
        .into_iter()
        .map(|(p, img)| json!([base_vec_to_json(ctx, p.coords()), base_vec_to_json(ctx, &img)]))
        .collect();
    json!({ "kind": kind_to_json(ctx, g.kind()), "pairs": pairs })
}

fn kind_to_json(ctx: &FieldCtx, k: &PgMapKind) -> Value {
    let tables = |h: &Vec<Vec<Elem>>| Value::Array(h.iter().map(|t| base_vec_to_json(ctx, t)).collect());
    match k {
        PgMapKind::Identity => json!({ "kind": "identity" }),
        PgMapKind::CoordinatewiseH { h } => json!({ "kind": "coordinatewise_h", "h": tables(h) }),
        PgMapKind::CoordinatewiseHClosed { h } => {
            json!({ "kind": "coordinatewise_h_closed", "h": tables(h) })
        }
        PgMapKind::ParityTwist { delta, alpha, d } => json!({
            "kind": "parity_twist",
            "delta": base_to_json(ctx, *delta),
            "alpha": base_to_json(ctx, *alpha),
            "d": d,
        }),
        PgMapKind::ThreeSetSwap => json!({ "kind": "three_set_swap" }),
        PgMapKind::Table => json!({ "kind": "table" }),
        PgMapKind::Custom { name } => json!({ "kind": "custom", "name": name }),
    }
}

fn kind_from_json(ctx: &FieldCtx, v: &Value) -> Result<PgMapKind> {
    let tag = field(v, "kind")?.as_str().ok_or_else(|| parse_err("kind must be a string"))?;
    let tables = |v: &Value| -> Result<Vec<Vec<Elem>>> {
        field(v, "h")?
            .as_array()
            .ok_or_else(|| parse_err("\"h\" must be a list of tables"))?
            .iter()
            .map(|t| base_vec_from_json(ctx, t))
            .collect()
    };
    Ok(match tag {
        "identity" => PgMapKind::Identity,
        "coordinatewise_h" => PgMapKind::CoordinatewiseH { h: tables(v)? },
        "coordinatewise_h_closed" => PgMapKind::CoordinatewiseHClosed { h: tables(v)? },
        "parity_twist" => PgMapKind::ParityTwist {
            delta: base_from_json(ctx, field(v, "delta")?)?,
            alpha: base_from_json(ctx, field(v, "alpha")?)?,
            d: as_u64(field(v, "d")?, "d")?,
        },
        "three_set_swap" => PgMapKind::ThreeSetSwap,
        "table" => PgMapKind::Table,
        "custom" => PgMapKind::Custom {
            name: field(v, "name")?.as_str().unwrap_or_default().to_string(),
        },
        other => return Err(parse_err(format!("unknown map kind {other:?}"))),
    })
}

/// Reads `{"pairs": [[point, image], ...]}`, with an optional `"kind"`.
pub fn pgmap_from_json(ctx: &FieldCtx, v: &Value) -> Result<PgMap> {
    let pairs = field(v, "pairs")?
        .as_array()
        .ok_or_else(|| parse_err("\"pairs\" must be a list"))?
        .iter()
        .map(|pair| match pair.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((base_vec_from_json(ctx, a)?, base_vec_from_json(ctx, b)?)),
            _ => Err(parse_err("each pair must be [point, image]")),
        })
        .collect::<Result<Vec<_>>>()?;
    let map = PgMap::from_pairs(ctx, &pairs)?;
    match v.get("kind") {
        Some(k) => Ok(map.with_kind(kind_from_json(ctx, k)?)),
        None => Ok(map),
    }
}

pub fn thm37_params_to_json(ctx: &FieldCtx, p: &Thm37Params) -> Value {
    json!({
        "h": Value::Array(p.h.terms().map(|(e, c)| json!({ "e": e, "c": elem_to_json(ctx, c) })).collect()),
        "r": p.r,
        "a": elem_to_json(ctx, p.a),
        "b": elem_to_json(ctx, p.b),
        "u": elem_to_json(ctx, p.u),
        "v": elem_to_json(ctx, p.v),
        "w": elem_to_json(ctx, p.w),
    })
}

pub fn thm37_params_from_json(ctx: &FieldCtx, v: &Value) -> Result<Thm37Params> {
    let e = |k: &str| elem_from_json(ctx, field(v, k)?);
    let h = poly_terms_from_json(ctx, &json!({ "terms": field(v, "h")? }))?;
    Ok(Thm37Params {
        h,
        r: as_u64(field(v, "r")?, "r")?,
        a: e("a")?,
        b: e("b")?,
        u: e("u")?,
        v: e("v")?,
        w: e("w")?,
    })
}

fn family_to_json(ctx: &FieldCtx, f: &Family) -> Value {
    match f {
        Family::Generic => json!({ "name": "generic" }),
        Family::Thm36 { h } => json!({
            "name": "thm36",
            "h": Value::Array(h.iter().map(|t| base_vec_to_json(ctx, t)).collect()),
        }),
        Family::Thm37 { params, monomial_shortcut } => json!({
            "name": "thm37",
            "params": thm37_params_to_json(ctx, params),
            "monomial_shortcut": monomial_shortcut,
        }),
        Family::Thm310 { delta, alpha, d } => json!({
            "name": "thm310",
            "delta": base_to_json(ctx, *delta),
            "alpha": base_to_json(ctx, *alpha),
            "d": d,
        }),
        Family::Prop312 => json!({ "name": "prop312" }),
    }
}

pub fn perm_to_json(perm: &PiecewisePermutation) -> Value {
    let ctx = perm.field();
    let branches: Vec<Value> = perm
        .branches()
        .iter()
        .map(|b| {
            json!({
                "label": b.label,
                "class": b.class,
                "form": b.form.as_ref().map(|f| f.render(ctx)),
            })
        })
        .collect();
    json!({
        "field": field_to_json(ctx),
        "family": family_to_json(ctx, perm.family()),
        "r": perm.r(),
        "basis_w": basis_to_json(ctx, perm.gmt().basis()),
        "basis_y": basis_to_json(ctx, perm.y()),
        "pg_map": pgmap_to_json(ctx, perm.pg_map()),
        "branches": branches,
    })
}

/// Rebuilds a permutation by rerunning its construction.
pub fn perm_from_json(v: &Value) -> Result<PiecewisePermutation> {
    let ctx = Arc::new(field_from_json(field(v, "field")?)?);
    let fam = field(v, "family")?;
    let name = field(fam, "name")?.as_str().ok_or_else(|| parse_err("family name must be a string"))?;
    if name == "thm37" {
        return construct_thm37(ctx.clone(), thm37_params_from_json(&ctx, field(fam, "params")?)?);
    }
    let r = as_u64(field(v, "r")?, "r")?;
    let w = basis_from_json(&ctx, field(v, "basis_w")?)?;
    let y = basis_from_json(&ctx, field(v, "basis_y")?)?;
    let gmt = Arc::new(GmtContext::new(ctx.clone(), w)?);
    match name {
        "generic" => build_from_bijection(gmt, y, pgmap_from_json(&ctx, field(v, "pg_map")?)?, r),
        "thm36" => {
            let h = field(fam, "h")?
                .as_array()
                .ok_or_else(|| parse_err("\"h\" must be a list of tables"))?
                .iter()
                .map(|t| base_vec_from_json(&ctx, t))
                .collect::<Result<Vec<_>>>()?;
            construct_thm36_tables(gmt, y, h, r)
        }
        "thm310" => construct_thm310(
            gmt,
            y,
            base_from_json(&ctx, field(fam, "delta")?)?,
            base_from_json(&ctx, field(fam, "alpha")?)?,
            r,
            as_u64(field(fam, "d")?, "d")?,
        ),
        "prop312" => construct_prop312(gmt, y, r),
        other => Err(parse_err(format!("unknown family {other:?}"))),
    }
}
