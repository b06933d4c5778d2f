//! Points of `PG(n-1, q)`, their enumeration by class, and maps of
//! projective space given by a vector-valued rule on `F_q^n`.
//!
//! Vectors over `F_q` are indexed exactly like top-field elements: the index
//! of `(x_0, ..., x_{n-1})` is `sum x_i q^i`.

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{bsgs, Elem, FieldCtx};

/// A point of projective space, scaled so its rightmost nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// Position of the rightmost nonzero coordinate (the class of the point).
    pub fn level(&self) -> usize {
        self.coords.iter().rposition(|c| !c.is_zero()).expect("points are nonzero")
    }

    /// Position in [`enumerate_pg`] order.
    pub fn index(&self, q: u32) -> usize {
        let j = self.level();
        let offset = (q as usize).pow(j as u32).saturating_sub(1) / (q as usize - 1);
        let free = self.coords[..j].iter().rev().fold(0usize, |acc, c| acc * q as usize + c.0 as usize);
        offset + free
    }

    /// Inverse of [`ProjPoint::index`].
    pub fn from_index(ctx: &FieldCtx, mut idx: usize) -> Result<ProjPoint> {
        let (q, n) = (ctx.q() as usize, ctx.n());
        let total = pg_size(ctx);
        if idx >= total {
            return Err(Error::IndexOutOfRange { index: idx, len: total });
        }
        let mut j = 0;
        while idx >= q.pow(j as u32) {
            idx -= q.pow(j as u32);
            j += 1;
        }
        let mut coords = vec![Elem::ZERO; n];
        for c in coords.iter_mut().take(j) {
            *c = Elem((idx % q) as u32);
            idx /= q;
        }
        coords[j] = Elem::ONE;
        Ok(ProjPoint { coords })
    }

    /// Index of the coordinate vector itself, as in [`vector_index`].
    pub fn vector_index(&self, q: u32) -> usize {
        vector_index(q, &self.coords)
    }
}

/// Scales a nonzero vector over `F_q` by the inverse of its rightmost nonzero coordinate.
pub fn canonical(ctx: &FieldCtx, v: &[Elem]) -> Result<ProjPoint> {
    let j = v.iter().rposition(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let s = ctx.inv(v[j]).expect("nonzero");
    Ok(ProjPoint { coords: v.iter().map(|&c| ctx.mul(c, s)).collect() })
}

pub fn pg_size(ctx: &FieldCtx) -> usize {
    ctx.mu_order() as usize
}

/// All points, class 0 first; within a class, odometer order on the free
/// coordinates with `x_0` fastest.
pub fn enumerate_pg(ctx: &FieldCtx) -> Vec<ProjPoint> {
    (0..pg_size(ctx)).map(|i| ProjPoint::from_index(ctx, i).expect("in range")).collect()
}

pub fn vector_index(q: u32, v: &[Elem]) -> usize {
    v.iter().rev().fold(0usize, |acc, c| acc * q as usize + c.0 as usize)
}

pub fn vector_from_index(ctx: &FieldCtx, idx: usize) -> Vec<Elem> {
    ctx.ext_coeffs(Elem(idx as u32))
}

/// What a [`PgMap`] was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PgMapKind {
    Identity,
    /// Class `j` point `(x_0 : ... : x_{j-1} : 1 : 0 ...)` goes to
    /// `(H_j(x_0) : ... : H_j(x_{j-1}) : 1 : 0 ...)`; `h[j-1]` tabulates `H_j` on `F_q`.
    CoordinatewiseH { h: Vec<Vec<Elem>> },
    /// The same family from the closed polynomial formula in the coordinates.
    CoordinatewiseHClosed { h: Vec<Vec<Elem>> },
    /// Class-1 points with `x_0` zero or an even power of `delta` go to
    /// `(alpha x_0^d : 1 : 0 ...)`; everything else is fixed.
    ParityTwist { delta: Elem, alpha: Elem, d: u64 },
    /// The map of `PG(2, q)` exchanging three point sets across classes.
    ThreeSetSwap,
    Table,
    Custom { name: String },
}

/// A vector-valued rule on `F_q^n`, tabulated on every vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PgMap {
    q: u32,
    n: usize,
    kind: PgMapKind,
    /// `table[v * n + k]` is coordinate `k` of the rule at vector index `v`.
    table: Vec<Elem>,
}

/// Why a rule fails to induce a map of projective space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellDefinednessWitness {
    /// Every coordinate vanishes at this nonzero vector.
    CommonRoot(Vec<Elem>),
    /// `lambda * v` lands on a different point than `v`.
    Incompatible { v: Vec<Elem>, lambda: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PgVerdict {
    NotWellDefined(WellDefinednessWitness),
    WellDefinedNotBijective { first: ProjPoint, second: ProjPoint, image: ProjPoint },
    /// `sigma[i]` is the index of the image of point `i`.
    Bijection(Vec<usize>),
}

impl PgVerdict {
    pub fn is_bijection(&self) -> bool {
        matches!(self, PgVerdict::Bijection(_))
    }
}

impl PgMap {
    /// Tabulates an arbitrary rule on all of `F_q^n`, including the zero vector.
    pub fn from_fn(ctx: &FieldCtx, kind: PgMapKind, f: impl Fn(&[Elem]) -> Vec<Elem>) -> PgMap {
        let n = ctx.n();
        let size = ctx.order() as usize;
        let mut table = Vec::with_capacity(size * n);
        for v in 0..size {
            let out = f(&vector_from_index(ctx, v));
            assert_eq!(out.len(), n, "rule must return n coordinates");
            table.extend(out);
        }
        PgMap { q: ctx.q(), n, kind, table }
    }

    /// A rule given on canonical points, extended to be constant along each
    /// line and zero at the origin.
    pub fn from_points(
        ctx: &FieldCtx,
        kind: PgMapKind,
        f: impl Fn(&ProjPoint) -> Vec<Elem>,
    ) -> PgMap {
        let n = ctx.n();
        let images: Vec<Vec<Elem>> = enumerate_pg(ctx).iter().map(&f).collect();
        let q = ctx.q();
        PgMap::from_fn(ctx, kind, |v| match canonical(ctx, v) {
            Ok(p) => images[p.index(q)].clone(),
            Err(_) => vec![Elem::ZERO; n],
        })
    }

    /// Builds from explicit `(point, image vector)` pairs covering every point once.
    pub fn from_pairs(ctx: &FieldCtx, pairs: &[(Vec<Elem>, Vec<Elem>)]) -> Result<PgMap> {
        let (q, n) = (ctx.q(), ctx.n());
        let total = pg_size(ctx);
        let mut images: Vec<Option<Vec<Elem>>> = vec![None; total];
        for (p, img) in pairs {
            for v in [p, img] {
                if v.len() != n {
                    return Err(Error::WrongLength { expected: n, got: v.len() });
                }
                if let Some(bad) = v.iter().find(|c| c.0 >= q) {
                    return Err(Error::BadCoefficient(bad.0 as u64));
                }
            }
            let pt = canonical(ctx, p)?;
            if pt.coords() != p.as_slice() {
                return Err(Error::Parse(format!("point {:?} is not in canonical form", p)));
            }
            let slot = &mut images[pt.index(q)];
            if slot.is_some() {
                return Err(Error::Parse(format!("point {:?} listed twice", p)));
            }
            *slot = Some(img.clone());
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| Error::Parse(format!("point {i} has no image")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PgMap::from_points(ctx, PgMapKind::Table, |p| images[p.index(q)].clone()))
    }

    pub fn kind(&self) -> &PgMapKind {
        &self.kind
    }

    pub fn with_kind(mut self, kind: PgMapKind) -> PgMap {
        self.kind = kind;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The rule at a vector given by index.
    pub fn eval_index(&self, v: usize) -> &[Elem] {
        &self.table[v * self.n..(v + 1) * self.n]
    }

    pub fn eval_vector(&self, v: &[Elem]) -> &[Elem] {
        self.eval_index(vector_index(self.q, v))
    }

    /// The rule at the canonical representative of `p`: the `g_k` values used
    /// when building permutations.
    pub fn raw_image(&self, p: &ProjPoint) -> &[Elem] {
        self.eval_index(p.vector_index(self.q))
    }

    pub fn image(&self, ctx: &FieldCtx, p: &ProjPoint) -> Result<ProjPoint> {
        canonical(ctx, self.raw_image(p))
    }

    /// `(point, raw image)` for every point, in enumeration order.
    pub fn pairs(&self, ctx: &FieldCtx) -> Vec<(ProjPoint, Vec<Elem>)> {
        enumerate_pg(ctx)
            .into_iter()
            .map(|p| {
                let img = self.raw_image(&p).to_vec();
                (p, img)
            })
            .collect()
    }

    pub fn identity(ctx: &FieldCtx) -> PgMap {
        PgMap::from_fn(ctx, PgMapKind::Identity, |v| v.to_vec())
    }

    /// Class-preserving map applying `H_j` to the free coordinates of class `j`.
    /// `h[j-1]` tabulates `H_j` on `F_q` by packed index, for `j = 1..n-1`.
    pub fn coordinatewise_h(ctx: &FieldCtx, h: Vec<Vec<Elem>>) -> Result<PgMap> {
        check_h_tables(ctx, &h)?;
        let tables = h.clone();
        Ok(PgMap::from_fn(ctx, PgMapKind::CoordinatewiseH { h }, move |v| {
            let mut out = vec![Elem::ZERO; v.len()];
            let Some(j) = v.iter().rposition(|c| !c.is_zero()) else { return out };
            let inv = ctx.inv(v[j]).expect("nonzero");
            for k in 0..j {
                out[k] = tables[j - 1][ctx.mul(v[k], inv).0 as usize];
            }
            out[j] = Elem::ONE;
            out
        }))
    }

    /// The same family evaluated through the closed formula
    /// `g_k = sum_{j >= k} H_j(x_k x_j^(q-2)) x_j^(q-1) prod_{i > j} (1 - x_i^(q-1))`
    /// with `H_0(x) = x`. Agrees with [`PgMap::coordinatewise_h`] exactly when
    /// every `H_j(1) = 1`.
    pub fn coordinatewise_h_closed(ctx: &FieldCtx, h: Vec<Vec<Elem>>) -> Result<PgMap> {
        check_h_tables(ctx, &h)?;
        let tables = h.clone();
        let q = ctx.q() as u64;
        Ok(PgMap::from_fn(ctx, PgMapKind::CoordinatewiseHClosed { h }, move |x| {
            let n = x.len();
            let hj = |j: usize, a: Elem| if j == 0 { a } else { tables[j - 1][a.0 as usize] };
            (0..n)
                .map(|k| {
                    (k..n).fold(Elem::ZERO, |acc, j| {
                        let arg = ctx.mul(x[k], ctx.pow(x[j], q - 2));
                        let mut term = ctx.mul(hj(j, arg), ctx.pow(x[j], q - 1));
                        for &xi in &x[j + 1..] {
                            term = ctx.mul(term, ctx.sub(Elem::ONE, ctx.pow(xi, q - 1)));
                        }
                        ctx.add(acc, term)
                    })
                })
                .collect()
        }))
    }

    /// Fixes every point except class-1 points `(x_0 : 1 : 0 ...)` with `x_0`
    /// zero or an even power of `delta`, which go to `(alpha x_0^d : 1 : 0 ...)`.
    pub fn parity_twist(ctx: &FieldCtx, delta: Elem, alpha: Elem, d: u64) -> Result<PgMap> {
        let parity = ParityParams::new(ctx, delta, alpha, d)?;
        Ok(PgMap::from_points(ctx, PgMapKind::ParityTwist { delta, alpha, d }, |p| {
            let mut out = p.coords().to_vec();
            if p.level() == 1 && parity.is_zero_or_even(ctx, out[0]) {
                out[0] = ctx.mul(alpha, ctx.pow(out[0], d));
            }
            out
        }))
    }

    /// On `PG(2, q)`: `(0:0:1) -> (1:0:0)`, `(1:0:0) -> (0:1:0)`,
    /// `(x_0:0:1) -> (x_0:1:0)` for `x_0 != 0`, `(x_0:1:0) -> (x_0:0:1)`, and
    /// `(x_0:x_1:1)` with `x_1 != 0` fixed.
    pub fn three_set_swap(ctx: &FieldCtx) -> Result<PgMap> {
        if ctx.n() != 3 {
            return Err(Error::WrongN { expected: 3, got: ctx.n() });
        }
        Ok(PgMap::from_points(ctx, PgMapKind::ThreeSetSwap, |p| {
            let c = p.coords();
            let (x0, x1, x2) = (c[0], c[1], c[2]);
            let (z, o) = (Elem::ZERO, Elem::ONE);
            match (x1.is_zero(), x2.is_zero()) {
                (true, false) if x0.is_zero() => vec![o, z, z],
                (true, false) => vec![x0, o, z],
                (true, true) => vec![z, o, z],
                (false, true) => vec![x0, z, o],
                (false, false) => vec![x0, x1, x2],
            }
        }))
    }
}

fn check_h_tables(ctx: &FieldCtx, h: &[Vec<Elem>]) -> Result<()> {
    if h.len() + 1 != ctx.n() {
        return Err(Error::BadParams(format!(
            "expected {} tables H_1..H_(n-1), got {}",
            ctx.n() - 1,
            h.len()
        )));
    }
    for (j, t) in h.iter().enumerate() {
        if !is_permutation_of_fq(ctx, t) {
            return Err(Error::BadParams(format!("H_{} does not permute F_q", j + 1)));
        }
    }
    Ok(())
}

/// Whether a table of length `q` (indexed by packed `F_q` value) is a
/// permutation of `F_q`.
pub fn is_permutation_of_fq(ctx: &FieldCtx, table: &[Elem]) -> bool {
    let q = ctx.q() as usize;
    if table.len() != q {
        return false;
    }
    let mut seen = vec![false; q];
    for v in table {
        let i = v.0 as usize;
        if i >= q || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Validated parameters of the parity-twist map; decides parity of elements of
/// `F_q^*` by discrete log to the base `delta`.
#[derive(Clone, Debug)]
pub(crate) struct ParityParams {
    delta: Elem,
}

impl ParityParams {
    pub fn new(ctx: &FieldCtx, delta: Elem, alpha: Elem, d: u64) -> Result<ParityParams> {
        let q = ctx.q() as u64;
        if q.is_multiple_of(2) {
            return Err(Error::BadParams("q must be odd".into()));
        }
        if !ctx.in_base(delta) || delta.is_zero() || ctx.order_of(delta)? != q - 1 {
            return Err(Error::BadParams(format!("delta={} does not generate F_q^*", delta.0)));
        }
        if !ctx.in_base(alpha) || alpha.is_zero() {
            return Err(Error::BadParams(format!("alpha={} is not in F_q^*", alpha.0)));
        }
        if gcd(d, q - 1) != 1 {
            return Err(Error::BadParams(format!("gcd(d={d}, q-1) != 1")));
        }
        let p = ParityParams { delta };
        if p.log(ctx, alpha) % 2 == 1 {
            return Err(Error::BadParams(format!("alpha={} is an odd power of delta", alpha.0)));
        }
        Ok(p)
    }

    fn log(&self, ctx: &FieldCtx, x: Elem) -> u64 {
        bsgs(ctx, self.delta, x, ctx.q() as u64 - 1).expect("delta generates F_q^*")
    }

    pub fn is_zero_or_even(&self, ctx: &FieldCtx, x: Elem) -> bool {
        x.is_zero() || self.log(ctx, x).is_multiple_of(2)
    }
}

/// Decides whether the rule induces a well-defined map of projective space
/// and, if so, whether that map is a bijection.
pub fn check_pg_map(ctx: &FieldCtx, map: &PgMap) -> PgVerdict {
    let q = ctx.q();
    let size = ctx.order() as usize;
    let total = pg_size(ctx);
    let mut point_image: Vec<Option<ProjPoint>> = vec![None; total];
    for p in enumerate_pg(ctx) {
        match canonical(ctx, map.raw_image(&p)) {
            Ok(img) => point_image[p.index(q)] = Some(img),
            Err(_) => {
                return PgVerdict::NotWellDefined(WellDefinednessWitness::CommonRoot(
                    p.coords().to_vec(),
                ))
            }
        }
    }
    for v in 1..size {
        let vec = vector_from_index(ctx, v);
        let p = canonical(ctx, &vec).expect("nonzero");
        let img = match canonical(ctx, map.eval_index(v)) {
            Ok(img) => img,
            Err(_) => return PgVerdict::NotWellDefined(WellDefinednessWitness::CommonRoot(vec)),
        };
        if Some(&img) != point_image[p.index(q)].as_ref() {
            let lambda = vec[p.level()];
            return PgVerdict::NotWellDefined(WellDefinednessWitness::Incompatible {
                v: p.coords().to_vec(),
                lambda,
            });
        }
    }
    let mut preimage: Vec<Option<usize>> = vec![None; total];
    let mut sigma = Vec::with_capacity(total);
    for (i, img) in point_image.iter().enumerate() {
        let img = img.as_ref().expect("filled above");
        let t = img.index(q);
        if let Some(first) = preimage[t] {
            return PgVerdict::WellDefinedNotBijective {
                first: ProjPoint::from_index(ctx, first).expect("in range"),
                second: ProjPoint::from_index(ctx, i).expect("in range"),
                image: img.clone(),
            };
        }
        preimage[t] = Some(i);
        sigma.push(t);
    }
    PgVerdict::Bijection(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Vec<Elem> {
        v.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn canonical_small_examples() {
        let ctx = FieldCtx::auto(3, 1, 2).unwrap();
        assert_eq!(canonical(&ctx, &e(&[2, 2])).unwrap().coords(), e(&[1, 1]).as_slice());
        assert_eq!(canonical(&ctx, &e(&[2, 0])).unwrap().coords(), e(&[1, 0]).as_slice());
        assert_eq!(canonical(&ctx, &e(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn enumeration_order_and_sizes() {
        let ctx = FieldCtx::auto(3, 1, 2).unwrap();
        let pts: Vec<Vec<Elem>> = enumerate_pg(&ctx).iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(pts, vec![e(&[1, 0]), e(&[0, 1]), e(&[1, 1]), e(&[2, 1])]);
        let ctx = FieldCtx::auto(3, 1, 3).unwrap();
        let mut sizes = [0; 3];
        for (i, p) in enumerate_pg(&ctx).iter().enumerate() {
            sizes[p.level()] += 1;
            assert_eq!(p.index(3), i);
        }
        assert_eq!(sizes, [1, 3, 9]);
    }

    #[test]
    fn squaring_rule_collides() {
        let ctx = FieldCtx::auto(3, 1, 2).unwrap();
        let sq = PgMap::from_fn(&ctx, PgMapKind::Custom { name: "square".into() }, |v| {
            v.iter().map(|&x| ctx.mul(x, x)).collect()
        });
        match check_pg_map(&ctx, &sq) {
            PgVerdict::WellDefinedNotBijective { first, second, image } => {
                assert_eq!(first.coords(), e(&[1, 1]).as_slice());
                assert_eq!(second.coords(), e(&[2, 1]).as_slice());
                assert_eq!(image.coords(), e(&[1, 1]).as_slice());
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn non_homogeneous_rule_is_not_well_defined() {
        let ctx = FieldCtx::auto(3, 1, 2).unwrap();
        let shift = PgMap::from_fn(&ctx, PgMapKind::Custom { name: "shift".into() }, |v| {
            vec![ctx.add(v[0], Elem::ONE), v[1]]
        });
        assert!(matches!(
            check_pg_map(&ctx, &shift),
            PgVerdict::NotWellDefined(WellDefinednessWitness::Incompatible { .. })
                | PgVerdict::NotWellDefined(WellDefinednessWitness::CommonRoot(_))
        ));
    }

    #[test]
    fn parity_twist_small_example() {
        let ctx = FieldCtx::auto(3, 1, 2).unwrap();
        let g = PgMap::parity_twist(&ctx, Elem(2), Elem(1), 1).unwrap();
        assert!(check_pg_map(&ctx, &g).is_bijection());
        assert!(matches!(
            PgMap::parity_twist(&ctx, Elem(2), Elem(2), 1),
            Err(Error::BadParams(_))
        ));
        let f4 = FieldCtx::auto(2, 2, 2).unwrap();
        assert!(PgMap::parity_twist(&f4, Elem(2), Elem(1), 1).is_err());
    }

    #[test]
    fn swap_on_pg2_2() {
        let ctx = FieldCtx::auto(2, 1, 3).unwrap();
        let g = PgMap::three_set_swap(&ctx).unwrap();
        let img = |v: &[u32]| g.image(&ctx, &canonical(&ctx, &e(v)).unwrap()).unwrap();
        assert_eq!(img(&[0, 0, 1]).coords(), e(&[1, 0, 0]).as_slice());
        assert_eq!(img(&[1, 0, 0]).coords(), e(&[0, 1, 0]).as_slice());
        assert_eq!(img(&[1, 0, 1]).coords(), e(&[1, 1, 0]).as_slice());
        assert_eq!(img(&[1, 1, 0]).coords(), e(&[1, 0, 1]).as_slice());
        assert_eq!(img(&[0, 1, 1]).coords(), e(&[0, 1, 1]).as_slice());
        assert!(check_pg_map(&ctx, &g).is_bijection());
    }

    #[test]
    fn closed_formula_agrees_when_h_fixes_one() {
        let ctx = FieldCtx::auto(5, 1, 3).unwrap();
        // x -> x^3 fixes 1 and permutes F_5
        let cube: Vec<Elem> = ctx.base_elements().map(|x| ctx.pow(x, 3)).collect();
        let h = vec![cube.clone(), cube];
        let a = PgMap::coordinatewise_h(&ctx, h.clone()).unwrap();
        let b = PgMap::coordinatewise_h_closed(&ctx, h).unwrap();
        for v in 0..ctx.order() as usize {
            assert_eq!(a.eval_index(v), b.eval_index(v));
        }
    }
}
