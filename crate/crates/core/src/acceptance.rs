//! The acceptance suite: one check per criterion, each exhaustive over its
//! field grid and reporting a single PASS/FAIL line.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, Modulus};
use crate::gmt::{GmtContext, InverseRoute, MuElement};
use crate::hirschfeld::{
    counts, distinct_at_second_point, enumerate_distinct_psi_tables, enumerate_subprimitive_roots,
    hirschfeld_map, list_subprimitive, not_closed_under_scaling, HirschfeldMap, SubprimitiveRoot,
};
use crate::linalg::{
    determinant, dual_basis, dual_basis_by_solve, moore_matrix, moore_product_formula, Basis,
};
use crate::permpoly::{
    agw_for_polynomial, build_from_bijection, construct_prop312, construct_thm310,
    construct_thm36_tables, construct_thm37, index_decompose, interpolate_univariate,
    verify_agw, verify_homogeneous, verify_permutation, Domain, PiecewisePermutation, Thm37Params,
};
use crate::poly::{interpolate_values, UniPoly};
use crate::projective::{enumerate_pg, PgMap};

/// `(q, n)` pairs of the full grid.
pub const GRID: [(u64, usize); 12] =
    [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2), (8, 2), (8, 3), (9, 2), (9, 3)];

/// Random bases sampled per field, on top of the polynomial basis.
pub const BASES_PER_FIELD: usize = 5;
/// Parameter sets sampled per construction family.
pub const SETS_PER_FAMILY: usize = 12;
pub const SEED: u64 = 0x5eed_2024;

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "psi_W is a bijection onto mu; inverse routes agree; round trips"),
    (2, "determinant identities"),
    (3, "dual bases: cofactor route equals linear solve; M_W M_B^T = I"),
    (4, "partitions of field, roots of unity and projective space"),
    (5, "identity bijection recovers the identity map"),
    (6, "construction families pass all verifiers"),
    (7, "cubic example over F_8: branch supports and index"),
    (8, "parity-twist over F_9 and three-set swap over F_8: branch counts"),
    (9, "counts of transformations and subprimitive roots"),
    (10, "orbit maps of subprimitive roots"),
    (11, "multiplicative criterion agrees with exhaustive check over F_81"),
    (12, "T_j(x)^q = (-1)^(n-1) x^-1 T_j(x) on mu"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    /// Grid fields with at most 81 elements.
    Small,
    Full,
}

impl std::str::FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Grid> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            _ => Err(Error::Parse(format!("unknown grid {s:?}, expected small or full"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {} ({}; {:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn pm(q: u64) -> (u64, usize) {
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut m, mut x) = (0, q);
    while x > 1 {
        x /= p;
        m += 1;
    }
    (p, m)
}

/// The tower with `F_q` of order `q` and degree `n` over it, auto moduli.
pub fn grid_field(q: u64, n: usize) -> Result<Arc<FieldCtx>> {
    let (p, m) = pm(q);
    Ok(Arc::new(FieldCtx::auto(p, m, n)?))
}

pub fn grid(grid: Grid) -> Result<Vec<Arc<FieldCtx>>> {
    GRID.iter()
        .filter(|&&(q, n)| grid == Grid::Full || q.pow(n as u32) <= 81)
        .map(|&(q, n)| grid_field(q, n))
        .collect()
}

fn rng_for(ctx: &FieldCtx, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ (ctx.q() as u64 * 1000 + ctx.n() as u64) ^ (salt << 32))
}

/// The polynomial basis followed by seeded random bases.
pub fn sample_bases(ctx: &FieldCtx) -> Vec<Basis> {
    let mut rng = rng_for(ctx, 0);
    let mut out = vec![Basis::powers(ctx, ctx.generator()).expect("generator has full degree")];
    out.extend((0..BASES_PER_FIELD).map(|_| Basis::random(ctx, &mut rng)));
    out
}

fn field_name(ctx: &FieldCtx) -> String {
    format!("({},{})", ctx.q(), ctx.n())
}

pub fn run(id: u32, grid_kind: Grid) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => gmt_bijection(grid_kind),
        2 => determinants(grid_kind),
        3 => dual_bases(grid_kind),
        4 => partitions(grid_kind),
        5 => identity_recovery(grid_kind),
        6 => families(grid_kind),
        7 => cubic_example_check(),
        8 => branch_counts(),
        9 => counting(grid_kind),
        10 => orbit_maps(grid_kind),
        11 => agw_cross_validation(),
        12 => t_poly_identity(grid_kind),
        _ => Err(Error::BadParams(format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = time_limit(id) {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; over the {}s budget", limit.as_secs());
        }
    }
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    CriterionResult { id, title, passed, detail, elapsed }
}

pub fn time_limit(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(30)),
        7 => Some(Duration::from_secs(10)),
        _ => None,
    }
}

pub fn run_all(grid_kind: Grid) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run(id, grid_kind)).collect()
}

type Outcome = Result<(bool, String)>;

fn first_failure(fails: &[String], checked: usize, what: &str) -> (bool, String) {
    match fails.first() {
        None => (true, format!("{checked} {what}")),
        Some(f) => (false, format!("{} of {checked} {what} failed, first: {f}", fails.len())),
    }
}

fn gmt_bijection(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for ctx in grid(g)? {
        let mu: HashSet<Elem> = ctx.mu_elements().into_iter().collect();
        for w in sample_bases(&ctx) {
            checked += 1;
            let gmt = GmtContext::new(ctx.clone(), w)?;
            let points = enumerate_pg(&ctx);
            let image: HashSet<Elem> = points.iter().map(|p| gmt.psi(p).elem()).collect();
            if image != mu || points.len() != mu.len() {
                fails.push(format!("{}: psi is not onto mu", field_name(&ctx)));
                continue;
            }
            for p in &points {
                let x = gmt.psi(p);
                for route in [InverseRoute::TPoly, InverseRoute::Trace] {
                    if gmt.psi_inverse(x, route) != *p {
                        fails.push(format!("{}: round trip at {:?}", field_name(&ctx), p.coords()));
                    }
                }
            }
            for &x in &mu {
                let x = MuElement::new(&ctx, x)?;
                let a = gmt.psi_inverse(x, InverseRoute::TPoly);
                let b = gmt.psi_inverse(x, InverseRoute::Trace);
                if a != b || gmt.psi(&a) != x {
                    fails.push(format!("{}: inverse routes differ", field_name(&ctx)));
                }
            }
        }
    }
    Ok(first_failure(&fails, checked, "bases"))
}

fn all_tuples(ctx: &FieldCtx) -> Vec<Vec<Elem>> {
    let n = ctx.n();
    let order = ctx.order();
    let total = (order as usize).pow(n as u32);
    (0..total)
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % order as usize;
                    k /= order as usize;
                    ctx.elem(d as u64).expect("in range")
                })
                .collect()
        })
        .collect()
}

fn determinants(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for ctx in grid(g)? {
        let qm1 = ctx.q() as u64 - 1;
        let sign = if ctx.n() % 2 == 1 { Elem::ONE } else { ctx.neg(Elem::ONE) };
        for w in sample_bases(&ctx) {
            checked += 1;
            let (m, _) = moore_matrix(&ctx, w.elems())?;
            if ctx.pow(determinant(&ctx, &m), qm1) != sign {
                fails.push(format!("{}: det^(q-1) identity", field_name(&ctx)));
            }
        }
        let exhaustive = matches!((ctx.q(), ctx.n()), (2, 2) | (2, 3) | (3, 2));
        let sets: Vec<Vec<Elem>> = if exhaustive {
            all_tuples(&ctx)
        } else {
            let mut rng = rng_for(&ctx, 2);
            (0..100).map(|_| Basis::random(&ctx, &mut rng).elems().to_vec()).collect()
        };
        for s in sets {
            checked += 1;
            let (m, _) = moore_matrix(&ctx, &s)?;
            if determinant(&ctx, &m) != moore_product_formula(&ctx, &s) {
                fails.push(format!("{}: product formula at {:?}", field_name(&ctx), s));
            }
        }
    }
    Ok(first_failure(&fails, checked, "determinants"))
}

fn dual_bases(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for ctx in grid(g)? {
        for w in sample_bases(&ctx) {
            checked += 1;
            let b = dual_basis(&ctx, &w)?;
            if b != dual_basis_by_solve(&ctx, &w)? {
                fails.push(format!("{}: cofactor and solve routes differ", field_name(&ctx)));
            }
            let (mw, _) = moore_matrix(&ctx, w.elems())?;
            let (mb, _) = moore_matrix(&ctx, b.elems())?;
            if mw.mul(&ctx, &mb.transpose()) != crate::linalg::FFMatrix::identity(ctx.n()) {
                fails.push(format!("{}: M_W M_B^T is not the identity", field_name(&ctx)));
            }
        }
    }
    Ok(first_failure(&fails, checked, "bases"))
}

fn partitions(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for ctx in grid(g)? {
        let q = ctx.q() as u64;
        for w in sample_bases(&ctx) {
            checked += 1;
            let gmt = GmtContext::new(ctx.clone(), w)?;
            match gmt.verify_partitions() {
                Ok(rep) => {
                    for j in 0..ctx.n() {
                        let qj = q.pow(j as u32);
                        if rep.s_sizes[j] != (q - 1) * qj || rep.z_sizes[j] != qj || rep.c_sizes[j] != qj {
                            fails.push(format!("{}: class {j} sizes {:?}", field_name(&ctx), rep));
                        }
                    }
                }
                Err(e) => fails.push(format!("{}: {e}", field_name(&ctx))),
            }
        }
    }
    Ok(first_failure(&fails, checked, "bases"))
}

fn identity_recovery(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for ctx in grid(g)? {
        for w in sample_bases(&ctx) {
            checked += 1;
            let gmt = Arc::new(GmtContext::new(ctx.clone(), w.clone())?);
            let f = build_from_bijection(gmt, w, PgMap::identity(&ctx), 1)?;
            if let Some(x) = ctx.elements().find(|&x| f.eval(x) != x) {
                fails.push(format!("{}: f({}) != x", field_name(&ctx), ctx.render(x)));
            }
        }
    }
    Ok(first_failure(&fails, checked, "bases"))
}

fn random_fq_permutation(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let mut t: Vec<Elem> = ctx.base_elements().collect();
    t.shuffle(rng);
    t
}

/// Smallest `r >= min` coprime to `q - 1`, pushed up by a random offset.
fn coprime_r(rng: &mut ChaCha8Rng, q: u64, min: u64) -> u64 {
    let mut r = min.max(1) + rng.gen_range(0..q);
    while gcd(r, q - 1) != 1 {
        r += 1;
    }
    r
}

/// Runs every verifier on a constructed permutation.
pub fn check_all(perm: &PiecewisePermutation) -> std::result::Result<(), String> {
    let ctx = perm.field();
    let p = verify_permutation(ctx, |x| perm.eval(x));
    if !p.is_permutation {
        return Err(format!("not a permutation: {:?}", p.collision));
    }
    let h = verify_homogeneous(perm);
    if !h.is_homogeneous {
        return Err(format!("not homogeneous at {:?}", h.failure));
    }
    let a = verify_agw(perm);
    if !a.passed() {
        return Err(format!("criterion check failed: {a:?}"));
    }
    Ok(())
}

fn sample_thm36(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> Result<PiecewisePermutation> {
    let q = ctx.q() as u64;
    let w = Basis::random(ctx, rng);
    let y = Basis::random(ctx, rng);
    let tables: Vec<Vec<Elem>> = (1..ctx.n()).map(|_| random_fq_permutation(ctx, rng)).collect();
    let max_deg = tables
        .iter()
        .map(|t| interpolate_values(ctx, q, t).degree().unwrap_or(0) as u64)
        .max()
        .unwrap_or(1);
    let r = coprime_r(rng, q, max_deg);
    construct_thm36_tables(Arc::new(GmtContext::new(ctx.clone(), w)?), y, tables, r)
}

/// Samples hypotheses of the quadratic family until they hold.
pub fn sample_thm37_params(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Thm37Params {
    let q = ctx.q() as u64;
    let unit_circle: Vec<Elem> =
        ctx.nonzero_elements().filter(|&x| ctx.pow(x, q + 1) == Elem::ONE).collect();
    let nonzero: Vec<Elem> = ctx.nonzero_elements().collect();
    loop {
        let h = if rng.gen_bool(0.5) {
            let exps: Vec<u64> = (1..q).filter(|&d| gcd(d, q - 1) == 1).collect();
            UniPoly::monomial(Elem::ONE, *exps.choose(rng).expect("1 is coprime") as usize)
        } else {
            interpolate_values(ctx, q, &random_fq_permutation(ctx, rng))
        };
        let d = h.degree().expect("nonzero") as u64;
        let r = coprime_r(rng, q, d);
        let u = *unit_circle.choose(rng).expect("nonempty");
        let v = *unit_circle.choose(rng).expect("nonempty");
        if u == v {
            continue;
        }
        let ratio = ctx.div(u, v).expect("v nonzero");
        let c = *ctx.base_elements().skip(1).collect::<Vec<_>>().choose(rng).expect("nonempty");
        let w = ctx.mul(c, ctx.qm1_root(ratio).expect("unit circle lies in the image"));
        let a = *nonzero.choose(rng).expect("nonempty");
        let b = *nonzero.choose(rng).expect("nonempty");
        if ctx.pow(ratio, d) == ctx.pow(ctx.div(a, b).expect("b nonzero"), q - 1) {
            continue;
        }
        return Thm37Params { h, r, a, b, u, v, w };
    }
}

fn base_generators(ctx: &FieldCtx) -> Vec<Elem> {
    let qm1 = ctx.q() as u64 - 1;
    ctx.base_elements().skip(1).filter(|&x| ctx.order_of(x).expect("nonzero") == qm1).collect()
}

fn sample_thm310(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> Result<PiecewisePermutation> {
    let q = ctx.q() as u64;
    let w = Basis::random(ctx, rng);
    let y = Basis::random(ctx, rng);
    let delta = *base_generators(ctx).choose(rng).expect("F_q^* is cyclic");
    let alpha = ctx.pow(delta, 2 * rng.gen_range(0..q));
    let ds: Vec<u64> = (1..q).filter(|&d| gcd(d, q - 1) == 1).collect();
    let d = *ds.choose(rng).expect("1 is coprime");
    let r = coprime_r(rng, q, d);
    construct_thm310(Arc::new(GmtContext::new(ctx.clone(), w)?), y, delta, alpha, r, d)
}

fn sample_prop312(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> Result<PiecewisePermutation> {
    let w = Basis::random(ctx, rng);
    let y = Basis::random(ctx, rng);
    let r = coprime_r(rng, ctx.q() as u64, 1);
    construct_prop312(Arc::new(GmtContext::new(ctx.clone(), w)?), y, r)
}

fn families(g: Grid) -> Outcome {
    let fields = grid(g)?;
    let pick = |pred: &dyn Fn(&FieldCtx) -> bool| -> Vec<Arc<FieldCtx>> {
        fields.iter().filter(|c| pred(c)).cloned().collect()
    };
    let plans: [(&str, Vec<Arc<FieldCtx>>); 4] = [
        ("class-preserving", pick(&|_| true)),
        ("quadratic", pick(&|c| c.n() == 2)),
        ("parity-twist", pick(&|c| c.q() % 2 == 1)),
        ("three-set swap", pick(&|c| c.n() == 3)),
    ];
    let mut fails = Vec::new();
    let mut summary = Vec::new();
    for (fi, (name, fields)) in plans.iter().enumerate() {
        if fields.is_empty() {
            fails.push(format!("{name}: no admissible field in the grid"));
            continue;
        }
        for k in 0..SETS_PER_FAMILY {
            let ctx = &fields[k % fields.len()];
            let mut rng = rng_for(ctx, 100 + (fi * SETS_PER_FAMILY + k) as u64);
            let built = match fi {
                0 => sample_thm36(ctx, &mut rng),
                1 => construct_thm37(ctx.clone(), sample_thm37_params(ctx, &mut rng)),
                2 => sample_thm310(ctx, &mut rng),
                _ => sample_prop312(ctx, &mut rng),
            };
            let res = built.map_err(|e| e.to_string()).and_then(|p| check_all(&p));
            if let Err(e) = res {
                fails.push(format!("{name} over {}: {e}", field_name(ctx)));
            }
        }
        summary.push(format!("{name} {SETS_PER_FAMILY}"));
    }
    Ok(match fails.first() {
        None => (true, format!("parameter sets: {}", summary.join(", "))),
        Some(f) => (false, format!("{} failures, first: {f}", fails.len())),
    })
}

/// `(exponent, log of coefficient)` terms as printed for the worked examples,
/// one list per branch in construction order.
pub const CUBIC_EXAMPLE_TERMS: [&[(usize, u64)]; 3] = [
    &[(128, 154), (16, 147), (2, 210)],
    &[(128, 206), (72, 367), (65, 381), (16, 283), (9, 493), (2, 464)],
    &[(65, 433), (9, 118), (2, 398)],
];
pub const PARITY_EXAMPLE_TERMS: [&[(usize, u64)]; 4] = [
    &[(81, 681), (9, 561), (1, 305)],
    &[(81, 309), (9, 117), (1, 553)],
    &[(81, 615), (9, 595), (1, 670)],
    &[(1, 273)],
];
pub const SWAP_EXAMPLE_TERMS: [&[(usize, u64)]; 5] = [
    &[(64, 68), (8, 264), (1, 33)],
    &[(64, 78), (8, 330), (1, 106)],
    &[(64, 87), (8, 409), (1, 303)],
    &[(64, 244), (8, 64), (1, 443)],
    &[(1, 365)],
];

/// `F_{8^3}` with `F_8 = F_2[t]/(t^3+t+1)` and the lex-first cubic over it.
pub fn cubic_field() -> Result<Arc<FieldCtx>> {
    Ok(Arc::new(FieldCtx::new(2, Modulus::Coeffs(vec![1, 1, 0, 1]), Modulus::Auto(3))?))
}

/// Class-preserving instance with `W = Y = (1, w, w^2)`, `H_j = x`, `r = 2`;
/// `w` is the field's fixed generator unless given.
pub fn cubic_example(ctx: &Arc<FieldCtx>, omega: Elem) -> Result<PiecewisePermutation> {
    let w = Basis::powers(ctx, omega)?;
    let id: Vec<Elem> = ctx.base_elements().collect();
    let gmt = Arc::new(GmtContext::new(ctx.clone(), w.clone())?);
    construct_thm36_tables(gmt, w, vec![id.clone(), id], 2)
}

/// Parity-twist instance over `F_{9^3}` with `W = Y = (1, w, w^2)`,
/// `delta = w^91`, `alpha = delta^2`, `r = d = 1`.
pub fn parity_example(ctx: &Arc<FieldCtx>, omega: Elem) -> Result<PiecewisePermutation> {
    let w = Basis::powers(ctx, omega)?;
    let delta = ctx.pow(omega, ctx.mu_order());
    let alpha = ctx.pow(delta, 2);
    let gmt = Arc::new(GmtContext::new(ctx.clone(), w.clone())?);
    construct_thm310(gmt, w, delta, alpha, 1, 1)
}

/// Three-set swap instance over `F_{8^3}` with `W = Y = (1, w, w^2)`, `r = 1`.
pub fn swap_example(ctx: &Arc<FieldCtx>, omega: Elem) -> Result<PiecewisePermutation> {
    let w = Basis::powers(ctx, omega)?;
    let gmt = Arc::new(GmtContext::new(ctx.clone(), w.clone())?);
    construct_prop312(gmt, w, 1)
}

fn support(p: &UniPoly) -> Vec<usize> {
    p.terms().map(|(e, _)| e).collect()
}

/// Compares branch interpolants against printed `(exponent, log)` terms,
/// logs taken base `omega`. Returns `(matching terms, total printed terms)`.
pub fn compare_printed(
    perm: &PiecewisePermutation,
    omega: Elem,
    printed: &[&[(usize, u64)]],
) -> Result<(usize, usize)> {
    let ctx = perm.field();
    let mut hits = 0;
    let mut total = 0;
    for (b, terms) in printed.iter().enumerate() {
        let p = interpolate_univariate(perm, Domain::Branch(b))?;
        for &(e, k) in terms.iter() {
            total += 1;
            if p.coeff(e) == ctx.pow(omega, k) {
                hits += 1;
            }
        }
    }
    Ok((hits, total))
}

/// Reruns an example on the Conway tower and reports how many printed
/// coefficients it reproduces.
fn conway_report(
    p: u64,
    m: usize,
    build: fn(&Arc<FieldCtx>, Elem) -> Result<PiecewisePermutation>,
    printed: &[&[(usize, u64)]],
) -> String {
    let run = || -> Result<(usize, usize)> {
        let ctx = Arc::new(FieldCtx::conway(p, m, 3)?);
        let omega = ctx.y();
        compare_printed(&build(&ctx, omega)?, omega, printed)
    };
    match run() {
        Ok((h, t)) => format!("Conway modulus reproduces {h}/{t} printed coefficients"),
        Err(e) => format!("Conway comparison unavailable: {e}"),
    }
}

fn cubic_example_check() -> Outcome {
    let ctx = cubic_field()?;
    let perm = cubic_example(&ctx, ctx.generator())?;
    if let Err(e) = check_all(&perm) {
        return Ok((false, e));
    }
    let want: [&[usize]; 3] = [&[2, 16, 128], &[2, 9, 16, 65, 72, 128], &[2, 9, 65]];
    for (b, w) in want.iter().enumerate() {
        let got = support(&interpolate_univariate(&perm, Domain::Branch(b))?);
        if got != *w {
            return Ok((false, format!("branch {b} support {got:?}, expected {w:?}")));
        }
    }
    let full = interpolate_univariate(&perm, Domain::Full)?;
    let d = index_decompose(&ctx, &full)?;
    let q = ctx.q() as u64;
    if d.ell != 73 || d.r % (q - 1) != perm.r() % (q - 1) {
        return Ok((false, format!("index {} with vanishing order {}", d.ell, d.r)));
    }
    let info = conway_report(2, 3, cubic_example, &CUBIC_EXAMPLE_TERMS);
    Ok((true, format!("supports match, index 73, vanishing order {}; {info}", d.r)))
}

fn branch_counts() -> Outcome {
    let f729 = grid_field(9, 3)?;
    let twist = parity_example(&f729, f729.generator())?;
    let f512 = cubic_field()?;
    let swap = swap_example(&f512, f512.generator())?;
    for (name, perm, want) in [("parity-twist", &twist, 4), ("three-set swap", &swap, 5)] {
        if let Err(e) = check_all(perm) {
            return Ok((false, format!("{name}: {e}")));
        }
        if perm.branches().len() != want {
            return Ok((false, format!("{name}: {} branches, expected {want}", perm.branches().len())));
        }
        let used: HashSet<usize> = perm.field().nonzero_elements().filter_map(|x| perm.branch_of(x)).collect();
        if used.len() != want {
            return Ok((false, format!("{name}: only {} branches reached", used.len())));
        }
    }
    let info_twist = conway_report(3, 2, parity_example, &PARITY_EXAMPLE_TERMS);
    let info_swap = conway_report(2, 3, swap_example, &SWAP_EXAMPLE_TERMS);
    Ok((true, format!("4 and 5 branches; parity-twist: {info_twist}; swap: {info_swap}")))
}

fn counting(g: Grid) -> Outcome {
    let mut notes = Vec::new();
    let c23 = counts(2, 3);
    let c32 = counts(3, 2);
    let f9 = grid_field(3, 2)?;
    let f8 = grid_field(2, 3)?;
    let m9 = enumerate_distinct_psi_tables(&f9, 1 << 20)?;
    let m8 = enumerate_distinct_psi_tables(&f8, 1 << 20)?;
    let h9 = enumerate_subprimitive_roots(&f9);
    if (c23.m, m9) != (24, 24) {
        notes.push(format!("M for n=2, q=3: formula {} enumeration {m9}", c23.m));
    }
    if (c32.m, m8) != (168, 168) {
        notes.push(format!("M for n=3, q=2: formula {} enumeration {m8}", c32.m));
    }
    if (c23.h, h9) != (4, 4) {
        notes.push(format!("H for n=2, q=3: formula {} enumeration {h9}", c23.h));
    }
    let sizes: Vec<(u64, usize)> = match g {
        Grid::Full => GRID.to_vec(),
        Grid::Small => GRID.iter().copied().filter(|&(q, n)| q.pow(n as u32) <= 81).collect(),
    };
    for (q, n) in &sizes {
        if !counts(*n, *q).ratio_exceeds_bound {
            notes.push(format!("ratio bound fails for ({q},{n})"));
        }
    }
    Ok(match notes.first() {
        None => (true, format!("M=24, M=168, H=4; ratio bound on {} grid points", sizes.len())),
        Some(n) => (false, n.clone()),
    })
}

fn orbit_maps(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut roots = 0;
    for ctx in grid(g)? {
        if ctx.order() > 729 {
            continue;
        }
        let ell = ctx.mu_order();
        let polys = list_subprimitive(&ctx);
        let q = ctx.q() as u64;
        let expected = (q - 1) * crate::arith::euler_phi(ell);
        let found: u64 = polys.iter().map(|p| p.roots.len() as u64).sum();
        if found != expected || polys.len() as u64 * ctx.n() as u64 != expected {
            fails.push(format!("{}: {found} roots in {} polynomials", field_name(&ctx), polys.len()));
        }
        let mut maps: Vec<HirschfeldMap> = Vec::new();
        for &alpha in polys.iter().flat_map(|p| &p.roots) {
            roots += 1;
            let map = hirschfeld_map(&ctx, &SubprimitiveRoot::new(&ctx, alpha)?);
            let unit = ctx.pow(alpha, ell) == Elem::ONE;
            if !map.power_identity || !map.bijective || map.image_is_mu != unit {
                fails.push(format!("{}: orbit map of {}", field_name(&ctx), ctx.render(alpha)));
            }
            maps.push(map);
        }
        if (ctx.q(), ctx.n()) == (3, 2)
            && !(distinct_at_second_point(&ctx, &maps) && not_closed_under_scaling(&ctx, &maps))
        {
            fails.push("(3,2): distinctness or non-closure".into());
        }
    }
    Ok(first_failure(&fails, roots, "subprimitive roots"))
}

fn agw_cross_validation() -> Outcome {
    let mut fails = Vec::new();
    let mut positives = 0;
    let mut checked = 0;
    for (p, m, n) in [(3, 1, 4), (3, 2, 2)] {
        let ctx = FieldCtx::auto(p, m, n)?;
        let mut rng = rng_for(&ctx, 11);
        let qm1 = ctx.q() as u64 - 1;
        let ell = ctx.mu_order();
        for _ in 0..50 {
            let h = if rng.gen_bool(0.5) {
                let c = ctx.elem(rng.gen_range(1..ctx.order() as u64))?;
                UniPoly::monomial(c, rng.gen_range(0..ell.min(8)) as usize)
            } else {
                let deg = rng.gen_range(0..=3);
                UniPoly::from_coeffs(
                    (0..=deg).map(|_| ctx.elem(rng.gen_range(0..ctx.order() as u64))).collect::<Result<_>>()?,
                )
            };
            if h.is_zero() {
                continue;
            }
            checked += 1;
            let rep = agw_for_polynomial(&ctx, 1, &h);
            positives += rep.exhaustive as usize;
            if !rep.agree {
                fails.push(format!("q={}: h={}", qm1 + 1, h.render(&ctx, false)));
            }
        }
    }
    let (ok, detail) = first_failure(&fails, checked, "polynomials");
    Ok((ok, format!("{detail}, {positives} permutations")))
}

fn t_poly_identity(g: Grid) -> Outcome {
    let mut fails = Vec::new();
    let mut checked = 0;
    for ctx in grid(g)? {
        let sign = if ctx.n() % 2 == 1 { Elem::ONE } else { ctx.neg(Elem::ONE) };
        let q = ctx.q() as u64;
        let mu = ctx.mu_elements();
        for w in sample_bases(&ctx) {
            checked += 1;
            let gmt = GmtContext::new(ctx.clone(), w)?;
            for &x in &mu {
                let xinv = ctx.inv(x).expect("nonzero");
                for (j, t) in gmt.t_all(x).into_iter().enumerate() {
                    if ctx.pow(t, q) != ctx.mul(sign, ctx.mul(xinv, t)) {
                        fails.push(format!("{}: j={j} at {}", field_name(&ctx), ctx.render(x)));
                    }
                }
            }
        }
    }
    Ok(first_failure(&fails, checked, "bases"))
}
