use std::sync::Arc;

use projperm::permpoly::*;
use projperm::projective::PgMap;
use projperm::{Basis, Elem, FieldCtx, GmtContext, UniPoly};

fn f9() -> Arc<FieldCtx> {
    Arc::new(FieldCtx::auto(3, 1, 2).unwrap())
}

fn e(ctx: &FieldCtx, i: u64) -> Elem {
    ctx.elem(i).unwrap()
}

fn gmt(ctx: &Arc<FieldCtx>, w: Basis) -> Arc<GmtContext> {
    Arc::new(GmtContext::new(ctx.clone(), w).unwrap())
}

fn f512_example() -> (Arc<FieldCtx>, PiecewisePermutation) {
    let ctx = Arc::new(
        FieldCtx::new(
            2,
            projperm::Modulus::Coeffs(vec![1, 1, 0, 1]),
            projperm::Modulus::Auto(3),
        )
        .unwrap(),
    );
    let w = Basis::powers(&ctx, ctx.generator()).unwrap();
    let g = gmt(&ctx, w.clone());
    let id = UniPoly::monomial(Elem::ONE, 1);
    let perm = construct_thm36(g, w, &[id.clone(), id], 2).unwrap();
    (ctx, perm)
}

#[test]
fn identity_bijection_gives_identity_map() {
    let ctx = f9();
    let w = Basis::new(&ctx, vec![Elem::ONE, ctx.y()]).unwrap();
    let perm = build_from_bijection(gmt(&ctx, w.clone()), w, PgMap::identity(&ctx), 1).unwrap();
    for x in ctx.elements() {
        assert_eq!(perm.eval(x), x);
    }
    assert!(verify_agw(&perm).passed());
    assert!(verify_homogeneous(&perm).is_homogeneous);
    let p = interpolate_univariate(&perm, Domain::Full).unwrap();
    assert_eq!(p, UniPoly::monomial(Elem::ONE, 1));
}

#[test]
fn coordinate_swap_on_pg1_gives_permutation() {
    let ctx = f9();
    let w = Basis::new(&ctx, vec![Elem::ONE, ctx.y()]).unwrap();
    let swap = PgMap::from_fn(&ctx, projperm::projective::PgMapKind::Table, |v| vec![v[1], v[0]]);
    let perm = build_from_bijection(gmt(&ctx, w.clone()), w, swap, 1).unwrap();
    assert!(verify_permutation(&ctx, |x| perm.eval(x)).is_permutation);
    assert!(verify_agw(&perm).passed());
}

#[test]
fn squaring_on_prime_field_collides() {
    let ctx = FieldCtx::auto(5, 1, 2).unwrap();
    let rep = verify_permutation_on(ctx.prime_elements(), |x| ctx.mul(x, x));
    assert!(!rep.is_permutation);
    let (a, b, y) = rep.collision.unwrap();
    assert_ne!(a, b);
    assert_eq!((ctx.mul(a, a), ctx.mul(b, b)), (y, y));
    let one = e(&ctx, 1);
    let four = e(&ctx, 4);
    assert_eq!(ctx.mul(one, one), ctx.mul(four, four));
}

#[test]
fn index_decompose_examples() {
    let ctx = f9();
    let d = index_decompose(&ctx, &UniPoly::monomial(Elem::ONE, 2)).unwrap();
    assert_eq!((d.r, d.s, d.ell), (2, 8, 1));
    assert_eq!(d.h, UniPoly::monomial(Elem::ONE, 0));
    let p = UniPoly::from_terms(&ctx, [(1, Elem::ONE), (5, Elem::ONE)]);
    let d = index_decompose(&ctx, &p).unwrap();
    assert_eq!((d.r, d.s, d.ell), (1, 4, 2));
    assert_eq!(d.h, UniPoly::from_terms(&ctx, [(0, Elem::ONE), (1, Elem::ONE)]));
    assert!(matches!(index_decompose(&ctx, &UniPoly::zero()), Err(projperm::Error::ZeroPoly)));
    assert!(matches!(
        index_decompose(&ctx, &UniPoly::monomial(Elem::ONE, 0)),
        Err(projperm::Error::NonzeroConstantTerm)
    ));
}

#[test]
fn cubic_example_branch_supports_and_index() {
    let (ctx, perm) = f512_example();
    assert!(verify_permutation(&ctx, |x| perm.eval(x)).is_permutation);
    assert!(verify_homogeneous(&perm).is_homogeneous);
    assert!(verify_agw(&perm).passed());
    let want: [&[usize]; 3] = [&[2, 16, 128], &[2, 9, 16, 65, 72, 128], &[2, 9, 65]];
    for (b, w) in want.iter().enumerate() {
        let p = interpolate_univariate(&perm, Domain::Branch(b)).unwrap();
        let support: Vec<usize> = p.terms().map(|(e, _)| e).collect();
        assert_eq!(&support, w, "branch {b}");
    }
    let full = interpolate_univariate(&perm, Domain::Full).unwrap();
    let d = index_decompose(&ctx, &full).unwrap();
    assert_eq!(d.ell, 73);
    assert_eq!(d.r % 7, 2);
}

#[test]
fn quadratic_family_on_f9() {
    let ctx = f9();
    let i = ctx.y();
    let w = ctx.mu_elements().into_iter().chain(ctx.nonzero_elements()).find(|&w| ctx.pow(w, 2) == i);
    let params = Thm37Params {
        h: UniPoly::monomial(Elem::ONE, 1),
        r: 1,
        a: Elem::ONE,
        b: Elem::ONE,
        u: i,
        v: Elem::ONE,
        w: w.unwrap(),
    };
    let perm = construct_thm37(ctx.clone(), params.clone()).unwrap();
    assert!(verify_agw(&perm).passed());
    let bad = Thm37Params { u: Elem::ONE, ..params };
    assert!(matches!(construct_thm37(ctx, bad), Err(projperm::Error::BadParams(_))));
}

#[test]
fn parity_twist_and_swap_families() {
    let ctx = f9();
    let w = Basis::new(&ctx, vec![Elem::ONE, ctx.y()]).unwrap();
    let two = e(&ctx, 2);
    let perm = construct_thm310(gmt(&ctx, w.clone()), w.clone(), two, Elem::ONE, 1, 1).unwrap();
    assert!(verify_agw(&perm).passed());
    assert!(construct_thm310(gmt(&ctx, w.clone()), w, two, two, 1, 1).is_err());

    let f8 = Arc::new(FieldCtx::auto(2, 1, 3).unwrap());
    let w = Basis::powers(&f8, f8.generator()).unwrap();
    let perm = construct_prop312(gmt(&f8, w.clone()), w, 1).unwrap();
    assert!(verify_agw(&perm).passed());
    assert_eq!(perm.branches().len(), 5);
}
