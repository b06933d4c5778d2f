use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use projperm::acceptance::{cubic_example, cubic_field, sample_thm37_params};
use projperm::permpoly::{construct_prop312, construct_thm310, construct_thm37, PiecewisePermutation};
use projperm::wire;
use projperm::{Basis, Elem, FieldCtx, GmtContext, PgMap, UniPoly};

fn f9() -> Arc<FieldCtx> {
    Arc::new(FieldCtx::auto(3, 1, 2).unwrap())
}

fn eval_table(perm: &PiecewisePermutation) -> Vec<Elem> {
    perm.field().elements().map(|x| perm.eval(x)).collect()
}

#[test]
fn elements_roundtrip_in_every_accepted_form() {
    let ctx = f9();
    for x in ctx.elements() {
        assert_eq!(wire::elem_from_json(&ctx, &wire::elem_to_json(&ctx, x)).unwrap(), x);
        assert_eq!(wire::elem_from_json(&ctx, &json!(x.index())).unwrap(), x);
    }
    let g = ctx.generator();
    assert_eq!(wire::parse_elem_str(&ctx, "g^3").unwrap(), ctx.pow(g, 3));
    assert_eq!(wire::parse_elem_str(&ctx, "g").unwrap(), g);
    assert_eq!(wire::elem_to_json(&ctx, ctx.elem(3).unwrap()), json!([[0], [1]]));
    assert!(wire::elem_from_json(&ctx, &json!([[5], [0]])).is_err());
}

#[test]
fn polynomials_roundtrip() {
    let ctx = f9();
    let p = wire::parse_poly_str(&ctx, "x^3 + g^5*x + 2").unwrap();
    assert_eq!(p.degree(), Some(3));
    let v = wire::poly_to_json(&ctx, &p, Some(ctx.generator()));
    let (ctx2, p2) = wire::poly_from_json(&v).unwrap();
    assert_eq!(ctx2.spec(), ctx.spec());
    assert_eq!(p2, p);

    let cube = UniPoly::monomial(Elem::ONE, 3);
    let v = wire::poly_to_json(&ctx, &cube, None);
    assert_eq!(v["terms"], json!([{ "e": 3, "c": [[1], [0]] }]));
}

#[test]
fn bases_and_gmt_roundtrip() {
    let ctx = f9();
    for s in ["std", "poly", "normal", "random:11"] {
        let b = wire::parse_basis_str(&ctx, s).unwrap();
        assert_eq!(wire::basis_from_json(&ctx, &wire::basis_to_json(&ctx, &b)).unwrap(), b);
        let gmt = GmtContext::new(ctx.clone(), b).unwrap();
        let v = wire::gmt_to_json(&gmt);
        assert_eq!(v["cofactors"].as_array().unwrap().len(), 2);
        let back = wire::gmt_from_json(&v).unwrap();
        assert_eq!(wire::gmt_to_json(&back), v);
    }
    assert!(wire::parse_basis_str(&ctx, "[[[1],[0]],[[2],[0]]]").is_err());
}

#[test]
fn projective_maps_roundtrip() {
    let ctx = Arc::new(FieldCtx::auto(2, 1, 3).unwrap());
    for g in [PgMap::identity(&ctx), PgMap::three_set_swap(&ctx).unwrap()] {
        let back = wire::pgmap_from_json(&ctx, &wire::pgmap_to_json(&ctx, &g)).unwrap();
        assert_eq!(back.pairs(&ctx), g.pairs(&ctx));
    }
}

#[test]
fn quadratic_parameters_roundtrip() {
    let ctx = f9();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = sample_thm37_params(&ctx, &mut rng);
    let back = wire::thm37_params_from_json(&ctx, &wire::thm37_params_to_json(&ctx, &params)).unwrap();
    assert_eq!(back, params);
}

#[test]
fn permutations_roundtrip_to_the_same_map() {
    let cubic = cubic_field().unwrap();
    let f8 = Arc::new(FieldCtx::auto(2, 1, 3).unwrap());
    let f27 = Arc::new(FieldCtx::auto(3, 1, 3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let gmt8 = Arc::new(GmtContext::new(f8.clone(), Basis::random(&f8, &mut rng)).unwrap());
    let gmt27 = Arc::new(GmtContext::new(f27.clone(), Basis::standard(&f27)).unwrap());
    let perms = vec![
        cubic_example(&cubic, cubic.generator()).unwrap(),
        construct_prop312(gmt8.clone(), gmt8.basis().clone(), 1).unwrap(),
        construct_thm310(gmt27.clone(), gmt27.basis().clone(), f27.base_generator(), Elem::ONE, 1, 1).unwrap(),
        construct_thm37(f9(), sample_thm37_params(&f9(), &mut rng)).unwrap(),
    ];
    for perm in perms {
        let v = wire::perm_to_json(&perm);
        let back = wire::perm_from_json(&v).unwrap();
        assert_eq!(eval_table(&back), eval_table(&perm));
        assert_eq!(wire::perm_to_json(&back), v);
    }
}
