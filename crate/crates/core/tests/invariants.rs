use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projperm::linalg::{dual_basis, dual_basis_by_solve};
use projperm::projective::canonical;
use projperm::{Basis, Elem, FieldCtx, GmtContext, InverseRoute};

fn fields() -> &'static [Arc<FieldCtx>] {
    static FIELDS: OnceLock<Vec<Arc<FieldCtx>>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        [(3, 1, 4), (3, 2, 2), (2, 3, 3), (5, 1, 3)]
            .into_iter()
            .map(|(p, m, n)| Arc::new(FieldCtx::auto(p, m, n).unwrap()))
            .collect()
    })
}

fn field_and_elems(k: usize) -> impl Strategy<Value = (Arc<FieldCtx>, Vec<Elem>)> {
    (0..fields().len()).prop_flat_map(move |i| {
        let ctx = fields()[i].clone();
        let order = ctx.order();
        proptest::collection::vec(0..order, k)
            .prop_map(move |v| (ctx.clone(), v.into_iter().map(|i| ctx.elem(i as u64).unwrap()).collect()))
    })
}

fn field_and_seed() -> impl Strategy<Value = (Arc<FieldCtx>, u64)> {
    (0..fields().len(), any::<u64>()).prop_map(|(i, s)| (fields()[i].clone(), s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn frobenius_is_a_field_automorphism_fixing_the_base((ctx, v) in field_and_elems(2)) {
        let (a, b) = (v[0], v[1]);
        prop_assert_eq!(ctx.frob(ctx.add(a, b), 1), ctx.add(ctx.frob(a, 1), ctx.frob(b, 1)));
        prop_assert_eq!(ctx.frob(ctx.mul(a, b), 1), ctx.mul(ctx.frob(a, 1), ctx.frob(b, 1)));
        prop_assert_eq!(ctx.frob(a, ctx.n()), a);
        prop_assert_eq!(ctx.frob(a, 1), ctx.frob_iter(a, 1));
    }

    #[test]
    fn trace_is_base_linear_and_norm_multiplicative((ctx, v) in field_and_elems(3)) {
        let c = ctx.elem((v[2].index() % ctx.q()) as u64).unwrap();
        let lhs = ctx.trace(ctx.add(ctx.mul(c, v[0]), v[1]));
        let rhs = ctx.add(ctx.mul(c, ctx.trace(v[0])), ctx.trace(v[1]));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(ctx.in_base(ctx.trace(v[0])));
        prop_assert_eq!(ctx.norm(ctx.mul(v[0], v[1])), ctx.mul(ctx.norm(v[0]), ctx.norm(v[1])));
    }

    #[test]
    fn tower_coordinates_roundtrip((ctx, v) in field_and_elems(1)) {
        let x = v[0];
        prop_assert_eq!(ctx.from_ext_coeffs(&ctx.ext_coeffs(x)).unwrap(), x);
        prop_assert_eq!(ctx.from_nested(&ctx.to_nested(x)).unwrap(), x);
    }

    #[test]
    fn canonical_form_is_scale_invariant((ctx, v) in field_and_elems(4)) {
        let n = ctx.n();
        let coords = &v[..n];
        prop_assume!(coords.iter().any(|c| !c.is_zero()));
        let coords: Vec<Elem> = coords.iter().map(|c| ctx.elem((c.index() % ctx.q()) as u64).unwrap()).collect();
        prop_assume!(coords.iter().any(|c| !c.is_zero()));
        let p = canonical(&ctx, &coords).unwrap();
        prop_assert_eq!(&canonical(&ctx, p.coords()).unwrap(), &p);
        let c = ctx.elem((1 + v[n.min(3)].index() % (ctx.q() - 1)) as u64).unwrap();
        let scaled: Vec<Elem> = coords.iter().map(|&x| ctx.mul(c, x)).collect();
        prop_assert_eq!(canonical(&ctx, &scaled).unwrap(), p);
    }

    #[test]
    fn psi_inverse_routes_recover_points((ctx, seed) in field_and_seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gmt = GmtContext::new(ctx.clone(), Basis::random(&ctx, &mut rng)).unwrap();
        for p in projperm::projective::enumerate_pg(&ctx).iter().step_by(7) {
            let x = gmt.psi(p);
            prop_assert!(ctx.is_in_mu(x.elem()));
            prop_assert_eq!(&gmt.psi_inverse(x, InverseRoute::TPoly), p);
            prop_assert_eq!(&gmt.psi_inverse(x, InverseRoute::Trace), p);
        }
    }

    #[test]
    fn dual_basis_routes_agree_and_are_dual((ctx, seed) in field_and_seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = Basis::random(&ctx, &mut rng);
        let b = dual_basis(&ctx, &w).unwrap();
        prop_assert_eq!(&b, &dual_basis_by_solve(&ctx, &w).unwrap());
        for (i, &wi) in w.elems().iter().enumerate() {
            for (j, &bj) in b.elems().iter().enumerate() {
                let expect = if i == j { Elem::ONE } else { Elem::ZERO };
                prop_assert_eq!(ctx.trace(ctx.mul(wi, bj)), expect);
            }
        }
    }
}
