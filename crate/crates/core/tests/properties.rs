use proptest::prelude::*;
use rikitake_core::algebra::{rat, rat_int, MultiPoly, Rational, RationalFn, Ring};
use rikitake_core::models::{
    canonical_ring, lagrangian_system, rikitake_field, state_ring, VectorField,
};
use rikitake_core::parser::{parse_expr, parse_poly, ParseContext};
use rikitake_core::poisson::{canonical_bracket_poly, lie_bracket};
use rikitake_core::symmetry::{
    extended_ring, ode1_symmetry_residual, point_ring, prolong2_residual, NewtonCandidate,
    PointSymmetryCandidate,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Up to `max_terms` terms of total degree at most `max_deg`.
fn poly(ring: Ring, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let n = ring.arity();
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, n), rational()),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg);
        MultiPoly::from_terms(&ring, terms).unwrap()
    })
}

fn nonzero_poly(ring: Ring, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    poly(ring, max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn small() -> impl Strategy<Value = MultiPoly> {
    poly(state_ring(), 4, 6)
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

fn field(max_deg: u32) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(state_ring(), max_deg, 4), 3)
        .prop_map(|c| VectorField::new(&state_ring(), c).unwrap())
}

proptest! {
    #[test]
    fn ring_laws(a in small(), b in small(), c in small()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(a in small(), b in small(), v in 0usize..3) {
        let lhs = (&a * &b).diff_at(v);
        let rhs = &a * &b.diff_at(v) + &b * &a.diff_at(v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subst_then_eval(p in poly(state_ring(), 3, 5),
                       m in prop::collection::vec(poly(state_ring(), 2, 3), 3),
                       pt in point(3)) {
        let composed = p.subst(&m).unwrap();
        let inner: Vec<Rational> = m.iter().map(|mi| mi.eval(&pt).unwrap()).collect();
        prop_assert_eq!(composed.eval(&pt).unwrap(), p.eval(&inner).unwrap());
    }

    #[test]
    fn zero_test_is_sound(a in small(), b in nonzero_poly(state_ring(), 2, 3), c in nonzero_poly(state_ring(), 2, 3),
                          pts in prop::collection::vec(point(3), 100)) {
        let ab = RationalFn::new(a.clone(), b.clone()).unwrap();
        let scaled = RationalFn::new(&a * &c, &b * &c).unwrap();
        for r in [&scaled - &ab, &ab - &ab] {
            prop_assert!(r.is_zero());
            for pt in &pts {
                if let Ok(v) = r.eval(pt) {
                    prop_assert_eq!(v, rat_int(0));
                }
            }
        }
    }

    #[test]
    fn parse_print_round_trip(p in small()) {
        let ctx = ParseContext::new(&state_ring());
        prop_assert_eq!(parse_poly(&p.to_string(), &ctx).unwrap(), p);
    }

    #[test]
    fn precedence(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9) {
        let ctx = ParseContext::new(&state_ring());
        let lhs = parse_expr(&format!("({a})+({b})*({c})*x"), &ctx).unwrap();
        let rhs = parse_expr(&format!("({a})+(({b})*({c})*x)"), &ctx).unwrap();
        prop_assert_eq!(lhs, rhs);
        let neg = parse_poly("-x^2", &ctx).unwrap();
        prop_assert_eq!(neg, -(&MultiPoly::var(&state_ring(), "x").unwrap().pow(2)));
    }

    #[test]
    fn parameter_binding(n in -9i64..=9, d in 1i64..=9) {
        let beta = rat(n, d);
        prop_assume!(n != 0);
        let src = "x^2/(4*beta) - y^2/(4*beta) + beta*z";
        let ctx = ParseContext::new(&state_ring()).with_param("beta", beta).unwrap();
        let bound = parse_expr(src, &ctx).unwrap();
        let literal = src.replace("beta", &format!("({n}/{d})"));
        prop_assert_eq!(bound, parse_expr(&literal, &ParseContext::new(&state_ring())).unwrap());
    }

    #[test]
    fn canonical_bracket_laws(f in poly(canonical_ring(), 3, 4),
                              g in poly(canonical_ring(), 3, 4),
                              k in poly(canonical_ring(), 2, 3)) {
        let fg = canonical_bracket_poly(&f, &g).unwrap();
        prop_assert_eq!(&fg, &-canonical_bracket_poly(&g, &f).unwrap());
        let lhs = canonical_bracket_poly(&f, &(&g * &k)).unwrap();
        let rhs = &g * &canonical_bracket_poly(&f, &k).unwrap() + &fg * &k;
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lie_bracket_laws(x in field(2), y in field(2), z in field(2)) {
        let xy = lie_bracket(&x, &y).unwrap();
        prop_assert!(xy.checked_add(&lie_bracket(&y, &x).unwrap()).unwrap().is_zero());
        let cyc = lie_bracket(&x, &lie_bracket(&y, &z).unwrap()).unwrap()
            .checked_add(&lie_bracket(&y, &lie_bracket(&z, &x).unwrap()).unwrap()).unwrap()
            .checked_add(&lie_bracket(&z, &xy).unwrap()).unwrap();
        prop_assert!(cyc.is_zero());
    }

    #[test]
    fn ode1_residual_is_linear(
        parts1 in prop::collection::vec(poly(extended_ring(&state_ring()).unwrap(), 2, 3), 4),
        parts2 in prop::collection::vec(poly(extended_ring(&state_ring()).unwrap(), 2, 3), 4),
        c in nonzero_rational(),
        n in -3i64..=3,
    ) {
        let ext = extended_ring(&state_ring()).unwrap();
        let f = rikitake_field(&rat_int(n));
        let mk = |p: &[MultiPoly]| PointSymmetryCandidate::new(&ext, p[0].clone(), p[1..].to_vec()).unwrap();
        let (a, b) = (mk(&parts1), mk(&parts2));
        let ra = ode1_symmetry_residual(&f, &a).unwrap();
        let rb = ode1_symmetry_residual(&f, &b).unwrap();
        let rsum = ode1_symmetry_residual(&f, &a.checked_add(&b).unwrap()).unwrap();
        let rscaled = ode1_symmetry_residual(&f, &a.scale(&c)).unwrap();
        for i in 0..3 {
            prop_assert_eq!(&rsum[i], &(&ra[i] + &rb[i]));
            prop_assert_eq!(&rscaled[i], &ra[i].scale(&c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prolongation_is_linear(
        p1 in prop::collection::vec(poly(point_ring(), 1, 2), 3),
        p2 in prop::collection::vec(poly(point_ring(), 1, 2), 3),
        c in nonzero_rational(),
    ) {
        let js = lagrangian_system(&rat_int(1)).unwrap();
        let mk = |p: &[MultiPoly]| NewtonCandidate::new(p[0].clone(), p[1].clone(), p[2].clone()).unwrap();
        let (a, b) = (mk(&p1), mk(&p2));
        let ra = prolong2_residual(&js, &a).unwrap();
        let rb = prolong2_residual(&js, &b).unwrap();
        let rsum = prolong2_residual(&js, &a.add(&b)).unwrap();
        let rscaled = prolong2_residual(&js, &a.scale(&c)).unwrap();
        let cf = RationalFn::constant(js.phase_ring(), c.clone());
        for i in 0..2 {
            prop_assert_eq!(&rsum[i], &(&ra[i] + &rb[i]));
            prop_assert_eq!(&rscaled[i], &(&ra[i] * &cf));
        }
    }
}
