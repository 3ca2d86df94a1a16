use fano_symbolic::{
    gcd, integrate_over_interval, parse, parse_in, q, LinearForm, Polynomial, RationalFunction,
    Q,
};
use proptest::prelude::*;

const VARS: [&str; 3] = ["a", "b", "c"];

fn vars() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..6, 1i64..4), 0..5).prop_map(
        |terms| {
            Polynomial::from_terms(
                vars(),
                terms
                    .into_iter()
                    .map(|((x, y, z), n, d)| (vec![x, y, z], Q::new(n.into(), d.into()))),
            )
            .unwrap()
        },
    )
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn linear_form() -> impl Strategy<Value = LinearForm> {
    (-3i64..4, -3i64..4, -3i64..4).prop_map(|(k, x, y)| {
        LinearForm {
            constant: q(k),
            coefficients: [("a".to_string(), q(x)), ("b".to_string(), q(y))].into_iter().collect(),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributive(p in small_poly(), r in small_poly(), s in small_poly()) {
        prop_assert_eq!(&(&p + &r) * &s, &(&p * &s) + &(&r * &s));
    }

    #[test]
    fn commutative_and_associative(p in small_poly(), r in small_poly(), s in small_poly()) {
        prop_assert_eq!(&p * &r, &r * &p);
        prop_assert_eq!(&(&p * &r) * &s, &p * &(&r * &s));
        prop_assert_eq!(&(&p + &r) + &s, &p + &(&r + &s));
    }

    #[test]
    fn display_round_trips(p in small_poly()) {
        prop_assert_eq!(parse_in(&p.to_string(), &vars()).unwrap(), p);
    }

    #[test]
    fn gcd_divides_both(p in nonzero_poly(), r in nonzero_poly(), s in nonzero_poly()) {
        let x = &p * &s;
        let y = &r * &s;
        let g = gcd(&x, &y);
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
        // s divides the gcd up to a constant
        prop_assert!(g.div_exact(&s).is_some());
    }

    #[test]
    fn rational_function_equivalence(p in small_poly(), d in nonzero_poly(), e in nonzero_poly()) {
        let f = RationalFunction::new(p.clone(), d.clone()).unwrap();
        let g = RationalFunction::new(&p * &e, &d * &e).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(&g, &f);
        let z = &f - &g;
        prop_assert!(z.is_zero());
        prop_assert_eq!(z.denominator(), &Polynomial::one());
    }

    #[test]
    fn field_operations(p in nonzero_poly(), d in nonzero_poly(), r in nonzero_poly(), e in nonzero_poly()) {
        let f = RationalFunction::new(p, d).unwrap();
        let g = RationalFunction::new(r, e).unwrap();
        let back = &(&f * &g) / &g;
        prop_assert_eq!(&back, &f);
        let sum = &(&f + &g) - &g;
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn integral_over_degenerate_interval_vanishes(p in small_poly(), lo in linear_form()) {
        let pu = &p * &parse("u + 1").unwrap();
        prop_assert!(integrate_over_interval(&pu, "u", &lo, &lo).is_zero());
    }

    #[test]
    fn antiderivative_differentiates_back(p in small_poly()) {
        let pu = &p * &parse("u^2 - 3*u").unwrap();
        prop_assert_eq!(pu.antiderivative("u").derivative("u"), pu);
    }

    #[test]
    fn integral_is_additive(p in small_poly(), lo in linear_form(), mid in linear_form(), hi in linear_form()) {
        let pu = &p * &parse("u").unwrap();
        let whole = integrate_over_interval(&pu, "u", &lo, &hi);
        let split = &integrate_over_interval(&pu, "u", &lo, &mid) + &integrate_over_interval(&pu, "u", &mid, &hi);
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in small_poly(), r in small_poly(), x in -4i64..5, y in -4i64..5, z in -4i64..5) {
        let pt = [("a", x), ("b", y), ("c", z)].iter().map(|(k, v)| (k.to_string(), q(*v))).collect();
        let prod = (&p * &r).eval(&pt).unwrap();
        prop_assert_eq!(prod, p.eval(&pt).unwrap() * r.eval(&pt).unwrap());
    }
}
