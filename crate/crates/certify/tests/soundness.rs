use std::collections::BTreeSet;

use fano_certify::{certify_interval, certify_orthant, spot_check, Status, Substitution};
use fano_symbolic::{Polynomial, Q};
use proptest::prelude::*;

fn vars() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -2i64..6), 1..6).prop_map(|terms| {
        Polynomial::from_terms(
            vars(),
            terms
                .into_iter()
                .map(|((a, b, c), n)| (vec![a, b, c], Q::from_integer(n.into()))),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_certificates_are_sound(p in poly(), seed in 0u64..1000) {
        let strict: BTreeSet<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let cert = certify_orthant(&p, &strict);
        if cert.status == Status::Positive {
            let bad = spot_check(&p, &Substitution::identity(), &strict, &vars(), 50, seed, false).unwrap();
            prop_assert!(bad.is_none(), "counterexample {:?}", bad);
        }
        if cert.status >= Status::Nonnegative {
            let bad = spot_check(&p, &Substitution::identity(), &strict, &vars(), 50, seed, true).unwrap();
            prop_assert!(bad.is_none());
        }
    }

    #[test]
    fn interval_certificates_are_sound(cs in prop::collection::vec(-5i64..6, 1..5), n in 1i64..40) {
        let p = Polynomial::from_terms(
            vec!["b".to_string()],
            cs.iter().enumerate().map(|(k, c)| (vec![k as u32], Q::from_integer((*c).into()))),
        )
        .unwrap();
        let lo = Q::from_integer((-1).into());
        let hi = Q::new(1.into(), 2.into());
        let cert = certify_interval(&p, "b", &lo, &hi, 0).unwrap();
        if cert.status == Status::Positive {
            // points strictly inside the interval
            let x = &lo + (&hi - &lo) * Q::new(n.into(), 41.into());
            let pt = [("b".to_string(), x)].into_iter().collect();
            prop_assert!(p.eval(&pt).unwrap() > Q::default());
        }
    }
}
