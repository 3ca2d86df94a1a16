// Toric oracle: the character of H^0(kL) on a smooth toric threefold is the sum of
// lambda^<xi, m> over lattice points m of kP. For the blow-up of P3 at a point with
// L = xH - yE the polytope is {m >= 0, y <= m1 + m2 + m3 <= x}; its vertices are the
// fixed points and its edge directions give the weights.

use std::collections::BTreeMap;

use fano_localization::{character_series, df_with_oracle, FixedPoint, LocalizationData, Orientation, K};
use fano_symbolic::{parse_in, q, Polynomial, Q};
use proptest::prelude::*;

fn dot(xi: [i64; 3], e: [i64; 3]) -> i64 {
    xi.iter().zip(e).map(|(a, b)| a * b).sum()
}

fn unit(i: usize) -> [i64; 3] {
    let mut e = [0; 3];
    e[i] = 1;
    e
}

fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn neg(a: [i64; 3]) -> [i64; 3] {
    [-a[0], -a[1], -a[2]]
}

fn v7(xi: [i64; 3]) -> LocalizationData {
    let vars = ["x".to_string(), "y".to_string()];
    let mut fixed_points = Vec::new();
    for i in 0..3 {
        let others: Vec<[i64; 3]> = (0..3).filter(|&j| j != i).map(|j| sub(unit(j), unit(i))).collect();
        for (name, h, e, radial) in [("outer", xi[i], 0, neg(unit(i))), ("inner", 0, xi[i], unit(i))] {
            let edges = [others[0], others[1], radial];
            fixed_points.push(FixedPoint {
                name: format!("{name}{i}"),
                alphas: edges.iter().map(|&e| -dot(xi, e)).collect(),
                mu: BTreeMap::from([("H".to_string(), h), ("E".to_string(), e)]),
            });
        }
    }
    LocalizationData {
        dim: 3,
        bundles: vec!["H".into(), "E".into()],
        fixed_points,
        polarization: BTreeMap::from([
            ("H".to_string(), parse_in("x", &vars).unwrap()),
            ("E".to_string(), parse_in("y", &vars).unwrap()),
        ]),
        orientation: Orientation::Cotangent,
    }
}

/// Number of lattice points and total weight of kP.
fn count(xi: [i64; 3], x: i64, y: i64, k: i64) -> (i64, i64) {
    let (lo, hi) = (y * k, x * k);
    let (mut n, mut w) = (0, 0);
    for a in 0..=hi {
        for b in 0..=hi - a {
            for c in 0..=hi - a - b {
                if a + b + c >= lo {
                    n += 1;
                    w += dot(xi, [a, b, c]);
                }
            }
        }
    }
    (n, w)
}

fn eval(p: &Polynomial, x: i64, y: i64, k: i64) -> Q {
    let pt = BTreeMap::from([("x".to_string(), q(x)), ("y".to_string(), q(y)), (K.to_string(), q(k))]);
    p.eval(&pt).unwrap()
}

#[test]
fn leading_coefficients_are_intersection_numbers() {
    let vars = ["x".to_string(), "y".to_string()];
    let s = character_series(&v7([1, 2, 5])).unwrap();
    assert!(s.poles_cancel());
    let (a0, a1, _, _) = s.coefficients(3);
    assert_eq!(a0, parse_in("(x^3 - y^3)*1/6", &vars).unwrap());
    assert_eq!(a1, parse_in("(4*x^2 - 2*y^2)*1/4", &vars).unwrap());
}

#[test]
fn closed_forms_agree_with_series() {
    let d = v7([1, 2, 5]);
    let s = character_series(&d).unwrap();
    let (a0, a1, _, _) = s.coefficients(3);
    let r = df_with_oracle(&d, &a0, &a1).unwrap();
    assert!(r.oracle_agreement);
    assert_eq!(r.df, r.series_df);
}

#[test]
fn df_changes_sign_with_the_subgroup() {
    let df = |xi| {
        let d = v7(xi);
        let s = character_series(&d).unwrap();
        let (a0, a1, _, _) = s.coefficients(3);
        df_with_oracle(&d, &a0, &a1).unwrap().df
    };
    let pt = BTreeMap::from([("x".to_string(), q(4)), ("y".to_string(), q(2))]);
    let plus = df([1, 2, 5]).eval(&pt).unwrap();
    let minus = df([-1, -2, -5]).eval(&pt).unwrap();
    assert_ne!(plus, q(0));
    assert_eq!(plus, -minus);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_counts_lattice_points(
        xi in proptest::array::uniform3(-4i64..=4),
        y in 1i64..3,
        d in 1i64..3,
        k in 1i64..4,
    ) {
        prop_assume!(xi.iter().all(|&v| v != 0));
        prop_assume!(xi[0] != xi[1] && xi[1] != xi[2] && xi[0] != xi[2]);
        let s = character_series(&v7(xi)).unwrap();
        prop_assert!(s.poles_cancel());
        let x = y + d;
        let (n, w) = count(xi, x, y, k);
        prop_assert_eq!(eval(&s.h, x, y, k), q(n));
        prop_assert_eq!(eval(&s.w, x, y, k), q(w));
    }
}
