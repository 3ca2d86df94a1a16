//! Donaldson-Futaki invariants of product test configurations induced by a
//! one-parameter subgroup with isolated fixed points. Two independent paths: closed
//! sums over fixed points for threefolds, and the Laurent expansion of the equivariant
//! character `sum_P lambda^(k mu(P)) / prod_j (1 - lambda^(-alpha_j(P)))` at
//! `lambda = exp(eps)`.

use std::collections::BTreeMap;

use fano_symbolic::{LaurentSeries, Polynomial, RationalFunction, SymbolicError, Q};
use thiserror::Error;

/// Formal variable of the Hilbert and weight polynomials.
pub const K: &str = "k";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocalizationError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("fixed point `{point}` has {got} weights, expected {expected}")]
    Arity {
        point: String,
        got: usize,
        expected: usize,
    },
    #[error("fixed point `{0}` has a zero weight")]
    ZeroWeight(String),
    #[error("fixed point `{point}` has no weight for bundle `{bundle}`")]
    MissingBundle { point: String, bundle: String },
    #[error("closed forms are only available for threefolds")]
    NotThreefold,
    #[error("a0 vanishes identically")]
    DegenerateA0,
}

/// Sign convention of the listed weights. `Tangent` weights are negated before use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Cotangent,
    Tangent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    pub name: String,
    pub alphas: Vec<i64>,
    pub mu: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationData {
    pub dim: usize,
    pub bundles: Vec<String>,
    pub fixed_points: Vec<FixedPoint>,
    /// Coefficient of each bundle in the polarization.
    pub polarization: BTreeMap<String, Polynomial>,
    pub orientation: Orientation,
}

impl LocalizationData {
    pub fn validate(&self) -> Result<(), LocalizationError> {
        for p in &self.fixed_points {
            if p.alphas.len() != self.dim {
                return Err(LocalizationError::Arity {
                    point: p.name.clone(),
                    got: p.alphas.len(),
                    expected: self.dim,
                });
            }
            if p.alphas.contains(&0) {
                return Err(LocalizationError::ZeroWeight(p.name.clone()));
            }
            for b in self.bundles.iter().chain(self.polarization.keys()) {
                if !p.mu.contains_key(b) {
                    return Err(LocalizationError::MissingBundle {
                        point: p.name.clone(),
                        bundle: b.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Weights in the cotangent convention.
    pub fn alphas(&self, p: &FixedPoint) -> Vec<Q> {
        let s = match self.orientation {
            Orientation::Cotangent => 1,
            Orientation::Tangent => -1,
        };
        p.alphas.iter().map(|a| Q::from_integer((s * a).into())).collect()
    }

    /// Fiber weight of the polarization, composed linearly from the bundle weights.
    pub fn mu_l(&self, p: &FixedPoint) -> Polynomial {
        let mut out = Polynomial::zero();
        for (b, coeff) in &self.polarization {
            let w = Q::from_integer(p.mu.get(b).copied().unwrap_or(0).into());
            out = &out + &coeff.scale(&w);
        }
        out
    }
}

/// `b0 = sum mu^4 / (24 prod alpha)`, `b1 = sum mu^3 (sum alpha) / (12 prod alpha)`.
pub fn b0_b1_closed(data: &LocalizationData) -> Result<(Polynomial, Polynomial), LocalizationError> {
    data.validate()?;
    if data.dim != 3 {
        return Err(LocalizationError::NotThreefold);
    }
    let mut b0 = Polynomial::zero();
    let mut b1 = Polynomial::zero();
    for p in &data.fixed_points {
        let al = data.alphas(p);
        let prod: Q = al.iter().product();
        let sum: Q = al.iter().sum();
        let mu = data.mu_l(p);
        let m3 = mu.pow(3);
        b0 = &b0 + &(&m3 * &mu).scale(&(Q::new(1.into(), 24.into()) / &prod));
        b1 = &b1 + &m3.scale(&(sum / (Q::from_integer(12.into()) * &prod)));
    }
    Ok((b0, b1))
}

/// Expansion of the character in `eps` around zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterExpansion {
    /// Coefficients of `eps^-n .. eps^-1`, all zero when the weights are consistent.
    pub poles: Vec<Polynomial>,
    /// Constant term, the Hilbert polynomial `h(k)`.
    pub h: Polynomial,
    /// Linear term, the total weight `w(k)`.
    pub w: Polynomial,
}

impl CharacterExpansion {
    pub fn poles_cancel(&self) -> bool {
        self.poles.iter().all(|p| p.is_zero())
    }

    /// Leading coefficients `(a0, a1)` of `h` and `(b0, b1)` of `w`.
    pub fn coefficients(&self, n: u32) -> (Polynomial, Polynomial, Polynomial, Polynomial) {
        (
            self.h.coeff_of(K, n),
            self.h.coeff_of(K, n - 1),
            self.w.coeff_of(K, n + 1),
            self.w.coeff_of(K, n),
        )
    }
}

/// Independent path: exact Laurent expansion of every fixed-point term.
pub fn character_series(data: &LocalizationData) -> Result<CharacterExpansion, LocalizationError> {
    data.validate()?;
    let n = data.dim as i64;
    let k = Polynomial::var(K);
    let mut total: Option<LaurentSeries> = None;
    for p in &data.fixed_points {
        // Each inverse factor starts at eps^-1, so n + 1 orders each keep eps^1 exact.
        let mut term = LaurentSeries::exp(&(&k * &data.mu_l(p)), n + 1);
        for a in data.alphas(p) {
            term = term.mul_truncate(&LaurentSeries::inverse_one_minus_exp(&a, n + 1)?);
        }
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    let total = total.unwrap_or_else(|| LaurentSeries::zero(1));
    debug_assert!(total.truncation_order() >= 1);
    Ok(CharacterExpansion {
        poles: (-n..0).map(|j| total.coefficient(j)).collect(),
        h: total.coefficient(0),
        w: total.coefficient(1),
    })
}

/// `(b0 a1 - b1 a0) / a0`.
pub fn df_invariant(
    a0: &Polynomial,
    a1: &Polynomial,
    b0: &Polynomial,
    b1: &Polynomial,
) -> Result<RationalFunction, LocalizationError> {
    if a0.is_zero() {
        return Err(LocalizationError::DegenerateA0);
    }
    Ok(RationalFunction::new(&(b0 * a1) - &(b1 * a0), a0.clone())?)
}

/// Both paths side by side.
#[derive(Clone, Debug)]
pub struct DfResult {
    pub a0: Polynomial,
    pub a1: Polynomial,
    pub b0: Polynomial,
    pub b1: Polynomial,
    pub df: RationalFunction,
    pub series: CharacterExpansion,
    pub series_df: RationalFunction,
    /// Closed and series `b0, b1` agree and the poles cancel.
    pub oracle_agreement: bool,
}

/// DF from intersection-theoretic `a0 = L^n / n!`, `a1 = (-K . L^(n-1)) / (2 (n-1)!)`
/// and closed-form `b0, b1`, checked against the series.
pub fn df_with_oracle(
    data: &LocalizationData,
    a0: &Polynomial,
    a1: &Polynomial,
) -> Result<DfResult, LocalizationError> {
    let (b0, b1) = b0_b1_closed(data)?;
    let df = df_invariant(a0, a1, &b0, &b1)?;
    let series = character_series(data)?;
    let (sa0, sa1, sb0, sb1) = series.coefficients(data.dim as u32);
    let series_df = df_invariant(&sa0, &sa1, &sb0, &sb1)?;
    let oracle_agreement = series.poles_cancel() && sb0 == b0 && sb1 == b1;
    Ok(DfResult {
        a0: a0.clone(),
        a1: a1.clone(),
        b0,
        b1,
        df,
        series,
        series_df,
        oracle_agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano_symbolic::{parse_in, qr};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn point(name: &str, alphas: [i64; 3], h: i64, e: i64) -> FixedPoint {
        FixedPoint {
            name: name.into(),
            alphas: alphas.to_vec(),
            mu: BTreeMap::from([("H".to_string(), h), ("E".to_string(), e)]),
        }
    }

    fn data_226() -> LocalizationData {
        let vars = names(&["a", "b"]);
        LocalizationData {
            dim: 3,
            bundles: names(&["H", "E"]),
            fixed_points: vec![
                point("P0", [-1, -2, -1], -2, -2),
                point("P0'", [-1, -3, 1], -2, -3),
                point("P1", [1, -1, -3], -1, 0),
                point("P3", [1, 3, -4], 1, 3),
                point("P3'", [1, -1, 4], 1, -1),
                point("P4", [3, 2, 1], 2, 0),
            ],
            polarization: BTreeMap::from([
                ("H".to_string(), parse_in("a + 2*b", &vars).unwrap()),
                ("E".to_string(), parse_in("-b", &vars).unwrap()),
            ]),
            orientation: Orientation::Cotangent,
        }
    }

    #[test]
    fn closed_forms_and_series_agree() {
        let vars = names(&["a", "b"]);
        let d = data_226();
        let (b0, b1) = b0_b1_closed(&d).unwrap();
        assert_eq!(b0, parse_in("b^2*(9*a^2 + 20*a*b + 10*b^2)*1/12", &vars).unwrap());
        assert_eq!(b1, parse_in("b*(3*a^2 + 13*a*b + 10*b^2)*1/4", &vars).unwrap());
        let s = character_series(&d).unwrap();
        assert!(s.poles_cancel());
        let (a0, _, sb0, sb1) = s.coefficients(3);
        assert_eq!(a0, parse_in("(a + b)*(2*a^2 + 10*a*b + 5*b^2)*1/6", &vars).unwrap());
        assert_eq!((sb0, sb1), (b0, b1));
    }

    #[test]
    fn df_at_unit_point() {
        // Hand evaluation of the closed form at a = b = 1: -221/136 = -13/8.
        let d = data_226();
        let s = character_series(&d).unwrap();
        let (a0, a1, _, _) = s.coefficients(3);
        let r = df_with_oracle(&d, &a0, &a1).unwrap();
        assert!(r.oracle_agreement);
        let one = BTreeMap::from([("a".to_string(), Q::from_integer(1.into())), ("b".to_string(), Q::from_integer(1.into()))]);
        assert_eq!(r.df.eval(&one).unwrap(), qr(-13, 8));
        assert_eq!(r.series_df, r.df);
    }

    #[test]
    fn weightless_action() {
        let mut d = data_226();
        for v in d.polarization.values_mut() {
            *v = Polynomial::zero();
        }
        let (b0, b1) = b0_b1_closed(&d).unwrap();
        assert!(b0.is_zero() && b1.is_zero());
    }

    #[test]
    fn single_point_without_weight() {
        let d = LocalizationData {
            dim: 3,
            bundles: names(&["H"]),
            fixed_points: vec![FixedPoint {
                name: "P".into(),
                alphas: vec![1, 1, 1],
                mu: BTreeMap::from([("H".to_string(), 0)]),
            }],
            polarization: BTreeMap::from([("H".to_string(), Polynomial::var("a"))]),
            orientation: Orientation::Cotangent,
        };
        // No weight on the bundle: w carries no k-dependence, only the eps^1 coefficient
        // of (1/eps + 1/2 + eps/12 - eps^3/720)^3, which is 3/144 + 3/48 - 3/720 = 19/240.
        let s = character_series(&d).unwrap();
        assert_eq!(s.w, Polynomial::constant(qr(19, 240)));
        let (_, _, b0, b1) = s.coefficients(3);
        assert!(b0.is_zero() && b1.is_zero());
    }

    #[test]
    fn input_errors() {
        let mut d = data_226();
        d.fixed_points[0].alphas = vec![1, 2];
        assert!(matches!(b0_b1_closed(&d), Err(LocalizationError::Arity { .. })));
        let mut d = data_226();
        d.fixed_points[1].alphas[0] = 0;
        assert_eq!(b0_b1_closed(&d), Err(LocalizationError::ZeroWeight("P0'".into())));
    }

    #[test]
    fn orientation_negates_weights() {
        let mut d = data_226();
        d.orientation = Orientation::Tangent;
        let p = d.fixed_points[5].clone();
        assert_eq!(d.alphas(&p)[0], Q::from_integer((-3).into()));
    }
}
