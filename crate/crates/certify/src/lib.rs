//! Positivity certificates: after an affine change of variables that maps a region onto
//! an orthant, every coefficient is nonnegative and some positive monomial involves only
//! strictly positive variables. Bounded intervals of one variable are handled by the
//! projective substitution `x = (lo*s + hi*t) / (s + t)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fano_symbolic::{parse_in, Polynomial, SymbolicError, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("substitution for `{0}` refers to itself or to a later assignment")]
    NotTriangular(String),
    #[error("substitution is not affine: {0}")]
    NotAffine(String),
    #[error("substitution is not invertible")]
    NotInvertible,
    #[error("interval certificate needs a polynomial in `{0}` only")]
    NotUnivariate(String),
    #[error("empty interval")]
    EmptyInterval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Inconclusive,
    Nonnegative,
    Positive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Positive => "positive",
            Status::Nonnegative => "nonnegative",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Result of coefficient inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub status: Status,
    /// The polynomial whose coefficients were inspected.
    pub witness: Polynomial,
    /// A positive monomial supported on strictly positive variables.
    pub strictness_witness: Option<String>,
    /// First negative coefficient, when inconclusive.
    pub obstruction: Option<String>,
}

fn monomial_text(vars: &[String], e: &[u32], c: &Q) -> String {
    Polynomial::from_terms(vars.to_vec(), [(e.to_vec(), c.clone())])
        .unwrap()
        .to_string()
}

/// Coefficient inspection on the orthant where `strict_vars` are positive and every
/// other variable is nonnegative.
pub fn certify_orthant(p: &Polynomial, strict_vars: &BTreeSet<String>) -> Certificate {
    let vars = p.vars().to_vec();
    let mut witness = None;
    for (e, c) in p.sorted_terms() {
        if c < &Q::zero() {
            return Certificate {
                status: Status::Inconclusive,
                witness: p.clone(),
                strictness_witness: None,
                obstruction: Some(monomial_text(&vars, e, c)),
            };
        }
        let strict = e
            .iter()
            .enumerate()
            .all(|(i, &x)| x == 0 || strict_vars.contains(&vars[i]));
        if witness.is_none() && strict {
            witness = Some(monomial_text(&vars, e, c));
        }
    }
    Certificate {
        status: if witness.is_some() {
            Status::Positive
        } else {
            Status::Nonnegative
        },
        witness: p.clone(),
        strictness_witness: witness,
        obstruction: None,
    }
}

/// Affine triangular change of variables `old -> expression in retained and new variables`.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    /// Assignments as written, in order.
    pub assignments: Vec<(String, Polynomial)>,
    /// Assignments with earlier ones substituted into later right sides.
    resolved: BTreeMap<String, Polynomial>,
    /// Variables introduced by the substitution.
    pub new_vars: Vec<String>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution {
            assignments: Vec::new(),
            resolved: BTreeMap::new(),
            new_vars: Vec::new(),
        }
    }

    /// Builds from `(old, expression)` pairs; `old_vars` are the variables of the
    /// original problem, every other identifier on a right side is new.
    pub fn new(
        assignments: Vec<(String, String)>,
        old_vars: &[String],
    ) -> Result<Self, CertifyError> {
        let mut resolved: BTreeMap<String, Polynomial> = BTreeMap::new();
        let mut parsed = Vec::new();
        let mut new_vars: Vec<String> = Vec::new();
        let assigned: Vec<&String> = assignments.iter().map(|(o, _)| o).collect();
        for (k, (old, expr)) in assignments.iter().enumerate() {
            let rhs = fano_symbolic::parse(expr)?;
            for v in rhs.used_vars() {
                if v == *old || assigned[k..].contains(&&v) {
                    return Err(CertifyError::NotTriangular(old.clone()));
                }
                if !old_vars.contains(&v) && !new_vars.contains(&v) {
                    new_vars.push(v);
                }
            }
            if rhs.total_degree() > 1 {
                return Err(CertifyError::NotAffine(expr.clone()));
            }
            let r = rhs.subst_many(&resolved);
            parsed.push((old.clone(), rhs));
            resolved.insert(old.clone(), r);
        }
        Ok(Substitution {
            assignments: parsed,
            resolved,
            new_vars,
        })
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        if self.resolved.is_empty() {
            return p.clone();
        }
        p.subst_many(&self.resolved)
    }

    pub fn resolved(&self) -> &BTreeMap<String, Polynomial> {
        &self.resolved
    }

    /// Values of the new variables at a point of the original variables.
    pub fn invert_at(&self, point: &BTreeMap<String, Q>) -> Result<BTreeMap<String, Q>, CertifyError> {
        // Solve resolved[old] = point[old] for the new variables.
        let k = self.new_vars.len();
        let olds: Vec<&String> = self.resolved.keys().collect();
        if olds.len() != k {
            return Err(CertifyError::NotInvertible);
        }
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for old in &olds {
            let expr = &self.resolved[*old];
            let mut row = Vec::new();
            for nv in &self.new_vars {
                let c = expr.coeff_of(nv, 1);
                let c = c
                    .as_constant()
                    .ok_or_else(|| CertifyError::NotAffine(expr.to_string()))?;
                row.push(c);
            }
            let mut rest = expr.clone();
            for nv in &self.new_vars {
                rest = rest.subst(nv, &Polynomial::zero());
            }
            let target = point
                .get(*old)
                .cloned()
                .ok_or_else(|| SymbolicError::UnboundVariable((*old).clone()))?
                - rest.eval(point)?;
            row.push(target);
            rows.push(row);
        }
        for col in 0..k {
            let pivot = (col..k)
                .find(|&r| !rows[r][col].is_zero())
                .ok_or(CertifyError::NotInvertible)?;
            rows.swap(col, pivot);
            let p = rows[col][col].clone();
            for x in rows[col].iter_mut() {
                *x = &*x / &p;
            }
            for r in 0..k {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pr = rows[col].clone();
                    for (x, y) in rows[r].iter_mut().zip(pr) {
                        *x -= &f * y;
                    }
                }
            }
        }
        Ok(self
            .new_vars
            .iter()
            .cloned()
            .zip(rows.into_iter().map(|r| r[k].clone()))
            .collect())
    }
}

/// Applies the substitution, then inspects coefficients.
pub fn certify_on_region(
    p: &Polynomial,
    sub: &Substitution,
    strict_vars: &BTreeSet<String>,
) -> Certificate {
    certify_orthant(&sub.apply(p), strict_vars)
}

/// `(s + t)^(deg + extra) * p((lo*s + hi*t) / (s + t))`, homogeneous in `s, t`.
pub fn interval_transform(
    p: &Polynomial,
    var: &str,
    lo: &Q,
    hi: &Q,
    extra: u32,
) -> Result<Polynomial, CertifyError> {
    if lo >= hi {
        return Err(CertifyError::EmptyInterval);
    }
    if p.used_vars().iter().any(|v| v != var) {
        return Err(CertifyError::NotUnivariate(var.to_string()));
    }
    let names = ["s".to_string(), "t".to_string()];
    let s = Polynomial::var("s").aligned(&names);
    let t = Polynomial::var("t").aligned(&names);
    let num = &s.scale(lo) + &t.scale(hi);
    let den = &s + &t;
    let deg = p.degree_in(var) + extra;
    let mut out = Polynomial::zero().aligned(&names);
    for (k, c) in p.coeffs_in(var).iter().enumerate() {
        let c = c.as_constant().unwrap_or_default();
        if c.is_zero() {
            continue;
        }
        let term = &num.pow(k as u32) * &den.pow(deg - k as u32);
        out = &out + &term.scale(&c);
    }
    Ok(out)
}

/// Positivity of a univariate polynomial on the open interval `(lo, hi)`.
pub fn certify_interval(
    p: &Polynomial,
    var: &str,
    lo: &Q,
    hi: &Q,
    extra: u32,
) -> Result<Certificate, CertifyError> {
    let h = interval_transform(p, var, lo, hi, extra)?;
    let strict: BTreeSet<String> = ["s", "t"].iter().map(|s| s.to_string()).collect();
    Ok(certify_orthant(&h, &strict))
}

/// Exact evaluation of `p` at `count` random points of the substituted orthant; returns
/// the first point where `p` fails to be positive (or negative when `nonnegative_only`).
pub fn spot_check(
    p: &Polynomial,
    sub: &Substitution,
    strict_vars: &BTreeSet<String>,
    free_vars: &[String],
    count: usize,
    seed: u64,
    nonnegative_only: bool,
) -> Result<Option<BTreeMap<String, Q>>, CertifyError> {
    let image = sub.apply(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let mut pt = BTreeMap::new();
        for v in free_vars {
            let lo = if strict_vars.contains(v) { 1 } else { 0 };
            let n: i64 = rng.gen_range(lo..=40);
            let d: i64 = rng.gen_range(1..=7);
            pt.insert(v.clone(), Q::new(n.into(), d.into()));
        }
        let x = image.eval(&pt)?;
        let ok = if nonnegative_only { x >= Q::zero() } else { x > Q::zero() };
        if !ok {
            return Ok(Some(pt));
        }
    }
    Ok(None)
}

/// Parses `(old, expression)` pairs against the problem variables and builds the
/// substitution.
pub fn substitution_from_strings(
    pairs: &[(String, String)],
    old_vars: &[String],
) -> Result<Substitution, CertifyError> {
    for (old, _) in pairs {
        parse_in(old, old_vars)?;
    }
    Substitution::new(pairs.to_vec(), old_vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano_symbolic::{parse, q, qr};

    fn set(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn sum_of_variables_is_positive() {
        let c = certify_orthant(&parse("a + b").unwrap(), &set(&["a", "b"]));
        assert_eq!(c.status, Status::Positive);
    }

    #[test]
    fn square_is_out_of_reach() {
        let c = certify_orthant(&parse("a^2 - 2*a*b + b^2").unwrap(), &set(&["a", "b"]));
        assert_eq!(c.status, Status::Inconclusive);
        assert_eq!(c.obstruction.as_deref(), Some("-2*a*b"));
    }

    #[test]
    fn strictness_needs_a_positive_variable() {
        let c = certify_orthant(&parse("eps^2 + a*eps").unwrap(), &set(&["a"]));
        assert_eq!(c.status, Status::Nonnegative);
        let c = certify_orthant(&parse("eps^2 + a").unwrap(), &set(&["a"]));
        assert_eq!(c.status, Status::Positive);
        assert_eq!(c.strictness_witness.as_deref(), Some("a"));
    }

    #[test]
    fn shifted_quartic_expansion() {
        let delta = parse(
            "3*a^4 + 12*a^3*b + 10*a^3*c + 9*a^2*b^2 + 36*a^2*b*c + 18*a*b^2*c + 15*a*b*c^2 \
             - 6*a*c^3 - 6*b^2*c^2 - c^4",
        )
        .unwrap();
        let sub = Substitution::new(
            vec![("a".into(), "c + eps".into())],
            &names(&["a", "b", "c"]),
        )
        .unwrap();
        assert_eq!(sub.new_vars, names(&["eps"]));
        let cert = certify_on_region(&delta, &sub, &set(&["b", "c"]));
        assert_eq!(cert.status, Status::Positive);
        let expected = parse(
            "21*b^2*c^2 + 36*b^2*c*eps + 9*b^2*eps^2 + 63*b*c^3 + 123*b*c^2*eps + 72*b*c*eps^2 \
             + 12*b*eps^3 + 6*c^4 + 36*c^3*eps + 48*c^2*eps^2 + 22*c*eps^3 + 3*eps^4",
        )
        .unwrap();
        assert_eq!(cert.witness, expected);
    }

    #[test]
    fn chained_substitution_resolves() {
        let sub = Substitution::new(
            vec![
                ("a2".into(), "a1 + d1".into()),
                ("a3".into(), "a2 + d2".into()),
            ],
            &names(&["a1", "a2", "a3"]),
        )
        .unwrap();
        assert_eq!(sub.apply(&parse("a3 - a1").unwrap()), parse("d1 + d2").unwrap());
        let pt: BTreeMap<String, Q> = [("a1", q(1)), ("a2", q(3)), ("a3", qr(7, 2))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let inv = sub.invert_at(&pt).unwrap();
        assert_eq!(inv["d1"], q(2));
        assert_eq!(inv["d2"], qr(1, 2));
    }

    #[test]
    fn non_triangular_rejected() {
        let r = Substitution::new(
            vec![("a".into(), "b + e".into()), ("b".into(), "a + f".into())],
            &names(&["a", "b"]),
        );
        assert_eq!(r.unwrap_err(), CertifyError::NotTriangular("a".into()));
        let r = Substitution::new(
            vec![("a".into(), "e".into()), ("b".into(), "b + f".into())],
            &names(&["a", "b"]),
        );
        assert_eq!(r.unwrap_err(), CertifyError::NotTriangular("b".into()));
        let r = Substitution::new(vec![("a".into(), "e^2".into())], &names(&["a"]));
        assert!(matches!(r, Err(CertifyError::NotAffine(_))));
    }

    #[test]
    fn interval_certificate() {
        // 4b^3 - 6b^2 + 3b + 40 on (-1, 1/2)
        let p = parse("4*b^3 - 6*b^2 + 3*b + 40").unwrap();
        let h = interval_transform(&p, "b", &q(-1), &qr(1, 2), 0).unwrap();
        let st = names(&["s", "t"]);
        let expected = fano_symbolic::parse_in(
            "27*s^3 + 243/2*s^2*t + 243/2*s*t^2 + 81/2*t^3",
            &st,
        )
        .unwrap();
        assert_eq!(h, expected);
        let c = certify_interval(&p, "b", &q(-1), &qr(1, 2), 0).unwrap();
        assert_eq!(c.status, Status::Positive);
        // b + 1 vanishes at the left end but is positive inside
        let c = certify_interval(&parse("b + 1").unwrap(), "b", &q(-1), &qr(1, 2), 0).unwrap();
        assert_eq!(c.status, Status::Positive);
        // b changes sign inside
        let c = certify_interval(&parse("b").unwrap(), "b", &q(-1), &qr(1, 2), 0).unwrap();
        assert_eq!(c.status, Status::Inconclusive);
        assert!(certify_interval(&parse("a*b").unwrap(), "b", &q(-1), &q(1), 0).is_err());
    }

    #[test]
    fn spot_check_finds_counterexample() {
        let sub = Substitution::identity();
        let vars = names(&["a", "b"]);
        let bad = spot_check(&parse("a - b").unwrap(), &sub, &set(&["a", "b"]), &vars, 50, 7, false)
            .unwrap();
        assert!(bad.is_some());
        let good = spot_check(&parse("a + b").unwrap(), &sub, &set(&["a", "b"]), &vars, 50, 7, false)
            .unwrap();
        assert!(good.is_none());
    }
}
