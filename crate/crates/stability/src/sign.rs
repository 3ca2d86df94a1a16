//! Sign certificates for beta and Donaldson-Futaki values. A certificate proves
//! `p > 0` on a domain, and the identity `scale * p = sum w_i g_i` with `w_i >= 0`
//! and `scale > 0` forces some `g_i > 0` at every point. Each claim ties `g_i` to a
//! computed value through `value = -m g / den` with `m, den > 0`, so that value is
//! negative there.

use std::collections::{BTreeMap, BTreeSet};

use fano_certify::{certify_interval, certify_orthant, Certificate, Status, Substitution};
use fano_symbolic::{Polynomial, RationalFunction, Q};
use fano_zariski::{Check, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::StabilityError;

/// Domain of a certificate and the way positivity is read off.
#[derive(Clone, Debug)]
pub enum Method {
    /// Affine substitution onto an orthant: `strict` variables are positive, all other
    /// retained and new variables nonnegative.
    Orthant {
        substitution: Substitution,
        strict: BTreeSet<String>,
    },
    /// Open interval of a single parameter.
    Interval { var: String, lo: Q, hi: Q },
}

/// `value = -multiplier * factor / denominator` with weight `weight` in the combination.
#[derive(Clone, Debug)]
pub struct Claim {
    pub quantity: String,
    pub value: RationalFunction,
    /// Region of the branch the value belongs to; empty for a value valid everywhere.
    pub region: Region,
    pub weight: Polynomial,
    pub factor: Polynomial,
    pub multiplier: Polynomial,
    pub denominator: Polynomial,
}

#[derive(Clone, Debug)]
pub struct SignCertificate {
    pub name: String,
    /// Parameters of the problem.
    pub parameters: Vec<String>,
    pub polynomial: Polynomial,
    pub scale: Polynomial,
    pub method: Method,
    /// Expected substituted polynomial, when the expansion is printed.
    pub expansion: Option<Polynomial>,
    pub claims: Vec<Claim>,
}

#[derive(Clone, Debug)]
pub struct SignReport {
    pub name: String,
    pub certificate: Certificate,
    pub checks: Vec<Check>,
}

impl SignReport {
    pub fn ok(&self) -> bool {
        self.certificate.status == Status::Positive && self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }
}

fn check(name: String, ok: bool, detail: String) -> Check {
    Check {
        name,
        ok,
        detail: if ok { String::new() } else { detail },
    }
}

impl SignCertificate {
    /// Coefficient inspection of `q` on this certificate's domain.
    pub fn inspect(&self, q: &Polynomial) -> Result<Certificate, StabilityError> {
        Ok(match &self.method {
            Method::Orthant {
                substitution,
                strict,
            } => certify_orthant(&substitution.apply(q), strict),
            Method::Interval { var, lo, hi } => certify_interval(q, var, lo, hi, 0)?,
        })
    }

    /// Whether a point of the parameter space lies in the domain.
    pub fn contains(&self, point: &BTreeMap<String, Q>) -> Result<bool, StabilityError> {
        let zero = Q::default();
        match &self.method {
            Method::Orthant {
                substitution,
                strict,
            } => {
                let new = substitution.invert_at(point)?;
                let substituted: BTreeSet<&String> =
                    substitution.resolved().keys().collect();
                let mut values: Vec<(&String, &Q)> = new.iter().collect();
                for p in &self.parameters {
                    if !substituted.contains(p) {
                        if let Some(v) = point.get(p) {
                            values.push((p, v));
                        }
                    }
                }
                Ok(values.into_iter().all(|(name, v)| {
                    if strict.contains(name) {
                        v > &zero
                    } else {
                        v >= &zero
                    }
                }))
            }
            Method::Interval { var, lo, hi } => {
                let v = point.get(var).cloned().unwrap_or_default();
                Ok(lo < &v && &v < hi)
            }
        }
    }

    /// Random points of the domain expressed in the original parameters.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<BTreeMap<String, Q>>, StabilityError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for _ in 0..count {
            match &self.method {
                Method::Orthant {
                    substitution,
                    strict,
                } => {
                    let mut free: Vec<String> = self
                        .parameters
                        .iter()
                        .filter(|p| !substitution.resolved().contains_key(*p))
                        .cloned()
                        .collect();
                    free.extend(substitution.new_vars.iter().cloned());
                    let mut pt = BTreeMap::new();
                    for v in &free {
                        let lo = if strict.contains(v) { 1 } else { 0 };
                        let n: i64 = rng.gen_range(lo..=30);
                        let d: i64 = rng.gen_range(1..=6);
                        pt.insert(v.clone(), Q::new(n.into(), d.into()));
                    }
                    let mut orig = BTreeMap::new();
                    for p in &self.parameters {
                        let v = match substitution.resolved().get(p) {
                            Some(e) => e.eval(&pt)?,
                            None => pt[p].clone(),
                        };
                        orig.insert(p.clone(), v);
                    }
                    out.push(orig);
                }
                Method::Interval { var, lo, hi } => {
                    let k: i64 = rng.gen_range(1..=99);
                    let v = lo + (hi - lo) * Q::new(k.into(), 100.into());
                    out.push(BTreeMap::from([(var.clone(), v)]));
                }
            }
        }
        Ok(out)
    }

    /// Runs every check of the certificate.
    pub fn verify(&self, spot_checks: usize, seed: u64) -> Result<SignReport, StabilityError> {
        let name = &self.name;
        let certificate = self.inspect(&self.polynomial)?;
        let mut checks = vec![check(
            format!("{name}: polynomial positive on the domain"),
            certificate.status == Status::Positive,
            format!(
                "status {}{}",
                certificate.status,
                certificate
                    .obstruction
                    .as_ref()
                    .map(|o| format!(", negative term {o}"))
                    .unwrap_or_default()
            ),
        )];
        if let Some(e) = &self.expansion {
            let d = &certificate.witness - e;
            checks.push(check(
                format!("{name}: expansion matches"),
                d.is_zero(),
                format!("difference {d}"),
            ));
        }
        let mut combination = &self.scale * &self.polynomial;
        for c in &self.claims {
            combination = &combination - &(&c.weight * &c.factor);
        }
        checks.push(check(
            format!("{name}: combination identity"),
            combination.is_zero(),
            format!("difference {combination}"),
        ));
        let st = self.inspect(&self.scale)?.status;
        checks.push(check(
            format!("{name}: scale positive"),
            st == Status::Positive,
            format!("status {st}"),
        ));
        for c in &self.claims {
            let q = &c.quantity;
            let st = self.inspect(&c.weight)?.status;
            checks.push(check(
                format!("{name}: weight of {q} nonnegative"),
                st >= Status::Nonnegative,
                format!("status {st}"),
            ));
            for (what, p) in [("multiplier", &c.multiplier), ("denominator", &c.denominator)] {
                let st = self.inspect(p)?.status;
                checks.push(check(
                    format!("{name}: {what} of {q} positive"),
                    st == Status::Positive,
                    format!("status {st}"),
                ));
            }
            let form = RationalFunction::new(-&(&c.multiplier * &c.factor), c.denominator.clone())?;
            let d = c.value.cross_difference(&form);
            checks.push(check(
                format!("{name}: {q} equals -m*g/den"),
                d.is_zero(),
                format!("difference {d}"),
            ));
            for ineq in &c.region.0 {
                let st = self.inspect(&ineq.polynomial())?.status;
                let need = if ineq.strict {
                    Status::Positive
                } else {
                    Status::Nonnegative
                };
                checks.push(check(
                    format!("{name}: domain inside region `{}` of {q}", ineq.text),
                    st >= need,
                    format!("status {st}"),
                ));
            }
        }
        let mut bad = None;
        for pt in self.sample(spot_checks, seed)? {
            let v = self.polynomial.eval(&pt)?;
            let mut negative = false;
            for c in &self.claims {
                if c.value.eval(&pt)? < Q::default() {
                    negative = true;
                }
            }
            if v <= Q::default() || !negative {
                bad = Some(pt);
                break;
            }
        }
        checks.push(check(
            format!("{name}: {spot_checks} exact spot checks"),
            bad.is_none(),
            format!("fails at {bad:?}"),
        ));
        Ok(SignReport {
            name: name.clone(),
            certificate,
            checks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano_symbolic::{parse_in, q, qr};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn claim(value: RationalFunction, g: &Polynomial, m: &str, den: &str, vars: &[String]) -> Claim {
        Claim {
            quantity: "beta".into(),
            value,
            region: Region(Vec::new()),
            weight: Polynomial::one(),
            factor: g.clone(),
            multiplier: parse_in(m, vars).unwrap(),
            denominator: parse_in(den, vars).unwrap(),
        }
    }

    #[test]
    fn direct_claim_on_orthant() {
        let vars = names(&["a", "b"]);
        let g = parse_in("a^2 + a*b + b^2", &vars).unwrap();
        let den = parse_in("(a + b)^2", &vars).unwrap();
        let value = RationalFunction::new(-&(&Polynomial::var("a") * &g), den).unwrap();
        let cert = SignCertificate {
            name: "t".into(),
            parameters: vars.clone(),
            polynomial: g.clone(),
            scale: Polynomial::one(),
            method: Method::Orthant {
                substitution: Substitution::identity(),
                strict: vars.iter().cloned().collect(),
            },
            expansion: None,
            claims: vec![claim(value, &g, "a", "(a + b)^2", &vars)],
        };
        let r = cert.verify(50, 1).unwrap();
        assert!(r.ok(), "{:?}", r.first_failure());
        let pt = BTreeMap::from([("a".to_string(), q(1)), ("b".to_string(), q(0))]);
        assert!(!cert.contains(&pt).unwrap());
    }

    #[test]
    fn wrong_sign_claim_is_caught() {
        let vars = names(&["a", "b"]);
        let g = parse_in("a + b", &vars).unwrap();
        let value = RationalFunction::from_poly(g.clone());
        let cert = SignCertificate {
            name: "t".into(),
            parameters: vars.clone(),
            polynomial: g.clone(),
            scale: Polynomial::one(),
            method: Method::Orthant {
                substitution: Substitution::identity(),
                strict: vars.iter().cloned().collect(),
            },
            expansion: None,
            claims: vec![claim(value, &g, "1", "1", &vars)],
        };
        let r = cert.verify(10, 1).unwrap();
        assert!(!r.ok());
    }

    #[test]
    fn interval_domain() {
        let vars = names(&["b"]);
        let g = parse_in("1 - 2*b", &vars).unwrap();
        let value = RationalFunction::new(-&g, parse_in("b + 2", &vars).unwrap()).unwrap();
        let cert = SignCertificate {
            name: "t".into(),
            parameters: vars.clone(),
            polynomial: g.clone(),
            scale: Polynomial::one(),
            method: Method::Interval {
                var: "b".into(),
                lo: q(-1),
                hi: qr(1, 2),
            },
            expansion: None,
            claims: vec![claim(value, &g, "1", "b + 2", &vars)],
        };
        assert!(cert.verify(30, 2).unwrap().ok());
        let inside = BTreeMap::from([("b".to_string(), q(0))]);
        let edge = BTreeMap::from([("b".to_string(), qr(1, 2))]);
        assert!(cert.contains(&inside).unwrap());
        assert!(!cert.contains(&edge).unwrap());
    }
}
