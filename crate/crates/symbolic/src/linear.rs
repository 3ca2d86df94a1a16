use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::SymbolicError;
use crate::poly::Polynomial;
use crate::Q;

/// Affine form `constant + sum coefficient * parameter` in the case parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Q,
    pub coefficients: BTreeMap<String, Q>,
}

impl LinearForm {
    /// Reads an affine polynomial; `forbidden` names (the integration and deformation
    /// variables) must not occur.
    pub fn from_polynomial(p: &Polynomial, forbidden: &[&str]) -> Result<Self, SymbolicError> {
        let mut constant = Q::zero();
        let mut coefficients = BTreeMap::new();
        for (e, c) in p.terms() {
            let deg: u32 = e.iter().sum();
            match deg {
                0 => constant = c.clone(),
                1 => {
                    let i = e.iter().position(|&x| x == 1).unwrap();
                    let name = &p.vars()[i];
                    if forbidden.contains(&name.as_str()) {
                        return Err(SymbolicError::NotLinear(format!(
                            "{p} contains the variable {name}"
                        )));
                    }
                    coefficients.insert(name.clone(), c.clone());
                }
                _ => return Err(SymbolicError::NotLinear(p.to_string())),
            }
        }
        Ok(LinearForm {
            constant,
            coefficients,
        })
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::constant(self.constant.clone());
        for (v, c) in &self.coefficients {
            p = &p + &Polynomial::var(v).scale(c);
        }
        p
    }
}

/// Definite integral of `p` in `var` from `lo` to `hi`, by antiderivative and composition.
pub fn integrate_over_interval(
    p: &Polynomial,
    var: &str,
    lo: &LinearForm,
    hi: &LinearForm,
) -> Polynomial {
    let anti = p.antiderivative(var);
    let upper = anti.subst(var, &hi.to_polynomial());
    let lower = anti.subst(var, &lo.to_polynomial());
    &upper - &lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    fn lf(s: &str) -> LinearForm {
        LinearForm::from_polynomial(&parse(s).unwrap(), &["u", "t"]).unwrap()
    }

    #[test]
    fn constant_integrand() {
        let r = integrate_over_interval(&Polynomial::one(), "u", &lf("0"), &lf("c"));
        assert_eq!(r, parse("c").unwrap());
    }

    #[test]
    fn shifted_linear_integrand() {
        let r = integrate_over_interval(&parse("u - c").unwrap(), "u", &lf("c"), &lf("b + 2*c"));
        assert_eq!(r, parse("1/2*(b + c)^2").unwrap());
    }

    #[test]
    fn cubic_integrand() {
        let r = integrate_over_interval(&parse("3*u^2").unwrap(), "u", &lf("0"), &lf("a"));
        assert_eq!(r, parse("a^3").unwrap());
    }

    #[test]
    fn empty_interval() {
        let r = integrate_over_interval(&parse("u^5 + a*u").unwrap(), "u", &lf("a - b"), &lf("a - b"));
        assert!(r.is_zero());
    }

    #[test]
    fn rejects_nonlinear_and_forbidden() {
        assert!(LinearForm::from_polynomial(&parse("a*b").unwrap(), &["u"]).is_err());
        assert!(LinearForm::from_polynomial(&parse("a + u").unwrap(), &["u"]).is_err());
    }
}
