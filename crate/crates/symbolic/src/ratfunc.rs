use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::SymbolicError;
use crate::gcd::gcd;
use crate::poly::Polynomial;
use crate::Q;

/// Quotient of polynomials kept in lowest terms with an integer-primitive denominator
/// whose leading coefficient is positive.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    /// Builds without cancelling common factors; only the denominator is normalized.
    /// Semantic equality is unaffected.
    pub fn new_unreduced(num: Polynomial, den: Polynomial) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::from_poly(Polynomial::zero());
        }
        let c = den.content();
        let inv = c.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::from_poly(Polynomial::zero());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.as_constant().is_some() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalize(num, den)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn from_rational(c: Q) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels common factors; a no-op for values that were built reduced.
    pub fn reduced(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Result<Q, SymbolicError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Ok(self.num.eval(point)? / d)
    }

    pub fn subst_many(&self, map: &BTreeMap<String, Polynomial>) -> Result<Self, SymbolicError> {
        Self::new(self.num.subst_many(map), self.den.subst_many(map))
    }

    pub fn recip(&self) -> Result<Self, SymbolicError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    /// Numerator of `self - other` after cross-multiplication; zero exactly when equal.
    pub fn cross_difference(&self, other: &Self) -> Polynomial {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.cross_difference(other).is_zero()
    }
}

impl Eq for RationalFunction {}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by the zero function.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RationalFunction::reduce(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c == Q::from_integer(1.into())) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse, q};

    fn rf(n: &str, d: &str) -> RationalFunction {
        RationalFunction::new(parse(n).unwrap(), parse(d).unwrap()).unwrap()
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let r = rf("a^2 - b^2", "2*a - 2*b");
        assert_eq!(r.denominator(), &Polynomial::one());
        assert_eq!(r.numerator(), &parse("1/2*a + 1/2*b").unwrap());
    }

    #[test]
    fn denominator_is_primitive_with_positive_leading_coefficient() {
        let r = rf("1", "-3/2*a - 3");
        assert_eq!(r.denominator(), &parse("a + 2").unwrap());
        assert_eq!(r.numerator(), &parse("-2/3").unwrap());
    }

    #[test]
    fn self_difference_is_zero_over_one() {
        let f = rf("a + c", "b^2 + 1");
        let z = &f - &f;
        assert!(z.is_zero());
        assert_eq!(z.denominator(), &Polynomial::one());
    }

    #[test]
    fn semantic_equality() {
        assert_eq!(rf("2*a", "4*b"), rf("a*c", "2*b*c"));
        assert_ne!(rf("a", "b"), rf("b", "a"));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(parse("a").unwrap(), Polynomial::zero()).unwrap_err(),
            SymbolicError::ZeroDenominator
        );
    }

    #[test]
    fn evaluation() {
        let r = rf("a + 1", "a - 1");
        let pt = [("a".to_string(), q(3))].into_iter().collect();
        assert_eq!(r.eval(&pt).unwrap(), q(2));
        let bad = [("a".to_string(), q(1))].into_iter().collect();
        assert_eq!(r.eval(&bad), Err(SymbolicError::ZeroDenominator));
    }
}
