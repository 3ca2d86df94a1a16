use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::SymbolicError;
use crate::poly::Polynomial;
use crate::Q;

/// Truncated Laurent series in a formal variable with polynomial coefficients.
/// Coefficients are known for every order from `lowest_order` through
/// `truncation_order` inclusive.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    lowest_order: i64,
    coefficients: Vec<Polynomial>,
    truncation_order: i64,
}

impl LaurentSeries {
    /// Missing coefficients up to the truncation order are zero; extra ones are dropped.
    pub fn new(lowest_order: i64, mut coefficients: Vec<Polynomial>, truncation_order: i64) -> Self {
        let len = (truncation_order - lowest_order + 1).max(0) as usize;
        coefficients.resize(len, Polynomial::zero());
        LaurentSeries {
            lowest_order,
            coefficients,
            truncation_order,
        }
    }

    pub fn zero(truncation_order: i64) -> Self {
        Self::new(truncation_order + 1, Vec::new(), truncation_order)
    }

    /// `p * eps^order`.
    pub fn monomial(p: Polynomial, order: i64, truncation_order: i64) -> Self {
        Self::new(order, vec![p], truncation_order)
    }

    /// `exp(c * eps)` through `truncation_order`.
    pub fn exp(c: &Polynomial, truncation_order: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut term = Polynomial::one();
        for j in 0..=truncation_order.max(0) {
            if j > 0 {
                term = (&term * c).scale(&Q::new(BigInt::one(), BigInt::from(j)));
            }
            coeffs.push(term.clone());
        }
        Self::new(0, coeffs, truncation_order)
    }

    pub fn lowest_order(&self) -> i64 {
        self.lowest_order
    }

    pub fn truncation_order(&self) -> i64 {
        self.truncation_order
    }

    /// Coefficient of `eps^k`; zero below the lowest order. Panics above the truncation order.
    pub fn coefficient(&self, k: i64) -> Polynomial {
        assert!(k <= self.truncation_order, "order {k} beyond truncation");
        if k < self.lowest_order {
            return Polynomial::zero();
        }
        self.coefficients[(k - self.lowest_order) as usize].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.truncation_order.min(other.truncation_order);
        let low = self.lowest_order.min(other.lowest_order);
        let coeffs = (low..=trunc)
            .map(|k| &self.coefficient(k) + &other.coefficient(k))
            .collect();
        Self::new(low, coeffs, trunc)
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        Self::new(
            self.lowest_order,
            self.coefficients.iter().map(|c| c * p).collect(),
            self.truncation_order,
        )
    }

    /// Product truncated at the highest order both factors determine.
    pub fn mul_truncate(&self, other: &Self) -> Self {
        let low = self.lowest_order + other.lowest_order;
        let trunc = (self.lowest_order + other.truncation_order)
            .min(other.lowest_order + self.truncation_order);
        let mut coeffs = vec![Polynomial::zero(); (trunc - low + 1).max(0) as usize];
        for (i, x) in self.coefficients.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coefficients.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                coeffs[k] = &coeffs[k] + &(x * y);
            }
        }
        Self::new(low, coeffs, trunc)
    }

    /// Multiplicative inverse when the lowest coefficient is a nonzero rational.
    /// The relative precision is preserved.
    pub fn inverse(&self) -> Result<Self, SymbolicError> {
        let c0 = self
            .coefficients
            .first()
            .and_then(Polynomial::as_constant)
            .filter(|c| !c.is_zero())
            .ok_or(SymbolicError::NonInvertibleSeries)?;
        let inv0 = c0.recip();
        let rel = (self.truncation_order - self.lowest_order) as usize;
        let mut out: Vec<Polynomial> = Vec::with_capacity(rel + 1);
        out.push(Polynomial::constant(inv0.clone()));
        for k in 1..=rel {
            let mut acc = Polynomial::zero();
            for j in 1..=k {
                acc = &acc + &(&self.coefficients[j] * &out[k - j]);
            }
            out.push(acc.scale(&-inv0.clone()));
        }
        Ok(Self::new(
            -self.lowest_order,
            out,
            -self.lowest_order + rel as i64,
        ))
    }

    /// `1 / (1 - exp(-alpha * eps))`, from the inverse of
    /// `alpha eps - alpha^2 eps^2 / 2 + alpha^3 eps^3 / 6 - ...`.
    pub fn inverse_one_minus_exp(alpha: &Q, truncation_order: i64) -> Result<Self, SymbolicError> {
        if alpha.is_zero() {
            return Err(SymbolicError::NonInvertibleSeries);
        }
        // Denominator known through eps^(trunc + 2) gives the inverse through eps^trunc.
        let top = truncation_order + 2;
        let mut coeffs = Vec::new();
        let mut fact = Q::one();
        let mut pw = Q::one();
        for j in 1..=top {
            fact *= Q::from_integer(BigInt::from(j));
            pw *= alpha;
            let sign = if j % 2 == 1 { Q::one() } else { -Q::one() };
            coeffs.push(Polynomial::constant(sign * &pw / &fact));
        }
        Self::new(1, coeffs, top).inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse, q, qr};

    #[test]
    fn inverse_powers_cancel() {
        let x = LaurentSeries::monomial(Polynomial::one(), -1, 3);
        let y = LaurentSeries::monomial(Polynomial::one(), 1, 5);
        let z = x.mul_truncate(&y);
        assert_eq!(z.lowest_order(), 0);
        assert_eq!(z.coefficient(0), Polynomial::one());
    }

    #[test]
    fn truncation_bookkeeping() {
        let x = LaurentSeries::monomial(Polynomial::one(), -3, 1);
        let e = LaurentSeries::exp(&parse("k*mu").unwrap(), 4);
        let z = x.mul_truncate(&e);
        assert_eq!(z.truncation_order(), 1);
        assert_eq!((z.lowest_order()..=z.truncation_order()).count(), 5);
        assert_eq!(z.coefficient(-1), parse("1/2*k^2*mu^2").unwrap());
    }

    #[test]
    fn times_zero() {
        let x = LaurentSeries::exp(&parse("a").unwrap(), 3);
        assert!(x.mul_truncate(&LaurentSeries::zero(3)).is_zero());
    }

    #[test]
    fn one_minus_exp_inverse() {
        // 1/(1 - e^{-x}) = 1/x + 1/2 + x/12 - x^3/720 + ...
        let s = LaurentSeries::inverse_one_minus_exp(&q(1), 3).unwrap();
        assert_eq!(s.lowest_order(), -1);
        assert_eq!(s.coefficient(-1), Polynomial::one());
        assert_eq!(s.coefficient(0).as_constant(), Some(qr(1, 2)));
        assert_eq!(s.coefficient(1).as_constant(), Some(qr(1, 12)));
        assert_eq!(s.coefficient(2).as_constant(), Some(q(0)));
        assert_eq!(s.coefficient(3).as_constant(), Some(qr(-1, 720)));
        let s2 = LaurentSeries::inverse_one_minus_exp(&q(-2), 1).unwrap();
        assert_eq!(s2.coefficient(-1).as_constant(), Some(qr(-1, 2)));
        assert_eq!(s2.coefficient(0).as_constant(), Some(qr(1, 2)));
        assert_eq!(s2.coefficient(1).as_constant(), Some(qr(-1, 6)));
    }
}
