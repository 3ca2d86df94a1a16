//! Exact symbolic arithmetic: sparse multivariate polynomials over the rationals,
//! reduced rational functions, parametric definite integration and truncated
//! Laurent series.

mod error;
mod gcd;
mod linear;
mod parse;
mod poly;
mod ratfunc;
mod series;

pub use error::SymbolicError;
pub use gcd::{content_in, gcd, pseudo_remainder};
pub use linear::{integrate_over_interval, LinearForm};
pub use parse::{parse, parse_in, parse_rational};
pub use poly::{grlex, Exponents, Polynomial};
pub use ratfunc::RationalFunction;
pub use series::LaurentSeries;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational scalar.
pub type Q = BigRational;

/// Integer as an exact rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a point such as `a=1, b=3/2` into variable bindings.
pub fn parse_point(s: &str) -> Result<std::collections::BTreeMap<String, Q>, SymbolicError> {
    let mut out = std::collections::BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or(SymbolicError::Parse {
            pos: 0,
            msg: format!("expected name=value, found `{part}`"),
        })?;
        out.insert(name.trim().to_string(), parse_rational(value.trim())?);
    }
    Ok(out)
}
