use std::collections::BTreeMap;
use std::fmt;

use fano_symbolic::{parse_in, LinearForm, Polynomial, Q};

use crate::ZariskiError;

/// Linear inequality `form >= 0` (or `> 0` when strict) in the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    pub text: String,
    pub form: LinearForm,
    pub strict: bool,
}

impl Inequality {
    /// Reads `x <= y`, `x >= y`, `x < y` or `x > y`.
    pub fn parse(s: &str, parameters: &[String]) -> Result<Self, ZariskiError> {
        let bad = || ZariskiError::BadInequality(s.to_string());
        let (lhs, rhs, flip, strict) = if let Some((l, r)) = s.split_once("<=") {
            (l, r, false, false)
        } else if let Some((l, r)) = s.split_once(">=") {
            (l, r, true, false)
        } else if let Some((l, r)) = s.split_once('<') {
            (l, r, false, true)
        } else if let Some((l, r)) = s.split_once('>') {
            (l, r, true, true)
        } else {
            return Err(bad());
        };
        let l = parse_in(lhs.trim(), parameters)?;
        let r = parse_in(rhs.trim(), parameters)?;
        let diff = if flip { &l - &r } else { &r - &l };
        let form = LinearForm::from_polynomial(&diff, &[]).map_err(|_| bad())?;
        Ok(Inequality {
            text: s.trim().to_string(),
            form,
            strict,
        })
    }

    pub fn polynomial(&self) -> Polynomial {
        self.form.to_polynomial()
    }

    pub fn holds_at(&self, point: &BTreeMap<String, Q>) -> Result<bool, ZariskiError> {
        let v = self.polynomial().eval(point)?;
        Ok(if self.strict { v > Q::default() } else { v >= Q::default() })
    }

    /// Image under a variable substitution, keeping the text readable.
    pub fn subst_many(&self, map: &BTreeMap<String, Polynomial>, text: String) -> Result<Self, ZariskiError> {
        let p = self.polynomial().subst_many(map);
        Ok(Inequality {
            text,
            form: LinearForm::from_polynomial(&p, &[])?,
            strict: self.strict,
        })
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text)
    }
}

fn num_abs(q: Q) -> Q {
    if q < Q::default() {
        -q
    } else {
        q
    }
}

/// Conjunction of inequalities; empty means the whole parameter domain.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Region(pub Vec<Inequality>);

impl Region {
    pub fn parse(items: &[String], parameters: &[String]) -> Result<Self, ZariskiError> {
        Ok(Region(
            items
                .iter()
                .map(|s| Inequality::parse(s, parameters))
                .collect::<Result<_, _>>()?,
        ))
    }

    pub fn contains(&self, point: &BTreeMap<String, Q>) -> Result<bool, ZariskiError> {
        for i in &self.0 {
            if !i.holds_at(point)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_everything(&self) -> bool {
        self.0.is_empty()
    }

    /// Same set of inequality polynomials, ignoring order and positive rescaling.
    pub fn same_as(&self, other: &Region) -> bool {
        let norm = |r: &Region| {
            let mut v: Vec<String> = r
                .0
                .iter()
                .map(|i| {
                    let p = i.polynomial();
                    let c = if p.is_zero() { Q::from_integer(1.into()) } else { num_abs(p.content()) };
                    format!("{}{}", p.scale(&c.recip()), if i.strict { ">" } else { ">=" })
                })
                .collect();
            v.sort();
            v
        };
        norm(self) == norm(other)
    }

    pub fn texts(&self) -> Vec<String> {
        self.0.iter().map(|i| i.text.clone()).collect()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "all")
        } else {
            write!(f, "{}", self.texts().join(", "))
        }
    }
}
