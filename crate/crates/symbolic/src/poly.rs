use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::SymbolicError;
use crate::Q;

/// Exponent vector, one entry per declared variable.
pub type Exponents = Vec<u32>;

/// Sparse polynomial with exact rational coefficients over an ordered list of variables.
#[derive(Clone, Debug, Default)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Q>,
}

/// Graded lexicographic comparison over the declared variable order.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn merged_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Polynomial { vars: Vec::new(), terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Q::one());
        Polynomial {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a polynomial from explicit terms; zero coefficients are dropped and
    /// repeated exponent vectors are summed.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Result<Self, SymbolicError>
    where
        I: IntoIterator<Item = (Exponents, Q)>,
    {
        let mut out = Polynomial {
            vars,
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            if e.len() != out.vars.len() {
                return Err(SymbolicError::Arity {
                    expected: out.vars.len(),
                    found: e.len(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial has no variable-carrying terms.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.index_of(name) {
            None => 0,
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
        }
    }

    /// Variables that occur with a positive exponent, in declared order.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Re-expresses the polynomial over `vars`, which must contain every used variable.
    pub fn aligned(&self, vars: &[String]) -> Self {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let j = map[i].unwrap_or_else(|| {
                    panic!("variable {} missing from target ordering", self.vars[i])
                });
                ne[j] = x;
            }
            terms.insert(ne, c.clone());
        }
        Polynomial {
            vars: vars.to_vec(),
            terms,
        }
    }

    /// Drops unused variables from the declared list.
    pub fn trimmed(&self) -> Self {
        let used = self.used_vars();
        self.aligned(&used)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = merged_vars(&self.vars, &other.vars);
        (self.aligned(&vars), other.aligned(&vars))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Polynomial {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Polynomial::one().aligned(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value at a point binding every used variable.
    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Result<Q, SymbolicError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match point.get(v) {
                Some(x) => values.push(Some(x.clone())),
                None => {
                    if self.terms.keys().any(|e| e[i] > 0) {
                        return Err(SymbolicError::UnboundVariable(v.clone()));
                    }
                    values.push(None);
                }
            }
        }
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= num_traits::pow(values[i].clone().unwrap(), x as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Coefficients in `name`, indexed by power; each coefficient keeps the full variable list.
    pub fn coeffs_in(&self, name: &str) -> Vec<Polynomial> {
        let Some(i) = self.index_of(name) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(name) as usize;
        let mut out = vec![
            Polynomial {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
            deg + 1
        ];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut ne = e.clone();
            ne[i] = 0;
            out[k].terms.insert(ne, c.clone());
        }
        out
    }

    /// Coefficient of `name^k`.
    pub fn coeff_of(&self, name: &str, k: u32) -> Polynomial {
        let mut cs = self.coeffs_in(name);
        if (k as usize) < cs.len() {
            cs.swap_remove(k as usize)
        } else {
            Polynomial::zero().aligned(&self.vars)
        }
    }

    /// Multiplies by `name^k`.
    pub fn shift(&self, name: &str, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let p = match self.index_of(name) {
            Some(_) => self.clone(),
            None => {
                let vars = merged_vars(&self.vars, &[name.to_string()]);
                self.aligned(&vars)
            }
        };
        let i = p.index_of(name).unwrap();
        Polynomial {
            vars: p.vars.clone(),
            terms: p
                .terms
                .into_iter()
                .map(|(mut e, c)| {
                    e[i] += k;
                    (e, c)
                })
                .collect(),
        }
    }

    /// Substitutes a polynomial for one variable.
    pub fn subst(&self, name: &str, value: &Polynomial) -> Self {
        if self.index_of(name).is_none() {
            return self.clone();
        }
        let cs = self.coeffs_in(name);
        let mut acc = Polynomial::zero().aligned(&self.vars);
        for c in cs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        if acc.used_vars().iter().any(|v| v == name) {
            acc
        } else {
            acc.without_var(name)
        }
    }

    fn without_var(&self, name: &str) -> Self {
        let vars: Vec<String> = self.vars.iter().filter(|v| *v != name).cloned().collect();
        self.aligned(&vars)
    }

    /// Simultaneous substitution of several variables.
    pub fn subst_many(&self, map: &BTreeMap<String, Polynomial>) -> Self {
        let mut vars: Vec<String> = self
            .vars
            .iter()
            .filter(|v| !map.contains_key(*v))
            .cloned()
            .collect();
        for p in map.values() {
            vars = merged_vars(&vars, p.vars());
        }
        let mut power_cache: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
        let mut acc = Polynomial::zero().aligned(&vars);
        for (e, c) in &self.terms {
            let mut kept = vec![0u32; vars.len()];
            let mut term = Polynomial::one().aligned(&vars);
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let name = &self.vars[i];
                match map.get(name) {
                    Some(p) => {
                        let pw = power_cache
                            .entry((i, x))
                            .or_insert_with(|| p.aligned(&vars).pow(x))
                            .clone();
                        term = &term * &pw;
                    }
                    None => {
                        let j = vars.iter().position(|w| w == name).unwrap();
                        kept[j] = x;
                    }
                }
            }
            let mono = Polynomial {
                vars: vars.clone(),
                terms: std::iter::once((kept, c.clone())).collect(),
            };
            acc = &acc + &(&term * &mono);
        }
        acc
    }

    pub fn derivative(&self, name: &str) -> Self {
        let Some(i) = self.index_of(name) else {
            return Polynomial::zero().aligned(&self.vars);
        };
        let mut out = Polynomial::zero().aligned(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * Q::from_integer(BigInt::from(e[i])));
        }
        out
    }

    /// Antiderivative in `name` with zero constant of integration.
    pub fn antiderivative(&self, name: &str) -> Self {
        let p = match self.index_of(name) {
            Some(_) => self.clone(),
            None => self.aligned(&merged_vars(&self.vars, &[name.to_string()])),
        };
        let i = p.index_of(name).unwrap();
        let mut out = Polynomial::zero().aligned(&p.vars);
        for (e, c) in &p.terms {
            let mut ne = e.clone();
            ne[i] += 1;
            let k = Q::from_integer(BigInt::from(ne[i]));
            out.add_term(ne, c / k);
        }
        out
    }

    /// Leading exponent and coefficient under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &Q)> {
        self.terms.iter().max_by(|x, y| grlex(x.0, y.0))
    }

    /// Terms sorted by descending graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|x, y| grlex(y.0, x.0));
        v
    }

    /// Exact quotient when `divisor` divides `self`, otherwise `None`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        let (mut rem, d) = self.unify(divisor);
        let (de, dc) = {
            let (e, c) = d.leading_term().unwrap();
            (e.clone(), c.clone())
        };
        let mut quotient = Polynomial::zero().aligned(&d.vars);
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.leading_term().unwrap();
                (e.clone(), c.clone())
            };
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let te: Exponents = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let tc = rc / &dc;
            let t = Polynomial {
                vars: d.vars.clone(),
                terms: std::iter::once((te, tc)).collect(),
            };
            rem = &rem - &(&t * &d);
            quotient = &quotient + &t;
        }
        Some(quotient)
    }

    /// Positive rational c such that self / c has coprime integer coefficients, with sign
    /// chosen so the leading coefficient of self / c is positive.
    pub fn content(&self) -> Q {
        if self.is_zero() {
            return Q::one();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let mut c = Q::new(g, l);
        if self.leading_term().unwrap().1.is_negative() {
            c = -c;
        }
        c
    }

    /// Integer-primitive form with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.content().recip())
    }

    /// Integer-valued coefficients throughout.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.unify(other);
        a.terms == b.terms
    }
}

impl Eq for Polynomial {}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut a, b) = self.unify(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let (mut a, b) = self.unify(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    // Monomials multiply by adding exponents.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = self.unify(rhs);
        let mut out = Polynomial {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Q::one())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                self.$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Prints in descending graded lexicographic order using the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], x)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
