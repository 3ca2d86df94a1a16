//! Divisor classes, curve classes and the symmetric n-linear intersection form on a
//! fixed divisor basis, with the derived top self-intersection and slope.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use fano_symbolic::{Polynomial, RationalFunction, Q};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("expected {expected} divisor classes, got {found}")]
    ClassCount { expected: usize, found: usize },
    #[error("class has {found} coefficients, basis has {expected}")]
    BasisMismatch { expected: usize, found: usize },
    #[error("intersection key `{0}` is not a sorted tuple of basis names of length dim")]
    BadKey(String),
    #[error("duplicate basis name `{0}`")]
    DuplicateBasis(String),
    #[error("top self-intersection of the polarization vanishes identically")]
    DegenerateVolume,
    #[error("unknown divisor or basis name `{0}`")]
    UnknownDivisor(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
}

/// Symmetric n-linear form stored on sorted index tuples; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionForm {
    dim: usize,
    basis: Vec<String>,
    entries: BTreeMap<Vec<usize>, Q>,
}

impl IntersectionForm {
    pub fn new(dim: usize, basis: Vec<String>) -> Result<Self, GeometryError> {
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].contains(b) {
                return Err(GeometryError::DuplicateBasis(b.clone()));
            }
        }
        Ok(IntersectionForm {
            dim,
            basis,
            entries: BTreeMap::new(),
        })
    }

    /// Sets the entry for a tuple of basis names given in any order.
    pub fn set(&mut self, names: &[&str], value: Q) -> Result<(), GeometryError> {
        let key = self.key_of(names)?;
        self.entries.insert(key, value);
        Ok(())
    }

    /// Sets the entry from a dot-joined key such as `H1.H2.H2`.
    pub fn set_dotted(&mut self, key: &str, value: Q) -> Result<(), GeometryError> {
        let names: Vec<&str> = key.split('.').collect();
        self.set(&names, value)
            .map_err(|_| GeometryError::BadKey(key.to_string()))
    }

    fn key_of(&self, names: &[&str]) -> Result<Vec<usize>, GeometryError> {
        if names.len() != self.dim {
            return Err(GeometryError::BadKey(names.join(".")));
        }
        let mut key = Vec::with_capacity(names.len());
        for n in names {
            let i = self
                .basis
                .iter()
                .position(|b| b == n)
                .ok_or_else(|| GeometryError::BadKey(names.join(".")))?;
            key.push(i);
        }
        key.sort_unstable();
        Ok(key)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// Entry on a sorted index tuple.
    pub fn entry(&self, key: &[usize]) -> Q {
        let mut k = key.to_vec();
        k.sort_unstable();
        self.entries.get(&k).cloned().unwrap_or_default()
    }

    /// Nonzero entries keyed by dot-joined sorted basis names.
    pub fn dotted_entries(&self) -> Vec<(String, Q)> {
        self.entries
            .iter()
            .filter(|(_, v)| !num_is_zero(v))
            .map(|(k, v)| {
                let names: Vec<&str> = k.iter().map(|&i| self.basis[i].as_str()).collect();
                (names.join("."), v.clone())
            })
            .collect()
    }

    /// Full multilinear expansion of `D_1 ... D_n`.
    pub fn intersect(&self, classes: &[&DivisorClass]) -> Result<Polynomial, GeometryError> {
        if classes.len() != self.dim {
            return Err(GeometryError::ClassCount {
                expected: self.dim,
                found: classes.len(),
            });
        }
        for c in classes {
            self.check(c)?;
        }
        let m = self.basis.len();
        let mut total = Polynomial::zero();
        let mut idx = vec![0usize; self.dim];
        loop {
            let e = self.entry(&idx);
            if !num_is_zero(&e) {
                let mut term = Polynomial::constant(e);
                for (slot, &i) in idx.iter().enumerate() {
                    let c = &classes[slot].coefficients[i];
                    if c.is_zero() {
                        term = Polynomial::zero();
                        break;
                    }
                    term = &term * c;
                }
                total = &total + &term;
            }
            // odometer over all index tuples
            let mut pos = 0;
            loop {
                if pos == self.dim {
                    return Ok(total);
                }
                idx[pos] += 1;
                if idx[pos] < m {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// `D^n`.
    pub fn power(&self, d: &DivisorClass) -> Result<Polynomial, GeometryError> {
        let v: Vec<&DivisorClass> = vec![d; self.dim];
        self.intersect(&v)
    }

    /// `A . B^(n-1)`.
    pub fn against_power(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Polynomial, GeometryError> {
        let mut v: Vec<&DivisorClass> = vec![b; self.dim];
        v[0] = a;
        self.intersect(&v)
    }

    fn check(&self, d: &DivisorClass) -> Result<(), GeometryError> {
        if d.coefficients.len() != self.basis.len() {
            return Err(GeometryError::BasisMismatch {
                expected: self.basis.len(),
                found: d.coefficients.len(),
            });
        }
        Ok(())
    }

    /// Slope `(-K . L^(n-1)) / L^n` in lowest terms.
    pub fn slope_mu(
        &self,
        canonical: &DivisorClass,
        polarization: &DivisorClass,
    ) -> Result<RationalFunction, GeometryError> {
        let ln = self.power(polarization)?;
        if ln.is_zero() {
            return Err(GeometryError::DegenerateVolume);
        }
        let mk = self.against_power(&-canonical, polarization)?;
        Ok(RationalFunction::new(mk, ln).expect("nonzero denominator"))
    }
}

fn num_is_zero(q: &Q) -> bool {
    *q == Q::default()
}

/// Divisor class with one polynomial coefficient per basis divisor.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorClass {
    pub coefficients: Vec<Polynomial>,
}

impl DivisorClass {
    pub fn new(coefficients: Vec<Polynomial>) -> Self {
        DivisorClass { coefficients }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coefficients: vec![Polynomial::zero(); rank],
        }
    }

    /// The basis divisor at position `i`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut d = Self::zero(rank);
        d.coefficients[i] = Polynomial::one();
        d
    }

    pub fn from_rationals(values: &[Q]) -> Self {
        DivisorClass {
            coefficients: values.iter().cloned().map(Polynomial::constant).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn scale(&self, p: &Polynomial) -> Self {
        DivisorClass {
            coefficients: self.coefficients.iter().map(|c| c * p).collect(),
        }
    }

    pub fn subst_many(&self, map: &BTreeMap<String, Polynomial>) -> Self {
        DivisorClass {
            coefficients: self.coefficients.iter().map(|c| c.subst_many(map)).collect(),
        }
    }

    pub fn subst(&self, name: &str, value: &Polynomial) -> Self {
        DivisorClass {
            coefficients: self.coefficients.iter().map(|c| c.subst(name, value)).collect(),
        }
    }

    /// Every coefficient is a rational constant.
    pub fn as_rationals(&self) -> Option<Vec<Q>> {
        self.coefficients.iter().map(Polynomial::as_constant).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    /// Intersection number with a curve.
    pub fn pair_curve(&self, curve: &CurveClass) -> Result<Polynomial, GeometryError> {
        if curve.pairings.len() != self.coefficients.len() {
            return Err(GeometryError::BasisMismatch {
                expected: self.coefficients.len(),
                found: curve.pairings.len(),
            });
        }
        let mut total = Polynomial::zero();
        for (c, x) in self.coefficients.iter().zip(&curve.pairings) {
            total = &total + &c.scale(x);
        }
        Ok(total)
    }
}

impl<'a> Add<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            coefficients: self
                .coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            coefficients: self
                .coefficients
                .iter()
                .zip(&rhs.coefficients)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }
}

/// Curve class given by its intersection numbers with the basis divisors.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveClass {
    pub name: String,
    pub pairings: Vec<Q>,
}

/// All numerical data of a polarized variety needed by the volume computations.
#[derive(Clone, Debug)]
pub struct Variety {
    pub form: IntersectionForm,
    pub parameters: Vec<String>,
    pub canonical: DivisorClass,
    pub polarization: DivisorClass,
    pub curves: BTreeMap<String, CurveClass>,
    /// Named divisors beyond the basis, such as strict transforms.
    pub divisors: BTreeMap<String, DivisorClass>,
}

impl Variety {
    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn rank(&self) -> usize {
        self.form.basis().len()
    }

    /// Class of a named divisor, falling back to the basis.
    pub fn class_of(&self, name: &str) -> Result<DivisorClass, GeometryError> {
        if let Some(d) = self.divisors.get(name) {
            return Ok(d.clone());
        }
        self.form
            .index_of(name)
            .map(|i| DivisorClass::unit(self.rank(), i))
            .ok_or_else(|| GeometryError::UnknownDivisor(name.to_string()))
    }

    pub fn curve(&self, name: &str) -> Result<&CurveClass, GeometryError> {
        self.curves
            .get(name)
            .ok_or_else(|| GeometryError::UnknownCurve(name.to_string()))
    }

    /// `L^n`.
    pub fn volume(&self) -> Result<Polynomial, GeometryError> {
        self.form.power(&self.polarization)
    }

    /// `(-K) . L^(n-1)`.
    pub fn anticanonical_degree(&self) -> Result<Polynomial, GeometryError> {
        self.form.against_power(&-&self.canonical, &self.polarization)
    }

    pub fn slope_mu(&self) -> Result<RationalFunction, GeometryError> {
        self.form.slope_mu(&self.canonical, &self.polarization)
    }

    /// The same variety with the polarization replaced.
    pub fn with_polarization(&self, polarization: DivisorClass) -> Variety {
        Variety {
            polarization,
            ..self.clone()
        }
    }
}
