//! Case documents for every family: a serialized schema, a loader that turns a
//! document into geometry, chamber schedules, printed values and sign certificates,
//! and the manifest of all families with the documents embedded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fano_certify::{substitution_from_strings, Substitution};
use fano_geometry::{CurveClass, DivisorClass, IntersectionForm, Variety};
use fano_localization::{FixedPoint, LocalizationData, Orientation};
use fano_stability::{AdjointData, Method};
use fano_symbolic::{parse, parse_rational, Polynomial, RationalFunction, Q};
use fano_zariski::{parse_bound, Chamber, ChamberSchedule, Region, U};
use thiserror::Error;

pub mod keys;
pub mod schema;

pub use keys::{GoldenKey, PieceKind};
pub use schema::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaseError {
    #[error("unknown case `{0}`")]
    Unknown(String),
    #[error("malformed case document: {0}")]
    Json(String),
    #[error("case `{id}`: {detail}")]
    Invalid { id: String, detail: String },
    #[error("case `{id}`: {quantity} from the intersection table differs from the printed value by {difference}")]
    TensorCheck {
        id: String,
        quantity: String,
        difference: String,
    },
}

/// One region branch of a divisor's chambers; mirrored branches record their source.
#[derive(Clone, Debug)]
pub struct Branch {
    pub schedule: ChamberSchedule,
    /// Index of the source branch and the symmetry producing this one.
    pub mirror_of: Option<(usize, String)>,
}

#[derive(Clone, Debug)]
pub struct Identity {
    pub name: String,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

#[derive(Clone, Debug)]
pub struct Erratum {
    pub quantity: String,
    pub reproduced: RationalFunction,
    pub factor: Option<Q>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Symmetry {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub basis: BTreeMap<String, String>,
    pub curves: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct ClaimSpec {
    pub quantity: String,
    pub weight: Polynomial,
    pub factor: Polynomial,
    pub multiplier: Polynomial,
    pub denominator: Polynomial,
}

/// A sign certificate before its claims are bound to computed values.
#[derive(Clone, Debug)]
pub struct CertificateSpec {
    pub name: String,
    pub polynomial: Polynomial,
    pub scale: Polynomial,
    pub method: Method,
    pub expansion: Option<Polynomial>,
    pub claims: Vec<ClaimSpec>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub name: String,
    pub quantity: String,
    pub specialization: BTreeMap<String, Polynomial>,
}

/// A loaded and checked case.
#[derive(Clone, Debug)]
pub struct Case {
    pub doc: CaseDoc,
    pub parameters: Vec<String>,
    pub domain: Region,
    pub definitions: BTreeMap<String, Polynomial>,
    pub variety: Option<Variety>,
    pub branches: BTreeMap<String, Vec<Branch>>,
    pub goldens: BTreeMap<String, RationalFunction>,
    pub identities: Vec<Identity>,
    pub errata: BTreeMap<String, Erratum>,
    pub symmetries: Vec<Symmetry>,
    pub certificates: Vec<CertificateSpec>,
    pub adjoint: Option<AdjointData>,
    pub reductions: Vec<Reduction>,
    pub localization: Option<LocalizationData>,
    /// Parent parameter values for a pullback case.
    pub specialization: BTreeMap<String, Polynomial>,
}

impl Case {
    pub fn id(&self) -> &str {
        &self.doc.id
    }

    pub fn mechanism(&self) -> Mechanism {
        self.doc.mechanism
    }

    /// Printed value of a quantity, if any.
    pub fn golden(&self, key: &str) -> Option<&RationalFunction> {
        self.goldens.get(key)
    }
}

struct Scope<'a> {
    id: &'a str,
    parameters: &'a [String],
    definitions: BTreeMap<String, Polynomial>,
}

impl Scope<'_> {
    fn invalid(&self, detail: impl fmt::Display) -> CaseError {
        CaseError::Invalid {
            id: self.id.to_string(),
            detail: detail.to_string(),
        }
    }

    /// Parses with definitions expanded; identifiers outside the parameters and
    /// `extra` are rejected unless `extra` is `None`.
    fn poly_with(&self, s: &str, extra: Option<&[&str]>) -> Result<Polynomial, CaseError> {
        let raw = parse(s).map_err(|e| self.invalid(format!("`{s}`: {e}")))?;
        let used: BTreeMap<String, Polynomial> = raw
            .used_vars()
            .into_iter()
            .filter_map(|v| self.definitions.get(&v).map(|p| (v, p.clone())))
            .collect();
        let p = if used.is_empty() { raw } else { raw.subst_many(&used) };
        if let Some(extra) = extra {
            for v in p.used_vars() {
                if !self.parameters.contains(&v) && !extra.contains(&v.as_str()) {
                    return Err(self.invalid(format!("`{s}` uses the unknown name `{v}`")));
                }
            }
        }
        Ok(p)
    }

    fn poly(&self, s: &str) -> Result<Polynomial, CaseError> {
        self.poly_with(s, Some(&[]))
    }

    fn rational(&self, s: &str) -> Result<Q, CaseError> {
        parse_rational(s).map_err(|e| self.invalid(format!("`{s}`: {e}")))
    }

    fn golden(&self, g: &Golden, extra: Option<&[&str]>) -> Result<RationalFunction, CaseError> {
        match g {
            Golden::Expr(s) => Ok(RationalFunction::from_poly(self.poly_with(s, extra)?)),
            Golden::Fraction {
                numerator,
                denominator,
            } => RationalFunction::new_unreduced(
                self.poly_with(numerator, extra)?,
                self.poly_with(denominator, extra)?,
            )
            .map_err(|e| self.invalid(format!("`{numerator} / {denominator}`: {e}"))),
        }
    }

    fn bound(&self, s: &str) -> Result<fano_symbolic::LinearForm, CaseError> {
        parse_bound(s, self.parameters).map_err(|e| self.invalid(format!("bound `{s}`: {e}")))
    }

    fn chamber(&self, c: &ChamberDoc) -> Result<Chamber, CaseError> {
        Ok(Chamber {
            lo: self.bound(&c.interval.0)?,
            hi: self.bound(&c.interval.1)?,
            negative_support: c.negative_support.clone(),
            orthogonality: c.orthogonality.clone(),
        })
    }

    fn region(&self, items: &[String]) -> Result<Region, CaseError> {
        Region::parse(items, self.parameters).map_err(|e| self.invalid(format!("region {items:?}: {e}")))
    }
}

/// Parses a document without building anything from it.
pub fn parse_doc(text: &str) -> Result<CaseDoc, CaseError> {
    serde_json::from_str(text).map_err(|e| CaseError::Json(e.to_string()))
}

/// Serializes a document in the canonical layout of the case files.
pub fn to_json(doc: &CaseDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("case documents serialize");
    s.push('\n');
    s
}

pub fn load_str(text: &str) -> Result<Case, CaseError> {
    load_doc(parse_doc(text)?)
}

/// Renames identifiers in an expression text, simultaneously.
pub fn rename_identifiers(text: &str, map: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        if !word.is_empty() {
            out.push_str(map.get(word.as_str()).map(String::as_str).unwrap_or(word));
            word.clear();
        }
    };
    for ch in text.chars() {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            if word.is_empty() && ch.is_ascii_digit() {
                out.push(ch);
            } else {
                word.push(ch);
            }
        } else {
            flush(&mut word, &mut out);
            out.push(ch);
        }
    }
    flush(&mut word, &mut out);
    out
}

impl Symmetry {
    /// Simultaneous parameter substitution.
    pub fn parameter_map(&self) -> BTreeMap<String, Polynomial> {
        self.parameters
            .iter()
            .map(|(k, v)| (k.clone(), Polynomial::var(v)))
            .collect()
    }

    /// Image of a class: coefficients move along the basis map and parameters are renamed.
    pub fn map_class(&self, variety: &Variety, d: &DivisorClass) -> Result<DivisorClass, String> {
        let basis = variety.form.basis();
        let mut out = vec![Polynomial::zero(); basis.len()];
        let pm = self.parameter_map();
        for (i, b) in basis.iter().enumerate() {
            let target = self.basis.get(b).unwrap_or(b);
            let j = variety
                .form
                .index_of(target)
                .ok_or_else(|| format!("symmetry `{}` maps {b} outside the basis", self.name))?;
            out[j] = d.coefficients[i].subst_many(&pm);
        }
        Ok(DivisorClass::new(out))
    }

    pub fn map_curve<'a>(&'a self, name: &'a str) -> &'a str {
        self.curves.get(name).map(String::as_str).unwrap_or(name)
    }

    /// Name of the image of a named or basis divisor.
    pub fn map_divisor_name(&self, variety: &Variety, name: &str) -> Result<String, String> {
        let class = variety.class_of(name).map_err(|e| e.to_string())?;
        let image = self.map_class(variety, &class)?;
        if image == class {
            return Ok(name.to_string());
        }
        for (n, c) in &variety.divisors {
            if *c == image {
                return Ok(n.clone());
            }
        }
        for (i, b) in variety.form.basis().iter().enumerate() {
            if image == DivisorClass::unit(variety.rank(), i) {
                return Ok(b.clone());
            }
        }
        Err(format!("symmetry `{}`: no named divisor is the image of {name}", self.name))
    }

    /// Mirrored copy of a schedule of a divisor fixed by the symmetry.
    pub fn mirror_schedule(
        &self,
        variety: &Variety,
        schedule: &ChamberSchedule,
    ) -> Result<ChamberSchedule, String> {
        let params = &variety.parameters;
        let texts: Vec<String> = schedule
            .region
            .texts()
            .iter()
            .map(|t| rename_identifiers(t, &self.parameters))
            .collect();
        let region = Region::parse(&texts, params).map_err(|e| e.to_string())?;
        let pm = self.parameter_map();
        let mut chambers = Vec::new();
        for c in &schedule.chambers {
            let map_form = |f: &fano_symbolic::LinearForm| {
                fano_symbolic::LinearForm::from_polynomial(&f.to_polynomial().subst_many(&pm), &[U])
                    .map_err(|e| e.to_string())
            };
            chambers.push(Chamber {
                lo: map_form(&c.lo)?,
                hi: map_form(&c.hi)?,
                negative_support: c
                    .negative_support
                    .iter()
                    .map(|n| self.map_divisor_name(variety, n))
                    .collect::<Result<_, _>>()?,
                orthogonality: c.orthogonality.iter().map(|n| self.map_curve(n).to_string()).collect(),
            });
        }
        Ok(ChamberSchedule {
            divisor: self.map_divisor_name(variety, &schedule.divisor)?,
            log_discrepancy: schedule.log_discrepancy.clone(),
            region,
            chambers,
        })
    }
}

fn build_variety(doc: &CaseDoc, scope: &Scope) -> Result<Variety, CaseError> {
    let mut form = IntersectionForm::new(doc.dim, doc.basis.clone()).map_err(|e| scope.invalid(e))?;
    for (k, v) in &doc.intersections {
        form.set_dotted(k, scope.rational(v)?)
            .map_err(|e| scope.invalid(format!("intersection `{k}`: {e}")))?;
    }
    let index = |name: &str| {
        form.index_of(name)
            .ok_or_else(|| scope.invalid(format!("`{name}` is not a basis divisor")))
    };
    let rank = doc.basis.len();
    let mut canonical = vec![Q::default(); rank];
    for (k, v) in &doc.canonical {
        canonical[index(k)?] = scope.rational(v)?;
    }
    let mut polarization = vec![Polynomial::zero(); rank];
    for (k, v) in &doc.polarization {
        polarization[index(k)?] = scope.poly(v)?;
    }
    let mut curves = BTreeMap::new();
    for (name, row) in &doc.curves {
        if row.len() != rank {
            return Err(scope.invalid(format!("curve `{name}` has {} pairings, expected {rank}", row.len())));
        }
        let pairings = row.iter().map(|s| scope.rational(s)).collect::<Result<_, _>>()?;
        curves.insert(
            name.clone(),
            CurveClass {
                name: name.clone(),
                pairings,
            },
        );
    }
    let mut divisors = BTreeMap::new();
    for (name, d) in &doc.divisors {
        let mut class = vec![Q::default(); rank];
        for (k, v) in &d.class {
            class[index(k)?] = scope.rational(v)?;
        }
        let class = DivisorClass::from_rationals(&class);
        if let Some(i) = form.index_of(name) {
            if class != DivisorClass::unit(rank, i) {
                return Err(scope.invalid(format!("divisor `{name}` shadows a basis divisor with another class")));
            }
        }
        divisors.insert(name.clone(), class);
    }
    Ok(Variety {
        form,
        parameters: doc.variables.clone(),
        canonical: DivisorClass::from_rationals(&canonical),
        polarization: DivisorClass::new(polarization),
        curves,
        divisors,
    })
}

fn gate(variety: &Variety, goldens: &BTreeMap<String, RationalFunction>, scope: &Scope) -> Result<(), CaseError> {
    let mismatch = |quantity: &str, d: Polynomial| CaseError::TensorCheck {
        id: scope.id.to_string(),
        quantity: quantity.to_string(),
        difference: d.to_string(),
    };
    if let Some(g) = goldens.get("Ln") {
        let v = RationalFunction::from_poly(variety.volume().map_err(|e| scope.invalid(e))?);
        if v != *g {
            return Err(mismatch("L^n", v.cross_difference(g)));
        }
    }
    if let Some(g) = goldens.get("mu") {
        let v = variety.slope_mu().map_err(|e| scope.invalid(e))?;
        if v != *g {
            return Err(mismatch("slope", v.cross_difference(g)));
        }
    }
    Ok(())
}

/// Builds a case from a document and checks its internal consistency.
pub fn load_doc(doc: CaseDoc) -> Result<Case, CaseError> {
    let parameters = doc.variables.clone();
    let mut scope = Scope {
        id: &doc.id,
        parameters: &parameters,
        definitions: BTreeMap::new(),
    };
    let reserved: BTreeSet<&str> = [U, "t"].into_iter().collect();
    for v in &parameters {
        if reserved.contains(v.as_str()) {
            return Err(scope.invalid(format!("`{v}` is reserved")));
        }
    }
    let mut definitions = BTreeMap::new();
    for (name, expr) in &doc.definitions {
        if parameters.contains(name) || reserved.contains(name.as_str()) || definitions.contains_key(name) {
            return Err(scope.invalid(format!("definition `{name}` clashes with another name")));
        }
        let p = scope.poly(expr)?;
        definitions.insert(name.clone(), p.clone());
        scope.definitions.insert(name.clone(), p);
    }
    let domain = if doc.domain.is_empty() {
        let items: Vec<String> = parameters.iter().map(|v| format!("{v} > 0")).collect();
        scope.region(&items)?
    } else {
        scope.region(&doc.domain)?
    };

    let mut goldens = BTreeMap::new();
    for (key, g) in &doc.expected {
        let parsed = GoldenKey::parse(key).map_err(|e| scope.invalid(e))?;
        let value = match &parsed {
            GoldenKey::Spot { .. } => {
                let s = match g {
                    Golden::Expr(s) => s,
                    _ => return Err(scope.invalid(format!("spot value `{key}` must be a number"))),
                };
                RationalFunction::from_rational(scope.rational(s)?)
            }
            GoldenKey::Expansion(_) => scope.golden(g, None)?,
            GoldenKey::Piece { .. } => scope.golden(g, Some(&[U]))?,
            _ => scope.golden(g, Some(&[]))?,
        };
        goldens.insert(key.clone(), value);
    }

    let variety = if doc.basis.is_empty() {
        None
    } else {
        let v = build_variety(&doc, &scope)?;
        gate(&v, &goldens, &scope)?;
        Some(v)
    };

    let symmetries: Vec<Symmetry> = doc
        .symmetries
        .iter()
        .map(|s| Symmetry {
            name: s.name.clone(),
            parameters: s.parameters.clone(),
            basis: s.basis.clone(),
            curves: s.curves.clone(),
        })
        .collect();
    for s in &symmetries {
        for (k, v) in &s.parameters {
            if !parameters.contains(k) || !parameters.contains(v) {
                return Err(scope.invalid(format!("symmetry `{}` renames unknown parameters", s.name)));
            }
        }
    }

    let mut branches: BTreeMap<String, Vec<Branch>> = BTreeMap::new();
    if let Some(variety) = &variety {
        for (name, d) in &doc.divisors {
            let a = scope.rational(&d.log_discrepancy)?;
            let mut list = Vec::new();
            for s in &d.schedules {
                let chambers = s.chambers.iter().map(|c| scope.chamber(c)).collect::<Result<Vec<_>, _>>()?;
                if chambers.is_empty() {
                    return Err(scope.invalid(format!("schedule of `{name}` has no chambers")));
                }
                list.push(Branch {
                    schedule: ChamberSchedule {
                        divisor: name.clone(),
                        log_discrepancy: a.clone(),
                        region: scope.region(&s.region)?,
                        chambers,
                    },
                    mirror_of: None,
                });
            }
            let originals = list.len();
            for sym in &symmetries {
                let image = sym.map_divisor_name(variety, name).map_err(|e| scope.invalid(e))?;
                if image != *name {
                    continue;
                }
                for i in 0..originals {
                    let m = sym
                        .mirror_schedule(variety, &list[i].schedule)
                        .map_err(|e| scope.invalid(e))?;
                    if list.iter().any(|b| b.schedule.region.same_as(&m.region)) {
                        continue;
                    }
                    list.push(Branch {
                        schedule: m,
                        mirror_of: Some((i, sym.name.clone())),
                    });
                }
            }
            if !list.is_empty() {
                branches.insert(name.clone(), list);
            }
        }
    }

    let mut identities = Vec::new();
    for i in &doc.identities {
        identities.push(Identity {
            name: i.name.clone(),
            lhs: scope.poly(&i.lhs)?,
            rhs: scope.poly(&i.rhs)?,
        });
    }

    let mut errata = BTreeMap::new();
    for e in &doc.errata {
        let known = goldens.contains_key(&e.quantity)
            || e
                .quantity
                .strip_prefix("identity:")
                .is_some_and(|n| identities.iter().any(|i| i.name == n));
        if !known {
            return Err(scope.invalid(format!("erratum for `{}` names no printed value", e.quantity)));
        }
        errata.insert(
            e.quantity.clone(),
            Erratum {
                quantity: e.quantity.clone(),
                reproduced: scope.golden(&e.reproduced, Some(&[]))?,
                factor: e.factor.as_deref().map(|f| scope.rational(f)).transpose()?,
                note: e.note.clone(),
            },
        );
    }

    let mut certificates = Vec::new();
    for c in &doc.certificates {
        let method = match c.method {
            MethodKind::Orthant => {
                let pairs = c.substitution.clone();
                let substitution = if pairs.is_empty() {
                    Substitution::identity()
                } else {
                    substitution_from_strings(&pairs, &parameters)
                        .map_err(|e| scope.invalid(format!("certificate `{}`: {e}", c.name)))?
                };
                let strict: BTreeSet<String> = match &c.strict {
                    Some(s) => s.iter().cloned().collect(),
                    None => parameters
                        .iter()
                        .filter(|p| !substitution.resolved().contains_key(*p))
                        .cloned()
                        .collect(),
                };
                Method::Orthant { substitution, strict }
            }
            MethodKind::Interval => {
                let iv = c
                    .interval
                    .as_ref()
                    .ok_or_else(|| scope.invalid(format!("certificate `{}` has no interval", c.name)))?;
                if !parameters.contains(&iv.var) {
                    return Err(scope.invalid(format!("certificate `{}`: unknown variable", c.name)));
                }
                Method::Interval {
                    var: iv.var.clone(),
                    lo: scope.rational(&iv.lo)?,
                    hi: scope.rational(&iv.hi)?,
                }
            }
        };
        let expansion = match goldens.get(&format!("expansion:{}", c.name)) {
            Some(g) => {
                let den = g.denominator().as_constant();
                match den {
                    Some(d) => Some(g.numerator().scale(&d.recip())),
                    None => return Err(scope.invalid(format!("expansion of `{}` is not a polynomial", c.name))),
                }
            }
            None => None,
        };
        let mut claims = Vec::new();
        for cl in &c.claims {
            claims.push(ClaimSpec {
                quantity: cl.quantity.clone(),
                weight: scope.poly(cl.weight.as_deref().unwrap_or("1"))?,
                factor: scope.poly(&cl.factor)?,
                multiplier: scope.poly(&cl.multiplier)?,
                denominator: scope.poly(&cl.denominator)?,
            });
        }
        certificates.push(CertificateSpec {
            name: c.name.clone(),
            polynomial: scope.poly(&c.polynomial)?,
            scale: match &c.scale {
                Some(s) => scope.poly(s)?,
                None => Polynomial::one(),
            },
            method,
            expansion,
            claims,
        });
    }

    let adjoint = match &doc.adjoint {
        Some(a) => Some(AdjointData {
            parameter: a.parameter.clone(),
            divisor: a.divisor.clone(),
            log_discrepancy: scope.rational(&a.log_discrepancy)?,
            chambers: a.chambers.iter().map(|c| scope.chamber(c)).collect::<Result<_, _>>()?,
        }),
        None => None,
    };

    let mut reductions = Vec::new();
    for r in &doc.reductions {
        let mut map = BTreeMap::new();
        for (k, v) in &r.specialization {
            if !parameters.contains(k) {
                return Err(scope.invalid(format!("reduction `{}` sets an unknown parameter", r.name)));
            }
            map.insert(k.clone(), scope.poly(v)?);
        }
        reductions.push(Reduction {
            name: r.name.clone(),
            quantity: r.quantity.clone(),
            specialization: map,
        });
    }

    let localization = match &doc.localization {
        Some(l) => {
            let mut polarization = BTreeMap::new();
            for (k, v) in &l.polarization_weights {
                polarization.insert(k.clone(), scope.poly(v)?);
            }
            let data = LocalizationData {
                dim: doc.dim,
                bundles: l.bundles.clone(),
                fixed_points: l
                    .fixed_points
                    .iter()
                    .map(|p| FixedPoint {
                        name: p.name.clone(),
                        alphas: p.alphas.clone(),
                        mu: p.mu.clone(),
                    })
                    .collect(),
                polarization,
                orientation: match l.orientation {
                    Some(OrientationDoc::Tangent) => Orientation::Tangent,
                    _ => Orientation::Cotangent,
                },
            };
            data.validate().map_err(|e| scope.invalid(e))?;
            Some(data)
        }
        None => None,
    };

    let mut specialization = BTreeMap::new();
    for (k, v) in &doc.specialization {
        specialization.insert(k.clone(), parse(v).map_err(|e| scope.invalid(e))?);
    }
    match doc.mechanism {
        Mechanism::BetaPullback => {
            if doc.parent.is_none() || doc.divisor.is_none() {
                return Err(scope.invalid("a pullback needs a parent and a divisor"));
            }
        }
        Mechanism::Beta => {
            if variety.is_none() {
                return Err(scope.invalid("a beta case needs an intersection table"));
            }
        }
        Mechanism::Localization => {
            if localization.is_none() {
                return Err(scope.invalid("a localization case needs fixed-point data"));
            }
        }
        Mechanism::Degeneration => {}
    }

    drop(scope);
    Ok(Case {
        doc,
        parameters,
        domain,
        definitions,
        variety,
        branches,
        goldens,
        identities,
        errata,
        symmetries,
        certificates,
        adjoint,
        reductions,
        localization,
        specialization,
    })
}

macro_rules! documents {
    ($($id:literal),* $(,)?) => {
        /// Family ids in manifest order.
        pub const CASE_IDS: &[&str] = &[$($id),*];
        const DOCUMENTS: &[(&str, &str)] = &[$(($id, include_str!(concat!("../../../cases/", $id, ".json")))),*];
    };
}

documents!(
    "2.21", "2.26", "2.28", "2.30", "2.31", "2.33", "2.35", "2.36", "3.13", "3.16", "3.18", "3.21", "3.22",
    "3.23", "3.24", "3.26", "3.28", "3.29", "3.30", "3.31", "4.8", "4.9", "4.10", "4.11", "4.12", "dP7",
);

/// Embedded document text of a family.
pub fn document(id: &str) -> Option<&'static str> {
    DOCUMENTS.iter().find(|(i, _)| *i == id).map(|(_, t)| *t)
}

pub fn load(id: &str) -> Result<Case, CaseError> {
    load_str(document(id).ok_or_else(|| CaseError::Unknown(id.to_string()))?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    pub description: String,
    pub mechanism: Mechanism,
    pub parent: Option<String>,
    pub specialization: BTreeMap<String, String>,
}

/// Every family with its mechanism, and the parent of each pullback.
pub fn manifest() -> Result<Vec<ManifestEntry>, CaseError> {
    CASE_IDS
        .iter()
        .map(|id| {
            let doc = parse_doc(document(id).expect("embedded"))?;
            Ok(ManifestEntry {
                id: doc.id,
                description: doc.description,
                mechanism: doc.mechanism,
                parent: doc.parent,
                specialization: doc.specialization,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renaming_is_simultaneous() {
        let map = BTreeMap::from([("a1".to_string(), "a2".to_string()), ("a2".to_string(), "a1".to_string())]);
        assert_eq!(rename_identifiers("a1 <= a2", &map), "a2 <= a1");
        assert_eq!(rename_identifiers("2*a1 + a12", &map), "2*a2 + a12");
    }

    #[test]
    fn every_id_has_a_document() {
        for id in CASE_IDS {
            let doc = parse_doc(document(id).unwrap()).unwrap();
            assert_eq!(doc.id, *id);
        }
    }

    #[test]
    fn definitions_expand_in_order() {
        let text = r#"{"id":"x","description":"","mechanism":"degeneration","dim":3,"variables":["a"],
            "definitions":[["p","a + 1"],["q","p^2"]],"expected":{"Ln":"q - 1"}}"#;
        let case = load_str(text).unwrap();
        assert_eq!(case.definitions["q"], parse("a^2 + 2*a + 1").unwrap());
        assert_eq!(case.goldens["Ln"], RationalFunction::from_poly(parse("a^2 + 2*a").unwrap()));
    }

    #[test]
    fn unknown_names_are_rejected() {
        let text = r#"{"id":"x","description":"","mechanism":"degeneration","dim":3,"variables":["a"],
            "expected":{"Ln":"a + z"}}"#;
        assert!(matches!(load_str(text), Err(CaseError::Invalid { .. })));
    }
}
