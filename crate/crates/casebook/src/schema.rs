//! Serialized form of a case document. Field order and the omission of empty
//! collections are fixed so that a document re-serializes to the same text.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    /// Beta invariant of a divisor computed from chamber data.
    Beta,
    /// Beta invariant specialized from a parent family.
    BetaPullback,
    /// Donaldson-Futaki invariant of a product test configuration.
    Localization,
    /// Degeneration argument, recorded without computation.
    Degeneration,
}

impl Mechanism {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mechanism::Beta => "beta",
            Mechanism::BetaPullback => "beta-pullback",
            Mechanism::Localization => "localization",
            Mechanism::Degeneration => "degeneration",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorProvenance {
    Printed,
    Reconstructed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseDoc {
    pub id: String,
    pub description: String,
    pub mechanism: Mechanism,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    /// Inequalities cutting out the parameter domain; empty means every variable positive.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domain: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_provenance: Option<TensorProvenance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    /// Dotted keys such as `H.E.E`; missing entries are zero.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub intersections: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub canonical: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub polarization: BTreeMap<String, String>,
    /// Intersection numbers of each curve with the basis, in basis order.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub curves: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub divisors: BTreeMap<String, DivisorDoc>,
    /// Named polynomials, each usable in later definitions and in every expression.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub definitions: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, Golden>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errata: Vec<ErratumDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symmetries: Vec<SymmetryDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjoint: Option<AdjointDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reductions: Vec<ReductionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localization: Option<LocalizationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub specialization: BTreeMap<String, String>,
    /// Divisor whose parent beta value is specialized.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDoc {
    /// Coefficients in the basis; missing entries are zero.
    pub class: BTreeMap<String, String>,
    pub log_discrepancy: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schedules: Vec<ScheduleDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    #[serde(default)]
    pub region: Vec<String>,
    pub chambers: Vec<ChamberDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChamberDoc {
    pub interval: (String, String),
    #[serde(default)]
    pub negative_support: Vec<String>,
    #[serde(default)]
    pub orthogonality: Vec<String>,
}

/// A polynomial or a quotient of polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Golden {
    Expr(String),
    Fraction { numerator: String, denominator: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityDoc {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
}

/// A printed value that the computation does not reproduce. `reproduced` is the
/// computed value, and `factor`, when present, satisfies `printed = factor * reproduced`.
/// For an identity (`identity:<name>`), `reproduced` replaces the left side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErratumDoc {
    pub quantity: String,
    pub reproduced: Golden,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
    pub note: String,
}

/// A relabelling of parameters, basis divisors and curves preserving all data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryDoc {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub basis: BTreeMap<String, String>,
    #[serde(default)]
    pub curves: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    Orthant,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub name: String,
    pub method: MethodKind,
    pub polynomial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub substitution: Vec<(String, String)>,
    /// Variables required to be positive; defaults to the variables left untouched by
    /// the substitution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalDoc>,
    pub claims: Vec<ClaimDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalDoc {
    pub var: String,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimDoc {
    pub quantity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub factor: String,
    pub multiplier: String,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjointDoc {
    pub parameter: String,
    pub divisor: String,
    pub log_discrepancy: String,
    pub chambers: Vec<ChamberDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionDoc {
    pub name: String,
    pub quantity: String,
    pub specialization: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizationDoc {
    pub bundles: Vec<String>,
    pub fixed_points: Vec<FixedPointDoc>,
    pub polarization_weights: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<OrientationDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrientationDoc {
    Cotangent,
    Tangent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointDoc {
    pub name: String,
    pub alphas: Vec<i64>,
    pub mu: BTreeMap<String, i64>,
}
