//! The beta invariant of a prime divisor from the chamber-wise volume of `L - uF`,
//! the adjoint-line-bundle form of the same quantity, specialization to boundary
//! faces of the ample cone, and family verdicts.

use std::collections::BTreeMap;
use std::fmt;

use fano_certify::CertifyError;
use fano_geometry::{GeometryError, Variety};
use fano_symbolic::{integrate_over_interval, Polynomial, RationalFunction, SymbolicError, Q};
use fano_zariski::{
    validate_schedule, volume_piecewise, volume_t_derivative, Chamber, ChamberSchedule,
    PiecewiseVolume, Region, ValidationReport, ZariskiError, U,
};
use thiserror::Error;

pub mod sign;

pub use sign::{Claim, Method, SignCertificate, SignReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error(transparent)]
    Zariski(#[from] ZariskiError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("schedule for `{divisor}` failed validation: {detail}")]
    InvalidSchedule { divisor: String, detail: String },
    #[error("L^n vanishes identically")]
    DegeneratePolarization,
    #[error("specialization makes the denominator vanish")]
    DegenerateSpecialization,
    #[error("{0}")]
    Mismatch(String),
}

/// The beta invariant on one region branch with the intermediate quantities.
#[derive(Clone, Debug)]
pub struct BetaComputation {
    pub divisor: String,
    pub region: Region,
    pub value: RationalFunction,
    pub volume: PiecewiseVolume,
    pub t_derivative: Vec<Polynomial>,
    /// Integral of the volume over `u`.
    pub volume_integral: Polynomial,
    /// Integral of the `t`-derivative over `u`.
    pub t_integral: Polynomial,
    pub validation: ValidationReport,
}

/// `A(F) + (n mu / L^n) int vol(L - uF) du + (1 / L^n) int d/dt vol(L + tK - uF)|_0 du`,
/// integrating chamber by chamber up to the pseudoeffective threshold, beyond which
/// both integrands vanish.
pub fn beta_general(
    variety: &Variety,
    schedule: &ChamberSchedule,
) -> Result<BetaComputation, StabilityError> {
    let validation = validate_schedule(variety, schedule, false)?;
    if let Some(bad) = validation.first_failure() {
        return Err(StabilityError::InvalidSchedule {
            divisor: schedule.divisor.clone(),
            detail: format!("{} {}", bad.name, bad.detail),
        });
    }
    let volume = volume_piecewise(variety, schedule)?;
    let t_derivative = volume_t_derivative(variety, schedule)?;
    let mut volume_integral = Polynomial::zero();
    let mut t_integral = Polynomial::zero();
    for (i, ch) in schedule.chambers.iter().enumerate() {
        volume_integral =
            &volume_integral + &integrate_over_interval(&volume.pieces[i], U, &ch.lo, &ch.hi);
        t_integral = &t_integral + &integrate_over_interval(&t_derivative[i], U, &ch.lo, &ch.hi);
    }
    let ln = variety.volume()?;
    if ln.is_zero() {
        return Err(StabilityError::DegeneratePolarization);
    }
    let mkl = variety.anticanonical_degree()?;
    let n = Q::from_integer((variety.dim() as i64).into());
    // A + (n (-K.L^(n-1)) I1 + L^n I2) / (L^n)^2
    let num = &(&mkl * &volume_integral).scale(&n) + &(&ln * &t_integral);
    let value = &RationalFunction::from_rational(schedule.log_discrepancy.clone())
        + &RationalFunction::new(num, ln.pow(2))?;
    Ok(BetaComputation {
        divisor: schedule.divisor.clone(),
        region: schedule.region.clone(),
        value,
        volume,
        t_derivative,
        volume_integral,
        t_integral,
        validation,
    })
}

/// Volume data of `-K - uF` for a polarization of the form `L = -K + bF`.
#[derive(Clone, Debug)]
pub struct AdjointData {
    pub parameter: String,
    pub divisor: String,
    pub log_discrepancy: Q,
    /// Chambers of `-K - uF`, the first starting at `u = -b`.
    pub chambers: Vec<Chamber>,
}

#[derive(Clone, Debug)]
pub struct AdjointComputation {
    /// `-(L + n b F) . L^(n-1) / (L^n)^2`.
    pub phi: RationalFunction,
    pub volume: PiecewiseVolume,
    pub value: RationalFunction,
    pub validation: ValidationReport,
}

/// `A(F) + b + phi(b) int_{-b}^{tau} vol(-K - uF) du`.
pub fn beta_adjoint(variety: &Variety, data: &AdjointData) -> Result<AdjointComputation, StabilityError> {
    let b = Polynomial::var(&data.parameter);
    let f = variety.class_of(&data.divisor)?;
    let expected = &(-&variety.canonical) + &f.scale(&b);
    let diff = &expected - &variety.polarization;
    if !diff.is_zero() {
        return Err(StabilityError::Mismatch(format!(
            "polarization is not -K + {}*{}",
            data.parameter, data.divisor
        )));
    }
    let anticanonical = variety.with_polarization(-&variety.canonical);
    let schedule = ChamberSchedule {
        divisor: data.divisor.clone(),
        log_discrepancy: data.log_discrepancy.clone(),
        region: Region(Vec::new()),
        chambers: data.chambers.clone(),
    };
    let validation = validate_schedule(&anticanonical, &schedule, false)?;
    let volume = volume_piecewise(&anticanonical, &schedule)?;
    let mut integral = Polynomial::zero();
    for (i, ch) in schedule.chambers.iter().enumerate() {
        integral = &integral + &integrate_over_interval(&volume.pieces[i], U, &ch.lo, &ch.hi);
    }
    let n = Q::from_integer((variety.dim() as i64).into());
    let l = &variety.polarization;
    let shifted = l + &f.scale(&b.scale(&n));
    let ln = variety.volume()?;
    if ln.is_zero() {
        return Err(StabilityError::DegeneratePolarization);
    }
    let phi = RationalFunction::new(-&variety.form.against_power(&shifted, l)?, ln.pow(2))?;
    let value = &(&RationalFunction::from_rational(data.log_discrepancy.clone())
        + &RationalFunction::from_poly(b))
        + &(&phi * &RationalFunction::from_poly(integral));
    Ok(AdjointComputation {
        phi,
        volume,
        value,
        validation,
    })
}

/// Substitutes expressions for parameters; fails when the denominator becomes zero.
pub fn specialize(
    beta: &RationalFunction,
    map: &BTreeMap<String, Polynomial>,
) -> Result<RationalFunction, StabilityError> {
    beta.subst_many(map)
        .map_err(|_| StabilityError::DegenerateSpecialization)
}

/// `v -> lambda * v` for every listed parameter.
pub fn rescale(beta: &RationalFunction, parameters: &[String], lambda: &str) -> RationalFunction {
    let l = Polynomial::var(lambda);
    let map: BTreeMap<String, Polynomial> = parameters
        .iter()
        .map(|p| (p.clone(), &l * &Polynomial::var(p)))
        .collect();
    beta.subst_many(&map).expect("rescaling keeps denominators nonzero")
}

/// Exact identity `beta(lambda v) = beta(v)` with a fresh symbol `lambda`.
pub fn rescaling_invariant(beta: &RationalFunction, parameters: &[String]) -> bool {
    let fresh = fresh_symbol(parameters, "lambda");
    rescale(beta, parameters, &fresh) == *beta
}

/// `L^n(lambda v) = lambda^n L^n(v)` and `mu(lambda v) = mu(v) / lambda`.
pub fn homogeneity_holds(variety: &Variety) -> Result<bool, StabilityError> {
    let fresh = fresh_symbol(&variety.parameters, "lambda");
    let l = Polynomial::var(&fresh);
    let map: BTreeMap<String, Polynomial> = variety
        .parameters
        .iter()
        .map(|p| (p.clone(), &l * &Polynomial::var(p)))
        .collect();
    let ln = variety.volume()?;
    let n = variety.dim() as u32;
    let ok_ln = ln.subst_many(&map) == &l.pow(n) * &ln;
    let mu = variety.slope_mu()?;
    let ok_mu = mu.subst_many(&map)? == &mu / &RationalFunction::from_poly(l);
    Ok(ok_ln && ok_mu)
}

fn fresh_symbol(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Family-level conclusion, drawn from a fixed set of strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    KUnstable,
    Degeneration,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::KUnstable => "K-unstable for every ample L",
            Verdict::Degeneration => {
                "not K-polystable for every ample L (degeneration, not computed)"
            }
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// K-unstable only when every sign certificate holds and their domains cover the
/// parameter space.
pub fn verdict(reports: &[SignReport], covered: bool) -> Verdict {
    if !reports.is_empty() && covered && reports.iter().all(|r| r.ok()) {
        Verdict::KUnstable
    } else {
        Verdict::Inconclusive
    }
}

/// Both sides as a difference polynomial of cross products, zero when they agree.
pub fn difference(x: &RationalFunction, y: &RationalFunction) -> Polynomial {
    x.cross_difference(y)
}
