//! Zariski decomposition of `L - uF` on curated chambers in `u`, the resulting
//! piecewise volume polynomial, and the first-order variation of the volume in the
//! direction of the canonical class.

use std::collections::BTreeMap;
use std::fmt;

use fano_geometry::{DivisorClass, GeometryError, Variety};
use fano_symbolic::{parse_in, LinearForm, Polynomial, SymbolicError, Q};
use thiserror::Error;

mod region;

pub use region::{Inequality, Region};

/// Integration variable of every schedule.
pub const U: &str = "u";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZariskiError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("chamber {chamber}: support and orthogonality lists differ in length")]
    LengthMismatch { chamber: usize },
    #[error("chamber {chamber}: pairing matrix of the negative support is singular")]
    SingularPairing { chamber: usize },
    #[error("chamber {chamber}: negative support divisor `{name}` is not a constant class")]
    NonConstantSupport { chamber: usize, name: String },
    #[error("schedule has no chambers")]
    Empty,
    #[error("bad inequality `{0}`")]
    BadInequality(String),
}

/// One interval of `u` on which the negative part has a fixed support.
#[derive(Clone, Debug, PartialEq)]
pub struct Chamber {
    pub lo: LinearForm,
    pub hi: LinearForm,
    pub negative_support: Vec<String>,
    pub orthogonality: Vec<String>,
}

/// Chambers of `L - uF` for one prime divisor on one parameter region.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberSchedule {
    pub divisor: String,
    pub log_discrepancy: Q,
    pub region: Region,
    pub chambers: Vec<Chamber>,
}

impl ChamberSchedule {
    /// Pseudoeffective threshold, the upper end of the last chamber.
    pub fn threshold(&self) -> Option<&LinearForm> {
        self.chambers.last().map(|c| &c.hi)
    }
}

/// Positive and negative parts with the support coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub positive: DivisorClass,
    pub negative: DivisorClass,
    pub gammas: Vec<Polynomial>,
}

/// Volume pieces in `(u, parameters)`, one per chamber.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseVolume {
    pub intervals: Vec<(LinearForm, LinearForm)>,
    pub pieces: Vec<Polynomial>,
}

fn invert(m: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let k = m.len();
    let mut a: Vec<Vec<Q>> = m
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..k).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::default() }));
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| a[r][col] != Q::default())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..k {
            if r != col && a[r][col] != Q::default() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[k..].to_vec()).collect())
}

/// Linear map `D -> D - sum gamma_i(D) N_i` with `(D - sum gamma_i N_i) . C_j = 0`.
pub struct ChamberProjection {
    supports: Vec<DivisorClass>,
    curves: Vec<fano_geometry::CurveClass>,
    inverse: Vec<Vec<Q>>,
}

impl ChamberProjection {
    pub fn new(variety: &Variety, chamber: &Chamber, index: usize) -> Result<Self, ZariskiError> {
        if chamber.negative_support.len() != chamber.orthogonality.len() {
            return Err(ZariskiError::LengthMismatch { chamber: index });
        }
        let supports: Vec<DivisorClass> = chamber
            .negative_support
            .iter()
            .map(|n| variety.class_of(n))
            .collect::<Result<_, _>>()?;
        let curves: Vec<fano_geometry::CurveClass> = chamber
            .orthogonality
            .iter()
            .map(|c| variety.curve(c).cloned())
            .collect::<Result<_, _>>()?;
        let mut m = Vec::new();
        for c in &curves {
            let mut row = Vec::new();
            for (n, name) in supports.iter().zip(&chamber.negative_support) {
                let x = n.pair_curve(c)?.as_constant().ok_or_else(|| {
                    ZariskiError::NonConstantSupport {
                        chamber: index,
                        name: name.clone(),
                    }
                })?;
                row.push(x);
            }
            m.push(row);
        }
        let inverse = if m.is_empty() {
            Vec::new()
        } else {
            invert(m).ok_or(ZariskiError::SingularPairing { chamber: index })?
        };
        Ok(ChamberProjection {
            supports,
            curves,
            inverse,
        })
    }

    pub fn decompose(&self, d: &DivisorClass) -> Result<Decomposition, ZariskiError> {
        let rhs: Vec<Polynomial> = self
            .curves
            .iter()
            .map(|c| d.pair_curve(c))
            .collect::<Result<_, _>>()?;
        let mut gammas = Vec::new();
        let mut negative = DivisorClass::zero(d.rank());
        for (i, n) in self.supports.iter().enumerate() {
            let mut g = Polynomial::zero();
            for (j, r) in rhs.iter().enumerate() {
                g = &g + &r.scale(&self.inverse[i][j]);
            }
            negative = &negative + &n.scale(&g);
            gammas.push(g);
        }
        Ok(Decomposition {
            positive: d - &negative,
            negative,
            gammas,
        })
    }
}

/// `L - uF` for the schedule's divisor.
pub fn moving_divisor(variety: &Variety, divisor: &str) -> Result<DivisorClass, ZariskiError> {
    let f = variety.class_of(divisor)?;
    Ok(&variety.polarization - &f.scale(&Polynomial::var(U)))
}

/// Zariski decomposition of `d` in one chamber.
pub fn decompose_in_chamber(
    variety: &Variety,
    d: &DivisorClass,
    chamber: &Chamber,
) -> Result<Decomposition, ZariskiError> {
    ChamberProjection::new(variety, chamber, 0)?.decompose(d)
}

/// Positive parts of `L - uF` on every chamber.
pub fn positive_parts(
    variety: &Variety,
    schedule: &ChamberSchedule,
) -> Result<Vec<Decomposition>, ZariskiError> {
    if schedule.chambers.is_empty() {
        return Err(ZariskiError::Empty);
    }
    let d = moving_divisor(variety, &schedule.divisor)?;
    schedule
        .chambers
        .iter()
        .enumerate()
        .map(|(i, ch)| ChamberProjection::new(variety, ch, i)?.decompose(&d))
        .collect()
}

/// `vol(L - uF)` chamber by chamber.
pub fn volume_piecewise(
    variety: &Variety,
    schedule: &ChamberSchedule,
) -> Result<PiecewiseVolume, ZariskiError> {
    let parts = positive_parts(variety, schedule)?;
    let pieces = parts
        .iter()
        .map(|p| variety.form.power(&p.positive))
        .collect::<Result<_, _>>()?;
    Ok(PiecewiseVolume {
        intervals: schedule
            .chambers
            .iter()
            .map(|c| (c.lo.clone(), c.hi.clone()))
            .collect(),
        pieces,
    })
}

/// `d/dt vol(L + tK - uF)` at `t = 0`, chamber by chamber: `n P^(n-1) . Pi(K)`.
pub fn volume_t_derivative(
    variety: &Variety,
    schedule: &ChamberSchedule,
) -> Result<Vec<Polynomial>, ZariskiError> {
    let d = moving_divisor(variety, &schedule.divisor)?;
    let n = variety.dim() as i64;
    schedule
        .chambers
        .iter()
        .enumerate()
        .map(|(i, ch)| {
            let proj = ChamberProjection::new(variety, ch, i)?;
            let p = proj.decompose(&d)?.positive;
            let pk = proj.decompose(&variety.canonical)?.positive;
            let x = variety.form.against_power(&pk, &p)?;
            Ok(x.scale(&Q::from_integer(n.into())))
        })
        .collect()
}

/// One named assertion of schedule validation.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    /// Nonzero difference polynomial or other detail on failure.
    pub detail: String,
}

/// Outcome of all well-formedness assertions for one schedule.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }

    fn push_zero(&mut self, name: String, diff: &Polynomial) {
        self.checks.push(Check {
            name,
            ok: diff.is_zero(),
            detail: if diff.is_zero() {
                String::new()
            } else {
                format!("difference {diff}")
            },
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}{}",
                if c.ok { "ok  " } else { "FAIL" },
                c.name,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(": {}", c.detail)
                }
            )?;
        }
        Ok(())
    }
}

/// Abutment, continuity of the volume and of its `u`-derivative at walls, continuity of
/// the positive part and of the `t`-derivative, orthogonality of positive parts,
/// vanishing at the threshold, and `vol(0) = L^n` when the schedule starts at zero.
pub fn validate_schedule(
    variety: &Variety,
    schedule: &ChamberSchedule,
    require_c1: bool,
) -> Result<ValidationReport, ZariskiError> {
    let mut report = ValidationReport::default();
    let parts = positive_parts(variety, schedule)?;
    let vol = volume_piecewise(variety, schedule)?;
    let tder = volume_t_derivative(variety, schedule)?;
    let label = &schedule.divisor;
    for (i, ch) in schedule.chambers.iter().enumerate() {
        for c in &ch.orthogonality {
            let x = parts[i].positive.pair_curve(variety.curve(c)?)?;
            report.push_zero(format!("{label} chamber {i}: P.{c} = 0"), &x);
        }
    }
    for i in 0..schedule.chambers.len().saturating_sub(1) {
        let (a, b) = (&schedule.chambers[i], &schedule.chambers[i + 1]);
        let gap = &a.hi.to_polynomial() - &b.lo.to_polynomial();
        report.push_zero(format!("{label} wall {i}: chambers abut"), &gap);
        if !gap.is_zero() {
            continue;
        }
        let w = a.hi.to_polynomial();
        let d0 = &vol.pieces[i].subst(U, &w) - &vol.pieces[i + 1].subst(U, &w);
        report.push_zero(format!("{label} wall {i}: volume continuous"), &d0);
        if require_c1 {
            let d1 = &vol.pieces[i].derivative(U).subst(U, &w)
                - &vol.pieces[i + 1].derivative(U).subst(U, &w);
            report.push_zero(format!("{label} wall {i}: volume C1 in u"), &d1);
        }
        for (k, (x, y)) in parts[i]
            .positive
            .coefficients
            .iter()
            .zip(&parts[i + 1].positive.coefficients)
            .enumerate()
        {
            let d = &x.subst(U, &w) - &y.subst(U, &w);
            report.push_zero(
                format!("{label} wall {i}: positive part continuous in coordinate {k}"),
                &d,
            );
        }
        let dt = &tder[i].subst(U, &w) - &tder[i + 1].subst(U, &w);
        report.push_zero(format!("{label} wall {i}: t-derivative continuous"), &dt);
    }
    if let Some(tau) = schedule.threshold() {
        let last = vol.pieces.last().unwrap().subst(U, &tau.to_polynomial());
        report.push_zero(format!("{label}: volume vanishes at threshold"), &last);
    }
    let first = &schedule.chambers[0];
    if first.lo.to_polynomial().is_zero() {
        let v0 = &vol.pieces[0].subst(U, &Polynomial::zero()) - &variety.volume()?;
        report.push_zero(format!("{label}: volume at u = 0 equals L^n"), &v0);
    }
    Ok(report)
}

/// Value of the piecewise volume at a parameter point and a value of `u`.
pub fn eval_volume(
    vol: &PiecewiseVolume,
    point: &BTreeMap<String, Q>,
    u: &Q,
) -> Result<Q, ZariskiError> {
    let mut pt = point.clone();
    pt.insert(U.to_string(), u.clone());
    for ((lo, hi), piece) in vol.intervals.iter().zip(&vol.pieces) {
        let l = lo.to_polynomial().eval(point)?;
        let h = hi.to_polynomial().eval(point)?;
        if &l <= u && u <= &h {
            return Ok(piece.eval(&pt)?);
        }
    }
    Ok(Q::default())
}

/// Checks that the volume is nonincreasing on `samples` equally spaced values of `u`
/// between the first lower bound and the threshold. Returns the first violation.
pub fn sampled_monotone(
    vol: &PiecewiseVolume,
    point: &BTreeMap<String, Q>,
    samples: usize,
) -> Result<Option<(Q, Q)>, ZariskiError> {
    let lo = vol.intervals[0].0.to_polynomial().eval(point)?;
    let hi = vol.intervals.last().unwrap().1.to_polynomial().eval(point)?;
    let steps = Q::from_integer(((samples.max(2) - 1) as i64).into());
    let mut prev: Option<Q> = None;
    for k in 0..samples.max(2) {
        let u = &lo + (&hi - &lo) * Q::from_integer((k as i64).into()) / &steps;
        let v = eval_volume(vol, point, &u)?;
        if let Some(p) = &prev {
            if &v > p {
                return Ok(Some((u, v)));
            }
        }
        prev = Some(v);
    }
    Ok(None)
}

/// Parses a chamber bound over the parameter list.
pub fn parse_bound(s: &str, parameters: &[String]) -> Result<LinearForm, ZariskiError> {
    let p = parse_in(s, parameters)?;
    Ok(LinearForm::from_polynomial(&p, &[U, "t"])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fano_geometry::{CurveClass, IntersectionForm};
    use fano_symbolic::{parse, q};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn class(params: &[String], exprs: &[&str]) -> DivisorClass {
        DivisorClass::new(exprs.iter().map(|e| parse_in(e, params).unwrap()).collect())
    }

    fn curve(name: &str, v: &[i64]) -> (String, CurveClass) {
        (
            name.to_string(),
            CurveClass {
                name: name.to_string(),
                pairings: v.iter().map(|&x| q(x)).collect(),
            },
        )
    }

    fn chamber(p: &[String], lo: &str, hi: &str, n: &[&str], c: &[&str]) -> Chamber {
        Chamber {
            lo: parse_bound(lo, p).unwrap(),
            hi: parse_bound(hi, p).unwrap(),
            negative_support: names(n),
            orthogonality: names(c),
        }
    }

    fn blowup_p1p2() -> Variety {
        let p = names(&["a", "b", "c"]);
        let mut f = IntersectionForm::new(3, names(&["H1", "H2", "E"])).unwrap();
        f.set_dotted("H1.H2.H2", q(1)).unwrap();
        f.set_dotted("H1.E.E", q(-2)).unwrap();
        f.set_dotted("H2.E.E", q(-1)).unwrap();
        f.set_dotted("E.E.E", q(-5)).unwrap();
        Variety {
            form: f,
            canonical: class(&p, &["-2", "-3", "1"]),
            polarization: class(&p, &["a + c", "b + 2*c", "-c"]),
            curves: [curve("l1", &[1, 0, 1]), curve("l2", &[0, 1, 2]), curve("l3", &[0, 0, -1])]
                .into_iter()
                .collect(),
            divisors: [("S".to_string(), class(&p, &["0", "1", "-1"]))].into_iter().collect(),
            parameters: p,
        }
    }

    fn schedule_s(v: &Variety) -> ChamberSchedule {
        let p = &v.parameters;
        ChamberSchedule {
            divisor: "S".into(),
            log_discrepancy: q(1),
            region: Region::default(),
            chambers: vec![
                chamber(p, "0", "c", &[], &[]),
                chamber(p, "c", "b + 2*c", &["E"], &["l3"]),
            ],
        }
    }

    #[test]
    fn decomposition_on_second_chamber() {
        let v = blowup_p1p2();
        let s = schedule_s(&v);
        let d = moving_divisor(&v, "S").unwrap();
        let dec = decompose_in_chamber(&v, &d, &s.chambers[1]).unwrap();
        let mut with_u = v.parameters.clone();
        with_u.push(U.into());
        assert_eq!(dec.positive, class(&with_u, &["a + c", "b + 2*c - u", "0"]));
        assert_eq!(dec.negative, class(&with_u, &["0", "0", "u - c"]));
    }

    #[test]
    fn nef_chamber_has_no_negative_part() {
        let v = blowup_p1p2();
        let s = schedule_s(&v);
        let d = moving_divisor(&v, "S").unwrap();
        let dec = decompose_in_chamber(&v, &d, &s.chambers[0]).unwrap();
        assert_eq!(dec.positive, d);
        assert!(dec.negative.is_zero());
    }

    #[test]
    fn schedule_is_well_formed() {
        let v = blowup_p1p2();
        let report = validate_schedule(&v, &schedule_s(&v), true).unwrap();
        assert!(report.ok(), "{report}");
    }

    #[test]
    fn dropped_chamber_is_reported() {
        let v = blowup_p1p2();
        let mut s = schedule_s(&v);
        s.chambers.push(chamber(&v.parameters, "b + 3*c", "b + 4*c", &["E"], &["l3"]));
        let report = validate_schedule(&v, &s, true).unwrap();
        let bad = report.first_failure().unwrap();
        assert!(bad.name.contains("abut"), "{report}");
    }

    #[test]
    fn singular_pairing_is_an_error() {
        let v = blowup_p1p2();
        let p = &v.parameters;
        let ch = chamber(p, "0", "c", &["E"], &["l2"]);
        let d = moving_divisor(&v, "S").unwrap();
        let mut w = v.clone();
        w.curves.insert("z".into(), curve("z", &[1, 0, 0]).1);
        let zero = Chamber { orthogonality: names(&["z"]), ..ch };
        assert_eq!(
            decompose_in_chamber(&w, &d, &zero),
            Err(ZariskiError::SingularPairing { chamber: 0 })
        );
    }

    fn del_pezzo() -> Variety {
        let p = names(&["a1", "a2", "b"]);
        let mut f = IntersectionForm::new(2, names(&["E", "F1", "F2"])).unwrap();
        for (k, x) in [("E.E", -1), ("F1.F1", -1), ("F2.F2", -1), ("E.F1", 1), ("E.F2", 1)] {
            f.set_dotted(k, q(x)).unwrap();
        }
        Variety {
            form: f,
            canonical: class(&p, &["-3", "-2", "-2"]),
            polarization: class(&p, &["a1 + a2 + b", "a1 + b", "a2 + b"]),
            curves: [
                curve("ce", &[-1, 1, 1]),
                curve("cf1", &[1, -1, 0]),
                curve("cf2", &[1, 0, -1]),
            ]
            .into_iter()
            .collect(),
            divisors: BTreeMap::new(),
            parameters: p,
        }
    }

    #[test]
    fn surface_t_derivative() {
        let v = del_pezzo();
        let p = &v.parameters;
        let s = ChamberSchedule {
            divisor: "E".into(),
            log_discrepancy: q(1),
            region: Region::parse(&["a1 <= a2".to_string()], p).unwrap(),
            chambers: vec![
                chamber(p, "0", "a1", &[], &[]),
                chamber(p, "a1", "a2", &["F2"], &["cf2"]),
                chamber(p, "a2", "a1 + a2 + b", &["F1", "F2"], &["cf1", "cf2"]),
            ],
        };
        let t = volume_t_derivative(&v, &s).unwrap();
        assert_eq!(t[0], parse("2*u - 4*a1 - 4*a2 - 6*b").unwrap());
        assert_eq!(t[2], parse("6*u - 6*a1 - 6*a2 - 6*b").unwrap());
        assert!(validate_schedule(&v, &s, true).unwrap().ok());
    }

    #[test]
    fn monotone_sampling() {
        let v = blowup_p1p2();
        let vol = volume_piecewise(&v, &schedule_s(&v)).unwrap();
        let pt = [("a", 1), ("b", 2), ("c", 1)]
            .iter()
            .map(|(k, x)| (k.to_string(), q(*x)))
            .collect();
        assert_eq!(sampled_monotone(&vol, &pt, 20).unwrap(), None);
        let rising = PiecewiseVolume {
            intervals: vol.intervals.clone(),
            pieces: vec![parse("u").unwrap(), parse("u").unwrap()],
        };
        assert!(sampled_monotone(&rising, &pt, 20).unwrap().is_some());
    }

    #[test]
    fn region_parsing_and_normalization() {
        let p = names(&["a", "c"]);
        let r1 = Region::parse(&["a <= c".to_string()], &p).unwrap();
        let r2 = Region::parse(&["2*c >= 2*a".to_string()], &p).unwrap();
        let r3 = Region::parse(&["c <= a".to_string()], &p).unwrap();
        assert!(r1.same_as(&r2));
        assert!(!r1.same_as(&r3));
        assert!(Inequality::parse("a = c", &p).is_err());
        assert!(Inequality::parse("a*c <= 1", &p).is_err());
    }
}
