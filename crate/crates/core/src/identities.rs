//! Series identities behind the transforms, the classical hypergeometric
//! transformations they rest on, and the printed differential equations.

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational, Surd};
use crate::families::{sin_pi_s, Family, FamilySpec};
use crate::numeric::sum::{sum_formula, SumConfig};
use crate::series::{apply_ode, hypergeometric, Ode, OdeTerm, TruncSeries};
use crate::transforms::{involution_check, Formula};
use num_traits::One;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityKind {
    Prop2,
    Prop3,
    Prop5,
    Prop6,
    Involution,
    Clausen,
    Euler,
    Pfaff,
    Quadratic,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 9] = [
        IdentityKind::Prop2,
        IdentityKind::Prop3,
        IdentityKind::Prop5,
        IdentityKind::Prop6,
        IdentityKind::Involution,
        IdentityKind::Clausen,
        IdentityKind::Euler,
        IdentityKind::Pfaff,
        IdentityKind::Quadratic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::Prop2 => "2",
            IdentityKind::Prop3 => "3",
            IdentityKind::Prop5 => "5",
            IdentityKind::Prop6 => "6",
            IdentityKind::Involution => "involution",
            IdentityKind::Clausen => "clausen",
            IdentityKind::Euler => "euler",
            IdentityKind::Pfaff => "pfaff",
            IdentityKind::Quadratic => "quad",
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Parse {
            line: 1,
            col: 1,
            msg: format!("unknown identity `{s}`"),
        })
    }
}

/// One identity check: which identity, at which `s`, to which order (or digits for the numeric one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySpec {
    pub kind: IdentityKind,
    pub s: Rational,
    pub order: usize,
}

/// What applying a printed differential equation to its series gave.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OdeFinding {
    ZeroResidual {
        order: usize,
    },
    /// Lowest index of a nonzero residual coefficient.
    NonzeroResidual {
        order: usize,
        first: usize,
    },
    Malformed(String),
}

impl fmt::Display for OdeFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeFinding::ZeroResidual { order } => write!(f, "ode residual zero to order {order}"),
            OdeFinding::NonzeroResidual { order, first } => {
                write!(f, "ode residual nonzero at x^{first} (checked to order {order})")
            }
            OdeFinding::Malformed(m) => write!(f, "ode malformed: {m}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub spec: IdentitySpec,
    pub holds: bool,
    /// First index where the two sides differ.
    pub first_difference: Option<usize>,
    /// Decimal agreement for the numeric identity.
    pub digits: Option<u32>,
    pub ode: Option<OdeFinding>,
}

impl IdentityReport {
    /// `kind  s  order  pass|fail  detail`, tab separated.
    pub fn line(&self) -> String {
        let mut detail = String::new();
        if let Some(i) = self.first_difference {
            detail.push_str(&format!("differs at x^{i}"));
        }
        if let Some(d) = self.digits {
            detail.push_str(&format!("{d} digits"));
        }
        if let Some(o) = &self.ode {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(&o.to_string());
        }
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.spec.kind,
            self.spec.s,
            self.spec.order,
            if self.holds { "pass" } else { "fail" },
            detail
        )
    }
}

fn poly(c: &[Rational]) -> Vec<Rational> {
    c.to_vec()
}

fn term(p: Vec<Rational>, d: u32) -> OdeTerm {
    OdeTerm { poly: p, derivative: Some(d) }
}

fn q(n: i64) -> Rational {
    int(n)
}

/// Printed equation for the PROP3 generating series, cleared by `x²(1+4x)²`.
pub fn prop3_ode(s: &Rational) -> Ode {
    let ss = s - s * s;
    Ode {
        terms: vec![
            term(poly(&[q(0), q(0), q(1), q(8), q(16)]), 3),
            term(poly(&[q(0), q(3), q(36), q(96)]), 2),
            term(poly(&[q(1), q(28), q(108) + q(16) * &ss]), 1),
            term(poly(&[q(2), q(2) * (q(6) + q(8) * &ss)]), 0),
        ],
    }
}

/// Printed equation for the PROP5 generating series, cleared by `x²(1−x)²`.
pub fn prop5_ode(s: &Rational) -> Ode {
    let ss = s - s * s;
    Ode {
        terms: vec![
            term(poly(&[q(0), q(0), q(1), q(-2), q(1)]), 3),
            term(poly(&[q(0), q(6), q(-21), q(15)]), 2),
            term(poly(&[q(1), -(q(10) + &ss), q(12) + &ss]), 1),
            term(poly(&[-(q(2) + &ss) / q(2), (q(6) + q(3) * &ss) / q(2)]), 0),
        ],
    }
}

/// Printed equation for `₃F₂(1/2,s,1−s;1,1;x)`, cleared by `x²(1−x)`.
pub fn prop6_ode(s: &Rational) -> Ode {
    let ss = s - s * s;
    Ode {
        terms: vec![
            term(poly(&[q(0), q(0), q(1), q(-1)]), 3),
            term(poly(&[q(0), q(3), rat(-9, 2)]), 2),
            term(poly(&[q(1), -(q(3) + &ss)]), 1),
            term(poly(&[-&ss / q(2)]), 0),
        ],
    }
}

/// Printed equation for the `s = 1/6` transformation, cleared by `x²(1−1728x)²`.
/// Its last term carries no dependent variable.
pub fn sixth_transform_ode() -> Ode {
    Ode {
        terms: vec![
            term(poly(&[q(0), q(0), q(1), q(-3456), q(2985984)]), 3),
            term(poly(&[q(0), q(3), q(-15552), q(17915904)]), 2),
            term(poly(&[q(1), q(-11856), q(20155392)]), 1),
            OdeTerm { poly: poly(&[q(-744), q(2239488)]), derivative: None },
        ],
    }
}

fn ode_finding(f: &TruncSeries<Rational>, ode: &Ode) -> OdeFinding {
    match apply_ode(f, ode) {
        Ok(r) => {
            let order = r.order();
            match r.coeffs().iter().position(|c| c != &Rational::from_integer(0.into())) {
                None => OdeFinding::ZeroResidual { order },
                Some(first) => OdeFinding::NonzeroResidual { order, first },
            }
        }
        Err(Error::MalformedOde(m)) => OdeFinding::Malformed(m),
        Err(e) => OdeFinding::Malformed(e.to_string()),
    }
}

fn ser(c: &[i64], n: usize) -> TruncSeries<Rational> {
    let v: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
    TruncSeries::from_poly(&v, n)
}

fn cubic(s: &Rational, n: usize) -> TruncSeries<Rational> {
    hypergeometric(&[rat(1, 2), s.clone(), Rational::one() - s], &[int(1), int(1)], n)
}

fn f21(a: &Rational, b: &Rational, c: &Rational, n: usize) -> TruncSeries<Rational> {
    hypergeometric(&[a.clone(), b.clone()], std::slice::from_ref(c), n)
}

fn compare(lhs: &TruncSeries<Rational>, rhs: &TruncSeries<Rational>) -> (bool, Option<usize>) {
    match lhs.first_difference(rhs) {
        None => (true, None),
        Some(i) => (false, Some(i)),
    }
}

/// `ΣAₙxⁿ = (1+4x)^{−1/2}·₃F₂(1/2,s,1−s;1,1;−4x²/(1+4x))` for PROP3 coefficients.
pub fn prop3_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let lhs = FamilySpec::new(Family::Prop3, s.clone())?.generating_series(n);
    let one_4x = ser(&[1, 4], n);
    let inner = ser(&[0, 0, -4], n).div(&one_4x)?;
    let rhs = one_4x.pow_rational(&rat(-1, 2))?.mul(&cubic(s, n).compose(&inner)?);
    Ok((lhs, rhs))
}

/// `ΣAₙxⁿ = (1−x)^{−1}·₃F₂(1/2,s,1−s;1,1;−4x/(1−x)²)` for PROP5 coefficients.
pub fn prop5_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let lhs = FamilySpec::new(Family::Prop5, s.clone())?.generating_series(n);
    let one_x = ser(&[1, -1], n);
    let inner = ser(&[0, -4], n).div(&one_x.mul(&one_x))?;
    let rhs = one_x.inv()?.mul(&cubic(s, n).compose(&inner)?);
    Ok((lhs, rhs))
}

/// `F(s,1−s;1;½(1−√(1−x)))² = ₃F₂(1/2,s,1−s;1,1;x)`.
pub fn prop6_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let half = rat(1, 2);
    let root = ser(&[1, -1], n).pow_rational(&half)?;
    let inner = TruncSeries::one(n).sub(&root).scale(&half);
    let f = f21(s, &(Rational::one() - s), &int(1), n).compose(&inner)?;
    Ok((f.mul(&f), cubic(s, n)))
}

/// Euler: `F(1/2,1−s;1;x) = (1−x)^{s−1/2}·F(1/2,s;1;x)`.
pub fn euler_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let (a, b, c) = (rat(1, 2), Rational::one() - s, int(1));
    let lhs = f21(&a, &b, &c, n);
    let pre = ser(&[1, -1], n).pow_rational(&(&c - &a - &b))?;
    Ok((lhs, pre.mul(&f21(&(&c - &a), &(&c - &b), &c, n))))
}

/// Pfaff: `F(a,b;c;x) = (1−x)^{−a}·F(a,c−b;c;x/(x−1))` with `a = 1/2, b = s, c = 1`.
pub fn pfaff_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let (a, b, c) = (rat(1, 2), s.clone(), int(1));
    let lhs = f21(&a, &b, &c, n);
    let one_x = ser(&[1, -1], n);
    let inner = ser(&[0, 1], n).div(&one_x.neg())?;
    let rhs = one_x.pow_rational(&-&a)?.mul(&f21(&a, &(&c - &b), &c, n).compose(&inner)?);
    Ok((lhs, rhs))
}

/// Quadratic: `F(s,1−s;1;w) = F(s/2,(1−s)/2;1;4w(1−w))`.
pub fn quadratic_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let half = rat(1, 2);
    let lhs = f21(s, &(Rational::one() - s), &int(1), n);
    let inner = ser(&[0, 4, -4], n);
    let rhs = f21(&(s * &half), &((Rational::one() - s) * &half), &int(1), n).compose(&inner)?;
    Ok((lhs, rhs))
}

/// Clausen: `F(s/2,(1−s)/2;1;x)² = ₃F₂(s,1−s,1/2;1,1;x)`.
pub fn clausen_sides(s: &Rational, n: usize) -> Result<(TruncSeries<Rational>, TruncSeries<Rational>)> {
    let half = rat(1, 2);
    let f = f21(&(s * &half), &((Rational::one() - s) * &half), &int(1), n);
    Ok((f.mul(&f), cubic(s, n)))
}

/// `Σ n·(1/2)ⁿ·Aₙ = 2·sin(πs)/π` for PROP7 coefficients, as a formula record.
pub fn prop2_formula(s: &Rational) -> Result<Formula> {
    let spec = FamilySpec::new(Family::Prop7, s.clone())?;
    let rhs = sin_pi_s(s)?.scale(&int(2));
    Ok(Formula::new(&format!("prop2-{s}"), spec, Surd::from_rational(rat(1, 2)), Surd::zero(), Surd::one(), rhs))
}

pub fn check(spec: &IdentitySpec) -> Result<IdentityReport> {
    let s = &spec.s;
    let n = spec.order;
    let mut report =
        IdentityReport { spec: spec.clone(), holds: false, first_difference: None, digits: None, ode: None };
    let sides = match spec.kind {
        IdentityKind::Prop2 => {
            let f = prop2_formula(s)?;
            let r = sum_formula(&f, n as u32, &SumConfig::default())?;
            report.holds = r.pass;
            report.digits = Some(r.digits_achieved);
            return Ok(report);
        }
        IdentityKind::Involution => {
            report.holds = involution_check(s, n)?;
            return Ok(report);
        }
        IdentityKind::Prop3 => {
            let (l, r) = prop3_sides(s, n)?;
            report.ode = Some(ode_finding(&l, &prop3_ode(s)));
            (l, r)
        }
        IdentityKind::Prop5 => {
            let (l, r) = prop5_sides(s, n)?;
            report.ode = Some(ode_finding(&l, &prop5_ode(s)));
            (l, r)
        }
        IdentityKind::Prop6 => {
            let (l, r) = prop6_sides(s, n)?;
            report.ode = Some(ode_finding(&r, &prop6_ode(s)));
            (l, r)
        }
        IdentityKind::Euler => euler_sides(s, n)?,
        IdentityKind::Pfaff => pfaff_sides(s, n)?,
        IdentityKind::Quadratic => quadratic_sides(s, n)?,
        IdentityKind::Clausen => clausen_sides(s, n)?,
    };
    let (holds, first) = compare(&sides.0, &sides.1);
    report.holds = holds;
    report.first_difference = first;
    Ok(report)
}

/// The `s = 1/6` transformation equation applied to the HYP generating series.
pub fn sixth_transform_finding(order: usize) -> Result<OdeFinding> {
    let g = FamilySpec::new(Family::Hyp, rat(1, 6))?.generating_series(order);
    Ok(ode_finding(&g, &sixth_transform_ode()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_s() -> [Rational; 4] {
        crate::families::admissible_s()
    }

    #[test]
    fn rational_identities_hold() {
        for s in all_s() {
            for sides in
                [prop3_sides, prop5_sides, prop6_sides, euler_sides, pfaff_sides, quadratic_sides, clausen_sides]
            {
                let (l, r) = sides(&s, 16).unwrap();
                assert!(l.agrees_with(&r), "s = {s}");
            }
        }
    }

    #[test]
    fn perturbed_side_is_caught() {
        let (l, r) = prop3_sides(&rat(1, 3), 12).unwrap();
        let bumped = l.add(&TruncSeries::monomial(int(1), 7, 12));
        assert_eq!(bumped.first_difference(&r), Some(7));
    }

    #[test]
    fn prop6_equation_annihilates_cubic() {
        let s = rat(1, 3);
        let f = cubic(&s, 20);
        assert_eq!(ode_finding(&f, &prop6_ode(&s)), OdeFinding::ZeroResidual { order: 17 });
    }

    #[test]
    fn prop3_equation_annihilates_series() {
        let s = rat(1, 4);
        let g = FamilySpec::new(Family::Prop3, s.clone()).unwrap().generating_series(20);
        assert_eq!(ode_finding(&g, &prop3_ode(&s)), OdeFinding::ZeroResidual { order: 17 });
    }

    #[test]
    fn zero_series_gives_zero_residual() {
        let z = TruncSeries::<Rational>::zero(10);
        assert_eq!(ode_finding(&z, &prop6_ode(&rat(1, 2))), OdeFinding::ZeroResidual { order: 7 });
    }

    #[test]
    fn sixth_equation_is_malformed() {
        assert!(matches!(sixth_transform_finding(10).unwrap(), OdeFinding::Malformed(_)));
    }

    #[test]
    fn kinds_parse() {
        for k in IdentityKind::ALL {
            assert_eq!(k.name().parse::<IdentityKind>().unwrap(), k);
        }
        assert!("7".parse::<IdentityKind>().is_err());
    }
}
