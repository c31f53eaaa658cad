//! Parameter-level transformations between formulas for 1/π, done exactly over surds.

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational, Surd};
use crate::families::{cs_squared, Family, FamilySpec};
use crate::series::{hypergeometric, TruncSeries};
use num_traits::One;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Typo,
    Suspect,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Typo => "typo",
            Flag::Suspect => "suspect",
        })
    }
}

impl FromStr for Flag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "typo" => Ok(Flag::Typo),
            "suspect" => Ok(Flag::Suspect),
            _ => Err(Error::Parse { line: 1, col: 1, msg: format!("unknown flag `{s}`") }),
        }
    }
}

/// One claimed identity `Σ Aₙ(lin0 + lin1·n)·argⁿ = rhs/π`.
#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    pub id: String,
    pub provenance: String,
    pub family: FamilySpec,
    pub arg: Surd,
    pub lin0: Surd,
    pub lin1: Surd,
    pub rhs: Surd,
    /// `y²` where `τ₀ = iy`.
    pub tau0_im_sq: Option<Rational>,
    pub convergent: bool,
    /// Digits to verify when the default does not apply.
    pub digits: Option<u32>,
    pub flag: Option<Flag>,
    /// Values as printed, for rows whose stored values were corrected; keys `arg`, `lin0`, `lin1`, `rhs`.
    pub printed: Vec<(String, Surd)>,
    /// Verbatim cell text for cells that do not parse.
    pub raw: Vec<(String, String)>,
    pub notes: Option<String>,
}

impl Formula {
    pub fn new(id: &str, family: FamilySpec, arg: Surd, lin0: Surd, lin1: Surd, rhs: Surd) -> Self {
        let mut f = Formula {
            id: id.to_string(),
            provenance: String::new(),
            family,
            arg,
            lin0,
            lin1,
            rhs,
            tau0_im_sq: None,
            convergent: false,
            digits: None,
            flag: None,
            printed: Vec::new(),
            raw: Vec::new(),
            notes: None,
        };
        f.convergent = f.in_disk();
        f
    }

    pub fn s(&self) -> &Rational {
        &self.family.s
    }

    /// `|arg| < radius` of the family, decided exactly.
    pub fn in_disk(&self) -> bool {
        let r = Surd::from_rational(self.family.radius());
        self.arg.abs().compare(&r) == Ordering::Less
    }

    pub fn printed_value(&self, key: &str) -> Option<&Surd> {
        self.printed.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// The row as printed: corrected fields replaced by their printed values.
    pub fn as_printed(&self) -> Formula {
        let mut f = self.clone();
        for (k, v) in &self.printed {
            match k.as_str() {
                "arg" => f.arg = v.clone(),
                "lin0" => f.lin0 = v.clone(),
                "lin1" => f.lin1 = v.clone(),
                "rhs" => f.rhs = v.clone(),
                _ => {}
            }
        }
        f
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop {
    P1,
    P4,
    P5,
    P7,
    Hat,
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prop::P1 => "1",
            Prop::P4 => "4",
            Prop::P5 => "5",
            Prop::P7 => "7",
            Prop::Hat => "hat",
        })
    }
}

impl FromStr for Prop {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" => Prop::P1,
            "4" => Prop::P4,
            "5" => Prop::P5,
            "7" => Prop::P7,
            "hat" => Prop::Hat,
            _ => return Err(Error::Parse { line: 1, col: 1, msg: format!("unknown transform `{s}`") }),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Branch::Plus),
            "-" => Ok(Branch::Minus),
            _ => Err(Error::Parse { line: 1, col: 1, msg: format!("unknown sign `{s}`") }),
        }
    }
}

fn q(n: i64) -> Surd {
    Surd::from_int(n)
}

fn require_family(f: &Formula, kind: Family) -> Result<()> {
    if f.family.kind != kind {
        return Err(Error::Unsupported(format!("`{}` has family {}, expected {}", f.id, f.family.kind, kind)));
    }
    Ok(())
}

fn derived(src: &Formula, tag: &str, kind: Family, arg: Surd, lin0: Surd, lin1: Surd, rhs: Surd) -> Formula {
    let family = FamilySpec { kind, s: src.family.s.clone() };
    let mut f = Formula::new(&format!("{}>{}", src.id, tag), family, arg, lin0, lin1, rhs);
    f.provenance = format!("{tag} transform of {}", src.id);
    f
}

fn unit_arg(f: &Formula) -> Surd {
    f.arg.scale(&int(f.family.m() as i64))
}

fn nonzero(x: Surd) -> Result<Surd> {
    if x.is_zero() {
        Err(Error::PoleAtArgument)
    } else {
        Ok(x)
    }
}

/// `w₀ = −x₀/(1−Mx₀)`, `A = (½bMx₀ + a(1−Mx₀))(1−Mx₀)^{−3/2}`, `B = b(1−Mx₀)^{−3/2}`.
pub fn prop1_transform(f: &Formula) -> Result<Formula> {
    require_family(f, Family::Hyp)?;
    let m = q(f.family.m() as i64);
    let y = nonzero(&q(1) - &(&m * &f.arg))?;
    let w = (-&f.arg).checked_div(&y)?;
    let y32 = &y * &y.sqrt_denest()?;
    let half_bmx = (&f.lin1 * &m * &f.arg).scale(&rat(1, 2));
    let a = (&half_bmx + &(&f.lin0 * &y)).checked_div(&y32)?;
    let b = f.lin1.checked_div(&y32)?;
    Ok(derived(f, "prop1", Family::Prop1, w, a, b, f.rhs.clone()))
}

/// `w₀ = ½(−x ± √(x²−x))`, `A = √(1+4w₀)(a + bw₀/(1+2w₀))`, `B = b(1+4w₀)^{3/2}/(2(1+2w₀))`.
pub fn prop4_transform(f: &Formula, sign: Branch) -> Result<Formula> {
    require_family(f, Family::Hyp)?;
    let x = unit_arg(f);
    let disc = (&(&x * &x) - &x).sqrt_denest()?;
    let root = if sign == Branch::Plus { disc } else { -disc };
    let w = (&(-&x) + &root).scale(&rat(1, 2));
    let one_4w = &q(1) + &w.scale(&int(4));
    let one_2w = nonzero(&q(1) + &w.scale(&int(2)))?;
    let r = one_4w.sqrt_denest()?;
    let a = &r * &(&f.lin0 + &(&f.lin1 * &w).checked_div(&one_2w)?);
    let b = (&f.lin1 * &one_4w * &r).checked_div(&one_2w.scale(&int(2)))?;
    let tag = format!("prop4{sign}");
    Ok(derived(f, &tag, Family::Prop3, w, a, b, f.rhs.clone()))
}

/// `w₀ = 1 − (2/x)(1−√(1−x))`, `A = (1−w₀)(a − bw₀/(1+w₀))`, `B = b(1−w₀)²/(1+w₀)`.
pub fn prop5_transform(f: &Formula) -> Result<Formula> {
    require_family(f, Family::Hyp)?;
    let x = nonzero(unit_arg(f))?;
    let r = (&q(1) - &x).sqrt_denest()?;
    let w = &q(1) - &(&q(2) - &r.scale(&int(2))).checked_div(&x)?;
    let one_w = &q(1) - &w;
    let one_pw = nonzero(&q(1) + &w)?;
    let a = &one_w * &(&f.lin0 - &(&f.lin1 * &w).checked_div(&one_pw)?);
    let b = (&f.lin1 * &one_w * &one_w).checked_div(&one_pw)?;
    Ok(derived(f, "prop5", Family::Prop5, w, a, b, f.rhs.clone()))
}

/// `w₀ = ½(1−√(1−x))`, `A = a`, `B = b(1−w₀)/(1−2w₀)`.
pub fn prop7_transform(f: &Formula) -> Result<Formula> {
    require_family(f, Family::Hyp)?;
    let x = unit_arg(f);
    let r = nonzero((&q(1) - &x).sqrt_denest()?)?;
    let w = (&q(1) - &r).scale(&rat(1, 2));
    let b = (&f.lin1 * &(&q(1) - &w)).checked_div(&r)?;
    Ok(derived(f, "prop7", Family::Prop7, w, f.lin0.clone(), b, f.rhs.clone()))
}

/// Companion at `w₁ = 1 − w₀`: `Â = A`, `B̂ = −Bw₀/w₁`,
/// `Ĉ = C·y²/C_s² − B·y/(C_s²·w₁)` where `τ₀ = iy`.
pub fn appendix_hat_transform(f: &Formula) -> Result<Formula> {
    require_family(f, Family::Prop7)?;
    let y2 = f.tau0_im_sq.clone().ok_or(Error::MissingTau)?;
    let y = Surd::from_rational(y2.clone()).sqrt_denest()?;
    let w1 = nonzero(&q(1) - &f.arg)?;
    if w1.abs().compare(&q(1)) != Ordering::Less {
        return Err(Error::DivergentCompanion);
    }
    let cs2 = cs_squared(f.s())?;
    let b = (-&(&f.lin1 * &f.arg)).checked_div(&w1)?;
    let c1 = f.rhs.scale(&(&y2 / &cs2));
    let c2 = (&f.lin1 * &y).checked_div(&w1.scale(&cs2))?;
    let mut out = derived(f, "hat", Family::Prop7, w1, f.lin0.clone(), b, &c1 - &c2);
    out.tau0_im_sq = None;
    Ok(out)
}

pub fn apply(prop: Prop, f: &Formula, sign: Option<Branch>) -> Result<Formula> {
    match prop {
        Prop::P1 => prop1_transform(f),
        Prop::P4 => prop4_transform(f, sign.unwrap_or(Branch::Plus)),
        Prop::P5 => prop5_transform(f),
        Prop::P7 => prop7_transform(f),
        Prop::Hat => appendix_hat_transform(f),
    }
}

/// Result of comparing a computed formula with a stored one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Exact,
    /// Same argument; `(lin0, lin1, rhs)` proportional.
    Scaled,
    Differs,
}

pub fn compare(computed: &Formula, stored: &Formula) -> Agreement {
    if computed.arg != stored.arg {
        return Agreement::Differs;
    }
    if computed.lin0 == stored.lin0 && computed.lin1 == stored.lin1 && computed.rhs == stored.rhs {
        return Agreement::Exact;
    }
    let cross = |x: &Surd, y: &Surd| x * &stored.rhs == y * &computed.rhs;
    if !stored.rhs.is_zero() && cross(&computed.lin0, &stored.lin0) && cross(&computed.lin1, &stored.lin1) {
        Agreement::Scaled
    } else {
        Agreement::Differs
    }
}

/// `g ↦ (1−Mx)^{−1/2}·g(−x/(1−Mx))`.
pub fn general_transformation<C: crate::series::Coeff>(g: &TruncSeries<C>, m: i64) -> Result<TruncSeries<C>> {
    let n = g.order();
    let one_mx = TruncSeries::from_poly(&[C::one(), C::from_rational(int(-m))], n);
    let inner = TruncSeries::from_poly(&[C::zero(), C::from_rational(int(-1))], n).div(&one_mx)?;
    let pre = one_mx.pow_rational(&rat(-1, 2))?;
    Ok(pre.mul(&g.compose(&inner)?))
}

/// `a ↦ A` and `A ↦ a` under the general transformation, for the given pair of series.
pub fn involution_pair_holds(a: &TruncSeries<Rational>, big_a: &TruncSeries<Rational>, m: i64) -> Result<bool> {
    Ok(general_transformation(a, m)?.agrees_with(big_a) && general_transformation(big_a, m)?.agrees_with(a))
}

/// The HYP and PROP1 generating series of `s` are exchanged by the general transformation.
pub fn involution_check(s: &Rational, order: usize) -> Result<bool> {
    let hyp = FamilySpec::new(Family::Hyp, s.clone())?;
    let p1 = FamilySpec::new(Family::Prop1, s.clone())?;
    let m = hyp.m() as i64;
    involution_pair_holds(&hyp.generating_series(order), &p1.generating_series(order), m)
}

/// Series-level content of a transform: with `g = P·(h∘X)` the target generating
/// function, `A(w)·g + B(w)·θg = ((a + bθ)h)∘X` holds identically in `w`.
#[derive(Clone, Debug)]
pub struct SeriesCheck {
    pub kernel_ok: bool,
    pub operator_ok: bool,
}

impl SeriesCheck {
    pub fn ok(&self) -> bool {
        self.kernel_ok && self.operator_ok
    }
}

fn poly(c: &[i64], n: usize) -> TruncSeries<Surd> {
    let v: Vec<Surd> = c.iter().map(|&x| q(x)).collect();
    TruncSeries::from_poly(&v, n)
}

pub fn series_check(prop: Prop, s: &Rational, a: &Surd, b: &Surd, order: usize) -> Result<SeriesCheck> {
    let n = order;
    let half = rat(1, 2);
    let one_minus_s = Rational::one() - s;
    let cubic =
        |c: &Rational| hypergeometric_scaled(&[half.clone(), s.clone(), one_minus_s.clone()], &[int(1), int(1)], c, n);
    let (target, h, p, x, aw, bw) = match prop {
        Prop::P1 => {
            let spec = FamilySpec::new(Family::Prop1, s.clone())?;
            let m = spec.m() as i64;
            let h = cubic(&int(m));
            let one_mw = poly(&[1, -m], n);
            let p = one_mw.pow_rational(&rat(-1, 2))?;
            let x = poly(&[0, -1], n).div(&one_mw)?;
            let aw = poly(&[1], n)
                .mul_coeff(a)
                .sub(&poly(&[0, m], n).mul_coeff(b).scale(&half))
                .mul(&one_mw.pow_rational(&half)?);
            let bw = one_mw.pow_rational(&rat(3, 2))?.mul_coeff(b);
            (spec, h, p, x, aw, bw)
        }
        Prop::P4 => {
            let spec = FamilySpec::new(Family::Prop3, s.clone())?;
            let h = cubic(&int(1));
            let one_4w = poly(&[1, 4], n);
            let one_2w = poly(&[1, 2], n);
            let p = one_4w.pow_rational(&rat(-1, 2))?;
            let x = poly(&[0, 0, -4], n).div(&one_4w)?;
            let frac = poly(&[0, 1], n).div(&one_2w)?.mul_coeff(b);
            let aw = one_4w.pow_rational(&half)?.mul(&poly(&[1], n).mul_coeff(a).add(&frac));
            let bw = one_4w.pow_rational(&rat(3, 2))?.div(&one_2w.scale(&int(2)))?.mul_coeff(b);
            (spec, h, p, x, aw, bw)
        }
        Prop::P5 => {
            let spec = FamilySpec::new(Family::Prop5, s.clone())?;
            let h = cubic(&int(1));
            let one_w = poly(&[1, -1], n);
            let one_pw = poly(&[1, 1], n);
            let p = one_w.inv()?;
            let x = poly(&[0, -4], n).div(&one_w.mul(&one_w))?;
            let frac = poly(&[0, 1], n).div(&one_pw)?.mul_coeff(b);
            let aw = one_w.mul(&poly(&[1], n).mul_coeff(a).sub(&frac));
            let bw = one_w.mul(&one_w).div(&one_pw)?.mul_coeff(b);
            (spec, h, p, x, aw, bw)
        }
        Prop::P7 => {
            let spec = FamilySpec::new(Family::Prop7, s.clone())?;
            let h = cubic(&int(1));
            let p = poly(&[1], n);
            let x = poly(&[0, 4, -4], n);
            let aw = poly(&[1], n).mul_coeff(a);
            let bw = poly(&[1, -1], n).div(&poly(&[1, -2], n))?.mul_coeff(b);
            (spec, h, p, x, aw, bw)
        }
        Prop::Hat => return Err(Error::Unsupported("no series form for the companion transform".into())),
    };
    let g = target.generating_series(n).to_surd();
    let h = h.to_surd();
    let kernel_ok = g.agrees_with(&p.mul(&h.compose(&x)?));
    let lhs = aw.mul(&g).add(&bw.mul(&g.theta()));
    let rhs = h.mul_coeff(a).add(&h.theta().mul_coeff(b)).compose(&x)?;
    Ok(SeriesCheck { kernel_ok, operator_ok: lhs.agrees_with(&rhs) })
}

fn hypergeometric_scaled(upper: &[Rational], lower: &[Rational], c: &Rational, order: usize) -> TruncSeries<Rational> {
    if c.is_one() {
        hypergeometric(upper, lower, order)
    } else {
        crate::series::hypergeometric_at(upper, lower, c, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Surd {
        t.parse().unwrap()
    }

    fn hyp(sv: Rational, x_unit: &str, a: &str, b: &str) -> Formula {
        let spec = FamilySpec::new(Family::Hyp, sv).unwrap();
        let m = spec.m() as i64;
        let x = s(x_unit).scale(&rat(1, m));
        Formula::new("src", spec, x, s(a), s(b), q(1))
    }

    #[test]
    fn prop1_examples() {
        let f = hyp(rat(1, 3), "-108/192", "1/4*sqrt(3)", "5/4*sqrt(3)");
        let t = prop1_transform(&f).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1), (s("1/300"), s("1/50*sqrt(3)"), s("16/25*sqrt(3)")));
        let z = hyp(rat(1, 3), "0", "1/4*sqrt(3)", "5/4*sqrt(3)");
        let t = prop1_transform(&z).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1), (q(0), z.lin0.clone(), z.lin1.clone()));
        let c = hyp(rat(1, 6), "-1728/262537412640768000", "1", "1");
        assert_eq!(prop1_transform(&c).unwrap().arg, s("1/262537412640769728"));
    }

    #[test]
    fn prop4_examples() {
        let f = hyp(rat(1, 2), "-1", "1/2", "2");
        let t = prop4_transform(&f, Branch::Minus).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1), (s("1/2-1/2*sqrt(2)"), s("-3/2+sqrt(2)"), s("-2+3/2*sqrt(2)")));
        let f = hyp(rat(1, 4), "-1/4", "3/8", "5/2");
        for (sign, w, a, b) in [
            (Branch::Plus, "1/8+1/8*sqrt(5)", "13/16+5/16*sqrt(5)", "5/4+3/4*sqrt(5)"),
            (Branch::Minus, "1/8-1/8*sqrt(5)", "-13/16+5/16*sqrt(5)", "-5/4+3/4*sqrt(5)"),
        ] {
            let t = prop4_transform(&f, sign).unwrap();
            assert_eq!((t.arg, t.lin0, t.lin1), (s(w), s(a), s(b)));
        }
        let f = hyp(rat(1, 3), "-9/16", "1/4*sqrt(3)", "5/4*sqrt(3)");
        let t = prop4_transform(&f, Branch::Plus).unwrap();
        assert_eq!(t.arg, s("3/4"));
        assert!(!t.convergent);
    }

    #[test]
    fn prop5_examples() {
        let f = hyp(rat(1, 3), "-9/16", "1/4*sqrt(3)", "5/4*sqrt(3)");
        let t = prop5_transform(&f).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1), (s("1/9"), s("1/9*sqrt(3)"), s("8/9*sqrt(3)")));
        let f = hyp(rat(1, 4), "32/81", "2/9", "14/9");
        let t = prop5_transform(&f).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1), (s("-1/8"), s("1/2"), s("9/4")));
        let z = hyp(rat(1, 4), "0", "2/9", "14/9");
        assert_eq!(prop5_transform(&z), Err(Error::PoleAtArgument));
    }

    #[test]
    fn prop7_examples() {
        let f = hyp(rat(1, 2), "1/4", "1/4", "3/2");
        let t = prop7_transform(&f).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1), (s("1/2-1/4*sqrt(3)"), s("1/4"), s("3/4+1/2*sqrt(3)")));
        let z = hyp(rat(1, 2), "0", "1/4", "3/2");
        let t = prop7_transform(&z).unwrap();
        assert_eq!((t.arg, t.lin1), (q(0), s("3/2")));
        let f = hyp(rat(1, 4), "32/81", "2/9", "14/9");
        let t = prop7_transform(&f).unwrap();
        assert_eq!((t.arg, t.lin1), (s("1/9"), s("16/9")));
    }

    #[test]
    fn hat_examples() {
        let spec = FamilySpec::new(Family::Prop7, rat(1, 4)).unwrap();
        let mut f = Formula::new("ex1", spec, s("1/9"), q(1), q(8), s("9/2"));
        assert_eq!(appendix_hat_transform(&f), Err(Error::MissingTau));
        f.tau0_im_sq = Some(int(1));
        let t = appendix_hat_transform(&f).unwrap();
        assert_eq!((t.arg, t.lin0, t.lin1, t.rhs), (s("8/9"), q(1), q(-1), q(-9)));
        let spec = FamilySpec::new(Family::Prop7, rat(1, 2)).unwrap();
        let mut f = Formula::new("ex3", spec, s("1/2-1/4*sqrt(3)"), s("1/4"), s("3/4+1/2*sqrt(3)"), q(1));
        f.tau0_im_sq = Some(rat(3, 4));
        let t = appendix_hat_transform(&f).unwrap();
        assert_eq!((t.lin0, t.lin1, t.rhs), (s("1/4"), s("3/4-1/2*sqrt(3)"), q(-3)));
    }

    #[test]
    fn involution_for_each_s() {
        for sv in crate::families::admissible_s() {
            assert!(involution_check(&sv, 12).unwrap());
            assert!(involution_check(&sv, 0).unwrap());
        }
    }

    #[test]
    fn involution_rejects_perturbation() {
        let hyp = FamilySpec::new(Family::Hyp, rat(1, 3)).unwrap().generating_series(10);
        let p1 = FamilySpec::new(Family::Prop1, rat(1, 3)).unwrap().generating_series(10);
        let mut c = p1.coeffs().to_vec();
        c[5] += int(1);
        let bad = TruncSeries::from_coeffs(c);
        assert!(!involution_pair_holds(&hyp, &bad, 108).unwrap());
    }

    #[test]
    fn series_identities_behind_transforms() {
        let (a, b) = (s("1/4*sqrt(3)"), s("5/4*sqrt(3)"));
        for prop in [Prop::P1, Prop::P4, Prop::P5, Prop::P7] {
            let r = series_check(prop, &rat(1, 3), &a, &b, 10).unwrap();
            assert!(r.ok(), "{prop}");
        }
    }
}
