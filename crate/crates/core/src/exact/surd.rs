//! Finite sums `Σ q·√d` with rational `q` and distinct squarefree `d`.

use super::factor::{smallest_prime_factor, square_split};
use super::{parse_rational, rational_sqrt, Rational};
use crate::error::{Error, Result};
use crate::numeric::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: BTreeMap<BigUint, Rational>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(BigUint::one(), q);
        }
        Surd { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Surd::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `√n` in normalized form.
    pub fn sqrt_of(n: u64) -> Self {
        Surd::normalize([(Rational::one(), BigUint::from(n))])
    }

    /// Reduce radicands to squarefree form, merge like terms, drop zeros.
    pub fn normalize<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (Rational, BigUint)>,
    {
        let mut terms: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for (q, d) in raw {
            assert!(!d.is_zero(), "radicand must be positive");
            if q.is_zero() {
                continue;
            }
            let (f, sq) = square_split(&d);
            let c = q * Rational::from_integer(BigInt::from(f));
            add_term(&mut terms, sq, c);
        }
        Surd { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|d| d.is_one())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_rational() {
            return self.terms.get(&BigUint::one()).cloned();
        }
        None
    }

    pub fn rational_part(&self) -> Rational {
        self.terms.get(&BigUint::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn radicands(&self) -> Vec<BigUint> {
        self.terms.keys().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn scale(&self, q: &Rational) -> Surd {
        if q.is_zero() {
            return Surd::zero();
        }
        Surd { terms: self.terms.iter().map(|(d, c)| (d.clone(), c * q)).collect() }
    }

    pub fn pow(&self, n: u32) -> Surd {
        let mut acc = Surd::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by repeated conjugation over the primes in the radicands.
    pub fn try_inv(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Surd::from_rational(q.recip()));
        }
        let top = self.terms.keys().next_back().expect("nonempty").clone();
        let p = smallest_prime_factor(&top).expect("irrational term has a radicand above 1");
        let conj = Surd {
            terms: self
                .terms
                .iter()
                .map(|(d, c)| if (d % &p).is_zero() { (d.clone(), -c) } else { (d.clone(), c.clone()) })
                .collect(),
        };
        let norm = self * &conj;
        Ok(&conj * &norm.try_inv()?)
    }

    pub fn checked_div(&self, o: &Surd) -> Result<Surd> {
        Ok(self * &o.try_inv()?)
    }

    /// Sign of the real value, decided by interval refinement.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return q.cmp(&Rational::zero());
        }
        let mut prec = 64;
        loop {
            if let Some(s) = self.to_bigfloat(prec).sign() {
                return s;
            }
            prec *= 2;
        }
    }

    /// Total order on real values; equality is decided structurally.
    pub fn compare(&self, o: &Surd) -> Ordering {
        if self == o {
            return Ordering::Equal;
        }
        (self - o).signum()
    }

    pub fn abs(&self) -> Surd {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    /// Enclosure of the real value with `prec` fractional bits.
    pub fn to_bigfloat(&self, prec: u32) -> BigFloat {
        let wp = prec + 8 + 2 * (self.terms.len() as u32).max(1).ilog2();
        let mut acc = BigFloat::zero(wp);
        for (d, q) in &self.terms {
            let qf = BigFloat::from_rational(q, wp);
            let t = if d.is_one() { qf } else { qf.mul(&BigFloat::sqrt_int(d, wp)) };
            acc = acc.add(&t);
        }
        acc.to_prec(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigfloat(80).to_f64()
    }

    /// Exact square root when the value is a rational, a rational times a surd
    /// square, or `α + β√d` with `α² − β²d` a rational square.
    pub fn sqrt_denest(&self) -> Result<Surd> {
        match self.signum() {
            Ordering::Less => return Err(Error::NegativeRadicand),
            Ordering::Equal => return Ok(Surd::zero()),
            Ordering::Greater => {}
        }
        if let Some(q) = self.as_rational() {
            return Ok(sqrt_rational(&q));
        }
        if self.terms.len() == 2 && self.terms.contains_key(&BigUint::one()) {
            let alpha = self.rational_part();
            let (d, beta) = self.terms.iter().find(|(d, _)| !d.is_one()).expect("two terms");
            let dq = Rational::from_integer(BigInt::from(d.clone()));
            let c2 = &alpha * &alpha - beta * beta * dq;
            if let Some(c) = rational_sqrt(&c2) {
                let two = Rational::from_integer(BigInt::from(2));
                let p = sqrt_rational(&((&alpha + &c) / &two));
                let q = sqrt_rational(&((&alpha - &c) / &two));
                let y = if beta.is_positive() { &p + &q } else { &p - &q };
                if &(&y * &y) == self && y.signum() == Ordering::Greater {
                    return Ok(y);
                }
            }
        }
        Err(Error::NotDenestable)
    }
}

/// `√q` for a nonnegative rational, as `(f/den)·√d`.
pub fn sqrt_rational(q: &Rational) -> Surd {
    assert!(!q.is_negative(), "negative rational under square root");
    if q.is_zero() {
        return Surd::zero();
    }
    let n = q.numer().magnitude() * q.denom().magnitude();
    let coeff = Rational::new(BigInt::one(), q.denom().clone());
    Surd::normalize([(coeff, n)])
}

fn add_term(terms: &mut BTreeMap<BigUint, Rational>, d: BigUint, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&d) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                terms.remove(&d);
            }
        }
        None => {
            terms.insert(d, c);
        }
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        let mut terms = self.terms.clone();
        for (d, c) in &o.terms {
            add_term(&mut terms, d.clone(), c.clone());
        }
        Surd { terms }
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        let mut terms = self.terms.clone();
        for (d, c) in &o.terms {
            add_term(&mut terms, d.clone(), -c);
        }
        Surd { terms }
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let mut terms = BTreeMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &o.terms {
                let g = d1.gcd(d2);
                let d = (d1 / &g) * (d2 / &g);
                let c = c1 * c2 * Rational::from_integer(BigInt::from(g));
                add_term(&mut terms, d, c);
            }
        }
        Surd { terms }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect() }
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd { (&self).$m(o) }
        }
        impl<'a> $tr<Surd> for &'a Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd { self.$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl From<Rational> for Surd {
    fn from(q: Rational) -> Self {
        Surd::from_rational(q)
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Self {
        Surd::from_int(n)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.terms {
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let a = c.abs();
            if d.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{a}*sqrt({d})")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 1, col: self.pos + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(t.parse().expect("digits parse"))
    }

    fn sqrt(&mut self) -> Result<BigUint> {
        if !self.eat("sqrt") {
            return Err(self.err("expected `sqrt(`"));
        }
        if !self.eat("(") {
            return Err(self.err("expected `(`"));
        }
        let d = self.uint()?;
        if d.is_zero() {
            return Err(self.err("radicand must be positive"));
        }
        if !self.eat(")") {
            return Err(self.err("expected `)`"));
        }
        Ok(d)
    }

    fn term(&mut self) -> Result<(Rational, BigUint)> {
        if self.peek() == Some(b's') {
            return Ok((Rational::one(), self.sqrt()?));
        }
        let n = self.uint()?;
        let mut q = Rational::from_integer(BigInt::from(n));
        if self.eat("/") {
            let at = self.pos;
            let d = self.uint()?;
            if d.is_zero() {
                self.pos = at;
                return Err(self.err("zero denominator"));
            }
            q /= Rational::from_integer(BigInt::from(d));
        }
        if self.eat("*") {
            return Ok((q, self.sqrt()?));
        }
        Ok((q, BigUint::one()))
    }
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Surd> {
        let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
        let mut raw = Vec::new();
        let mut sign = Rational::one();
        if lx.eat("-") {
            sign = -sign;
        } else {
            lx.eat("+");
        }
        loop {
            let (q, d) = lx.term()?;
            raw.push((q * &sign, d));
            match lx.peek() {
                None => break,
                Some(b'+') => {
                    lx.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    lx.pos += 1;
                    sign = -Rational::one();
                }
                Some(_) => return Err(lx.err("unexpected character")),
            }
        }
        Ok(Surd::normalize(raw))
    }
}

/// Parse a rational or surd literal, accepting bare rationals.
pub fn parse_surd(s: &str) -> Result<Surd> {
    if let Ok(q) = parse_rational(s) {
        return Ok(Surd::from_rational(q));
    }
    s.parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn s(t: &str) -> Surd {
        t.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        let r = Surd::normalize([(Rational::one(), BigUint::from(12u32))]);
        assert_eq!(r.to_string(), "2*sqrt(3)");
        let z = Surd::normalize([(Rational::one(), BigUint::one()), (-Rational::one(), BigUint::one())]);
        assert!(z.is_zero());
        let two = Surd::normalize([(rat(17, 300), BigUint::from(51u32)), (rat(65, 288), BigUint::from(3u32))]);
        assert_eq!(two.len(), 2);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&s("1/4*sqrt(3)") * &s("1/4*sqrt(3)"), s("3/16"));
        let phi = s("1/2+1/2*sqrt(5)");
        assert_eq!(&phi * &phi, s("3/2+1/2*sqrt(5)"));
        assert_eq!(s("2+sqrt(3)").try_inv().unwrap(), s("2-sqrt(3)"));
        assert_eq!(Surd::zero().try_inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_over_three_radicands() {
        let x = s("1+sqrt(2)+sqrt(3)+sqrt(5)");
        let y = x.try_inv().unwrap();
        assert_eq!(&x * &y, Surd::one());
    }

    #[test]
    fn denesting_examples() {
        assert_eq!(s("25/16").sqrt_denest().unwrap(), s("5/4"));
        assert_eq!(s("3/2+1/2*sqrt(5)").sqrt_denest().unwrap(), s("1/2+1/2*sqrt(5)"));
        assert_eq!(s("1+sqrt(2)").sqrt_denest(), Err(Error::NotDenestable));
        assert_eq!(s("-1").sqrt_denest(), Err(Error::NegativeRadicand));
        assert_eq!(s("3/2-1/2*sqrt(5)").sqrt_denest().unwrap(), s("-1/2+1/2*sqrt(5)"));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(s("1/9").compare(&s("1/9")), Ordering::Equal);
        assert_eq!(s("1/2-910/9801*sqrt(29)").compare(&Surd::one()), Ordering::Less);
        assert_eq!(s("1/2-1/2*sqrt(2)").compare(&Surd::zero()), Ordering::Less);
        // 910·√29 is within 3e-5 of 4900.5
        assert_eq!(s("910*sqrt(29)").compare(&s("9801/2")), Ordering::Less);
    }

    #[test]
    fn display_is_canonical() {
        let x = s("17/300*sqrt(51) - 65/288*sqrt(3)");
        assert_eq!(x.to_string(), "-65/288*sqrt(3)+17/300*sqrt(51)");
        assert_eq!(s("-sqrt(8)").to_string(), "-2*sqrt(2)");
        assert_eq!(Surd::zero().to_string(), "0");
        assert_eq!(s("0*sqrt(7)").to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_column() {
        match "1/3*sqr(2)".parse::<Surd>() {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!("1/0".parse::<Surd>().is_err());
        assert!("sqrt(0)".parse::<Surd>().is_err());
        assert!("".parse::<Surd>().is_err());
    }

    #[test]
    fn numeric_value() {
        let x = s("1/2-3/4*sqrt(3)");
        let v = x.to_f64();
        assert!((v - (0.5 - 0.75 * 3f64.sqrt())).abs() < 1e-15);
    }
}
