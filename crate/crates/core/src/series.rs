//! Truncated formal power series over exact coefficient rings.

use crate::error::{Error, Result};
use crate::exact::{int, Rational, Surd};
use num_traits::{One, Zero};
use std::fmt;

/// Exact coefficient ring for [`TruncSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
    fn from_rational(q: Rational) -> Self;
    fn try_inv(&self) -> Result<Self>;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn try_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Coeff for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn one() -> Self {
        Surd::one()
    }
    fn is_zero(&self) -> bool {
        Surd::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        Surd::scale(self, q)
    }
    fn from_rational(q: Rational) -> Self {
        Surd::from_rational(q)
    }
    fn try_inv(&self) -> Result<Self> {
        Surd::try_inv(self)
    }
}

/// `Σ cₙ xⁿ` known exactly for `n ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The variable `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(C::one(), 1, order)
    }

    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        TruncSeries { coeffs }
    }

    /// Polynomial padded or cut to `order`.
    pub fn from_poly(poly: &[C], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in poly.iter().enumerate().take(order + 1) {
            s.coeffs[k] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let n = self.order().min(o.order());
        TruncSeries { coeffs: (0..=n).map(|k| f(&self.coeffs[k], &o.coeffs[k])).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect() }
    }

    pub fn mul_coeff(&self, k: &C) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.mul(k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn pow_int(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1/self` by solving for coefficients one at a time.
    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let c0inv = c0.try_inv()?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(c0inv.clone());
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out.push(acc.neg().mul(&c0inv));
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.coeffs[0].is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        Ok(self.mul(&o.inv()?))
    }

    /// `self ∘ g` for `g(0) = 0`, by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantInner);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// `self^e` for constant term 1, by the J. C. P. Miller recurrence.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        if self.coeffs[0] != C::one() {
            return Err(Error::NonUnitBase);
        }
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(C::one());
        let e1 = e + int(1);
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                let w = &e1 * int(j as i64) - int(k as i64);
                if !num_traits::Zero::is_zero(&w) && !self.coeffs[j].is_zero() {
                    acc = acc.add(&self.coeffs[j].mul(&out[k - j]).scale(&w));
                }
            }
            out.push(acc.scale(&(int(1) / int(k as i64))));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `x·d/dx`.
    pub fn theta(&self) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().enumerate().map(|(n, c)| c.scale(&int(n as i64))).collect() }
    }

    /// `d/dx`; the result has order one less.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncSeries { coeffs: self.coeffs.iter().enumerate().skip(1).map(|(n, c)| c.scale(&int(n as i64))).collect() }
    }

    /// First index where the two series differ, up to the common order.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let n = self.order().min(o.order());
        (0..=n).find(|&k| self.coeffs[k] != o.coeffs[k])
    }

    pub fn agrees_with(&self, o: &Self) -> bool {
        self.first_difference(o).is_none()
    }
}

impl TruncSeries<Rational> {
    pub fn to_surd(&self) -> TruncSeries<Surd> {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| Surd::from_rational(c.clone())).collect() }
    }
}

impl<C: Coeff> fmt::Display for TruncSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// `pFq(upper; lower; x)` with unit argument.
pub fn hypergeometric(upper: &[Rational], lower: &[Rational], order: usize) -> TruncSeries<Rational> {
    hypergeometric_at(upper, lower, &int(1), order)
}

/// `pFq(upper; lower; c·x)`.
pub fn hypergeometric_at(upper: &[Rational], lower: &[Rational], c: &Rational, order: usize) -> TruncSeries<Rational> {
    let mut out = Vec::with_capacity(order + 1);
    let mut t = int(1);
    for k in 0..=order {
        out.push(t.clone());
        let kq = int(k as i64);
        let mut r = c / int(k as i64 + 1);
        for a in upper {
            r *= &kq + a;
        }
        for b in lower {
            r /= &kq + b;
        }
        t *= r;
    }
    TruncSeries::from_coeffs(out)
}

/// One term `p(x)·y^{(k)}` of a linear ODE written with polynomial coefficients.
#[derive(Clone, Debug)]
pub struct OdeTerm {
    pub poly: Vec<Rational>,
    /// `None` marks a term with no dependent variable.
    pub derivative: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct Ode {
    pub terms: Vec<OdeTerm>,
}

impl Ode {
    pub fn max_derivative(&self) -> u32 {
        self.terms.iter().filter_map(|t| t.derivative).max().unwrap_or(0)
    }
}

/// Residual `Σ pₖ(x)·f^{(k)}`; its order is `f.order() − max derivative`.
pub fn apply_ode<C: Coeff>(f: &TruncSeries<C>, ode: &Ode) -> Result<TruncSeries<C>> {
    if let Some(i) = ode.terms.iter().position(|t| t.derivative.is_none()) {
        return Err(Error::MalformedOde(format!("term {} has no dependent variable", i + 1)));
    }
    let d = ode.max_derivative() as usize;
    if f.order() < d {
        return Err(Error::MalformedOde("series order below the equation order".into()));
    }
    let n = f.order() - d;
    let mut derivs = vec![f.clone()];
    for _ in 0..d {
        let next = derivs.last().expect("nonempty").derivative();
        derivs.push(next);
    }
    let mut acc = TruncSeries::zero(n);
    for t in &ode.terms {
        let k = t.derivative.expect("checked above") as usize;
        let p: Vec<C> = t.poly.iter().map(|q| C::from_rational(q.clone())).collect();
        let term = TruncSeries::from_poly(&p, n).mul(&derivs[k].truncate(n));
        acc = acc.add(&term);
    }
    Ok(acc)
}

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![int(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn geometric(order: usize) -> TruncSeries<Rational> {
        TruncSeries::from_coeffs(vec![int(1); order + 1])
    }

    #[test]
    fn geometric_times_one_minus_x() {
        let one_minus_x = TruncSeries::from_poly(&[int(1), int(-1)], 10);
        assert_eq!(one_minus_x.mul(&geometric(10)), TruncSeries::one(10));
        let f = geometric(10);
        assert_eq!(f.mul(&TruncSeries::one(10)), f);
        assert_eq!(f.div(&TruncSeries::zero(10)), Err(Error::NonUnitDivisor));
    }

    #[test]
    fn composition_examples() {
        let f = geometric(6);
        assert_eq!(f.compose(&TruncSeries::x(6)).unwrap(), f);
        // −x/(1−108x)
        let g = TruncSeries::from_poly(&[int(0), int(-1)], 2)
            .div(&TruncSeries::from_poly(&[int(1), int(-108)], 2))
            .unwrap();
        let h = geometric(2).compose(&g).unwrap();
        assert_eq!(h.coeffs(), &[int(1), int(-1), int(-107)]);
        assert_eq!(f.compose(&TruncSeries::one(6)), Err(Error::NonzeroConstantInner));
    }

    #[test]
    fn binomial_powers() {
        let base = TruncSeries::from_poly(&[int(1), int(4)], 3);
        let p = base.pow_rational(&rat(-1, 2)).unwrap();
        assert_eq!(p.coeffs(), &[int(1), int(-2), int(6), int(-20)]);
        assert_eq!(base.pow_rational(&int(0)).unwrap(), TruncSeries::one(3));
        let back = p.mul(&p).mul(&base);
        assert_eq!(back, TruncSeries::one(3));
        assert_eq!(TruncSeries::from_poly(&[int(2)], 3).pow_rational(&rat(1, 2)), Err(Error::NonUnitBase));
    }

    #[test]
    fn theta_examples() {
        assert!(TruncSeries::<Rational>::one(4).theta().is_zero());
        let x = TruncSeries::<Rational>::x(4);
        assert_eq!(x.theta(), x);
        let f = hypergeometric(&[rat(1, 2), rat(1, 3), rat(2, 3)], &[int(1), int(1)], 8);
        let (a, b) = (rat(2, 7), rat(3, 5));
        let lhs = f.scale(&a).add(&f.theta().scale(&b));
        for n in 0..=8 {
            assert_eq!(lhs.coeff(n), &(f.coeff(n) * (&a + &b * int(n as i64))));
        }
    }

    #[test]
    fn ode_on_zero_and_malformed() {
        let ode = Ode { terms: vec![OdeTerm { poly: vec![int(1)], derivative: Some(1) }] };
        assert!(apply_ode(&TruncSeries::<Rational>::zero(5), &ode).unwrap().is_zero());
        let bad = Ode { terms: vec![OdeTerm { poly: vec![int(1)], derivative: None }] };
        assert!(matches!(apply_ode(&TruncSeries::<Rational>::zero(5), &bad), Err(Error::MalformedOde(_))));
    }

    #[test]
    fn exponential_ode() {
        // y' − y = 0 for y = e^x
        let mut c = vec![int(1)];
        for k in 1..10 {
            let prev = c[k - 1].clone();
            c.push(prev / int(k as i64));
        }
        let f = TruncSeries::from_coeffs(c);
        let ode = Ode {
            terms: vec![
                OdeTerm { poly: vec![int(1)], derivative: Some(1) },
                OdeTerm { poly: vec![int(-1)], derivative: Some(0) },
            ],
        };
        let r = apply_ode(&f, &ode).unwrap();
        assert_eq!(r.order(), 8);
        assert!(r.is_zero());
    }
}
