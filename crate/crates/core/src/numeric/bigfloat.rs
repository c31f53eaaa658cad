//! Fixed-point big floats with a certified absolute error bound.
//!
//! A value is `man / 2^prec`; the true quantity it stands for lies within
//! `err / 2^prec` of that. Every operation widens `err` so the enclosure
//! stays valid.

use crate::error::{Error, Result};
use crate::exact::Rational;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    man: BigInt,
    prec: u32,
    err: BigUint,
}

fn ceil_shr(x: &BigUint, s: u32) -> BigUint {
    if s == 0 {
        return x.clone();
    }
    let mask = (BigUint::one() << s) - 1u32;
    let q = x >> s;
    if (x & mask).is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn ceil_div(n: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

/// Upper bound, in units of `2^-prec`, for a quantity whose base-2 log is at most `log2`.
pub fn ulps_from_log2(log2: f64, prec: u32) -> BigUint {
    if log2 == f64::NEG_INFINITY {
        return BigUint::zero();
    }
    let e = log2 + prec as f64;
    if e < 0.0 {
        return BigUint::one();
    }
    BigUint::one() << (e.ceil() as u64 + 1)
}

impl BigFloat {
    pub fn from_parts(man: BigInt, prec: u32, err: BigUint) -> Self {
        BigFloat { man, prec, err }
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat { man: BigInt::zero(), prec, err: BigUint::zero() }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        BigFloat { man: n << prec, prec, err: BigUint::zero() }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (m, r) = (q.numer() << prec).div_mod_floor(q.denom());
        let err = if r.is_zero() { BigUint::zero() } else { BigUint::one() };
        BigFloat { man: m, prec, err }
    }

    /// `floor(sqrt(n))` to `prec` bits, error at most one ulp.
    pub fn sqrt_int(n: &BigUint, prec: u32) -> Self {
        let s = isqrt(&(n << (2 * prec)));
        let exact = &s * &s == n << (2 * prec);
        let err = if exact { BigUint::zero() } else { BigUint::one() };
        BigFloat { man: BigInt::from(s), prec, err }
    }

    pub fn man(&self) -> &BigInt {
        &self.man
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn err(&self) -> &BigUint {
        &self.err
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    fn align(&self, p: u32) -> BigFloat {
        debug_assert!(p >= self.prec);
        let s = p - self.prec;
        if s == 0 {
            return self.clone();
        }
        BigFloat { man: &self.man << s, prec: p, err: &self.err << s }
    }

    /// Change precision. Raising is exact; lowering rounds and widens the bound.
    pub fn to_prec(&self, p: u32) -> BigFloat {
        if p >= self.prec {
            return self.align(p);
        }
        let s = self.prec - p;
        let man = &self.man >> s;
        let lossy = (&man << s) != self.man;
        let mut err = ceil_shr(&self.err, s);
        if lossy {
            err += 1u32;
        }
        BigFloat { man, prec: p, err }
    }

    pub fn add_err(&mut self, ulps: &BigUint) {
        self.err += ulps;
    }

    /// Widen the bound by `2^log2` in absolute terms.
    pub fn add_err_log2(&mut self, log2: f64) {
        let u = ulps_from_log2(log2, self.prec);
        self.err += u;
    }

    pub fn add(&self, o: &BigFloat) -> BigFloat {
        let p = self.prec.max(o.prec);
        let a = self.align(p);
        let b = o.align(p);
        BigFloat { man: a.man + b.man, prec: p, err: a.err + b.err }
    }

    pub fn sub(&self, o: &BigFloat) -> BigFloat {
        let p = self.prec.max(o.prec);
        let a = self.align(p);
        let b = o.align(p);
        BigFloat { man: a.man - b.man, prec: p, err: a.err + b.err }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat { man: -&self.man, prec: self.prec, err: self.err.clone() }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat { man: self.man.abs(), prec: self.prec, err: self.err.clone() }
    }

    pub fn mul(&self, o: &BigFloat) -> BigFloat {
        let p = self.prec.max(o.prec);
        let a = self.align(p);
        let b = o.align(p);
        let prod = &a.man * &b.man;
        let man = &prod >> p;
        let am = a.man.magnitude();
        let bm = b.man.magnitude();
        let spread = am * &b.err + bm * &a.err + &a.err * &b.err;
        let exact = (&man << p) == prod;
        let mut err = ceil_shr(&spread, p);
        if !exact {
            err += 1u32;
        }
        BigFloat { man, prec: p, err }
    }

    pub fn square(&self) -> BigFloat {
        self.mul(self)
    }

    pub fn div(&self, o: &BigFloat) -> Result<BigFloat> {
        let p = self.prec.max(o.prec);
        let a = self.align(p);
        let b = o.align(p);
        let bm = b.man.magnitude().clone();
        if bm.is_zero() && b.err.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if bm <= b.err {
            return Err(Error::PrecisionExhausted);
        }
        let num = &a.man << p;
        let man = num.div_floor(&b.man);
        let am = a.man.magnitude();
        let spread = (&a.err * &bm + am * &b.err) << p;
        let den = &bm * (&bm - &b.err);
        let mut err = ceil_div(&spread, &den);
        if &man * &b.man != num {
            err += 1u32;
        }
        Ok(BigFloat { man, prec: p, err })
    }

    pub fn recip(&self) -> Result<BigFloat> {
        BigFloat::from_i64(1, self.prec).div(self)
    }

    pub fn sqrt(&self) -> Result<BigFloat> {
        let p = self.prec;
        let m = if self.man.is_negative() {
            if self.man.magnitude() > &self.err {
                return Err(Error::NegativeRadicand);
            }
            BigUint::zero()
        } else {
            self.man.magnitude().clone()
        };
        let s = isqrt(&(&m << p));
        let exact = &s * &s == (&m << p);
        let mut err =
            if s.is_zero() { isqrt(&((&m + &self.err) << p)) + 1u32 } else { ceil_div(&(&self.err << p), &s) };
        if !exact {
            err += 1u32;
        }
        Ok(BigFloat { man: BigInt::from(s), prec: p, err })
    }

    pub fn mul_int(&self, k: &BigInt) -> BigFloat {
        BigFloat { man: &self.man * k, prec: self.prec, err: &self.err * k.magnitude() }
    }

    pub fn div_int(&self, k: &BigInt) -> BigFloat {
        assert!(!k.is_zero(), "division by zero integer");
        let (man, r) = self.man.div_mod_floor(k);
        let mut err = ceil_div(&self.err, k.magnitude());
        if !r.is_zero() {
            err += 1u32;
        }
        BigFloat { man, prec: self.prec, err }
    }

    pub fn mul_rational(&self, q: &Rational) -> BigFloat {
        self.mul_int(q.numer()).div_int(q.denom())
    }

    pub fn shl(&self, k: u32) -> BigFloat {
        BigFloat { man: &self.man << k, prec: self.prec, err: &self.err << k }
    }

    /// Sign of the enclosed value, when the enclosure excludes zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.man.magnitude() > &self.err {
            Some(if self.man.sign() == Sign::Minus { Ordering::Less } else { Ordering::Greater })
        } else if self.man.is_zero() && self.err.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.man.magnitude() <= &self.err
    }

    pub fn to_f64(&self) -> f64 {
        scaled_to_f64(&self.man, self.prec)
    }

    /// log2 of the absolute error bound; `-inf` when exact.
    pub fn err_log2(&self) -> f64 {
        if self.err.is_zero() {
            return f64::NEG_INFINITY;
        }
        biguint_log2(&self.err) - self.prec as f64
    }

    /// log2 of an upper bound on the magnitude of the true value.
    pub fn abs_upper_log2(&self) -> f64 {
        let u = self.man.magnitude() + &self.err;
        if u.is_zero() {
            return f64::NEG_INFINITY;
        }
        biguint_log2(&u) - self.prec as f64
    }

    /// Enclosure of the absolute error as a decimal exponent: err < 10^result.
    pub fn err_log10(&self) -> f64 {
        self.err_log2() * std::f64::consts::LOG10_2
    }

    /// Decimal expansion with `digits` digits after the point, rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let num = &self.man * scale;
        let half = if self.prec == 0 { BigInt::zero() } else { BigInt::one() << (self.prec - 1) };
        let r = (num + half) >> self.prec;
        let neg = r.is_negative();
        let mut s = r.magnitude().to_string();
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let (ip, fp) = s.split_at(s.len() - digits);
        let body = if digits == 0 { ip.to_string() } else { format!("{ip}.{fp}") };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// `e^x`.
    pub fn exp(&self) -> BigFloat {
        let target = self.prec;
        let mag = self.abs_upper_log2().max(-1.0);
        let k = (mag.ceil() as i64 + 8 + (target as f64).sqrt() as i64 / 2).max(0) as u32;
        let wp = target + k + 32 + bits_of(target);
        let xm = BigFloat { man: self.man.clone(), prec: self.prec, err: BigUint::zero() };
        // r = x / 2^k held exactly at a wider precision
        let r = BigFloat { man: xm.align(wp - k).man, prec: wp, err: BigUint::zero() };
        let mut sum = BigFloat::from_i64(1, wp);
        let mut term = BigFloat::from_i64(1, wp);
        let mut n = 1i64;
        loop {
            term = term.mul(&r).div_int(&BigInt::from(n));
            sum = sum.add(&term);
            n += 1;
            if term.man.magnitude() <= &BigUint::one() {
                break;
            }
        }
        // |r| < 1/2, so the remainder is at most the last term
        let tail = term.man.magnitude() + &term.err;
        sum.add_err(&tail);
        for _ in 0..k {
            sum = sum.square();
        }
        let mut out = sum.to_prec(target);
        if !self.err.is_zero() {
            // |e^X - e^x| <= e^x (e^eps - 1) <= 2 eps e^x for eps <= 1
            let eps = self.err_log2();
            out.add_err_log2(out.abs_upper_log2() + eps + 1.0);
        }
        out
    }

    /// Natural logarithm of a certainly positive value.
    pub fn ln(&self) -> Result<BigFloat> {
        if self.sign() != Some(Ordering::Greater) {
            return Err(Error::OutOfDisk);
        }
        let target = self.prec;
        let wp = target + 32 + bits_of(target);
        let bits = self.man.bits() as i64 - self.prec as i64;
        let k = bits - 1;
        // y = x / 2^k in [1, 2)
        let y = if k >= 0 {
            BigFloat { man: self.man.clone(), prec: self.prec + k as u32, err: BigUint::zero() }
        } else {
            let e = (-k) as u32;
            BigFloat { man: &self.man << e, prec: self.prec, err: BigUint::zero() }
        };
        let y = if y.prec <= wp { y.align(wp) } else { y.to_prec(wp) };
        let one = BigFloat::from_i64(1, wp);
        let z = y.sub(&one).div(&y.add(&one)).expect("y+1 is positive");
        let lny = atanh_series(&z).shl(1);
        let ln2 = ln2(wp);
        let mut out = lny.add(&ln2.mul_int(&BigInt::from(k))).to_prec(target);
        if !self.err.is_zero() {
            // |ln X - ln x| <= eps / (x - eps)
            let lo = self.man.magnitude() - &self.err;
            if lo.is_zero() {
                return Err(Error::PrecisionExhausted);
            }
            let l = biguint_log2(&self.err) - biguint_log2(&lo) + 1e-9;
            out.add_err_log2(l);
        }
        Ok(out)
    }
}

/// `atanh(z)` for `|z| <= 1/2`.
fn atanh_series(z: &BigFloat) -> BigFloat {
    let z2 = z.square();
    let mut pw = z.clone();
    let mut sum = z.clone();
    let mut n = 1i64;
    loop {
        pw = pw.mul(&z2);
        let t = pw.div_int(&BigInt::from(2 * n + 1));
        sum = sum.add(&t);
        n += 1;
        if pw.man.magnitude() <= &BigUint::one() {
            break;
        }
    }
    // remaining terms are bounded by |z|^(2n+1) / (1 - z^2) <= (4/3) |pw|
    let tail = (pw.man.magnitude() + &pw.err) * 2u32;
    sum.add_err(&tail);
    sum
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> BigFloat {
    let wp = prec + 16;
    let z = BigFloat::from_rational(&Rational::new(1.into(), 3.into()), wp);
    atanh_series(&z).shl(1).to_prec(prec)
}

pub fn isqrt(n: &BigUint) -> BigUint {
    let bits = n.bits();
    if bits <= 104 {
        return n.sqrt();
    }
    // recursive precision doubling: approximate from the top half, then one Newton step
    let k = (bits / 4) as u32;
    let hi = isqrt(&(n >> (2 * k)));
    let mut r: BigUint = (hi + 1u32) << k;
    r = (&r + n / &r) >> 1;
    while &r * &r > *n {
        r -= 1u32;
    }
    loop {
        let r1 = &r + 1u32;
        if &r1 * &r1 <= *n {
            r = r1;
        } else {
            break;
        }
    }
    r
}

pub fn biguint_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let top = (x >> (bits - 64)).to_f64().unwrap_or(1.0);
    top.log2() + (bits - 64) as f64
}

pub fn bigint_log2(x: &BigInt) -> f64 {
    biguint_log2(x.magnitude())
}

fn scaled_to_f64(man: &BigInt, prec: u32) -> f64 {
    let bits = man.bits();
    if bits <= 1000 && prec <= 1000 {
        return man.to_f64().unwrap_or(0.0) * (2f64).powi(-(prec as i32));
    }
    let shift = bits.saturating_sub(64);
    let top = (man >> shift).to_f64().unwrap_or(0.0);
    top * (2f64).powf(shift as f64 - prec as f64)
}

fn bits_of(p: u32) -> u32 {
    32 - p.leading_zeros()
}
