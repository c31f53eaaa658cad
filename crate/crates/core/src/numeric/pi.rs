//! π by binary splitting of the Chudnovsky series.

use super::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

const A: i64 = 13_591_409;
const B: i64 = 545_140_134;
/// `640320³ / 24`
const C3_24: i64 = 10_939_058_860_032_000;
/// Ranges longer than this are split across rayon workers.
const PAR_SPLIT: u64 = 2048;
/// Bits contributed by one term of the series.
const BITS_PER_TERM: f64 = 47.110_413;

pub const DEFAULT_LEAF: u64 = 32;

struct Pqt {
    p: BigInt,
    q: BigInt,
    t: BigInt,
}

fn term(k: u64) -> Pqt {
    if k == 0 {
        return Pqt { p: BigInt::one(), q: BigInt::one(), t: BigInt::from(A) };
    }
    let k = k as i64;
    let p = -BigInt::from(6 * k - 5) * (2 * k - 1) * (6 * k - 1);
    let q = BigInt::from(k) * k * k * C3_24;
    let t = &p * (A + B * k);
    Pqt { p, q, t }
}

fn combine(l: Pqt, r: Pqt) -> Pqt {
    Pqt { t: &l.t * &r.q + &l.p * &r.t, p: l.p * r.p, q: l.q * r.q }
}

fn split(a: u64, b: u64, leaf: u64) -> Pqt {
    if b - a <= leaf.max(1) {
        let mut acc = term(a);
        for k in a + 1..b {
            acc = combine(acc, term(k));
        }
        return acc;
    }
    let m = a + (b - a) / 2;
    let (l, r) = if b - a > PAR_SPLIT {
        rayon::join(|| split(a, m, leaf), || split(m, b, leaf))
    } else {
        (split(a, m, leaf), split(m, b, leaf))
    };
    combine(l, r)
}

/// Terms needed for `prec` bits.
pub fn terms_for(prec: u32) -> u64 {
    (prec as f64 / BITS_PER_TERM) as u64 + 3
}

/// π to `prec` fractional bits with the given leaf size.
pub fn pi_with_leaf(prec: u32, leaf: u64) -> BigFloat {
    let wp = prec + 16;
    let n = terms_for(wp);
    let Pqt { q, t, .. } = split(0, n, leaf);
    let root = BigFloat::sqrt_int(&BigUint::from(10005u32), wp);
    let scaled = root.mul_int(&(q * 426_880)).div_int(&t);
    // alternating tail, first omitted term below 2^-wp relative to the sum
    let mut out = scaled;
    out.add_err(&BigUint::one());
    out.to_prec(prec)
}

/// π to `prec` fractional bits, cached at the widest precision requested so far.
pub fn pi(prec: u32) -> BigFloat {
    static CACHE: OnceLock<std::sync::Mutex<Option<BigFloat>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| std::sync::Mutex::new(None));
    let mut guard = cell.lock().expect("pi cache poisoned");
    if let Some(v) = guard.as_ref() {
        if v.prec() >= prec {
            return v.to_prec(prec);
        }
    }
    let v = pi_with_leaf(prec.max(256), DEFAULT_LEAF);
    let out = v.to_prec(prec);
    *guard = Some(v);
    out
}

/// The first `digits` decimals of π, truncated, as `3.1415…`.
pub fn pi_decimal(digits: usize, leaf: u64) -> String {
    let mut prec = (digits as f64 * std::f64::consts::LOG2_10) as u32 + 64;
    loop {
        let v = pi_with_leaf(prec, leaf);
        if let Some(s) = truncated_decimal(&v, digits) {
            return s;
        }
        prec += prec / 2;
    }
}

/// Decimal truncation of a positive enclosure, if both ends agree.
pub fn truncated_decimal(v: &BigFloat, digits: usize) -> Option<String> {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let lo = ((v.man() - BigInt::from(v.err().clone())) * &scale) >> v.prec();
    let hi = ((v.man() + BigInt::from(v.err().clone())) * &scale) >> v.prec();
    if lo != hi || lo.is_negative() || lo.is_zero() {
        return None;
    }
    let s = lo.to_string();
    if digits == 0 {
        return Some(s);
    }
    if s.len() <= digits {
        return None;
    }
    let (ip, fp) = s.split_at(s.len() - digits);
    Some(format!("{ip}.{fp}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_expansions() {
        assert_eq!(pi_decimal(1, DEFAULT_LEAF), "3.1");
        assert_eq!(pi_decimal(30, DEFAULT_LEAF), "3.141592653589793238462643383279");
    }

    #[test]
    fn leaf_size_does_not_change_bits() {
        let a = pi_with_leaf(4000, 1);
        let b = pi_with_leaf(4000, 32);
        let c = pi_with_leaf(4000, 500);
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn enclosure_is_tight() {
        let v = pi(1000);
        assert!(v.err() <= &BigUint::from(4u32));
        assert!(v.to_f64() - std::f64::consts::PI == 0.0);
    }
}
