//! Supercongruences `Σ_{n<p} aₙ(lin0+lin1·n)/baseⁿ ≡ rhs_mult·p·(D/p) (mod p³)`.

use crate::error::{Error, Result};
use crate::exact::factor::is_prime_u64;
use crate::exact::{int, Rational};
use crate::families::{Family, FamilySpec, Kernel};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClaim {
    pub id: String,
    pub s: Rational,
    pub lin0: i64,
    pub lin1: i64,
    pub base: i64,
    pub rhs_mult: i64,
    pub character_disc: i64,
    /// Catalog formula whose divergent series the claim truncates.
    pub source: Option<String>,
}

fn odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    odd_prime(p)?;
    let pm = BigInt::from(p);
    let r = BigInt::from(a).mod_floor(&pm);
    if r.is_zero() {
        return Ok(0);
    }
    let e = r.modpow(&BigInt::from((p - 1) / 2), &pm);
    Ok(if e.is_one() { 1 } else { -1 })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

/// `aₙ` for `n < count`, as exact integers built by the term recurrence.
pub fn hyp_integers(s: &Rational, count: usize) -> Result<Vec<BigInt>> {
    let spec = FamilySpec::new(Family::Hyp, s.clone())?;
    let Kernel::Single(t) = spec.kernel() else { unreachable!("HYP is a single hypergeometric kernel") };
    let m = BigInt::from(spec.m());
    let mut out = Vec::with_capacity(count);
    let mut a = BigInt::one();
    for k in 0..count {
        out.push(a.clone());
        let (num, den) = t.ratio_parts(k as u64);
        let (q, r) = (&a * &m * num).div_rem(&den);
        if !r.is_zero() {
            return Err(Error::Unsupported(format!("non-integral coefficients for s = {s}")));
        }
        a = q;
    }
    Ok(out)
}

fn target(c: &CongruenceClaim, p: u64, m: &BigInt) -> Result<BigInt> {
    let chi = legendre(c.character_disc, p)?;
    Ok((BigInt::from(c.rhs_mult) * BigInt::from(p) * BigInt::from(chi)).mod_floor(m))
}

fn checked_modulus(c: &CongruenceClaim, p: u64) -> Result<BigInt> {
    odd_prime(p)?;
    if c.base % p as i64 == 0 {
        return Err(Error::PrimeDividesBase(p));
    }
    Ok(BigInt::from(p).pow(3))
}

/// Left side reduced mod `p³`.
pub fn partial_sum_mod(c: &CongruenceClaim, p: u64) -> Result<BigInt> {
    let m = checked_modulus(c, p)?;
    let inv = mod_inverse(&BigInt::from(c.base), &m).ok_or(Error::PrimeDividesBase(p))?;
    let a = hyp_integers(&c.s, p as usize)?;
    let mut acc = BigInt::zero();
    let mut pw = BigInt::one();
    for (n, an) in a.iter().enumerate() {
        let lin = BigInt::from(c.lin0) + BigInt::from(c.lin1) * BigInt::from(n as u64);
        acc = (acc + (an.mod_floor(&m) * lin).mod_floor(&m) * &pw).mod_floor(&m);
        pw = (pw * &inv).mod_floor(&m);
    }
    Ok(acc)
}

pub fn check_claim(c: &CongruenceClaim, p: u64) -> Result<bool> {
    let m = checked_modulus(c, p)?;
    Ok(partial_sum_mod(c, p)? == target(c, p, &m)?)
}

/// The same sum as an exact rational, then reduced mod `p³`.
pub fn rational_oracle(c: &CongruenceClaim, p: u64) -> Result<BigInt> {
    let m = checked_modulus(c, p)?;
    let spec = FamilySpec::new(Family::Hyp, c.s.clone())?;
    let coeffs = spec.coefficients(p as usize - 1);
    let base = int(c.base);
    let mut sum = Rational::zero();
    let mut pw = Rational::one();
    for (n, an) in coeffs.iter().enumerate() {
        sum += an * (int(c.lin0) + int(c.lin1) * int(n as i64)) * &pw;
        pw /= &base;
    }
    let inv = mod_inverse(sum.denom(), &m).ok_or(Error::PrimeDividesBase(p))?;
    Ok((sum.numer() * inv).mod_floor(&m))
}

/// All primes `5 ≤ p ≤ pmax` with their results, in increasing order.
pub fn sweep(c: &CongruenceClaim, pmax: u64) -> Result<Vec<(u64, bool)>> {
    let primes: Vec<u64> = (5..=pmax).filter(|&p| is_prime_u64(p)).collect();
    primes.par_iter().map(|&p| check_claim(c, p).map(|ok| (p, ok))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::families::hyp_integer;

    fn s13() -> CongruenceClaim {
        CongruenceClaim {
            id: "s13".into(),
            s: rat(1, 3),
            lin0: 4,
            lin1: 15,
            base: -27,
            rhs_mult: 4,
            character_disc: -3,
            source: None,
        }
    }

    fn s14() -> CongruenceClaim {
        CongruenceClaim {
            id: "s14".into(),
            s: rat(1, 4),
            lin0: 1,
            lin1: 5,
            base: -144,
            rhs_mult: 1,
            character_disc: -3,
            source: None,
        }
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(-3, 5).unwrap(), -1);
        assert_eq!(legendre(-3, 7).unwrap(), 1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert_eq!(legendre(1, 9), Err(Error::NotOddPrime(9)));
        assert_eq!(legendre(1, 2), Err(Error::NotOddPrime(2)));
    }

    #[test]
    fn small_primes() {
        assert_eq!(partial_sum_mod(&s13(), 5).unwrap(), BigInt::from(105));
        assert!(check_claim(&s13(), 5).unwrap());
        assert_eq!(partial_sum_mod(&s14(), 5).unwrap(), BigInt::from(120));
        assert!(check_claim(&s14(), 5).unwrap());
        assert!(check_claim(&s14(), 7).unwrap());
    }

    #[test]
    fn base_divisible_rejected() {
        assert_eq!(check_claim(&s13(), 3), Err(Error::PrimeDividesBase(3)));
    }

    #[test]
    fn sweep_to_fifty() {
        for c in [s13(), s14()] {
            let r = sweep(&c, 50).unwrap();
            assert_eq!(r.first().map(|x| x.0), Some(5));
            assert!(r.iter().all(|x| x.1), "{}", c.id);
        }
        assert!(sweep(&s13(), 4).unwrap().is_empty());
    }

    #[test]
    fn mutation_caught() {
        let mut c = s13();
        c.rhs_mult = 5;
        assert!(!check_claim(&c, 5).unwrap());
    }

    #[test]
    fn oracle_agrees() {
        for c in [s13(), s14()] {
            for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
                assert_eq!(rational_oracle(&c, p).unwrap(), partial_sum_mod(&c, p).unwrap());
            }
        }
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for s in [rat(1, 3), rat(1, 4), rat(1, 6)] {
            let a = hyp_integers(&s, 31).unwrap();
            for (n, x) in a.iter().enumerate() {
                assert_eq!(Some(x.clone()), hyp_integer(&s, n as u64));
            }
        }
    }
}
