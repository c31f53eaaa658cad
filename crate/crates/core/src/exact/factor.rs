//! Integer factoring for squarefree reduction of radicands.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == &BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    // these bases are deterministic below 3.3e24 and a strong test beyond
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, c: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let cc = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &cc) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    const M: u64 = 64;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..M.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            g = q.gcd(n);
            k += M;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if g != one {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_composite(n: &BigUint) -> BigUint {
    let mut c = 1;
    loop {
        if let Some(d) = pollard_brent(n, c) {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    if m.is_zero() {
        return out;
    }
    let mut p = 2u32;
    while p < 10_000 {
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
        }
        if BigUint::from(p) * p > m {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if m > BigUint::one() {
        stack.push(m);
    }
    let mut big: Vec<BigUint> = Vec::new();
    while let Some(x) = stack.pop() {
        if is_probable_prime(&x) {
            big.push(x);
            continue;
        }
        let r = x.sqrt();
        if &r * &r == x {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = split_composite(&x);
        stack.push(&x / &d);
        stack.push(d);
    }
    big.sort();
    for q in big {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out.sort();
    out
}

/// Write `n = f^2 d` with `d` squarefree; returns `(f, d)`.
pub fn square_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut f = BigUint::one();
    let mut d = BigUint::one();
    for (p, e) in factorize(n) {
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
    }
    (f, d)
}

pub fn smallest_prime_factor(n: &BigUint) -> Option<BigUint> {
    if n <= &BigUint::one() {
        return None;
    }
    factorize(n).into_iter().next().map(|(p, _)| p)
}

pub fn is_squarefree(n: &BigUint) -> bool {
    factorize(n).iter().all(|(_, e)| *e == 1)
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_large() {
        let n = BigUint::from(262537412640769728u64);
        let f = factorize(&n);
        let back = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        assert_eq!(back, n);
        assert_eq!(f.last().unwrap().0, BigUint::from(163u32));
        let semi = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64);
        let g = factorize(&semi);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn square_split_examples() {
        assert_eq!(square_split(&BigUint::from(12u32)), (BigUint::from(2u32), BigUint::from(3u32)));
        assert_eq!(square_split(&BigUint::from(1u32)), (BigUint::one(), BigUint::one()));
        let (f, d) = square_split(&BigUint::from(640320u32));
        assert_eq!(f, BigUint::from(8u32));
        assert_eq!(d, BigUint::from(10005u32));
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(499));
        assert!(!is_prime_u64(561));
        assert!(is_probable_prime(&BigUint::from(1_000_000_007u64)));
    }
}
