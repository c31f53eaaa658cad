//! Coefficient sequences: the hypergeometric `aₙ` and the four convolution families `Aₙ`.

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational, Surd};
use crate::series::TruncSeries;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Hyp,
    Prop1,
    Prop3,
    Prop5,
    Prop7,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Hyp => "hyp",
            Family::Prop1 => "prop1",
            Family::Prop3 => "prop3",
            Family::Prop5 => "prop5",
            Family::Prop7 => "prop7",
        }
    }

    pub fn uses_m(self) -> bool {
        matches!(self, Family::Hyp | Family::Prop1)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hyp" => Family::Hyp,
            "prop1" => Family::Prop1,
            "prop3" => Family::Prop3,
            "prop5" => Family::Prop5,
            "prop7" => Family::Prop7,
            _ => return Err(Error::Parse { line: 1, col: 1, msg: format!("unknown family `{s}`") }),
        })
    }
}

/// The four admissible values of `s`.
pub fn admissible_s() -> [Rational; 4] {
    [rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 6)]
}

/// `M` paired with `s`: 16, 108, 256, 1728.
pub fn m_for(s: &Rational) -> Result<u64> {
    let table = [(rat(1, 2), 16), (rat(1, 3), 108), (rat(1, 4), 256), (rat(1, 6), 1728)];
    table.iter().find(|(k, _)| k == s).map(|(_, m)| *m).ok_or_else(|| Error::Unsupported(format!("s = {s}")))
}

/// `sin(πs)` as an exact surd.
pub fn sin_pi_s(s: &Rational) -> Result<Surd> {
    let v = match m_for(s)? {
        16 => "1",
        108 => "1/2*sqrt(3)",
        256 => "1/2*sqrt(2)",
        _ => "1/2",
    };
    v.parse()
}

/// `C_s² = 1/(4 sin²(πs))`.
pub fn cs_squared(s: &Rational) -> Result<Rational> {
    Ok(match m_for(s)? {
        16 => rat(1, 4),
        108 => rat(1, 3),
        256 => rat(1, 2),
        _ => rat(1, 1),
    })
}

/// `h₀ = 2ψ(1) − ψ(s) − ψ(1−s) = ln K` for the returned `K`.
pub fn digamma_gap_exp(s: &Rational) -> Result<u64> {
    Ok(match m_for(s)? {
        16 => 16,
        108 => 27,
        256 => 64,
        _ => 432,
    })
}

pub fn pochhammer(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for _ in 0..k {
        acc *= &x;
        x += Rational::one();
    }
    acc
}

/// `binom(a, k) = a(a−1)…(a−k+1)/k!`.
pub fn frac_binomial(a: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    for j in 1..=k {
        acc = acc * &x / int(j as i64);
        x -= Rational::one();
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Term ratio `t_{k+1}/t_k = c·Π(k+num)/((k+1)·Π(k+den))`, with `t₀ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypTerm {
    pub c: Rational,
    pub num: Vec<Rational>,
    pub den: Vec<Rational>,
}

impl HypTerm {
    pub fn new(c: Rational, num: Vec<Rational>, den: Vec<Rational>) -> Self {
        HypTerm { c, num, den }
    }

    /// `₂F₁(a,b;c;c0·x)` style term with unit lower parameter.
    pub fn f21(c: Rational, a: Rational, b: Rational) -> Self {
        HypTerm { c, num: vec![a, b], den: vec![int(1)] }
    }

    pub fn ratio(&self, k: u64) -> Rational {
        let kq = int(k as i64);
        let mut r = self.c.clone() / int(k as i64 + 1);
        for a in &self.num {
            r *= &kq + a;
        }
        for b in &self.den {
            r /= &kq + b;
        }
        r
    }

    /// Ratio without `c`, as an integer fraction.
    pub fn ratio_parts(&self, k: u64) -> (BigInt, BigInt) {
        let kk = BigInt::from(k);
        let mut n = BigInt::one();
        let mut d = BigInt::from(k + 1);
        for a in &self.num {
            n *= &kk * a.denom() + a.numer();
            d *= a.denom();
        }
        for b in &self.den {
            n *= b.denom();
            d *= &kk * b.denom() + b.numer();
        }
        (n, d)
    }

    pub fn terms(&self, order: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(order + 1);
        let mut t = Rational::one();
        for k in 0..=order {
            out.push(t.clone());
            t *= self.ratio(k as u64);
        }
        out
    }

    /// Upper bound on `|t_{k+1}/t_k| / |c|` for all `k ≥ from`; `None` if no finite bound applies.
    pub fn ratio_bound(&self, from: u64) -> Option<f64> {
        if self.num.len() != self.den.len() + 1 {
            return None;
        }
        let mut lower = vec![int(1)];
        lower.extend(self.den.iter().cloned());
        let kq = int(from as i64);
        let mut bound = 1.0f64;
        for (a, b) in self.num.iter().zip(&lower) {
            if !a.is_positive() || !b.is_positive() {
                return None;
            }
            if a > b {
                let r = (&kq + a) / (&kq + b);
                bound *= r.to_f64()? * (1.0 + 1e-12);
            }
        }
        Some(bound)
    }

    pub fn c_abs(&self) -> f64 {
        self.c.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Analytic shape of a family's generating function in its argument.
#[derive(Clone, Debug)]
pub enum Kernel {
    /// `Σ tₙ wⁿ` for a single hypergeometric term.
    Single(HypTerm),
    /// `U(w)·V(w)` with both factors hypergeometric.
    Product(HypTerm, HypTerm),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: Family,
    pub s: Rational,
}

impl FamilySpec {
    pub fn new(kind: Family, s: Rational) -> Result<Self> {
        m_for(&s)?;
        Ok(FamilySpec { kind, s })
    }

    pub fn m(&self) -> u64 {
        m_for(&self.s).expect("validated on construction")
    }

    fn mq(&self) -> Rational {
        int(self.m() as i64)
    }

    /// Radius of convergence of the generating function.
    pub fn radius(&self) -> Rational {
        match self.kind {
            Family::Hyp | Family::Prop1 => Rational::one() / self.mq(),
            Family::Prop3 => rat(1, 4),
            Family::Prop5 | Family::Prop7 => Rational::one(),
        }
    }

    pub fn kernel(&self) -> Kernel {
        let s = self.s.clone();
        let t = Rational::one() - &s;
        let half = rat(1, 2);
        match self.kind {
            Family::Hyp => Kernel::Single(HypTerm::new(self.mq(), vec![half, s, t], vec![int(1), int(1)])),
            Family::Prop1 => {
                let u = HypTerm::f21(self.mq(), &s / int(2), &s / int(2) + &half);
                let v = HypTerm::f21(self.mq(), &t / int(2), &t / int(2) + &half);
                Kernel::Product(u, v)
            }
            Family::Prop3 => Kernel::Product(HypTerm::f21(int(-4), half.clone(), s), HypTerm::f21(int(-4), half, t)),
            Family::Prop5 => Kernel::Product(HypTerm::f21(int(1), s.clone(), s), HypTerm::f21(int(1), t.clone(), t)),
            Family::Prop7 => {
                let f = HypTerm::f21(int(1), s, t);
                Kernel::Product(f.clone(), f)
            }
        }
    }

    /// Coefficients `0..=order`.
    pub fn coefficients(&self, order: usize) -> Vec<Rational> {
        match self.kernel() {
            Kernel::Single(t) => t.terms(order),
            Kernel::Product(u, v) => {
                let us = u.terms(order);
                if u == v {
                    (0..=order).map(|n| convolve_symmetric(&us, n)).collect()
                } else {
                    let vs = v.terms(order);
                    (0..=order).map(|n| convolve(&us, &vs, n)).collect()
                }
            }
        }
    }

    pub fn coefficient(&self, n: usize) -> Rational {
        self.coefficients(n).pop().expect("nonempty")
    }

    pub fn generating_series(&self, order: usize) -> TruncSeries<Rational> {
        TruncSeries::from_coeffs(self.coefficients(order))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} s={}", self.kind, self.s)
    }
}

pub fn convolve(u: &[Rational], v: &[Rational], n: usize) -> Rational {
    (0..=n).fold(Rational::zero(), |acc, k| acc + &u[k] * &v[n - k])
}

/// `Σ u_k u_{n−k}` over half the range.
pub fn convolve_symmetric(u: &[Rational], n: usize) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..n.div_ceil(2) {
        acc += &u[k] * &u[n - k];
    }
    acc *= int(2);
    if n.is_multiple_of(2) {
        acc += &u[n / 2] * &u[n / 2];
    }
    acc
}

/// `aₙ` of the HYP family as an exact integer, from the binomial closed forms.
/// For `s = 1/2` the M-normalized value is `binom(2n,n)³/4ⁿ`, returned only when integral.
pub fn hyp_integer(s: &Rational, n: u64) -> Option<BigInt> {
    let c = binomial(2 * n, n);
    match m_for(s).ok()? {
        108 => Some(&c * &c * binomial(3 * n, n)),
        256 => Some(&c * &c * binomial(4 * n, 2 * n)),
        1728 => Some(c * binomial(3 * n, n) * binomial(6 * n, 3 * n)),
        _ => {
            let v = &c * &c * &c;
            let d = BigInt::one() << (2 * n);
            let (q, r) = v.div_rem(&d);
            r.is_zero().then_some(q)
        }
    }
}

/// PROP7 recurrence `(m+1)³A_{m+1} = (2m+1)(m²+m+2λ)A_m − m(m²−1+4λ)A_{m−1}`, `λ = s(1−s)`.
pub fn prop7_recurrence(s: &Rational, order: usize) -> Vec<Rational> {
    let lam = s * (Rational::one() - s);
    let mut out = vec![Rational::one()];
    if order == 0 {
        return out;
    }
    out.push(int(2) * &lam);
    for m in 1..order {
        let mq = int(m as i64);
        let a = (int(2) * &mq + int(1)) * (&mq * &mq + &mq + int(2) * &lam) * &out[m];
        let b = &mq * (&mq * &mq - int(1) + int(4) * &lam) * &out[m - 1];
        let d = int((m as i64 + 1).pow(3));
        out.push((a - b) / d);
    }
    out
}

/// Append-only coefficient cache for one family.
pub struct CoefficientCache {
    spec: FamilySpec,
    u: RwLock<Vec<Rational>>,
    v: RwLock<Vec<Rational>>,
    values: RwLock<Vec<Rational>>,
}

impl CoefficientCache {
    pub fn new(spec: FamilySpec) -> Self {
        CoefficientCache {
            spec,
            u: RwLock::new(Vec::new()),
            v: RwLock::new(Vec::new()),
            values: RwLock::new(Vec::new()),
        }
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn extend_stream(stream: &mut Vec<Rational>, t: &HypTerm, n: usize) {
        if stream.is_empty() {
            stream.push(Rational::one());
        }
        while stream.len() <= n {
            let k = stream.len() - 1;
            let next = &stream[k] * t.ratio(k as u64);
            stream.push(next);
        }
    }

    /// Coefficient `n`, extending the cache as needed.
    pub fn get(&self, n: usize) -> Rational {
        if let Some(x) = self.values.read().expect("cache poisoned").get(n) {
            return x.clone();
        }
        let mut values = self.values.write().expect("cache poisoned");
        let mut u = self.u.write().expect("cache poisoned");
        let mut v = self.v.write().expect("cache poisoned");
        match self.spec.kernel() {
            Kernel::Single(t) => {
                Self::extend_stream(&mut u, &t, n);
                while values.len() <= n {
                    let m = values.len();
                    values.push(u[m].clone());
                }
            }
            Kernel::Product(tu, tv) => {
                Self::extend_stream(&mut u, &tu, n);
                Self::extend_stream(&mut v, &tv, n);
                while values.len() <= n {
                    let m = values.len();
                    values.push(convolve(&u, &v, m));
                }
            }
        }
        values[n].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_and_binomials() {
        assert_eq!(pochhammer(&rat(1, 2), 0), int(1));
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
        let lhs = int(64) * pochhammer(&rat(1, 2), 3) / int(6);
        assert_eq!(lhs, int(20));
        assert_eq!(frac_binomial(&rat(-1, 3), 0), int(1));
        assert_eq!(frac_binomial(&rat(-1, 3), 1), rat(-1, 3));
        assert_eq!(frac_binomial(&rat(-1, 3), 2), rat(2, 9));
    }

    #[test]
    fn hyp_terms() {
        let f = FamilySpec::new(Family::Hyp, rat(1, 6)).unwrap();
        let a = f.coefficients(50);
        assert_eq!(a[0], int(1));
        assert_eq!(a[1], int(120));
        for (n, x) in a.iter().enumerate() {
            assert_eq!(x, &Rational::from_integer(hyp_integer(&rat(1, 6), n as u64).unwrap()));
        }
    }

    #[test]
    fn prop7_first_terms() {
        let f = FamilySpec::new(Family::Prop7, rat(1, 2)).unwrap();
        let a = f.coefficients(3);
        assert_eq!(a[0], int(1));
        assert_eq!(a[1], rat(1, 2));
        assert_eq!(prop7_recurrence(&rat(1, 2), 3), a);
    }

    #[test]
    fn prop1_radicand_pairs() {
        let f = FamilySpec::new(Family::Prop1, rat(1, 6)).unwrap();
        let a = f.coefficients(6);
        for (n, an) in a.iter().enumerate() {
            let mut direct = Rational::zero();
            for k in 0..=n as u64 {
                let m = n as u64 - k;
                direct += frac_binomial(&rat(-1, 12), k)
                    * frac_binomial(&rat(-7, 12), k)
                    * frac_binomial(&rat(-5, 12), m)
                    * frac_binomial(&rat(-11, 12), m);
            }
            assert_eq!(an, &(direct * int(1728).pow(n as i32)));
        }
    }

    #[test]
    fn cache_matches_direct() {
        let spec = FamilySpec::new(Family::Prop3, rat(1, 4)).unwrap();
        let cache = CoefficientCache::new(spec.clone());
        let direct = spec.coefficients(12);
        assert_eq!(cache.get(12), direct[12]);
        assert_eq!(cache.get(5), direct[5]);
        assert_eq!(cache.len(), 13);
    }

    #[test]
    fn ratio_bound_for_families() {
        for s in admissible_s() {
            for kind in [Family::Hyp, Family::Prop1, Family::Prop3, Family::Prop5, Family::Prop7] {
                let spec = FamilySpec::new(kind, s.clone()).unwrap();
                let ts = match spec.kernel() {
                    Kernel::Single(t) => vec![t],
                    Kernel::Product(u, v) => vec![u, v],
                };
                for t in ts {
                    assert_eq!(t.ratio_bound(0), Some(1.0));
                }
            }
        }
    }
}
