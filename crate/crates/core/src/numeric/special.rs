//! Hypergeometric values, `F`/`G` pairs, and the gamma function.

use super::sum::moments;
use super::{pi, BigFloat};
use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::families::{digamma_gap_exp, sin_pi_s, HypTerm};
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// `pFq(upper; lower; x)` with a certified tail; requires one more upper than lower parameter.
pub fn hyp_numeric(upper: &[Rational], lower: &[Rational], x: &BigFloat) -> Result<BigFloat> {
    let t = HypTerm::new(Rational::one(), upper.to_vec(), lower.to_vec());
    if x.abs_upper_log2() >= 0.0 {
        return Err(Error::OutOfDisk);
    }
    t.ratio_bound(0).ok_or_else(|| Error::Unsupported("parameters without a ratio bound".into()))?;
    let wp = x.prec() + 32;
    let m = moments(&t, &x.to_prec(wp), -(x.prec() as f64) - 2.0, u64::MAX)?;
    Ok(m.t0.to_prec(x.prec()))
}

/// `F(t) = ₂F₁(s,1−s;1;t)` and `G(t) = t·F′(t)`.
pub fn f_and_g(s: &Rational, t: &BigFloat) -> Result<(BigFloat, BigFloat)> {
    let tv = t.to_f64();
    if tv.abs() >= 1.0 || t.abs_upper_log2() >= 0.0 {
        return Err(Error::OutOfDisk);
    }
    if tv > 0.75 {
        return f_and_g_connection(s, t, t.prec());
    }
    let term = HypTerm::f21(Rational::one(), s.clone(), Rational::one() - s);
    let wp = t.prec() + 32;
    let m = moments(&term, &t.to_prec(wp), -(t.prec() as f64) - 2.0, u64::MAX)?;
    Ok((m.t0.to_prec(t.prec()), m.t1.to_prec(t.prec())))
}

/// `F` and `G` near `t = 1` from the logarithmic connection formula
/// `F(t) = (sin πs/π)·Σ cₙ uⁿ (hₙ − ln u)` with `u = 1 − t`,
/// `cₙ = (s)ₙ(1−s)ₙ/n!²` and `hₙ = 2ψ(n+1) − ψ(n+s) − ψ(n+1−s)`.
pub fn f_and_g_connection(s: &Rational, t: &BigFloat, prec: u32) -> Result<(BigFloat, BigFloat)> {
    let wp = prec + 32;
    let t = t.to_prec(wp);
    let u = BigFloat::from_i64(1, wp).sub(&t);
    let uf = u.to_f64();
    if u.sign() != Some(std::cmp::Ordering::Greater) || uf > 0.5 {
        return Err(Error::OutOfDisk);
    }
    let ln_u = u.ln()?;
    let mut h = BigFloat::from_i64(digamma_gap_exp(s)? as i64, wp).ln()?;
    let big_h = h.to_f64() + ln_u.to_f64().abs() + 1e-9;
    let h_minus_l = |h: &BigFloat| h.sub(&ln_u);
    let term = HypTerm::f21(Rational::one(), s.clone(), Rational::one() - s);
    let mut c = BigFloat::from_i64(1, wp);
    // u^(n-1), starting at n = 1
    let mut upow = BigFloat::from_i64(1, wp);
    let mut sum_f = h_minus_l(&h);
    let mut sum_g = u.recip()?.neg();
    let one_minus_u = 1.0 - uf * (1.0 + 1e-12);
    let lu = uf.log2();
    let mut n = 0u64;
    loop {
        let step = &(rat(2, 1) / int(n as i64 + 1))
            - Rational::one() / (int(n as i64) + s)
            - Rational::one() / (int(n as i64 + 1) - s);
        h = h.add(&BigFloat::from_rational(&step, wp));
        let (a, b) = term.ratio_parts(n);
        c = c.mul_int(&a).div_int(&b);
        n += 1;
        let nn = n as f64;
        let tail_f = big_h.log2() + nn * lu - one_minus_u.log2();
        let tail_g =
            (nn - 1.0) * lu + ((nn * big_h + 1.0) / one_minus_u + big_h * uf / (one_minus_u * one_minus_u)).log2();
        if tail_f.max(tail_g) < -(wp as f64) - 4.0 {
            sum_f.add_err_log2(tail_f);
            sum_g.add_err_log2(tail_g);
            break;
        }
        let hl = h_minus_l(&h);
        let cu = c.mul(&upow);
        sum_g = sum_g.add(&cu.mul(&hl.mul_int(&BigInt::from(n)).sub(&BigFloat::from_i64(1, wp))));
        upow = upow.mul(&u);
        sum_f = sum_f.add(&c.mul(&upow).mul(&hl));
    }
    let kappa = sin_pi_s(s)?.to_bigfloat(wp).div(&pi(wp))?;
    let f = kappa.mul(&sum_f);
    let g = kappa.mul(&sum_g).mul(&t).neg();
    Ok((f.to_prec(prec), g.to_prec(prec)))
}

/// Bernoulli numbers `B₀..=B_n` (with `B₁ = −1/2`).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::one() / int(m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = int(j as i64) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    // the recurrence above yields B₁ = +1/2
    if n >= 1 {
        out[1] = rat(-1, 2);
    }
    out
}

fn log2_rational(q: &Rational) -> f64 {
    let n = super::bigfloat::bigint_log2(q.numer());
    let d = super::bigfloat::bigint_log2(q.denom());
    n - d
}

/// `Γ(x)` for rational `x > 0`, via Stirling's series after shifting the argument.
pub fn gamma(x: &Rational, prec: u32) -> Result<BigFloat> {
    if !x.is_positive() {
        return Err(Error::Unsupported("gamma at a non-positive argument".into()));
    }
    let wp = prec + 40;
    let shift = (0.45 * wp as f64).ceil() as i64 + 8;
    let z = x + int(shift);
    let zf = BigFloat::from_rational(&z, wp);
    let ln_z = zf.ln()?;
    let two_pi = pi(wp).shl(1);
    let half = BigFloat::from_rational(&rat(1, 2), wp);
    let mut acc = zf.sub(&half).mul(&ln_z).sub(&zf).add(&two_pi.ln()?.mul(&half));
    let lz = log2_rational(&z);
    let mut k = 1usize;
    let mut bern = bernoulli(64);
    loop {
        if 2 * k + 2 >= bern.len() {
            bern = bernoulli(bern.len() * 2);
        }
        let b = &bern[2 * k];
        let denom = int((2 * k * (2 * k - 1)) as i64);
        let coeff = b / denom;
        let zpow = z.pow(2 * k as i32 - 1);
        acc = acc.add(&BigFloat::from_rational(&(&coeff / &zpow), wp));
        let next = &bern[2 * k + 2];
        let bound =
            log2_rational(&next.abs()) - ((2 * k + 2) as f64 * (2 * k + 1) as f64).log2() - (2 * k + 1) as f64 * lz;
        if bound < -(wp as f64) - 4.0 {
            acc.add_err_log2(bound);
            break;
        }
        k += 1;
        if k > 4 * wp as usize {
            return Err(Error::PrecisionExhausted);
        }
    }
    let mut prod = Rational::one();
    for j in 0..shift {
        prod *= x + int(j);
    }
    let g = acc.exp().mul_rational(&prod.recip());
    Ok(g.to_prec(prec))
}

/// Both sides of Gauss's second theorem `F(a,b;(a+b+1)/2;1/2) = √π·Γ((a+b+1)/2)/(Γ((a+1)/2)Γ((b+1)/2))`.
pub fn gauss_second(a: &Rational, b: &Rational, prec: u32) -> Result<(BigFloat, BigFloat)> {
    let c = (a + b + Rational::one()) / int(2);
    let x = BigFloat::from_rational(&rat(1, 2), prec + 16);
    let lhs = hyp_numeric(&[a.clone(), b.clone()], std::slice::from_ref(&c), &x)?.to_prec(prec);
    let wp = prec + 16;
    let num = pi(wp).sqrt()?.mul(&gamma(&c, wp)?);
    let den = gamma(&((a + Rational::one()) / int(2)), wp)?.mul(&gamma(&((b + Rational::one()) / int(2)), wp)?);
    let rhs = num.div(&den)?.to_prec(prec);
    Ok((lhs, rhs))
}

/// `|x − y|` as a log10 upper bound.
pub fn distance_log10(x: &BigFloat, y: &BigFloat) -> f64 {
    x.sub(y).abs_upper_log2() * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &BigFloat, v: f64, tol: f64) -> bool {
        (x.to_f64() - v).abs() < tol
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[0], int(1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], int(0));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn gamma_values() {
        let g = gamma(&rat(1, 2), 200).unwrap();
        let sp = pi(200).sqrt().unwrap();
        assert!(distance_log10(&g, &sp) < -55.0);
        let g5 = gamma(&int(5), 120).unwrap();
        assert!(distance_log10(&g5, &BigFloat::from_i64(24, 120)) < -30.0);
        assert!(close(&gamma(&rat(1, 3), 80).unwrap(), 2.678938534707747, 1e-14));
    }

    #[test]
    fn gauss_second_theorem() {
        let (l, r) = gauss_second(&rat(1, 2), &rat(1, 3), 90).unwrap();
        assert!(distance_log10(&l, &r) < -20.0);
    }

    #[test]
    fn hyp_at_zero_and_outside() {
        let z = BigFloat::zero(64);
        let v = hyp_numeric(&[rat(1, 3), rat(2, 3)], &[int(1)], &z).unwrap();
        assert_eq!(v, BigFloat::from_i64(1, 64));
        let one = BigFloat::from_i64(1, 64);
        assert_eq!(hyp_numeric(&[rat(1, 3), rat(2, 3)], &[int(1)], &one), Err(Error::OutOfDisk));
    }

    #[test]
    fn connection_agrees_with_direct_series() {
        for s in [rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 6)] {
            let t = BigFloat::from_rational(&rat(3, 5), 160);
            let term = HypTerm::f21(Rational::one(), s.clone(), Rational::one() - &s);
            let m = moments(&term, &t.to_prec(220), -170.0, u64::MAX).unwrap();
            let (f, g) = f_and_g_connection(&s, &t, 160).unwrap();
            assert!(distance_log10(&f, &m.t0) < -40.0, "F at s = {s}");
            assert!(distance_log10(&g, &m.t1) < -40.0, "G at s = {s}");
        }
    }
}
