//! Certified summation of `Σ Aₙ(A+Bn)wⁿ` and comparison against `C/π`.

use super::special::f_and_g_connection;
use super::{pi, BigFloat};
use crate::error::{Error, Result};
use crate::families::{Family, HypTerm, Kernel};
use crate::transforms::Formula;
use num_bigint::BigInt;
use rayon::prelude::*;
use std::fmt;
use std::time::Instant;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const BLOCK: usize = 4096;

/// `Σ tₖwᵏ` and `Σ k·tₖwᵏ` with their tails folded into the error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub t0: BigFloat,
    pub t1: BigFloat,
    pub terms: u64,
    /// False when the term cap was hit before the tail dropped below the target.
    pub complete: bool,
}

fn pow2(x: f64) -> f64 {
    x.exp2()
}

fn block_sums(block: &[BigFloat], first: u64, prec: u32) -> (BigFloat, BigFloat) {
    let zero = BigFloat::zero(prec);
    let s0 = block.par_iter().cloned().reduce(|| zero.clone(), |a, b| a.add(&b));
    let s1 = block
        .par_iter()
        .enumerate()
        .map(|(i, t)| t.mul_int(&BigInt::from(first + i as u64)))
        .reduce(|| zero.clone(), |a, b| a.add(&b));
    (s0, s1)
}

/// Sum a hypergeometric term stream at `w` until both tails are below `2^eps_log2`.
///
/// Terms are generated serially and summed blockwise in parallel; integer
/// addition makes the result independent of the worker count.
pub fn moments(t: &HypTerm, w: &BigFloat, eps_log2: f64, max_terms: u64) -> Result<Moments> {
    let prec = w.prec();
    let cw = w.mul_rational(&t.c);
    let cw_up = pow2(cw.abs_upper_log2());
    let mut s0 = BigFloat::zero(prec);
    let mut s1 = BigFloat::zero(prec);
    let mut term = BigFloat::from_i64(1, prec);
    let mut block: Vec<BigFloat> = Vec::with_capacity(BLOCK);
    let mut first = 0u64;
    let mut k = 0u64;
    loop {
        let mag = term.abs_upper_log2();
        if mag == f64::NEG_INFINITY {
            break;
        }
        if let Some(b) = t.ratio_bound(k) {
            let rho = b * cw_up;
            if rho < 1.0 {
                let tail0 = mag - (1.0 - rho).log2();
                let kk = k as f64;
                let tail1 = mag + (kk / (1.0 - rho) + rho / ((1.0 - rho) * (1.0 - rho))).log2();
                if tail0.max(tail1) <= eps_log2 {
                    let (b0, b1) = block_sums(&block, first, prec);
                    s0 = s0.add(&b0);
                    s1 = s1.add(&b1);
                    s0.add_err_log2(tail0);
                    s1.add_err_log2(tail1);
                    return Ok(Moments { t0: s0, t1: s1, terms: k, complete: true });
                }
            }
        }
        if k >= max_terms {
            let (b0, b1) = block_sums(&block, first, prec);
            return Ok(Moments { t0: s0.add(&b0), t1: s1.add(&b1), terms: k, complete: false });
        }
        let (n, d) = t.ratio_parts(k);
        let next = term.mul(&cw).mul_int(&n).div_int(&d);
        block.push(term);
        term = next;
        k += 1;
        if block.len() == BLOCK {
            let (b0, b1) = block_sums(&block, first, prec);
            s0 = s0.add(&b0);
            s1 = s1.add(&b1);
            block.clear();
            first = k;
        }
    }
    let (b0, b1) = block_sums(&block, first, prec);
    Ok(Moments { t0: s0.add(&b0), t1: s1.add(&b1), terms: k, complete: true })
}

/// How the sum was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    /// `F` and `G` evaluated by the logarithmic connection formula at `1 − w`.
    Continuation,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Direct => "direct",
            Route::Continuation => "continuation",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub digits_requested: u32,
    pub digits_achieved: u32,
    pub terms: u64,
    /// log10 of an upper bound on `|S − C/π|`.
    pub residual_log10: f64,
    pub pass: bool,
    pub seconds: f64,
    pub route: Route,
    pub capped: bool,
    pub value: BigFloat,
}

impl VerificationReport {
    /// `id  pass|fail  digits_achieved  terms  seconds`, tab separated.
    pub fn line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{:.3}",
            self.id,
            if self.pass { "pass" } else { "fail" },
            self.digits_achieved,
            self.terms,
            self.seconds
        )
    }
}

#[derive(Clone, Debug)]
pub struct SumConfig {
    pub max_terms: u64,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig { max_terms: 5_000_000 }
    }
}

/// Upper bound on the convergence ratio `|c·w|` of the family at the formula's argument.
pub fn convergence_ratio(f: &Formula) -> f64 {
    let c = match f.family.kernel() {
        Kernel::Single(t) => t.c_abs(),
        Kernel::Product(u, _) => u.c_abs(),
    };
    c * f.arg.to_f64().abs()
}

/// Rough count of terms for `digits` decimals at ratio `rho`.
pub fn estimate_terms(rho: f64, digits: u32) -> f64 {
    if rho <= 0.0 {
        return 1.0;
    }
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    let need = digits as f64 * std::f64::consts::LN_10 + 2.0 * (1.0 / (1.0 - rho)).ln() + 4.0;
    need / -rho.ln() + 10.0
}

struct Plan {
    prec: u32,
    eps_factor: f64,
}

fn plan(f: &Formula, digits: u32, terms: f64) -> Plan {
    let rho = convergence_ratio(f).min(1.0 - 1e-15);
    let mag = |s: &crate::exact::Surd| s.to_f64().abs().max(1.0).log2();
    let scale = mag(&f.lin0).max(mag(&f.lin1)).max(mag(&f.rhs)) + 1.0;
    let amp = 2.0 * (1.0 / (1.0 - rho)).log2() + 1.0;
    let target = digits as f64 * LOG2_10;
    let prec = (target + 40.0 + 2.0 * terms.max(2.0).log2() + scale + amp).ceil() as u32;
    Plan { prec, eps_factor: -target - 8.0 - scale - amp }
}

/// `Σ Aₙ(lin0 + lin1·n)·argⁿ` at working precision `prec`.
pub fn series_value(f: &Formula, prec: u32, eps_log2: f64, max_terms: u64) -> Result<(BigFloat, u64, bool)> {
    let w = f.arg.to_bigfloat(prec);
    let a = f.lin0.to_bigfloat(prec);
    let b = f.lin1.to_bigfloat(prec);
    match f.family.kernel() {
        Kernel::Single(t) => {
            let m = moments(&t, &w, eps_log2, max_terms)?;
            Ok((a.mul(&m.t0).add(&b.mul(&m.t1)), m.terms, m.complete))
        }
        Kernel::Product(u, v) => {
            let (mu, mv) = if u == v {
                let m = moments(&u, &w, eps_log2, max_terms)?;
                (m.clone(), m)
            } else {
                let (x, y) =
                    rayon::join(|| moments(&u, &w, eps_log2, max_terms), || moments(&v, &w, eps_log2, max_terms));
                (x?, y?)
            };
            let prod = mu.t0.mul(&mv.t0);
            let deriv = mu.t1.mul(&mv.t0).add(&mu.t0.mul(&mv.t1));
            Ok((a.mul(&prod).add(&b.mul(&deriv)), mu.terms.max(mv.terms), mu.complete && mv.complete))
        }
    }
}

fn finish(
    f: &Formula,
    digits: u32,
    s: BigFloat,
    terms: u64,
    route: Route,
    capped: bool,
    start: Instant,
) -> Result<VerificationReport> {
    let prec = s.prec();
    let c_over_pi = f.rhs.to_bigfloat(prec).div(&pi(prec))?;
    let r = s.sub(&c_over_pi);
    let residual_log10 = r.abs_upper_log2() * std::f64::consts::LOG10_2;
    let pass = residual_log10 < -(digits as f64);
    let digits_achieved = if residual_log10 >= 0.0 { 0 } else { (-residual_log10).floor() as u32 };
    Ok(VerificationReport {
        id: f.id.clone(),
        digits_requested: digits,
        digits_achieved,
        terms,
        residual_log10,
        pass,
        seconds: start.elapsed().as_secs_f64(),
        route,
        capped,
        value: s,
    })
}

/// Verify `Σ Aₙ(A+Bn)wⁿ = C/π` to `digits` decimals.
pub fn sum_formula(f: &Formula, digits: u32, cfg: &SumConfig) -> Result<VerificationReport> {
    if !f.convergent {
        return Err(Error::DivergentFormula(f.id.clone()));
    }
    let start = Instant::now();
    let est = estimate_terms(convergence_ratio(f), digits);
    let p = plan(f, digits, est);
    let target = -(digits as f64) * LOG2_10 - 2.0;
    let mut prec = p.prec;
    for attempt in 0..2 {
        let (s, terms, complete) = series_value(f, prec, p.eps_factor, cfg.max_terms)?;
        if s.err_log2() > target && complete {
            if attempt == 0 {
                prec *= 2;
                continue;
            }
            return Err(Error::PrecisionExhausted);
        }
        return finish(f, digits, s, terms, Route::Direct, !complete, start);
    }
    Err(Error::PrecisionExhausted)
}

/// Like [`sum_formula`] for arguments near the boundary: PROP7 series whose direct
/// sum would exceed `max_terms` are evaluated as `A·F(w)² + 2B·F(w)·G(w)` with `F`, `G`
/// continued from `1 − w`.
pub fn slow_series_sum(f: &Formula, digits: u32, max_terms: u64) -> Result<VerificationReport> {
    if !f.convergent {
        return Err(Error::DivergentFormula(f.id.clone()));
    }
    let rho = convergence_ratio(f);
    let est = estimate_terms(rho, digits);
    let w = f.arg.to_f64();
    if f.family.kind == Family::Prop7 && est > max_terms as f64 && w > 0.5 && w < 1.0 {
        let start = Instant::now();
        let p = plan(f, digits, 64.0);
        let prec = p.prec;
        let wf = f.arg.to_bigfloat(prec + 32);
        let (ff, gg) = f_and_g_connection(&f.family.s, &wf, prec + 32)?;
        let a = f.lin0.to_bigfloat(prec + 32);
        let b = f.lin1.to_bigfloat(prec + 32);
        let s = a.mul(&ff.square()).add(&b.mul(&ff).mul(&gg).mul_int(&BigInt::from(2)));
        let terms = continuation_terms(&wf);
        return finish(f, digits, s.to_prec(prec), terms, Route::Continuation, false, start);
    }
    sum_formula(f, digits, &SumConfig { max_terms })
}

fn continuation_terms(w: &BigFloat) -> u64 {
    let u = 1.0 - w.to_f64();
    (w.prec() as f64 / -u.log2()).ceil() as u64 + 1
}

/// `π = C/S` for a verified formula.
pub fn pi_from_formula(f: &Formula, digits: u32, cfg: &SumConfig) -> Result<BigFloat> {
    let est = estimate_terms(convergence_ratio(f), digits);
    let p = plan(f, digits, est);
    let (s, _, complete) = series_value(f, p.prec, p.eps_factor, cfg.max_terms)?;
    if !complete {
        return Err(Error::PrecisionExhausted);
    }
    f.rhs.to_bigfloat(p.prec).div(&s)
}
