//! Eta quotients, `j`, and the hauptmodul-style maps `t_N` on the imaginary axis.

use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::families::cs_squared;
use crate::numeric::special::{distance_log10, f_and_g, gamma};
use crate::numeric::{pi, BigFloat};
use crate::transforms::Formula;
use num_bigint::BigInt;
use num_traits::{One, Signed};

const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// `τ = i·√im_sq`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauPoint {
    pub im_sq: Rational,
}

impl TauPoint {
    pub fn new(im_sq: Rational) -> Result<TauPoint> {
        if !im_sq.is_positive() {
            return Err(Error::OutsideDomain);
        }
        Ok(TauPoint { im_sq })
    }

    /// `√im_sq`.
    pub fn root(&self, bits: u32) -> BigFloat {
        BigFloat::from_rational(&self.im_sq, bits + 8).sqrt().expect("positive").to_prec(bits)
    }

    /// `q = e^{−2π√im_sq}`.
    pub fn q(&self, bits: u32) -> BigFloat {
        q_of(&self.root(bits + 16), bits + 16).to_prec(bits)
    }
}

fn q_of(root: &BigFloat, bits: u32) -> BigFloat {
    let two_pi = pi(bits).shl(1);
    two_pi.mul(root).neg().exp()
}

fn truncation(root: f64, bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI * root)).ceil() as usize + 16
}

/// `Π_{n≥1}(1−qⁿ)` with the omitted factors bounded by `q^{K+1}/(1−q)²`.
fn euler_product(q: &BigFloat, k: usize) -> BigFloat {
    let bits = q.prec();
    let one = BigFloat::from_i64(1, bits);
    let mut prod = one.clone();
    let mut qn = one.clone();
    for _ in 0..k {
        qn = qn.mul(q);
        prod = prod.mul(&one.sub(&qn));
    }
    let qf = q.to_f64();
    prod.add_err_log2((k as f64 + 1.0) * qf.log2() - 2.0 * (1.0 - qf).log2() + 1.0);
    prod
}

/// `η` at `τ = i·root`.
fn eta_at(root: &BigFloat, bits: u32) -> BigFloat {
    let wp = bits + 24;
    let root = root.to_prec(wp);
    let q = q_of(&root, wp);
    let k = truncation(root.to_f64(), wp);
    let q24 = pi(wp).shl(1).mul(&root).div_int(&BigInt::from(24)).neg().exp();
    q24.mul(&euler_product(&q, k)).to_prec(bits)
}

pub fn eta(tau: &TauPoint, bits: u32) -> BigFloat {
    eta_at(&tau.root(bits + 24), bits)
}

/// `σ₃(n)` for `n ≤ k`.
pub fn sigma3_table(k: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(0); k + 1];
    for d in 1..=k {
        let d3 = BigInt::from(d as u64).pow(3);
        let mut m = d;
        while m <= k {
            s[m] += &d3;
            m += d;
        }
    }
    s
}

fn e4_at(root: &BigFloat, bits: u32) -> BigFloat {
    let wp = bits + 24;
    let root = root.to_prec(wp);
    let q = q_of(&root, wp);
    let k = truncation(root.to_f64(), wp);
    let sig = sigma3_table(k);
    let mut acc = BigFloat::zero(wp);
    let mut qn = BigFloat::from_i64(1, wp);
    for s in sig.iter().skip(1) {
        qn = qn.mul(&q);
        acc = acc.add(&qn.mul_int(s));
    }
    let qf = q.to_f64();
    let kk = k as f64 + 1.0;
    let r = qf * ((kk + 1.0) / kk).powi(3);
    acc.add_err_log2((1.21f64).log2() + 3.0 * kk.log2() + kk * qf.log2() - (1.0 - r).log2() + 1.0);
    BigFloat::from_i64(1, wp).add(&acc.mul_int(&BigInt::from(240))).to_prec(bits)
}

/// `E₄ = 1 + 240Σσ₃(n)qⁿ`.
pub fn e4(tau: &TauPoint, bits: u32) -> BigFloat {
    e4_at(&tau.root(bits + 24), bits)
}

fn j_at(root: &BigFloat, bits: u32) -> Result<BigFloat> {
    let wp = bits + 32;
    let e = e4_at(root, wp);
    let d = eta_at(root, wp).pow_u(24);
    Ok(e.mul(&e).mul(&e).div(&d)?.to_prec(bits))
}

/// `j = E₄³/Δ` with `Δ = η²⁴`.
pub fn j(tau: &TauPoint, bits: u32) -> Result<BigFloat> {
    j_at(&tau.root(bits + 32), bits)
}

trait PowU {
    fn pow_u(&self, e: u32) -> BigFloat;
}

impl PowU for BigFloat {
    fn pow_u(&self, e: u32) -> BigFloat {
        let mut acc = BigFloat::from_i64(1, self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }
}

/// Exponent and constant in `t_N = (1 + c·(η(τ)/η(Nτ))^k)^{−1}`.
fn quotient_data(n: u32) -> Option<(u32, i64)> {
    match n {
        4 => Some((8, 16)),
        3 => Some((12, 27)),
        2 => Some((24, 64)),
        _ => None,
    }
}

fn t_at(n: u32, root: &BigFloat, bits: u32) -> Result<BigFloat> {
    let wp = bits + 40;
    let root = root.to_prec(wp);
    let one = BigFloat::from_i64(1, wp);
    let t = match quotient_data(n) {
        Some((k, c)) => {
            let ratio = eta_at(&root, wp).div(&eta_at(&root.mul_int(&BigInt::from(n)), wp))?;
            one.add(&ratio.pow_u(k).div_int(&BigInt::from(c))).recip()?
        }
        None if n == 1 => {
            let jv = j_at(&root, wp)?;
            let inner = one.sub(&BigFloat::from_i64(1728, wp).div(&jv)?);
            let half = BigFloat::from_rational(&crate::exact::rat(1, 2), wp);
            half.sub(&half.mul(&inner.sqrt().map_err(|_| Error::OutsideDomain)?))
        }
        None => return Err(Error::Unsupported(format!("level {n}"))),
    };
    if t.to_f64().abs() >= 1.0 {
        return Err(Error::OutsideDomain);
    }
    Ok(t.to_prec(bits))
}

/// `t_N(τ)` for `N ∈ {1, 2, 3, 4}`.
pub fn t_n(n: u32, tau: &TauPoint, bits: u32) -> Result<BigFloat> {
    t_at(n, &tau.root(bits + 40), bits)
}

/// Level paired with `s`: `1/2 → 4`, `1/3 → 3`, `1/4 → 2`, `1/6 → 1`.
pub fn level_for(s: &Rational) -> Result<u32> {
    let d = s.denom();
    if !s.numer().is_one() {
        return Err(Error::Unsupported(format!("s = {s}")));
    }
    match d.to_string().as_str() {
        "2" => Ok(4),
        "3" => Ok(3),
        "4" => Ok(2),
        "6" => Ok(1),
        _ => Err(Error::Unsupported(format!("s = {s}"))),
    }
}

fn c_s(s: &Rational, bits: u32) -> Result<BigFloat> {
    BigFloat::from_rational(&cs_squared(s)?, bits + 8).sqrt().map(|x| x.to_prec(bits))
}

/// Residuals of `√im_sq = C_s·F(1−t)/F(t)` and of `dt/d ln q = t(1−t)F(t)²`, as log10 bounds.
#[derive(Clone, Debug)]
pub struct TauRelation {
    pub t: BigFloat,
    pub relation_log10: f64,
    pub log_derivative_log10: f64,
}

pub fn tau_relation_check(s: &Rational, n: u32, tau: &TauPoint, bits: u32) -> Result<TauRelation> {
    let wp = bits + 32;
    let root = tau.root(wp);
    let t = t_at(n, &root, wp)?;
    let one = BigFloat::from_i64(1, wp);
    let (f_t, _) = f_and_g(s, &t)?;
    let (f_u, _) = f_and_g(s, &one.sub(&t))?;
    let rhs = c_s(s, wp)?.mul(&f_u).div(&f_t)?;
    let relation_log10 = distance_log10(&root, &rhs);

    // centered difference in √im_sq; ln q = −2π√im_sq
    let db = 3 * wp;
    let h_bits = wp;
    let root_d = tau.root(db);
    let h = BigFloat::from_parts(BigInt::one() << (db - h_bits), db, Default::default());
    let tp = t_at(n, &root_d.add(&h), db)?;
    let tm = t_at(n, &root_d.sub(&h), db)?;
    let d_root = tp.sub(&tm).div(&h.shl(1))?;
    let dt_dlnq = d_root.div(&pi(db).shl(1))?.neg().to_prec(wp);
    let expected = t.mul(&one.sub(&t)).mul(&f_t.square());
    let log_derivative_log10 = distance_log10(&dt_dlnq, &expected);
    Ok(TauRelation { t: t.to_prec(bits), relation_log10, log_derivative_log10 })
}

/// Five sample points along the axis where `t_N` should strictly decrease.
pub fn monotone_along_axis(n: u32, bits: u32) -> Result<bool> {
    let mut prev: Option<BigFloat> = None;
    for y in [1, 2, 3, 5, 8] {
        let t = t_n(n, &TauPoint::new(int(y))?, bits)?;
        if let Some(p) = &prev {
            if t.sub(p).sign() != Some(std::cmp::Ordering::Less) {
                return Ok(false);
            }
        }
        prev = Some(t);
    }
    Ok(true)
}

/// `η(i) = Γ(1/4)/(2π^{3/4})`, from the gamma function alone.
pub fn eta_i_oracle(bits: u32) -> Result<BigFloat> {
    let wp = bits + 32;
    let g = gamma(&crate::exact::rat(1, 4), wp)?;
    let p = pi(wp);
    let p34 = p.sqrt()?.mul(&p.sqrt()?.sqrt()?);
    Ok(g.div(&p34.shl(1))?.to_prec(bits))
}

/// End-to-end check of a companion pair: `t_N(τ₀) = w₀`, the τ-relation,
/// and `2C_s·w₀·G(w₁)F(w₀) + 2(τ₀/i)·w₁·G(w₀)F(w₀) = 1/π`.
#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub id: String,
    pub level: u32,
    pub w0_log10: f64,
    pub relation: TauRelation,
    pub fg_log10: f64,
}

impl ExampleReport {
    pub fn pass(&self, digits: u32) -> bool {
        let d = -(digits as f64);
        self.w0_log10 < d
            && self.relation.relation_log10 < d
            && self.fg_log10 < d
            && self.relation.log_derivative_log10 < d
    }

    pub fn line(&self, digits: u32) -> String {
        format!(
            "{}\tt{}\t{:.1}\t{:.1}\t{:.1}\t{:.1}\t{}",
            self.id,
            self.level,
            self.w0_log10,
            self.relation.relation_log10,
            self.relation.log_derivative_log10,
            self.fg_log10,
            if self.pass(digits) { "pass" } else { "fail" }
        )
    }
}

pub fn check_example(source: &Formula, digits: u32) -> Result<ExampleReport> {
    let y = source.tau0_im_sq.clone().ok_or(Error::MissingTau)?;
    let s = source.s().clone();
    let n = level_for(&s)?;
    let bits = ((digits.max(30) + 10) as f64 / LOG10_2).ceil() as u32 + 32;
    let tau = TauPoint::new(y)?;
    let relation = tau_relation_check(&s, n, &tau, bits)?;
    let w0 = source.arg.to_bigfloat(bits + 16);
    let w0_log10 = distance_log10(&relation.t, &w0.to_prec(bits));
    let one = BigFloat::from_i64(1, bits + 16);
    let w1 = one.sub(&w0);
    let (f0, g0) = f_and_g(&s, &w0)?;
    let (_, g1) = f_and_g(&s, &w1)?;
    let cs = c_s(&s, bits + 16)?;
    let root = tau.root(bits + 16);
    let lhs = cs.mul(&w0).mul(&g1).mul(&f0).add(&root.mul(&w1).mul(&g0).mul(&f0)).shl(1);
    let inv_pi = one.div(&pi(bits + 16))?;
    let fg_log10 = distance_log10(&lhs, &inv_pi);
    Ok(ExampleReport { id: source.id.clone(), level: n, w0_log10, relation, fg_log10 })
}
