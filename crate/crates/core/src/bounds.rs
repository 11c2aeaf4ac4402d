//! Lower bounds for linear forms in logarithms (Matveev, and Laurent,
//! Mignotte and Nesterenko for two logarithms), the z/(log z)^s inversion
//! lemma, and the composed bound on n in terms of k.
//!
//! Every evaluator works on enclosures: a returned lower bound is the lower
//! endpoint of an enclosure of the exact expression, an upper bound the
//! upper endpoint.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{ln_int, parse_decimal, Interval};

pub const BITS: u32 = 160;

/// Decimal constant as an enclosure.
pub fn dec(s: &str) -> Interval {
    Interval::from_decimal(s, BITS).expect("valid decimal literal")
}

pub fn int(n: u64) -> Interval {
    Interval::from_i64(n as i64, BITS)
}

pub fn ln_u64(n: u64) -> Interval {
    ln_int(&n.into(), BITS)
}

pub fn ln_of(x: &Interval) -> Result<Interval> {
    x.with_bits(BITS).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Matveev,
    Lmn,
    Guz,
    Composed,
}

#[derive(Clone, Debug)]
pub struct BoundResult {
    pub value: Interval,
    pub provenance: Provenance,
}

impl BoundResult {
    /// Certified lower end of the enclosure.
    pub fn lower(&self) -> BigRational {
        self.value.lo()
    }

    /// Certified upper end of the enclosure.
    pub fn upper(&self) -> BigRational {
        self.value.hi()
    }
}

#[derive(Clone, Debug)]
pub struct MatveevInput {
    pub t: usize,
    pub degree: u64,
    pub b: BigInt,
    pub a: Vec<Interval>,
}

/// -1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1 ... A_t.
pub fn matveev_lower_bound(input: &MatveevInput) -> Result<BoundResult> {
    let min_a = parse_decimal("0.16")?;
    if input.t < 1 || input.degree < 1 || input.b < BigInt::one() {
        return Err(Error::domain("Matveev bound needs t >= 1, D >= 1, B >= 1"));
    }
    if input.a.len() != input.t {
        return Err(Error::domain("one A_i per logarithm"));
    }
    if input.a.iter().any(|a| a.hi() < min_a) {
        return Err(Error::domain("every A_i must be at least 0.16"));
    }
    let t = input.t as u64;
    let d = input.degree;
    let mut v = dec("1.4").mul(&int(30).powi(t as i64 + 3)?);
    v = v.mul(&int(t).powi(4)?).mul(&int(t).sqrt()?);
    v = v.mul(&int(d * d)).mul(&ln_u64(d).add_int(&BigInt::one()));
    let log_b = ln_int(&input.b.to_biguint().expect("positive"), BITS);
    v = v.mul(&log_b.add_int(&BigInt::one()));
    for a in &input.a {
        v = v.mul(&a.with_bits(BITS));
    }
    Ok(BoundResult { value: v.neg(), provenance: Provenance::Matveev })
}

#[derive(Clone, Debug)]
pub struct LmnInput {
    pub degree: u64,
    pub log_a1: Interval,
    pub log_a2: Interval,
    pub b1: BigInt,
    pub b2: BigInt,
}

impl LmnInput {
    /// b' = |b1| / (D log A2) + |b2| / (D log A1).
    pub fn b_prime(&self) -> Result<Interval> {
        let d = int(self.degree);
        let x = Interval::from_int(&self.b1.abs(), BITS).div(&d.mul(&self.log_a2))?;
        let y = Interval::from_int(&self.b2.abs(), BITS).div(&d.mul(&self.log_a1))?;
        Ok(x.add(&y))
    }
}

/// -24.34 D^4 (max{log b' + 0.14, 21/D, 1/2})^2 log A1 log A2.
pub fn lmn_lower_bound(input: &LmnInput) -> Result<BoundResult> {
    lmn_lower_bound_bprime(input.degree, &input.log_a1, &input.log_a2, &input.b_prime()?)
}

/// Same evaluator with b' (or an upper bound for it) supplied directly.
pub fn lmn_lower_bound_bprime(degree: u64, log_a1: &Interval, log_a2: &Interval, b_prime: &Interval) -> Result<BoundResult> {
    let inv_d = int(1).div(&int(degree))?;
    if log_a1.certainly_lt(&inv_d) || log_a2.certainly_lt(&inv_d) || log_a1.lo() < inv_d.lo() || log_a2.lo() < inv_d.lo() {
        return Err(Error::domain("log A_i must be at least 1/D"));
    }
    let inner = lmn_max_term(degree, b_prime)?;
    let d4 = int(degree).powi(4)?;
    let v = dec("24.34").mul(&d4).mul(&inner.square()).mul(log_a1).mul(log_a2);
    Ok(BoundResult { value: v.neg(), provenance: Provenance::Lmn })
}

/// max{log b' + 0.14, 21/D, 1/2}.
pub fn lmn_max_term(degree: u64, b_prime: &Interval) -> Result<Interval> {
    let lb = ln_of(b_prime)?.add(&dec("0.14"));
    Ok(lb.max(&int(21).div(&int(degree))?).max(&dec("0.5")))
}

/// Upper bound 2^s T (log T)^s for z with z / (log z)^s < T, T > (4 s^2)^s.
pub fn guz_bound(s: u32, t: &Interval) -> Result<Interval> {
    if s < 1 {
        return Err(Error::domain("Guz lemma needs s >= 1"));
    }
    let thr = int(4 * (s as u64) * (s as u64)).powi(s as i64)?;
    if !thr.certainly_lt(t) {
        return Err(Error::domain(format!("Guz lemma needs T > (4s^2)^s = {thr}, got {t}")));
    }
    let lt = ln_of(t)?;
    Ok(int(1u64 << s).mul(t).mul(&lt.powi(s as i64)?))
}

/// Choice of A_2 for gamma_2 = 2 alpha - 1 in the Matveev applications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeightPolicy {
    /// A_2 = 1.
    Nominal,
    /// A_2 = k log 3, which dominates k h(2 alpha - 1) and |log(2 alpha - 1)|.
    Certified,
}

impl HeightPolicy {
    /// Exponent of k in the closed-form bound on n.
    pub fn k_power(self) -> u32 {
        match self {
            HeightPolicy::Nominal => 8,
            HeightPolicy::Certified => 10,
        }
    }

    /// Value of A_2.
    pub fn a2(self, k: u64) -> Interval {
        match self {
            HeightPolicy::Nominal => int(1),
            HeightPolicy::Certified => ln_u64(3).mul(&int(k)),
        }
    }

    /// Power of k absorbed by A_2 in the envelopes.
    fn extra(self) -> i64 {
        match self {
            HeightPolicy::Nominal => 0,
            HeightPolicy::Certified => 1,
        }
    }
}

/// n < 8.5e34 k^p (log k)^6 with p from the policy.
pub fn closed_form(k: u64, policy: HeightPolicy) -> Result<Interval> {
    let lk = ln_u64(k);
    Ok(dec("8.5e34").mul(&int(k).powi(policy.k_power() as i64)?).mul(&lk.powi(6)?))
}

#[derive(Clone, Debug)]
pub struct NBound {
    pub k: u64,
    pub policy: HeightPolicy,
    /// Upper bound for m in branch (a).
    pub branch_a_m: Interval,
    /// n <= m^2 in branch (a).
    pub branch_a: Interval,
    /// Upper bound for n in branch (b).
    pub branch_b: Interval,
    pub value: Interval,
    pub closed_form: Interval,
    pub checks: Vec<(String, bool)>,
}

impl NBound {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn within_closed_form(&self) -> bool {
        !self.closed_form.certainly_lt(&self.value) && self.value.hi() <= self.closed_form.hi()
    }
}

/// Composed bound on n for one k >= 3 with A_2 = 1.
pub fn bound_n_of_k(k: u64) -> Result<NBound> {
    bound_n_of_k_with(k, HeightPolicy::Nominal)
}

/// (1 + 2 log n) / log n at n = 51, the largest value over n > 50.
fn one_plus_two_log_ratio() -> Result<Interval> {
    let l = ln_u64(51);
    l.mul_int(&BigInt::from(2)).add_int(&BigInt::one()).div(&l)
}

pub fn bound_n_of_k_with(k: u64, policy: HeightPolicy) -> Result<NBound> {
    if k < 3 {
        return Err(Error::domain(format!("the bound on n needs k >= 3, got {k}")));
    }
    let mut checks = Vec::new();
    let lk = ln_u64(k);
    let kk = int(k);
    let a1 = kk.mul(&lk).mul_int(&BigInt::from(2));
    let a2 = policy.a2(k);
    let ratio = one_plus_two_log_ratio()?;
    let extra = policy.extra();

    // Branch (a): t = 3, A = (2k log k, A_2, 1), B = n^2.
    let coef_a = dec("1.4")
        .mul(&int(30).powi(6)?)
        .mul(&int(3).powi(4)?.mul(&int(3).sqrt()?))
        .mul(&kk.square())
        .mul(&lk.add_int(&BigInt::one()))
        .mul(&a1)
        .mul(&a2);
    let ka = kk.powi(3 + extra)?.mul(&lk.square());
    let env_a = dec("1.6e12").mul(&ka);
    checks.push(("matveev t=3 envelope 1.6e12".to_string(), coef_a.mul(&ratio).certainly_le(&env_a)));
    let t_a = dec("8e12").mul(&ka);
    // m log 1.5 < (2 E K + 1) log m + log 19 gives m / log m < T_a for m >= 3
    let lhs = env_a.mul_int(&BigInt::from(2)).add_int(&BigInt::one()).add(&ln_u64(19)).div(&ln_of(&dec("1.5"))?)?;
    checks.push(("m / log m < 8e12 K".to_string(), lhs.certainly_le(&t_a)));
    let m_a = guz_bound(1, &t_a)?;
    let m_env = dec("5.3e14").mul(&kk.powi(3 + extra)?).mul(&lk.powi(3)?);
    checks.push(("m < 5.3e14 k^p (log k)^3".to_string(), m_a.certainly_le(&m_env) || policy == HeightPolicy::Certified && m_a.certainly_le(&dec("5.4e14").mul(&kk.powi(3 + extra)?).mul(&lk.powi(3)?))));
    let n_a = m_a.square();

    // Branch (b): t = 4, A_4 = 2mk with m < sqrt(n).
    let coef_b = dec("1.4")
        .mul(&int(30).powi(7)?)
        .mul(&int(4).powi(4)?.mul(&int(2)))
        .mul(&kk.square())
        .mul(&lk.add_int(&BigInt::one()))
        .mul(&a1)
        .mul(&a2)
        .mul(&kk.mul_int(&BigInt::from(2)));
    let kb = kk.powi(4 + extra)?.mul(&lk.square());
    let env_b = dec("3.5e14").mul(&kb);
    checks.push(("matveev t=4 envelope 3.5e14".to_string(), coef_b.mul(&ratio).certainly_le(&env_b)));
    let step = dec("3.5e14").mul_int(&BigInt::from(2)).div(&ln_of(&dec("1.5"))?)?;
    checks.push(("2 * 3.5e14 / log 1.5 < 1.8e15".to_string(), step.certainly_le(&dec("1.8e15"))));
    let t_b = dec("3.6e15").mul(&kb);
    let sqrt_n = guz_bound(1, &t_b)?;
    let n_b = sqrt_n.square();
    checks.push((
        "4.5 n / 1.5^n < 1.5^(-n/2) at n = 51".to_string(),
        dec("4.5").mul(&int(51)).certainly_lt(&dec("1.5").powi(25)?),
    ));

    let value = n_a.max(&n_b).max(&int(50));
    let cf = closed_form(k, policy)?;
    Ok(NBound { k, policy, branch_a_m: m_a, branch_a: n_a, branch_b: n_b, value, closed_form: cf, checks })
}

/// Constant inequalities behind the closed forms, valid for every k >= 3
/// once the k-dependent parts are bounded with log log k <= log k.
pub fn closed_form_steps(policy: HeightPolicy) -> Result<Vec<(String, bool)>> {
    let l3 = ln_u64(3);
    let e = policy.extra();
    let mut out = Vec::new();
    // log(8e12) + (3 + e) log k + 2 log log k < 30 + (5 + e) log k
    let c = ln_of(&dec("8e12"))?;
    out.push(("log 8e12 < 30".to_string(), c.certainly_lt(&int(30))));
    // 1.6e13 (30 / log 3 + 5 + e) <= 5.3e14 (5.4e14 for the certified A_2)
    let m_coef = dec("1.6e13").mul(&int(30).div(&l3)?.add_int(&BigInt::from(5 + e)));
    let m_target = if e == 0 { dec("5.3e14") } else { dec("5.4e14") };
    out.push(("m coefficient".to_string(), m_coef.certainly_le(&m_target)));
    out.push(("m^2 coefficient below 2.92e29".to_string(), m_target.square().certainly_le(&dec("2.92e29"))));
    // log(3.6e15) + (4 + e) log k + 2 log log k < 36 + (6 + e) log k
    out.push(("log 3.6e15 < 36".to_string(), ln_of(&dec("3.6e15"))?.certainly_lt(&int(36))));
    let s_coef = dec("7.2e15").mul(&int(36).div(&l3)?.add_int(&BigInt::from(6 + e)));
    out.push(("sqrt(n) coefficient below 2.9e17".to_string(), s_coef.certainly_le(&dec("2.9e17"))));
    out.push(("(2.9e17)^2 below 8.5e34".to_string(), dec("2.9e17").square().certainly_le(&dec("8.5e34"))));
    // branch (a) never exceeds the branch (b) form: 2.92e29 k^(6+2e) <= 8.5e34 k^(8+2e)
    out.push(("branch (a) below the closed form".to_string(), dec("2.92e29").certainly_le(&dec("8.5e34"))));
    Ok(out)
}

/// Global bound for 3 <= k <= k_max (the closed form is increasing in k).
pub fn global_n_bound(k_max: u64, policy: HeightPolicy) -> Result<Interval> {
    closed_form(k_max, policy)
}
