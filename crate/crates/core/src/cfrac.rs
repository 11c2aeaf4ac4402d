//! Continued fractions of certified reals and Legendre's gap bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::config::MAX_BITS;
use crate::error::{Error, Result};
use crate::interval::{ln_int, Interval};

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub value: Interval,
    pub quotients: Vec<BigInt>,
    /// (p_i, q_i) for every quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
}

impl ContinuedFraction {
    pub fn from_quotients(value: Interval, quotients: Vec<BigInt>) -> Self {
        let convergents = convergents(&quotients);
        ContinuedFraction { value, quotients, convergents }
    }

    pub fn last_denominator(&self) -> Option<&BigInt> {
        self.convergents.last().map(|(_, q)| q)
    }

    /// Largest quotient and its first index.
    pub fn max_quotient(&self) -> Option<(usize, &BigInt)> {
        let mut best: Option<(usize, &BigInt)> = None;
        for (i, a) in self.quotients.iter().enumerate() {
            if best.map_or(true, |(_, b)| a > b) {
                best = Some((i, a));
            }
        }
        best
    }

    pub fn summary(&self) -> CfSummary {
        let (idx, a) = self.max_quotient().map(|(i, a)| (i, a.to_string())).unwrap_or((0, "0".into()));
        CfSummary {
            n: self.quotients.len().saturating_sub(1),
            quotients: self.quotients.iter().map(|a| a.to_string()).collect(),
            q_n: self.last_denominator().map(|q| q.to_string()).unwrap_or_default(),
            max_quotient: a,
            max_index: idx,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CfSummary {
    pub n: usize,
    pub quotients: Vec<String>,
    pub q_n: String,
    pub max_quotient: String,
    pub max_index: usize,
}

/// p_i = a_i p_{i-1} + p_{i-2}, q_i = a_i q_{i-1} + q_{i-2}.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p.clone());
        q0 = std::mem::replace(&mut q1, q.clone());
        out.push((p, q));
    }
    out
}

/// Full expansion of a rational number.
pub fn rational_quotients(x: &BigRational) -> Vec<BigInt> {
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        out.push(a);
        num = std::mem::replace(&mut den, r);
    }
    out
}

/// Quotients shared by every real in the enclosure.
///
/// The reals with prescribed a_0, ..., a_j form an interval, so it suffices
/// that both endpoints have that prefix with complete quotient x_j > a_j,
/// i.e. neither expansion stops at index j.
pub fn certified_quotients(x: &Interval) -> Vec<BigInt> {
    let lo = rational_quotients(&x.lo());
    let hi = rational_quotients(&x.hi());
    let mut out = Vec::new();
    for i in 0..lo.len().min(hi.len()) {
        if lo[i] != hi[i] || i + 1 >= lo.len() || i + 1 >= hi.len() {
            break;
        }
        out.push(lo[i].clone());
    }
    out
}

/// Expands until the first convergent with q_N > M, doubling the working
/// precision while the certified prefix is too short.
pub fn expand<F>(value: F, m: &BigInt, start_bits: u32) -> Result<ContinuedFraction>
where
    F: Fn(u32) -> Result<Interval>,
{
    let mut bits = start_bits.max(64);
    let mut reached = 0usize;
    loop {
        let v = value(bits)?;
        let quotients = certified_quotients(&v);
        reached = reached.max(quotients.len());
        let conv = convergents(&quotients);
        if let Some(n) = conv.iter().position(|(_, q)| q > m) {
            let quotients: Vec<BigInt> = quotients.into_iter().take(n + 1).collect();
            return Ok(ContinuedFraction::from_quotients(v, quotients));
        }
        if bits >= MAX_BITS {
            return Err(Error::Expansion { reached, reason: format!("enclosure too wide at {bits} bits") });
        }
        log::debug!("continued fraction: {} quotients certified at {bits} bits, doubling", quotients.len());
        bits = (bits * 2).min(MAX_BITS);
    }
}

/// Default starting precision for a denominator bound M.
pub fn default_bits(m: &BigInt) -> u32 {
    m.bits() as u32 + 128
}

/// a(M) + 2, where a(M) is the largest quotient up to the first q_N > M.
pub fn legendre_gap(cf: &ContinuedFraction, m: &BigInt) -> Result<BigInt> {
    let n = cf
        .convergents
        .iter()
        .position(|(_, q)| q > m)
        .ok_or_else(|| Error::Expansion { reached: cf.quotients.len(), reason: "no convergent denominator exceeds M".into() })?;
    let a = cf.quotients[..=n].iter().max().expect("nonempty");
    Ok(a + 2)
}

/// Enclosures of the named constants used by the CLI and the proof.
pub fn named_constant(name: &str, bits: u32) -> Result<Interval> {
    match name {
        "log3/log2" => ln_int(&3u32.into(), bits + 8).div(&ln_int(&2u32.into(), bits + 8)).map(|v| v.with_bits(bits)),
        "golden" => Ok(Interval::from_i64(5, bits + 8).sqrt()?.add_int(&BigInt::one()).div_int(&BigInt::from(2)).with_bits(bits)),
        "sqrt2" => Interval::from_i64(2, bits).sqrt(),
        _ => Err(Error::domain(format!("unknown constant {name:?}; expected log3/log2, golden or sqrt2"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn golden_ratio() {
        let m = BigInt::from(100);
        let cf = expand(|b| named_constant("golden", b), &m, 64).unwrap();
        assert!(cf.quotients.iter().all(|a| a.is_one()));
        let qs: Vec<u64> = cf.convergents.iter().map(|(_, q)| q.try_into().unwrap()).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        assert_eq!(legendre_gap(&cf, &m).unwrap(), BigInt::from(3));
    }

    #[test]
    fn log3_log2_prefix() {
        let m = BigInt::from(10).pow(20);
        let cf = expand(|b| named_constant("log3/log2", b), &m, default_bits(&m)).unwrap();
        let head: Vec<u32> = cf.quotients.iter().take(8).map(|a| a.try_into().unwrap()).collect();
        assert_eq!(head, vec![1, 1, 1, 2, 2, 3, 1, 5]);
        // 3^q vs 2^p for the convergent p/q: 2^p < 3^q exactly when p/q < log 3/log 2
        for (i, (p, q)) in cf.convergents.iter().enumerate().take(12) {
            let (p, q): (u32, u32) = (p.try_into().unwrap(), q.try_into().unwrap());
            let below = BigInt::from(2).pow(p) < BigInt::from(3).pow(q);
            assert_eq!(below, i % 2 == 0);
        }
    }

    #[test]
    fn convergent_recurrence_and_error() {
        let m = BigInt::from(10).pow(30);
        let cf = expand(|b| named_constant("sqrt2", b), &m, default_bits(&m)).unwrap();
        assert!(cf.quotients[1..].iter().all(|a| *a == BigInt::from(2)));
        for w in cf.convergents.windows(2) {
            assert!(w[1].1 > w[0].1);
            let approx = BigRational::new(w[0].0.clone(), w[0].1.clone());
            let err = cf.value.sub(&Interval::from_rational(&approx, cf.value.bits())).abs();
            let cap = BigRational::new(BigInt::one(), &w[0].1 * &w[1].1);
            assert!(err.hi() < cap);
        }
    }

    #[test]
    fn rational_enclosure_stops() {
        let v = Interval::from_ratio(&big("355"), &big("113"), 64);
        let err = expand(|_| Ok(v.clone()), &BigInt::from(1000), 64).unwrap_err();
        assert!(matches!(err, Error::Expansion { .. }));
    }

    #[test]
    fn legendre_exhaustive() {
        for name in ["golden", "sqrt2", "log3/log2"] {
            let m = BigInt::from(200);
            let cf = expand(|b| named_constant(name, b), &m, 128).unwrap();
            let gap = legendre_gap(&cf, &m).unwrap();
            let tau = &cf.value;
            for s in 1..200i64 {
                let r0 = tau.mul_int(&BigInt::from(s)).floor().unwrap();
                for r in [r0.clone(), r0 + 1] {
                    let d = tau.sub(&Interval::from_ratio(&r, &BigInt::from(s), tau.bits())).abs();
                    let lb = BigRational::new(BigInt::one(), &gap * BigInt::from(s * s));
                    assert!(d.lo() > lb, "{name}: {r}/{s}");
                }
            }
        }
    }
}
