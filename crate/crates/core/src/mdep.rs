//! Multiplicative dependence of two positive integers, and the searches over
//! pairs of sequence terms.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{small_primes, Kind, LucasTable, SequenceParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "decimal")]
    pub base: BigUint,
    /// a = base^s
    pub s: u64,
    /// b = base^t
    pub t: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependenceVerdict {
    pub dependent: bool,
    pub witness: Option<Witness>,
}

pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Small primes q = 1 (mod p) used to reject non-p-th powers cheaply.
fn sieve_moduli(p: u32) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("sieve cache").get(&p) {
        return v.clone();
    }
    let is_prime = |q: u64| q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0);
    let step = if p == 2 { 2 } else { 2 * p as u64 };
    let v: Vec<u64> = (1..).map(|j| j * step + 1).filter(|&q| is_prime(q)).take(8).collect();
    cache.lock().expect("sieve cache").insert(p, v.clone());
    v
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b128 = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// The p-th root of a when a is a perfect p-th power.
pub fn exact_root(a: &BigUint, p: u32) -> Option<BigUint> {
    if p == 1 {
        return Some(a.clone());
    }
    for q in sieve_moduli(p) {
        let r = (a % q).to_u64().expect("small residue");
        if r != 0 && pow_mod(r, (q - 1) / p as u64, q) != 1 {
            return None;
        }
    }
    let root = a.nth_root(p);
    (root.pow(p) == *a).then_some(root)
}

/// a = base^exponent with base not a perfect power (a >= 2).
pub fn primitive_base(a: &BigUint) -> Result<(BigUint, u64)> {
    if *a < BigUint::from(2u32) {
        return Err(Error::domain("primitive base needs a >= 2"));
    }
    let mut base = a.clone();
    let mut e = 1u64;
    for p in small_primes(a.bits()) {
        if p > base.bits() {
            break;
        }
        while let Some(r) = exact_root(&base, p as u32) {
            base = r;
            e *= p;
        }
    }
    Ok((base, e))
}

pub fn mdep_test(a: &BigUint, b: &BigUint) -> Result<DependenceVerdict> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::domain("multiplicative dependence needs positive integers"));
    }
    let one = BigUint::one();
    let verdict = |base: BigUint, s: u64, t: u64| DependenceVerdict { dependent: true, witness: Some(Witness { base, s, t }) };
    match (a.is_one(), b.is_one()) {
        (true, true) => return Ok(verdict(one, 1, 1)),
        (true, false) => {
            let (c, t) = primitive_base(b)?;
            return Ok(verdict(c, 0, t));
        }
        (false, true) => {
            let (c, s) = primitive_base(a)?;
            return Ok(verdict(c, s, 0));
        }
        _ => {}
    }
    let (ca, s) = primitive_base(a)?;
    let (cb, t) = primitive_base(b)?;
    Ok(if ca == cb { verdict(ca, s, t) } else { DependenceVerdict { dependent: false, witness: None } })
}

/// gcd(a, b)^n = 0 (mod a) and gcd(a, b)^m = 0 (mod b), for a = L_n, b = L_m.
pub fn gcd_power_filter_values(ln: &BigUint, lm: &BigUint, n: u64, m: u64) -> bool {
    let g = ln.gcd(lm);
    g.modpow(&BigUint::from(n), ln).is_zero() && g.modpow(&BigUint::from(m), lm).is_zero()
}

pub fn gcd_power_filter(k: usize, n: i64, m: i64) -> Result<bool> {
    if !(n > m && m >= 2) {
        return Err(Error::domain("filter needs n > m >= 2"));
    }
    let mut t = LucasTable::lucas(k)?;
    let ln = t.term(n)?.clone();
    let lm = t.term(m)?.clone();
    Ok(gcd_power_filter_values(&ln, &lm, n as u64, m as u64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchWindow {
    pub k_min: usize,
    pub k_max: usize,
    pub n_max: i64,
    pub m_min: i64,
}

impl SearchWindow {
    pub fn new(k_min: usize, k_max: usize, n_max: i64, m_min: i64) -> Result<Self> {
        if k_min < 2 || k_max < k_min || n_max < 2 || m_min < 0 {
            return Err(Error::domain("search window needs 2 <= k_min <= k_max, n_max >= 2, m_min >= 0"));
        }
        Ok(SearchWindow { k_min, k_max, n_max, m_min })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub k: usize,
    pub m: i64,
    pub n: i64,
    pub witness: Witness,
}

fn table_for(k: usize, n_max: i64, cache: Option<&Path>) -> Result<LucasTable> {
    LucasTable::cached(cache, SequenceParams::new(k, Kind::Lucas)?, n_max)
}

/// Pair-by-pair scan: gcd filter, then the exact test.
pub fn search_k(k: usize, n_max: i64, m_min: i64, cache: Option<&Path>) -> Result<Vec<Hit>> {
    let table = table_for(k, n_max, cache)?;
    let mut hits = Vec::new();
    for n in 2..=n_max {
        let ln = table.get(n).expect("extended");
        for m in m_min.max(0)..n {
            if m == 1 {
                continue;
            }
            let lm = table.get(m).expect("extended");
            // L_0 = 2 has no useful gcd screen
            if m >= 2 && !gcd_power_filter_values(ln, lm, n as u64, m as u64) {
                continue;
            }
            let v = mdep_test(ln, lm)?;
            if let Some(w) = v.witness.filter(|_| v.dependent) {
                hits.push(Hit { k, m, n, witness: swap_witness(w) });
            }
        }
    }
    Ok(hits)
}

/// Witness ordered as (L_m, L_n) = (base^s, base^t).
fn swap_witness(w: Witness) -> Witness {
    Witness { base: w.base, s: w.t, t: w.s }
}

pub fn search(window: &SearchWindow, cache: Option<&Path>) -> Result<Vec<Hit>> {
    let per_k: Vec<Vec<Hit>> = (window.k_min..=window.k_max)
        .into_par_iter()
        .map(|k| search_k(k, window.n_max, window.m_min, cache))
        .collect::<Result<_>>()?;
    Ok(normalize(per_k.into_iter().flatten().collect()))
}

fn normalize(mut hits: Vec<Hit>) -> Vec<Hit> {
    hits.sort_by(|a, b| (a.k, a.n, a.m).cmp(&(b.k, b.n, b.m)));
    hits
}

/// Same result as `search_k`, grouping terms by primitive base: with
/// n > m >= 0, m != 1, a dependent pair forces L_n to be a perfect power
/// (L_n > L_m >= 2), so only perfect-power terms are paired.
pub fn closure_search_k(k: usize, n_max: i64, m_min: i64, cache: Option<&Path>) -> Result<Vec<Hit>> {
    let table = table_for(k, n_max, cache)?;
    let mut buckets: BTreeMap<BigUint, Vec<(i64, u64)>> = BTreeMap::new();
    let mut hits = Vec::new();
    for j in 0..=n_max {
        if j == 1 {
            continue;
        }
        let v = table.get(j).expect("extended");
        if *v < BigUint::from(2u32) {
            continue;
        }
        let (base, e) = if j >= 2 && !is_perfect_power(v) { (v.clone(), 1) } else { primitive_base(v)? };
        let bucket = buckets.entry(base.clone()).or_default();
        if j >= 2 && e > 1 {
            for &(m, s) in bucket.iter() {
                if m >= m_min {
                    hits.push(Hit { k, m, n: j, witness: Witness { base: base.clone(), s, t: e } });
                }
            }
        }
        bucket.push((j, e));
    }
    Ok(normalize(hits))
}

fn is_perfect_power(v: &BigUint) -> bool {
    small_primes(v.bits()).into_iter().any(|p| exact_root(v, p as u32).is_some())
}

pub fn closure_search(window: &SearchWindow, cache: Option<&Path>) -> Result<Vec<Hit>> {
    let per_k: Vec<Vec<Hit>> = (window.k_min..=window.k_max)
        .into_par_iter()
        .map(|k| closure_search_k(k, window.n_max, window.m_min, cache))
        .collect::<Result<_>>()?;
    Ok(normalize(per_k.into_iter().flatten().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn primitive_base_examples() {
        assert_eq!(primitive_base(&u(64)).unwrap(), (u(2), 6));
        assert_eq!(primitive_base(&u(24500)).unwrap(), (u(24500), 1));
        assert_eq!(primitive_base(&u(729)).unwrap(), (u(3), 6));
        assert_eq!(primitive_base(&(u(10).pow(30u32))).unwrap(), (u(10), 30));
        let big = u(6).pow(35u32) * u(7).pow(35u32);
        assert_eq!(primitive_base(&big).unwrap(), (u(42), 35));
    }

    #[test]
    fn mdep_examples() {
        let v = mdep_test(&u(2), &u(4)).unwrap();
        assert!(v.dependent);
        assert_eq!(v.witness.unwrap(), Witness { base: u(2), s: 1, t: 2 });
        assert!(mdep_test(&u(1), &u(5)).unwrap().dependent);
        assert!(!mdep_test(&u(4), &u(7)).unwrap().dependent);
    }

    /// a^x = b^y for some 1 <= x, y <= 10, or equal prime signatures up to scale.
    fn brute(a: u64, b: u64) -> bool {
        let sig = |mut v: u64| {
            let mut out = Vec::new();
            let mut p = 2;
            while v > 1 {
                let mut e = 0;
                while v % p == 0 {
                    v /= p;
                    e += 1;
                }
                if e > 0 {
                    out.push((p, e));
                }
                p += 1;
            }
            out
        };
        for x in 1..=10u32 {
            for y in 1..=10u32 {
                if u(a).pow(x) == u(b).pow(y) {
                    return true;
                }
            }
        }
        let (sa, sb) = (sig(a), sig(b));
        sa.len() == sb.len()
            && sa.iter().zip(&sb).all(|(x, y)| x.0 == y.0)
            && sa.iter().zip(&sb).all(|(x, y)| x.1 * sb[0].1 == y.1 * sa[0].1)
    }

    #[test]
    fn oracle_small() {
        for a in 2..=120u64 {
            for b in 2..=120u64 {
                let v = mdep_test(&u(a), &u(b)).unwrap();
                assert_eq!(v.dependent, brute(a, b), "{a} {b}");
                assert_eq!(v.dependent, mdep_test(&u(b), &u(a)).unwrap().dependent);
                if let Some(w) = v.witness {
                    assert_eq!(w.base.pow(w.s as u32), u(a));
                    assert_eq!(w.base.pow(w.t as u32), u(b));
                }
            }
        }
    }

    #[test]
    fn filter_examples() {
        assert!(!gcd_power_filter(3, 7, 4).unwrap());
        assert!(!gcd_power_filter(2, 6, 3).unwrap());
        assert!(gcd_power_filter_values(&u(64), &u(8), 7, 4));
    }

    #[test]
    fn search_examples() {
        let w = SearchWindow::new(2, 10, 40, 0).unwrap();
        let hits: Vec<(usize, i64, i64)> = search(&w, None).unwrap().into_iter().map(|h| (h.k, h.m, h.n)).collect();
        assert_eq!(hits, vec![(2, 0, 3), (3, 0, 7)]);
        let closure: Vec<(usize, i64, i64)> = closure_search(&w, None).unwrap().into_iter().map(|h| (h.k, h.m, h.n)).collect();
        assert_eq!(closure, hits);
        let w = SearchWindow::new(2, 2, 12, 0).unwrap();
        assert_eq!(search(&w, None).unwrap().len(), 1);
    }

    #[test]
    fn search_and_closure_agree() {
        let w = SearchWindow::new(2, 14, 120, 0).unwrap();
        assert_eq!(search(&w, None).unwrap(), closure_search(&w, None).unwrap());
    }
}
