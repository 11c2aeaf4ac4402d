//! k-generalized Lucas and Fibonacci terms.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Lucas,
    Fibonacci,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Lucas => "lucas",
            Kind::Fibonacci => "fibonacci",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequenceParams {
    pub k: usize,
    pub kind: Kind,
}

impl SequenceParams {
    pub fn new(k: usize, kind: Kind) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain(format!("order k must be at least 2, got {k}")));
        }
        Ok(SequenceParams { k, kind })
    }

    pub fn lucas(k: usize) -> Result<Self> {
        Self::new(k, Kind::Lucas)
    }

    /// Smallest valid index, 2 - k.
    pub fn first_index(&self) -> i64 {
        2 - self.k as i64
    }
}

/// Growable table of terms for one order. Index `n` is stored at
/// position `n - (2 - k)`; the k - 2 leading zeros are kept explicitly.
#[derive(Clone, Debug)]
pub struct LucasTable {
    params: SequenceParams,
    terms: Vec<BigUint>,
    // sum of the last k stored terms
    window: BigUint,
}

impl LucasTable {
    pub fn new(params: SequenceParams) -> Self {
        let k = params.k;
        let mut terms = vec![BigUint::zero(); k];
        match params.kind {
            Kind::Lucas => {
                terms[k - 2] = BigUint::from(2u32);
                terms[k - 1] = BigUint::one();
            }
            Kind::Fibonacci => {
                terms[k - 1] = BigUint::one();
            }
        }
        let window = terms.iter().sum();
        LucasTable { params, terms, window }
    }

    pub fn lucas(k: usize) -> Result<Self> {
        Ok(Self::new(SequenceParams::lucas(k)?))
    }

    pub fn params(&self) -> SequenceParams {
        self.params
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    /// Largest index currently stored.
    pub fn max_index(&self) -> i64 {
        self.terms.len() as i64 + self.params.first_index() - 1
    }

    fn slot(&self, n: i64) -> Result<usize> {
        let first = self.params.first_index();
        if n < first {
            return Err(Error::domain(format!("index {n} below {first} for k = {}", self.params.k)));
        }
        Ok((n - first) as usize)
    }

    /// Extend the table through index `n`.
    pub fn extend_to(&mut self, n: i64) -> Result<()> {
        let slot = self.slot(n)?;
        let k = self.params.k;
        self.terms.reserve(slot + 1 - self.terms.len().min(slot + 1));
        while self.terms.len() <= slot {
            let next = self.window.clone();
            let len = self.terms.len();
            self.window += &next;
            self.window -= &self.terms[len - k];
            self.terms.push(next);
        }
        Ok(())
    }

    pub fn term(&mut self, n: i64) -> Result<&BigUint> {
        self.extend_to(n)?;
        let slot = self.slot(n)?;
        Ok(&self.terms[slot])
    }

    /// Read access to an already computed term.
    pub fn get(&self, n: i64) -> Option<&BigUint> {
        let slot = self.slot(n).ok()?;
        self.terms.get(slot)
    }

    /// Terms from index `from` through the current maximum.
    pub fn range(&self, from: i64) -> impl Iterator<Item = (i64, &BigUint)> {
        let first = self.params.first_index();
        let start = (from.max(first) - first) as usize;
        self.terms.iter().enumerate().skip(start).map(move |(i, t)| (i as i64 + first, t))
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = cache_path(dir, self.params);
        let doc = CacheFile {
            k: self.params.k,
            kind: self.params.kind.name().to_string(),
            terms: self.terms.iter().map(|t| t.to_str_radix(10)).collect(),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, &doc)?;
        tmp.flush()?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(path)
    }

    /// Load a cached table, checking the recurrence on every stored term.
    pub fn load(dir: &Path, params: SequenceParams) -> Result<Option<Self>> {
        let path = cache_path(dir, params);
        if !path.exists() {
            return Ok(None);
        }
        let doc: CacheFile = serde_json::from_slice(&fs::read(&path)?)?;
        if doc.k != params.k || doc.kind != params.kind.name() {
            return Err(Error::domain(format!("cache file {} is for another sequence", path.display())));
        }
        let mut table = LucasTable::new(params);
        let last = doc.terms.len() as i64 + params.first_index() - 1;
        table.extend_to(last)?;
        for (i, s) in doc.terms.iter().enumerate() {
            let v = BigUint::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| Error::domain(format!("bad term in cache: {s}")))?;
            if v != table.terms[i] {
                return Err(Error::domain(format!("cache file {} disagrees with recurrence", path.display())));
            }
        }
        Ok(Some(table))
    }

    /// Load from `dir` if present, else build; extended to `n` and saved back.
    pub fn cached(dir: Option<&Path>, params: SequenceParams, n: i64) -> Result<Self> {
        let mut table = match dir {
            Some(d) => Self::load(d, params)?.unwrap_or_else(|| Self::new(params)),
            None => Self::new(params),
        };
        let had = table.max_index();
        table.extend_to(n)?;
        if let Some(d) = dir {
            if table.max_index() > had {
                table.save(d)?;
            }
        }
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    k: usize,
    kind: String,
    terms: Vec<String>,
}

fn cache_path(dir: &Path, params: SequenceParams) -> PathBuf {
    dir.join(format!("{}-k{}.json", params.kind.name(), params.k))
}

/// Single term without keeping a table.
pub fn lucas_term(params: SequenceParams, n: i64) -> Result<BigUint> {
    let mut t = LucasTable::new(params);
    Ok(t.term(n)?.clone())
}

/// True when L_n = 3 * 2^(n-2) for all 2 <= n <= k.
pub fn check_power_identity(table: &mut LucasTable) -> Result<bool> {
    if table.params().kind != Kind::Lucas {
        return Err(Error::domain("power identity applies to the Lucas kind only"));
    }
    let k = table.k() as i64;
    for n in 2..=k {
        let expected = BigUint::from(3u32) << (n - 2) as usize;
        if table.term(n)? != &expected {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conservative check of alpha^(n-1) <= L_n <= 2 alpha^n given
/// alpha_lo <= alpha <= alpha_hi.
pub fn check_growth_bounds(
    table: &mut LucasTable,
    n: i64,
    alpha_lo: &BigRational,
    alpha_hi: &BigRational,
) -> Result<bool> {
    if n < 1 {
        return Err(Error::domain("growth bounds need n >= 1"));
    }
    let l = BigRational::from_integer(table.term(n)?.clone().into());
    let e = (n - 1) as i32;
    let lower = num_traits::pow::Pow::pow(alpha_lo, e);
    let upper = num_traits::pow::Pow::pow(alpha_hi, e + 1) * BigRational::from_integer(2.into());
    Ok(lower <= l && l <= upper)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    Smooth(BTreeMap<u64, u32>),
    NotSmooth { partial: BTreeMap<u64, u32>, cofactor: BigUint },
}

impl Smoothness {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Smoothness::Smooth(_))
    }
}

/// Trial division by the primes up to `prime_bound`.
pub fn factor_smooth(value: &BigUint, prime_bound: u64) -> Result<Smoothness> {
    if value.is_zero() {
        return Err(Error::domain("factor_smooth needs a positive value"));
    }
    if prime_bound < 2 {
        return Err(Error::domain("prime bound must be at least 2"));
    }
    let mut rest = value.clone();
    let mut found = BTreeMap::new();
    for p in small_primes(prime_bound) {
        let bp = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            found.insert(p, e);
        }
    }
    if rest.is_one() {
        Ok(Smoothness::Smooth(found))
    } else {
        Ok(Smoothness::NotSmooth { partial: found, cofactor: rest })
    }
}

/// Primes up to `bound` by a plain sieve.
pub fn small_primes(bound: u64) -> Vec<u64> {
    let b = bound as usize;
    if b < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; b + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= b {
        if sieve[i] {
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i as u64).collect()
}

/// Exact value as f64 when it fits, for diagnostics.
pub fn approx(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(pairs: &[(u64, u32)]) -> Smoothness {
        Smoothness::Smooth(pairs.iter().copied().collect())
    }

    #[test]
    fn spot_values() {
        assert_eq!(lucas_term(SequenceParams::lucas(2).unwrap(), 3).unwrap(), BigUint::from(4u32));
        assert_eq!(lucas_term(SequenceParams::lucas(5).unwrap(), 0).unwrap(), BigUint::from(2u32));
        assert_eq!(lucas_term(SequenceParams::lucas(10).unwrap(), 15).unwrap(), BigUint::from(24500u32));
        assert!(lucas_term(SequenceParams::lucas(4).unwrap(), -3).is_err());
        assert_eq!(lucas_term(SequenceParams::lucas(4).unwrap(), -2).unwrap(), BigUint::zero());
        // classical Lucas and Fibonacci
        let l: Vec<u32> = (0..10).map(|n| lucas_term(SequenceParams::lucas(2).unwrap(), n).unwrap().to_u32().unwrap()).collect();
        assert_eq!(l, [2, 1, 3, 4, 7, 11, 18, 29, 47, 76]);
        let fib = SequenceParams::new(3, Kind::Fibonacci).unwrap();
        let f: Vec<u32> = (1..10).map(|n| lucas_term(fib, n).unwrap().to_u32().unwrap()).collect();
        assert_eq!(f, [1, 1, 2, 4, 7, 13, 24, 44, 81]);
    }

    #[test]
    fn smooth_fixture_list() {
        let cases: [(usize, i64, &[(u64, u32)]); 10] = [
            (2, 3, &[(2, 2)]),
            (2, 4, &[(7, 1)]),
            (2, 6, &[(2, 1), (3, 2)]),
            (3, 4, &[(2, 1), (5, 1)]),
            (3, 6, &[(5, 1), (7, 1)]),
            (3, 7, &[(2, 6)]),
            (3, 12, &[(2, 1), (3, 3), (5, 2)]),
            (3, 15, &[(2, 4), (3, 1), (5, 2), (7, 1)]),
            (4, 8, &[(2, 5), (5, 1)]),
            (10, 15, &[(2, 2), (5, 3), (7, 2)]),
        ];
        for (k, n, f) in cases {
            let v = lucas_term(SequenceParams::lucas(k).unwrap(), n).unwrap();
            assert_eq!(factor_smooth(&v, 7).unwrap(), fact(f), "k={k} n={n}");
        }
    }

    #[test]
    fn factor_edges() {
        assert_eq!(factor_smooth(&BigUint::from(64u32), 7).unwrap(), fact(&[(2, 6)]));
        assert_eq!(factor_smooth(&BigUint::one(), 7).unwrap(), fact(&[]));
        match factor_smooth(&BigUint::from(35u32), 3).unwrap() {
            Smoothness::NotSmooth { cofactor, partial } => {
                assert_eq!(cofactor, BigUint::from(35u32));
                assert!(partial.is_empty());
            }
            s => panic!("{s:?}"),
        }
        assert!(factor_smooth(&BigUint::zero(), 7).is_err());
    }

    #[test]
    fn power_identity() {
        for k in [2, 20, 60] {
            assert!(check_power_identity(&mut LucasTable::lucas(k).unwrap()).unwrap());
        }
    }

    #[test]
    fn growth_bounds_small() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let mut t = LucasTable::lucas(2).unwrap();
        assert!(check_growth_bounds(&mut t, 5, &q(1618, 1000), &q(16181, 10000)).unwrap());
        let mut t3 = LucasTable::lucas(3).unwrap();
        assert!(check_growth_bounds(&mut t3, 1, &q(7, 4), &q(2, 1)).unwrap());
        // an upper endpoint far below alpha breaks the upper bound
        assert!(!check_growth_bounds(&mut t3, 60, &q(7, 4), &q(3, 2)).unwrap());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = SequenceParams::lucas(7).unwrap();
        let t = LucasTable::cached(Some(dir.path()), p, 200).unwrap();
        let back = LucasTable::load(dir.path(), p).unwrap().unwrap();
        assert_eq!(back.max_index(), 200);
        assert_eq!(back.get(200), t.get(200));
        let raw: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("lucas-k7.json")).unwrap()).unwrap();
        assert_eq!(raw["k"], 7);
        assert_eq!(raw["kind"], "lucas");
        assert_eq!(raw["terms"][4], "0");
        assert_eq!(raw["terms"][5], "2");
        assert_eq!(raw["terms"][6], "1");
    }
}
