//! End-to-end proof driver: for each k, the small-n search, the bound on n,
//! the lattice reductions and the closing search, collected in a certificate.

pub mod certificate;
pub mod large_k;
pub mod reduce;

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::norm_of_fk;
use crate::bounds::{bound_n_of_k_with, HeightPolicy};
use crate::error::{Error, Result};
use crate::interval::format_sci_up;
use crate::mdep::{closure_search_k, SearchWindow};

pub use certificate::{replay, validate, ProofCertificate, Solution};
pub use large_k::{eliminate_large_k, eliminate_large_k_with, ChainConstants, LargeKRecord};
pub use reduce::{reduce_small_k, replay_pass, PassRecord, Reduction};

/// Largest n checked directly before the bound on n applies.
pub const SMALL_N: i64 = 50;
/// Largest n checked directly for k = 2.
pub const FIBONACCI_LUCAS_N: i64 = 12;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProveConfig {
    /// Minimum working precision of the logarithms.
    pub precision_bits: u32,
    pub cache_dir: Option<PathBuf>,
    pub policy: HeightPolicy,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig { precision_bits: 256, cache_dir: None, policy: HeightPolicy::Nominal }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearForm {
    /// (y - x) log f_k(alpha) + (y - x) log(2 alpha - 1) + ((m - 1) y - (n - 1) x) log alpha
    Lambda,
    /// -x log f_k(alpha) - x log(2 alpha - 1) - (n - 1) x log alpha + y log L_m
    Lambda1,
}

/// Lambda = 0 forces |N(2 alpha - 1)| = 1 / |N(f_k(alpha))|, that is
/// 2^(k+1) - 3 = (2^(k+1) k^k - (k+1)^(k+1)) / (k - 1)^2.
/// Lambda_1 = 0 forces |N((2 alpha - 1) f_k(alpha))| = L_n^k > 1.
pub fn nonvanishing_check(k: usize, form: LinearForm) -> Result<bool> {
    if k < 2 {
        return Err(Error::domain(format!("nonvanishing check needs k >= 2, got {k}")));
    }
    match form {
        LinearForm::Lambda => {
            let (lhs, rhs) = norm_sides(k);
            if k == 2 {
                return Err(Error::ProofFailed(format!("k = 2: 2^(k+1) - 3 = {lhs} = {rhs}, Lambda may vanish")));
            }
            Ok(lhs != rhs)
        }
        LinearForm::Lambda1 => {
            let (_, rec) = norm_of_fk(k)?;
            Ok(rec.product_below_one)
        }
    }
}

fn norm_sides(k: usize) -> (BigRational, BigRational) {
    let kb = BigInt::from(k);
    let lhs = BigRational::from_integer((BigInt::one() << (k + 1)) - 3);
    let num = (BigInt::one() << (k + 1)) * num_traits::pow(kb.clone(), k) - num_traits::pow(&kb + 1, k + 1);
    let rhs = BigRational::new(num, num_traits::pow(&kb - 1, 2));
    (lhs, rhs)
}

/// Names of the facts taken from the literature.
pub mod axioms {
    pub const PRIMITIVE_DIVISOR: &str = "Carmichael: L_n of the Lucas sequence has a primitive prime divisor for n > 12";
    pub const SMOOTH_LIST: &str = "complete list of k-generalized Lucas numbers L_n with n >= k + 1 and no prime factor above 7";
    pub const MATVEEV: &str = "Matveev lower bound for linear forms in logarithms";
    pub const LMN: &str = "Laurent-Mignotte-Nesterenko lower bound for two logarithms";
    pub const GUZ: &str = "z / (log z)^s < T implies z < 2^s T (log T)^s for T > (4 s^2)^s";
    pub const DE_WEGER: &str = "de Weger lattice bound (distance from the approximation lattice)";
    pub const LEGENDRE: &str = "Legendre: |tau - r/s| > 1 / ((a(M) + 2) s^2) for 0 < s < M";
    pub const POWER_APPROXIMATION: &str = "|L_n^x - 2^((n-2) x) 3^x| < 71 * 2^((n-2) x) 3^x / 2^(2k/5) for k > 1000";
}

fn hits_to_solutions(hits: Vec<crate::mdep::Hit>) -> Vec<Solution> {
    hits.into_iter().map(|h| Solution { m: h.m, n: h.n, witness: h.witness }).collect()
}

fn prove_k2(cfg: &ProveConfig) -> Result<ProofCertificate> {
    let hits = closure_search_k(2, FIBONACCI_LUCAS_N, 0, cfg.cache_dir.as_deref())?;
    let searched = SearchWindow::new(2, 2, FIBONACCI_LUCAS_N, 0)?;
    Ok(ProofCertificate {
        k: 2,
        policy: cfg.policy,
        n_bound_initial: None,
        n_bound_checks: Vec::new(),
        nonvanishing: Vec::new(),
        small_n_solutions: Vec::new(),
        large_k_branch: None,
        reduction: None,
        m_bound_after_lll: None,
        n_bound_final: FIBONACCI_LUCAS_N as u64,
        searched,
        solutions: hits_to_solutions(hits),
        external_axioms: vec![axioms::PRIMITIVE_DIVISOR.into()],
        discrepancies: Vec::new(),
    })
}

/// Full argument for one k in [3, 1000].
pub fn prove_k(k: usize, cfg: &ProveConfig) -> Result<ProofCertificate> {
    if k == 2 {
        return prove_k2(cfg);
    }
    if !(3..=1000).contains(&k) {
        return Err(Error::domain(format!("prove handles 2 <= k <= 1000, got {k}")));
    }
    let cache = cfg.cache_dir.as_deref();
    let small = closure_search_k(k, SMALL_N, 0, cache)?;

    let mut nonvanishing = Vec::new();
    for form in [LinearForm::Lambda, LinearForm::Lambda1] {
        if !nonvanishing_check(k, form)? {
            return Err(Error::ProofFailed(format!("k = {k}: {form:?} may vanish")));
        }
        nonvanishing.push(form);
    }

    let nb = bound_n_of_k_with(k as u64, cfg.policy)?;
    if !nb.all_checks_pass() {
        let bad: Vec<&str> = nb.checks.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.as_str()).collect();
        return Err(Error::ProofFailed(format!("k = {k}: bound on n fails at {bad:?}")));
    }
    log::info!("k = {k}: reducing");
    let red = reduce_small_k(k, cfg)?;
    let n_final = red.n_final;
    log::info!("k = {k}: searching n <= {n_final}");
    let hits = closure_search_k(k, n_final as i64, 0, cache)?;
    let searched = SearchWindow::new(k, k, n_final as i64, 0)?;

    let mut cert = ProofCertificate {
        k,
        policy: cfg.policy,
        n_bound_initial: Some(format_sci_up(&nb.value.hi(), 4)),
        n_bound_checks: nb.checks.clone(),
        nonvanishing,
        small_n_solutions: hits_to_solutions(small),
        large_k_branch: None,
        m_bound_after_lll: Some(red.m_final),
        n_bound_final: n_final,
        reduction: Some(red),
        searched,
        solutions: hits_to_solutions(hits),
        external_axioms: [axioms::SMOOTH_LIST, axioms::MATVEEV, axioms::GUZ, axioms::DE_WEGER]
            .into_iter()
            .map(String::from)
            .collect(),
        discrepancies: Vec::new(),
    };
    cert.discrepancies = certificate::discrepancies(&cert);
    Ok(cert)
}

/// Certificates in ascending k. The k > 1000 chain runs once and is
/// attached to the first certificate.
pub fn prove(k_min: usize, k_max: usize, cfg: &ProveConfig) -> Result<Vec<ProofCertificate>> {
    if k_min < 2 || k_max < k_min || k_max > 1000 {
        return Err(Error::domain(format!("k range must lie in [2, 1000], got {k_min}..{k_max}")));
    }
    let chain = eliminate_large_k_with(cfg.policy)?;
    let mut certs: Vec<ProofCertificate> = (k_min..=k_max).into_par_iter().map(|k| prove_k(k, cfg)).collect::<Result<_>>()?;
    certs.sort_by_key(|c| c.k);
    if let Some(first) = certs.first_mut() {
        for a in [axioms::LMN, axioms::LEGENDRE, axioms::GUZ, axioms::POWER_APPROXIMATION] {
            if !first.external_axioms.iter().any(|x| x == a) {
                first.external_axioms.push(a.into());
            }
        }
        first.large_k_branch = Some(chain);
    }
    Ok(certs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonvanishing_examples() {
        assert!(nonvanishing_check(3, LinearForm::Lambda).unwrap());
        let (l, r) = norm_sides(3);
        assert_eq!((l, r), (BigRational::from_integer(13.into()), BigRational::from_integer(44.into())));
        assert!(matches!(nonvanishing_check(2, LinearForm::Lambda), Err(Error::ProofFailed(_))));
        for k in 3..=40 {
            assert!(nonvanishing_check(k, LinearForm::Lambda).unwrap());
            assert!(nonvanishing_check(k, LinearForm::Lambda1).unwrap());
        }
    }

    #[test]
    fn k2_certificate() {
        let c = prove_k(2, &ProveConfig::default()).unwrap();
        let sol: Vec<(i64, i64)> = c.solutions.iter().map(|s| (s.m, s.n)).collect();
        assert_eq!(sol, vec![(0, 3)]);
        assert!(validate(&c).is_empty());
    }
}
