//! Lattice reduction of the bound on n for a fixed k <= 1000.
//!
//! Branch (a), n <= m^2: |Lambda| < c3 1.5^-m with
//! Lambda = (y - x) log f_k(alpha) + (y - x) log(2 alpha - 1) + ((m - 1) y - (n - 1) x) log alpha.
//! Branch (b), n > m^2: |Lambda_1| < 2 * 1.5^(-n/2) with log L_m as a fourth logarithm.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{dominant_root, f_k_at};
use crate::bounds::{dec, global_n_bound, HeightPolicy};
use crate::config::{PrecisionContext, MAX_BITS};
use crate::error::{Error, Result};
use crate::interval::{format_sci, format_sci_up, ln_int, parse_decimal, Interval};
use crate::lattice::{build_approx_lattice, de_weger_lower_bound, lll_reduce, reduction_step, s_and_t};
use crate::sequences::LucasTable;

use super::ProveConfig;

/// Enlargements of C allowed in one pass.
pub const MAX_ENLARGEMENTS: u32 = 5;
/// Refinement passes of branch (a) after the first one.
pub const MAX_REFINEMENTS: u32 = 5;
/// Successful values of C tried by an adaptive pass.
const ADAPTIVE_TRIES: u32 = 3;
/// Powers of ten an adaptive pass may go past its starting C. For large k
/// the logarithms are nearly dependent (f_k(alpha) alpha is within about
/// 2^-k of 1), so short lattice vectors persist until C exceeds 2^k.
const ADAPTIVE_SPAN: u32 = 400;
const STEP_BITS: u32 = 256;

/// Names of the logarithms, in lattice order.
pub const ETA_NAMES: [&str; 3] = ["log f_k(alpha)", "log(2 alpha - 1)", "log alpha"];

/// Certified logarithms for the approximation lattices of one k.
#[derive(Clone, Debug)]
pub struct Etas {
    pub k: usize,
    pub bits: u32,
    pub base: [Interval; 3],
}

impl Etas {
    pub fn new(k: usize, bits: u32) -> Result<Etas> {
        let a = dominant_root(k, PrecisionContext::with_bits(bits + 32))?.enclosure;
        let f = f_k_at(&a, k)?;
        let g = a.mul_int(&BigInt::from(2)).add_int(&-BigInt::one());
        Ok(Etas { k, bits, base: [f.ln()?, g.ln()?, a.ln()?] })
    }

}

/// How C is chosen in one pass.
#[derive(Clone, Debug)]
pub enum CPlan {
    /// Start at C and multiply by 10 while the reduction asks for more.
    Fixed(BigInt),
    /// Smallest power of ten that can pass, then the best of a few successes.
    Adaptive,
}

/// Inputs and outcome of one reduction pass, enough to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassRecord {
    pub label: String,
    pub eta_names: Vec<String>,
    /// Index m of the extra logarithm log L_m, if any.
    pub lucas_index: Option<i64>,
    pub c: String,
    pub coefficient_bounds: Vec<String>,
    pub c3: String,
    pub c4: String,
    pub enlargements: u32,
    pub c1: String,
    pub delta: String,
    pub s: String,
    pub t: String,
    /// Certified upper bound on the height (m in branch (a), n/2 in branch (b)).
    pub height_bound: u64,
}

/// Exact inputs of a pass.
#[derive(Clone, Debug)]
pub struct PassInput {
    pub label: String,
    pub etas: Vec<Interval>,
    pub eta_names: Vec<String>,
    pub lucas_index: Option<i64>,
    pub xs: Vec<BigInt>,
    pub c3: BigInt,
}

fn c4() -> Interval {
    dec("1.5").ln().expect("log 1.5")
}

const C4_NAME: &str = "log 1.5";

fn sci(q: &num_rational::BigRational) -> String {
    format_sci(q, 6)
}

/// det(L)^(2/d) > T^2 + S is necessary for delta^2 > T^2 + S, since the
/// Gram-Schmidt norms of any basis multiply to det(L).
fn can_pass(det: &BigInt, xs: &[BigInt]) -> bool {
    let (s, t) = s_and_t(xs);
    let need = &t * &t + s;
    let d = xs.len() as i32;
    let lhs = num_rational::BigRational::from_integer(det.abs().pow(2));
    lhs > num_traits::pow::pow(need, d as usize)
}

fn last_floor(eta: &Interval, c: &BigInt) -> Option<BigInt> {
    eta.mul_int(c).floor()
}

enum Attempt {
    Pass(PassRecord, u64),
    /// det(L) too small for any basis.
    Determinant,
    /// delta^2 <= T^2 + S; powers of ten by which delta falls short.
    Short(u32),
}

fn try_c(input: &PassInput, c: &BigInt) -> Result<Attempt> {
    let last = input.etas.last().expect("nonempty");
    let det = last_floor(last, c)
        .ok_or_else(|| Error::NeedsPrecision { context: "floor(C eta_d)".into(), suggested_bits: last.bits() + c.bits() as u32 + 64 })?;
    if !can_pass(&det, &input.xs) {
        return Ok(Attempt::Determinant);
    }
    let basis = build_approx_lattice(&input.etas, c)?;
    let reduced = lll_reduce(&basis)?;
    let y = vec![BigInt::zero(); input.etas.len()];
    let outcome = de_weger_lower_bound(&reduced, &y)?;
    let c3 = Interval::from_int(&input.c3, STEP_BITS);
    match reduction_step(&outcome, c, &c3, &c4(), &input.xs, STEP_BITS) {
        Ok(step) => {
            let h = step.new_bound.max(BigInt::zero());
            let h: u64 = h.try_into().map_err(|_| Error::ProofFailed("height bound overflow".into()))?;
            let c1 = outcome.c1_sq.clone();
            let rec = PassRecord {
                label: input.label.clone(),
                eta_names: input.eta_names.clone(),
                lucas_index: input.lucas_index,
                c: format_sci(&num_rational::BigRational::from_integer(c.clone()), 40),
                coefficient_bounds: input.xs.iter().map(|x| x.to_string()).collect(),
                c3: input.c3.to_string(),
                c4: C4_NAME.into(),
                enlargements: 0,
                c1: format_sci_up(&Interval::from_rational(&c1, 64).sqrt()?.hi(), 6),
                delta: format_sci(&outcome.delta().lo(), 6),
                s: sci(&step.s),
                t: sci(&step.t),
                height_bound: h,
            };
            Ok(Attempt::Pass(rec, h))
        }
        Err(Error::EnlargeC { .. }) => {
            let (s, t) = s_and_t(&input.xs);
            let need = (&t * &t + s).to_integer();
            let have = outcome.delta_sq.to_integer().max(BigInt::one());
            let gap = need.to_string().len().saturating_sub(have.to_string().len()) as u32;
            Ok(Attempt::Short(gap / 2))
        }
        Err(e) => Err(e),
    }
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10).pow(e)
}

/// Smallest e with 10^e |eta_d| possibly passing the determinant check.
fn adaptive_start(input: &PassInput) -> u32 {
    let (s, t) = s_and_t(&input.xs);
    let need = (&t * &t + s).to_integer();
    let d = input.xs.len() as f64;
    let digits = need.to_string().len() as f64;
    let eta = input.etas.last().expect("nonempty").abs().lo_f64().max(1e-300);
    (d / 2.0 * (digits - 1.0) - eta.log10()).floor().max(1.0) as u32
}

/// One reduction pass; returns the record and the height bound.
pub fn lattice_pass(input: &PassInput, plan: &CPlan) -> Result<(PassRecord, u64)> {
    match plan {
        CPlan::Fixed(c0) => {
            let mut c = c0.clone();
            for enl in 0..=MAX_ENLARGEMENTS {
                if let Attempt::Pass(mut rec, h) = try_c(input, &c)? {
                    rec.enlargements = enl;
                    return Ok((rec, h));
                }
                log::info!("{}: delta^2 <= T^2 + S at C = {}, enlarging", input.label, format_sci(&c.clone().into(), 3));
                c *= 10;
            }
            Err(Error::EnlargeC { suggested: c })
        }
        CPlan::Adaptive => {
            let mut e = adaptive_start(input);
            let mut best: Option<(PassRecord, u64)> = None;
            let mut found = 0;
            let mut misses = 0;
            while found < ADAPTIVE_TRIES {
                let mut step = 1;
                match try_c(input, &pow10(e))? {
                    Attempt::Pass(rec, h) => {
                        found += 1;
                        if best.as_ref().map_or(true, |(_, b)| h < *b) {
                            best = Some((rec, h));
                        }
                    }
                    _ if found > 0 => found += 1,
                    miss => {
                        if let Attempt::Short(gap) = miss {
                            step = gap.max(1);
                        }
                        misses += step;
                        if misses > ADAPTIVE_SPAN {
                            return Err(Error::EnlargeC { suggested: pow10(e + step) });
                        }
                    }
                }
                e += step;
            }
            Ok(best.expect("at least one success"))
        }
    }
}

/// Runs a pass, raising precision of the logarithms when a floor is ambiguous.
fn pass_with_etas<F>(k: usize, plan: &CPlan, cache: &EtaCache, build: F) -> Result<(PassRecord, u64)>
where
    F: Fn(&Etas) -> PassInput,
{
    let mut bits = plan_bits(plan).max(cache.min_bits);
    loop {
        let etas = cache.get(k, bits)?;
        match lattice_pass(&build(&etas), plan) {
            Err(Error::NeedsPrecision { suggested_bits, context }) => {
                if suggested_bits > MAX_BITS || suggested_bits <= bits {
                    return Err(Error::PrecisionExhausted { context, bits });
                }
                bits = suggested_bits;
            }
            other => return other,
        }
    }
}

fn plan_bits(plan: &CPlan) -> u32 {
    match plan {
        CPlan::Fixed(c) => c.bits() as u32 + 64 + 64,
        CPlan::Adaptive => 256,
    }
}

/// Logarithms per (k, precision), shared across the branch (b) loop.
#[derive(Default)]
pub struct EtaCache {
    map: std::sync::Mutex<HashMap<usize, Arc<Etas>>>,
    min_bits: u32,
}

impl EtaCache {
    pub fn with_min_bits(min_bits: u32) -> EtaCache {
        EtaCache { map: Default::default(), min_bits }
    }

    pub fn get(&self, k: usize, bits: u32) -> Result<Arc<Etas>> {
        if let Some(e) = self.map.lock().expect("eta cache").get(&k) {
            if e.bits >= bits {
                return Ok(e.clone());
            }
        }
        let e = Arc::new(Etas::new(k, bits)?);
        self.map.lock().expect("eta cache").insert(k, e.clone());
        Ok(e)
    }
}

/// Constants of the reduction for one height policy.
#[derive(Clone, Debug)]
pub struct ReduceParams {
    pub policy: HeightPolicy,
    /// Global bound on n over 3 <= k <= 1000, two significant digits.
    pub n0: BigInt,
    /// c3 of the first branch (a) pass: 38 m for every m allowed by the bound on m.
    pub c3_first: BigInt,
    pub c_first_a: CPlan,
    pub c_first_b: CPlan,
}

impl ReduceParams {
    pub fn for_policy(policy: HeightPolicy) -> Result<ReduceParams> {
        let g = global_n_bound(1000, policy)?;
        let n0 = parse_decimal(&format_sci_up(&g.hi(), 2))?.ceil().to_integer();
        let (c3_first, c_first_a, c_first_b) = match policy {
            HeightPolicy::Nominal => (
                pow10(28),
                CPlan::Fixed(BigInt::from(6) * pow10(194)),
                CPlan::Fixed(pow10(512)),
            ),
            HeightPolicy::Certified => (pow10(31), CPlan::Adaptive, CPlan::Adaptive),
        };
        Ok(ReduceParams { policy, n0, c3_first, c_first_a, c_first_b })
    }

    /// 38 m < c3 for m below the branch (a) envelope at k = 1000.
    pub fn c3_covers_envelope(&self) -> Result<bool> {
        let (coef, p) = match self.policy {
            HeightPolicy::Nominal => ("5.3e14", 3),
            HeightPolicy::Certified => ("5.4e14", 4),
        };
        let k = Interval::from_i64(1000, 128);
        let m = dec(coef).mul(&k.powi(p)?).mul(&k.ln()?.powi(3)?);
        Ok(m.mul_int(&BigInt::from(38)).certainly_lt(&Interval::from_int(&self.c3_first, 128)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchBEntry {
    pub m: i64,
    pub first_c: String,
    /// Bound on n/2 after the first pass.
    pub first_half_n: u64,
    pub last_c: Option<String>,
    pub last_half_n: u64,
    /// Whether n > m^2 is still possible under the final bound.
    pub open: bool,
}

impl BranchBEntry {
    pub fn n_bound(&self) -> u64 {
        2 * self.last_half_n
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Reduction {
    pub k: usize,
    pub policy: HeightPolicy,
    pub n0: String,
    pub branch_a: Vec<PassRecord>,
    /// m bound after the first pass (valid in both branches).
    pub m_first: u64,
    /// m bound after the last branch (a) pass.
    pub m_final: u64,
    pub branch_b: Vec<BranchBEntry>,
    /// Full records of the passes for the m giving the largest branch (b) bound.
    pub branch_b_binding: Vec<PassRecord>,
    /// Bound on n when n > m^2.
    pub n_b: u64,
    /// max(50, 14^2, m_final^2, n_b).
    pub n_final: u64,
}

/// Which logarithms enter the lattice. In both linear forms log f_k(alpha)
/// and log(2 alpha - 1) carry the same coefficient; `Joined` uses their sum
/// as a single logarithm, `Split` keeps them apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Split,
    Joined,
}

pub const JOINED_NAME: &str = "log((2 alpha - 1) f_k(alpha))";

fn lucas_name(m: i64) -> String {
    format!("log L_{m}")
}

fn names(form: Form, m: Option<i64>) -> Vec<String> {
    let mut v: Vec<String> = match form {
        Form::Split => ETA_NAMES.iter().map(|s| s.to_string()).collect(),
        Form::Joined => vec![JOINED_NAME.into(), ETA_NAMES[2].into()],
    };
    v.extend(m.map(lucas_name));
    v
}

/// Enclosures for named logarithms.
pub fn resolve(e: &Etas, names: &[String], lm: Option<&BigUint>) -> Result<Vec<Interval>> {
    names
        .iter()
        .map(|name| match name.as_str() {
            n if n == ETA_NAMES[0] => Ok(e.base[0].clone()),
            n if n == ETA_NAMES[1] => Ok(e.base[1].clone()),
            n if n == ETA_NAMES[2] => Ok(e.base[2].clone()),
            n if n == JOINED_NAME => Ok(e.base[0].add(&e.base[1])),
            n if n.starts_with("log L_") => lm
                .map(|l| ln_int(l, e.bits + 32))
                .ok_or_else(|| Error::domain(format!("{n} needs the Lucas term"))),
            n => Err(Error::domain(format!("unknown logarithm {n:?}"))),
        })
        .collect()
}

/// Coefficient bounds from n (and m) for branch (a):
/// |y - x| < n and |(m - 1) y - (n - 1) x| < 9n.
fn branch_a_bounds(form: Form, n: &BigInt) -> Vec<BigInt> {
    match form {
        Form::Split => vec![n * 9; 3],
        Form::Joined => vec![n.clone(), n * 9],
    }
}

/// Branch (b): |x|, |y| < n and |(n - 1) x| < n^2.
fn branch_b_bounds(form: Form, n: &BigInt) -> Vec<BigInt> {
    match form {
        Form::Split => vec![n * n; 4],
        Form::Joined => vec![n.clone(), n * n, n.clone()],
    }
}

fn branch_a_input(e: &Etas, form: Form, n: &BigInt, c3: &BigInt, label: &str) -> PassInput {
    let eta_names = names(form, None);
    PassInput {
        label: label.into(),
        etas: resolve(e, &eta_names, None).expect("known names"),
        eta_names,
        lucas_index: None,
        xs: branch_a_bounds(form, n),
        c3: c3.clone(),
    }
}

fn branch_b_input(e: &Etas, form: Form, lm: &BigUint, m: i64, n: &BigInt, label: &str) -> PassInput {
    let eta_names = names(form, Some(m));
    PassInput {
        label: label.into(),
        etas: resolve(e, &eta_names, Some(lm)).expect("known names"),
        eta_names,
        lucas_index: Some(m),
        xs: branch_b_bounds(form, n),
        c3: BigInt::from(2),
    }
}

/// First pass in the split form; when the lattice keeps a short vector
/// (large k, where f_k(alpha) alpha is close to 1) the joined form.
fn first_pass<F>(k: usize, plan: &CPlan, cache: &EtaCache, build: F) -> Result<(PassRecord, u64)>
where
    F: Fn(&Etas, Form) -> PassInput,
{
    match pass_with_etas(k, plan, cache, |e| build(e, Form::Split)) {
        Err(Error::EnlargeC { .. }) => {
            log::info!("k = {k}: split form exhausted its enlargements, using the joined form");
            pass_with_etas(k, &CPlan::Adaptive, cache, |e| build(e, Form::Joined))
        }
        other => other,
    }
}

/// Branch (a) passes; returns the records and the final m bound.
pub fn branch_a(k: usize, params: &ReduceParams, cache: &EtaCache) -> Result<Vec<PassRecord>> {
    let (first, mut m) = first_pass(k, &params.c_first_a, cache, |e, f| branch_a_input(e, f, &params.n0, &params.c3_first, "a/1"))?;
    let mut recs = vec![first];
    for i in 0..MAX_REFINEMENTS {
        let n = BigInt::from(m) * m;
        let c3 = BigInt::from(38 * m);
        let label = format!("a/{}", i + 2);
        let (rec, h) = pass_with_etas(k, &CPlan::Adaptive, cache, |e| branch_a_input(e, Form::Joined, &n, &c3, &label))?;
        if h >= m {
            break;
        }
        m = h;
        recs.push(rec);
    }
    Ok(recs)
}

/// Branch (b) for one m: first pass from the global bound, then refinements
/// while n > m^2 remains possible.
pub fn branch_b_for_m(
    k: usize,
    m: i64,
    lm: &BigUint,
    params: &ReduceParams,
    cache: &EtaCache,
) -> Result<(BranchBEntry, Vec<PassRecord>)> {
    let n0 = params.n0.clone();
    let (first, h1) = first_pass(k, &params.c_first_b, cache, |e, f| branch_b_input(e, f, lm, m, &n0, "b/1"))?;
    let mut entry = BranchBEntry {
        m,
        first_c: first.c.clone(),
        first_half_n: h1,
        last_c: None,
        last_half_n: h1,
        open: ((m * m) as u64) < 2 * h1,
    };
    let mut recs = vec![first];
    let mut i = 0;
    while entry.open && i < MAX_REFINEMENTS {
        let n = BigInt::from(2 * entry.last_half_n);
        let label = format!("b/{}", i + 2);
        let (rec, h) = pass_with_etas(k, &CPlan::Adaptive, cache, |e| branch_b_input(e, Form::Joined, lm, m, &n, &label))?;
        i += 1;
        if h >= entry.last_half_n {
            break;
        }
        entry.last_c = Some(rec.c.clone());
        entry.last_half_n = h;
        entry.open = ((m * m) as u64) < 2 * h;
        recs.push(rec);
    }
    Ok((entry, recs))
}

/// Both branches for one k.
pub fn reduce_small_k(k: usize, cfg: &ProveConfig) -> Result<Reduction> {
    let policy = cfg.policy;
    let cache_dir = cfg.cache_dir.as_deref();
    if !(3..=1000).contains(&k) {
        return Err(Error::domain(format!("reduction needs 3 <= k <= 1000, got {k}")));
    }
    let params = ReduceParams::for_policy(policy)?;
    if !params.c3_covers_envelope()? {
        return Err(Error::ProofFailed("c3 does not cover 38 m".into()));
    }
    let cache = EtaCache::with_min_bits(cfg.precision_bits);
    let a = branch_a(k, &params, &cache)?;
    let m_first = a[0].height_bound;
    let m_final = a.last().expect("first pass").height_bound;

    let ms: Vec<i64> = std::iter::once(0).chain(2..=m_first as i64).collect();
    let table = LucasTable::cached(cache_dir, crate::sequences::SequenceParams::lucas(k)?, m_first as i64)?;
    let per_m: Vec<(BranchBEntry, Vec<PassRecord>)> = ms
        .par_iter()
        .map(|&m| branch_b_for_m(k, m, table.get(m).expect("extended"), &params, &cache))
        .collect::<Result<_>>()?;
    let binding = per_m
        .iter()
        .filter(|(e, _)| e.open)
        .max_by_key(|(e, _)| (e.last_half_n, -e.m));
    let n_b = binding.map_or(0, |(e, _)| e.n_bound());
    let branch_b_binding = binding.map(|(_, r)| r.clone()).unwrap_or_default();
    let n_final = [50, 14 * 14, m_final * m_final, n_b].into_iter().max().expect("nonempty");
    Ok(Reduction {
        k,
        policy,
        n0: params.n0.to_string(),
        branch_a: a,
        m_first,
        m_final,
        branch_b: per_m.into_iter().map(|(e, _)| e).collect(),
        branch_b_binding,
        n_b,
        n_final,
    })
}

/// Recomputes a recorded pass at the recorded C and compares the outcome.
pub fn replay_pass(k: usize, rec: &PassRecord, cache_dir: Option<&std::path::Path>) -> Result<bool> {
    let c = parse_decimal(&rec.c)?;
    if !c.is_integer() || !c.is_positive() {
        return Err(Error::domain(format!("recorded C is not a positive integer: {}", rec.c)));
    }
    let c = c.to_integer();
    let xs: Vec<BigInt> = rec
        .coefficient_bounds
        .iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::domain(format!("bad coefficient bound {s}"))))
        .collect::<Result<_>>()?;
    let c3: BigInt = rec.c3.parse().map_err(|_| Error::domain(format!("bad c3 {}", rec.c3)))?;
    let cache = EtaCache::default();
    let lm = match rec.lucas_index {
        Some(m) => Some(LucasTable::cached(cache_dir, crate::sequences::SequenceParams::lucas(k)?, m.max(1))?.get(m).expect("extended").clone()),
        None => None,
    };
    let mut bits = c.bits() as u32 + 128;
    loop {
        let e = cache.get(k, bits)?;
        let etas = resolve(&e, &rec.eta_names, lm.as_ref())?;
        let input = PassInput {
            label: rec.label.clone(),
            etas,
            eta_names: rec.eta_names.clone(),
            lucas_index: rec.lucas_index,
            xs: xs.clone(),
            c3: c3.clone(),
        };
        match try_c(&input, &c) {
            Ok(Attempt::Pass(again, _)) => return Ok(PassRecord { enlargements: rec.enlargements, ..again } == *rec),
            Ok(_) => return Ok(false),
            Err(Error::NeedsPrecision { suggested_bits, .. }) if suggested_bits > bits && suggested_bits <= MAX_BITS => bits = suggested_bits,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn etas_at_k3() {
        let e = Etas::new(3, 256).unwrap();
        // alpha(3) = 1.839286755..., log alpha = 0.6093778633...
        assert!((e.base[2].to_f64() - 0.6093778633).abs() < 1e-9);
        assert!(e.base.iter().all(|x| x.width_log2().map_or(true, |w| w < -200)));
    }

    #[test]
    fn determinant_precheck_is_necessary() {
        let xs = vec![BigInt::from(1000), BigInt::from(1000), BigInt::from(999)];
        let (s, t) = s_and_t(&xs);
        let need = (&t * &t + s).to_integer();
        // det^2 just above need^3 passes, just below fails
        let det = need.pow(3).sqrt() + 1;
        assert!(can_pass(&det, &xs));
        assert!(!can_pass(&(det - 2), &xs));
    }

    #[test]
    fn nominal_params() {
        let p = ReduceParams::for_policy(HeightPolicy::Nominal).unwrap();
        assert_eq!(p.n0, BigInt::from(93) * pow10(62));
        assert!(p.c3_covers_envelope().unwrap());
        let c = ReduceParams::for_policy(HeightPolicy::Certified).unwrap();
        assert!(c.c3_covers_envelope().unwrap());
    }

    #[test]
    fn branch_a_k3_first_pass() {
        let params = ReduceParams::for_policy(HeightPolicy::Nominal).unwrap();
        let cache = EtaCache::default();
        let (rec, m) = pass_with_etas(3, &params.c_first_a, &cache, |e| branch_a_input(e, Form::Split, &params.n0, &params.c3_first, "a/1")).unwrap();
        assert!(m <= 935, "m <= {m}");
        assert!(replay_pass(3, &rec, None).unwrap());
    }
}
