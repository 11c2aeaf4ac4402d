//! Elimination of k > 1000: a two-logarithm form in log 2 and log 3 bounds k
//! and n, then Legendre's gap bound on log 3 / log 2 contradicts k > 1000.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bounds::{dec, guz_bound, int, ln_of, ln_u64, HeightPolicy};
use crate::cfrac::{default_bits, expand, legendre_gap, named_constant};
use crate::error::{Error, Result};
use crate::interval::{format_sci_up, parse_decimal, Interval};

/// n < c k^p (log k)^q for every k >= 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthForm {
    pub c: String,
    pub p: u32,
    pub q: u32,
}

impl GrowthForm {
    pub fn for_policy(policy: HeightPolicy) -> GrowthForm {
        GrowthForm { c: "8.5e34".into(), p: policy.k_power(), q: 6 }
    }

    pub fn c(&self) -> Interval {
        dec(&self.c)
    }

    pub fn eval(&self, k: &Interval) -> Result<Interval> {
        Ok(self.c().mul(&k.powi(self.p as i64)?).mul(&ln_of(k)?.powi(self.q as i64)?))
    }
}

/// Rounded constants of the chain, each checked against the exact value it
/// stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConstants {
    /// 2-adic approximation constant (trusted).
    pub approx: u64,
    /// >= 24.34 * 2 * 2
    pub lmn: u64,
    /// >= lmn / ((2/5) log 2)
    pub k_coef: u64,
    /// >= log(4 approx) / ((2/5) log 2)
    pub k_shift: u64,
    /// >= c^2
    pub bprime: String,
    /// >= log(bprime) + 0.14
    pub log_head: u64,
    /// >= log_head / log 1000 + 2p + 2q
    pub log_coef: u64,
    /// >= k_coef log_coef^2 + k_shift / (log 1000)^2
    pub guz2_t: String,
    /// >= 2^2 T (log T)^2
    pub k_bound: String,
    /// >= c k_bound^p (log k_bound)^q
    pub n_bound: String,
    /// power of ten above n_bound
    pub m: String,
    /// >= 4 approx / log 2
    pub legendre_coef: u64,
    /// >= legendre_coef * gap * c
    pub d: String,
    /// >= log d
    pub log_d: u64,
    /// >= log_d / log 1000 + p + q
    pub log_coef2: u64,
    /// >= log_coef2 / ((2/5) log 2)
    pub guz1_t: u64,
}

impl ChainConstants {
    /// Constants as printed in the source argument for n < 8.5e34 k^8 (log k)^6.
    pub fn printed() -> ChainConstants {
        ChainConstants {
            approx: 71,
            lmn: 98,
            k_coef: 354,
            k_shift: 21,
            bprime: "7.3e69".into(),
            log_head: 162,
            log_coef: 52,
            guz2_t: "1e6".into(),
            k_bound: "7.7e8".into(),
            n_bound: "7.8e113".into(),
            m: "1e114".into(),
            legendre_coef: 410,
            d: "3.6e39".into(),
            log_d: 92,
            log_coef2: 28,
            guz1_t: 101,
        }
    }
}

fn ceil_u64(x: &Interval) -> u64 {
    let h = x.hi();
    let c = h.ceil().to_integer();
    c.try_into().expect("constant fits in u64")
}

fn sci_up(x: &Interval, sig: u32) -> String {
    format_sci_up(&x.hi(), sig as usize)
}

fn num(s: &str) -> Result<Interval> {
    Interval::from_decimal(s, crate::bounds::BITS)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainStep {
    pub label: String,
    pub value: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LegendreRecord {
    pub m: String,
    pub index: usize,
    pub max_quotient: String,
    pub max_index: usize,
    pub gap: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LargeKRecord {
    pub policy: HeightPolicy,
    pub growth: GrowthForm,
    pub constants: ChainConstants,
    pub steps: Vec<ChainStep>,
    pub lmn_k_bound: String,
    pub n_bound: String,
    pub legendre: LegendreRecord,
    /// Final route: "guz" (k below the printed bound) or "monotone".
    pub route: String,
    pub final_k_bound: u64,
}

struct Steps(Vec<ChainStep>);

impl Steps {
    fn check(&mut self, label: &str, value: &Interval, holds: bool) {
        self.0.push(ChainStep { label: label.into(), value: value.to_string(), holds });
    }

    fn lt(&mut self, label: &str, a: &Interval, b: &Interval) {
        let holds = a.certainly_lt(b);
        self.0.push(ChainStep { label: label.into(), value: format!("{} < {}", sci_up(a, 6), sci_up(b, 6)), holds });
    }

    fn all_hold(&self) -> Option<&ChainStep> {
        self.0.iter().find(|s| !s.holds)
    }
}

/// (2/5) k log 2 - log(a) - p log k - q log log k > 0 for every k >= 1001.
fn exceeds_from_1001(steps: &mut Steps, label: &str, a: &Interval, p: u32, q: u32) -> Result<()> {
    let k = int(1001);
    let lk = ln_u64(1001);
    let slope = dec("0.4").mul(&ln_u64(2));
    let f = slope.mul(&k).sub(&ln_of(a)?).sub(&lk.mul(&int(p as u64))).sub(&ln_of(&lk)?.mul(&int(q as u64)));
    steps.check(&format!("{label} at k = 1001"), &f, f.is_certainly_positive());
    // derivative: (2/5) log 2 - p/k - q/(k log k) >= (2/5) log 2 - (p + q)/1001
    let d = slope.sub(&int((p + q) as u64).div(&k)?);
    steps.check(&format!("{label} increasing for k >= 1001"), &d, d.is_certainly_positive());
    Ok(())
}

/// Derived constants for an arbitrary growth form, rounded to two
/// significant digits or up to the next integer.
pub fn derive_constants(form: &GrowthForm) -> Result<(ChainConstants, BigInt)> {
    let slope = dec("0.4").mul(&ln_u64(2));
    let approx = 71u64;
    let lmn = ceil_u64(&dec("24.34").mul(&int(4)));
    let k_coef = ceil_u64(&int(lmn).div(&slope)?);
    let k_shift = ceil_u64(&ln_u64(4 * approx).div(&slope)?);
    let bprime = sci_up(&form.c().square(), 2);
    let log_head = ceil_u64(&ln_of(&num(&bprime)?)?.add(&dec("0.14")));
    let log_coef = ceil_u64(&int(log_head).div(&ln_u64(1000))?.add_int(&BigInt::from(2 * (form.p + form.q))));
    let t2 = int(k_coef).mul(&int(log_coef * log_coef)).add(&int(k_shift).div(&ln_u64(1000).square())?);
    let guz2_t = sci_up(&t2, 2);
    let kb = guz_bound(2, &num(&guz2_t)?)?.max(&int(k_coef * 441 + k_shift));
    let k_bound = sci_up(&kb, 2);
    let n_bound = sci_up(&form.eval(&num(&k_bound)?)?, 2);
    let digits = parse_decimal(&n_bound)?.ceil().to_integer().to_string().len();
    let m = BigInt::from(10).pow(digits as u32);
    let legendre_coef = ceil_u64(&int(4 * approx).div(&ln_u64(2))?);
    let cf = expand(|b| named_constant("log3/log2", b), &m, default_bits(&m))?;
    let gap = legendre_gap(&cf, &m)?;
    let prod = Interval::from_int(&(BigInt::from(legendre_coef) * &gap), crate::bounds::BITS);
    let d = sci_up(&prod.mul(&form.c()), 2);
    let log_d = ceil_u64(&ln_of(&num(&d)?)?);
    let log_coef2 = ceil_u64(&int(log_d).div(&ln_u64(1000))?.add_int(&BigInt::from(form.p + form.q)));
    let guz1_t = ceil_u64(&int(log_coef2).div(&slope)?);
    let consts = ChainConstants {
        approx,
        lmn,
        k_coef,
        k_shift,
        bprime,
        log_head,
        log_coef,
        guz2_t,
        k_bound,
        n_bound,
        m: format!("1e{digits}"),
        legendre_coef,
        d,
        log_d,
        log_coef2,
        guz1_t,
    };
    Ok((consts, gap))
}

/// Replays the chain for n < 8.5e34 k^8 (log k)^6 with the printed constants.
pub fn eliminate_large_k() -> Result<LargeKRecord> {
    run_chain(HeightPolicy::Nominal, &ChainConstants::printed())
}

/// Chain for the given height policy; the nominal policy uses the printed
/// constants, the certified one derives its own.
pub fn eliminate_large_k_with(policy: HeightPolicy) -> Result<LargeKRecord> {
    match policy {
        HeightPolicy::Nominal => eliminate_large_k(),
        HeightPolicy::Certified => {
            let (c, _) = derive_constants(&GrowthForm::for_policy(policy))?;
            run_chain(policy, &c)
        }
    }
}

pub fn run_chain(policy: HeightPolicy, k: &ChainConstants) -> Result<LargeKRecord> {
    let form = GrowthForm::for_policy(policy);
    let (p, q) = (form.p, form.q);
    let mut st = Steps(Vec::new());
    let slope = dec("0.4").mul(&ln_u64(2));
    let two = int(2);

    // n < c k^p (log k)^q < 2^(2k/5) for k > 1000
    exceeds_from_1001(&mut st, "n < 2^(2k/5)", &form.c(), p, q)?;
    // 2 * approx / 2^(2k/5) < 1, so e^|Lambda_2| < 2
    let gamma = int(2 * k.approx).div(&two.powi(400)?)?;
    st.lt("2 * approx / 2^(2k/5) < 1 at k = 1001", &gamma, &int(1));

    // log|Lambda_2| > -24.34 D^4 max{log b' + 0.14, 21}^2 log A1 log A2, D = 1, log A_i = 2
    let lmn_coef = dec("24.34").mul(&int(4));
    st.lt("24.34 * 2 * 2 < lmn", &lmn_coef, &int(k.lmn + 1));
    let kc = int(k.lmn).div(&slope)?;
    st.lt("lmn / ((2/5) log 2) <= k_coef", &kc, &int(k.k_coef).add(&dec("1e-30")));
    let ks = ln_u64(4 * k.approx).div(&slope)?;
    st.lt("log(4 approx) / ((2/5) log 2) <= k_shift", &ks, &int(k.k_shift).add(&dec("1e-30")));
    let case21 = k.k_coef * 441 + k.k_shift;

    // b' <= (n + n^2)/2 < n^2 < c^2 k^(2p) (log k)^(2q)
    st.lt("c^2 <= b' coefficient", &form.c().square(), &num(&k.bprime)?.add(&dec("1e-30")));
    let head = ln_of(&num(&k.bprime)?)?.add(&dec("0.14"));
    st.lt("log(b' coefficient) + 0.14 < log_head", &head, &int(k.log_head));
    // log_head + (2p + 2q) log k < log_coef log k for log k > log 1000
    let lhs = int(k.log_head).div(&ln_u64(1000))?.add_int(&BigInt::from(2 * (p + q)));
    st.lt("log_head / log 1000 + 2p + 2q < log_coef", &lhs, &int(k.log_coef).add(&dec("1e-30")));
    let t2 = int(k.k_coef).mul(&int(k.log_coef * k.log_coef)).add(&int(k.k_shift).div(&ln_u64(1000).square())?);
    st.lt("k_coef log_coef^2 + k_shift / (log 1000)^2 <= T", &t2, &num(&k.guz2_t)?.add(&dec("1e-30")));
    let kb = guz_bound(2, &num(&k.guz2_t)?)?;
    st.lt("4 T (log T)^2 < k bound", &kb, &num(&k.k_bound)?);
    st.lt("k_coef * 21^2 + k_shift < k bound", &int(case21), &num(&k.k_bound)?);
    let lmn_k_bound = k.k_bound.clone();

    // n < c k^p (log k)^q at the k bound (increasing in k)
    let nb = form.eval(&num(&k.k_bound)?)?;
    st.lt("n at the k bound < n bound", &nb, &num(&k.n_bound)?);
    let m = parse_decimal(&k.m)?.to_integer();
    st.lt("n bound < M (so x - y < M)", &num(&k.n_bound)?, &Interval::from_int(&m, crate::bounds::BITS));

    // Legendre: |tau - r/s| > 1/((a(M) + 2) s^2)
    let cf = expand(|b| named_constant("log3/log2", b), &m, default_bits(&m))?;
    let gap = legendre_gap(&cf, &m)?;
    let (max_index, a) = cf.max_quotient().expect("nonempty");
    let legendre = LegendreRecord {
        m: k.m.clone(),
        index: cf.quotients.len() - 1,
        max_quotient: a.to_string(),
        max_index,
        gap: gap.to_string(),
    };
    // |Lambda_2| / ((x - y) log 2) < 4 approx / (log 2 * 2^(2k/5) (x - y))
    st.lt("4 approx / log 2 <= legendre_coef", &int(4 * k.approx).div(&ln_u64(2))?, &int(k.legendre_coef).add(&dec("1e-30")));
    let prod = BigInt::from(k.legendre_coef) * &gap;
    // 2^(2k/5) < prod (x - y) < prod n < prod c k^p (log k)^q
    let pd = Interval::from_int(&prod, crate::bounds::BITS).mul(&form.c());
    st.lt("legendre_coef (a(M) + 2) c <= d", &pd, &num(&k.d)?.add(&dec("1e-30")));
    let ld = ln_of(&num(&k.d)?)?;
    st.lt("log d < log_d", &ld, &int(k.log_d).add(&dec("1e-30")));
    let lhs2 = int(k.log_d).div(&ln_u64(1000))?.add_int(&BigInt::from(p + q));
    st.lt("log_d / log 1000 + p + q < log_coef2", &lhs2, &int(k.log_coef2).add(&dec("1e-30")));
    let t1 = int(k.log_coef2).div(&slope)?;
    st.lt("log_coef2 / ((2/5) log 2) <= guz1_t", &t1, &int(k.guz1_t).add(&dec("1e-30")));
    let g1 = guz_bound(1, &int(k.guz1_t))?;
    let (route, final_k_bound) = if g1.certainly_lt(&int(1001)) {
        let fin = ceil_u64(&g1);
        st.check("2 T log T < 1001", &g1, true);
        ("guz".to_string(), fin)
    } else {
        exceeds_from_1001(&mut st, "2^(2k/5) > d k^(p) (log k)^q", &num(&k.d)?, p, q)?;
        ("monotone".to_string(), 1000)
    };
    if let Some(bad) = st.all_hold() {
        return Err(Error::ProofFailed(format!("large-k chain step failed: {} ({})", bad.label, bad.value)));
    }
    if final_k_bound > 1000 {
        return Err(Error::ProofFailed(format!("large-k chain ends at k < {final_k_bound}, not below 1001")));
    }
    Ok(LargeKRecord {
        policy,
        growth: form,
        constants: k.clone(),
        steps: st.0,
        lmn_k_bound,
        n_bound: k.n_bound.clone(),
        legendre,
        route,
        final_k_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_chain_replays() {
        let r = eliminate_large_k().unwrap();
        assert_eq!(r.final_k_bound, 933);
        assert_eq!(r.route, "guz");
        assert_eq!(r.legendre.gap, "102");
        assert_eq!((r.legendre.index, r.legendre.max_index), (229, 218));
        assert!(r.steps.iter().all(|s| s.holds));
    }

    #[test]
    fn derived_constants_match_printed_where_rounding_agrees() {
        let (c, gap) = derive_constants(&GrowthForm::for_policy(HeightPolicy::Nominal)).unwrap();
        let p = ChainConstants::printed();
        assert_eq!(gap, BigInt::from(102));
        assert_eq!((c.lmn, c.k_coef, c.k_shift, c.log_head, c.log_coef), (p.lmn, p.k_coef, p.k_shift, p.log_head, p.log_coef));
        assert_eq!((c.legendre_coef, c.log_d, c.log_coef2, c.guz1_t), (p.legendre_coef, p.log_d, p.log_coef2, p.guz1_t));
        assert_eq!(c.bprime, p.bprime);
        assert_eq!(c.d, p.d);
        assert!(run_chain(HeightPolicy::Nominal, &c).is_ok());
    }

    #[test]
    fn certified_chain_closes() {
        let r = eliminate_large_k_with(HeightPolicy::Certified).unwrap();
        assert!(r.final_k_bound <= 1000);
    }

    #[test]
    fn rounding() {
        assert_eq!(sci_up(&dec("7.225e69"), 2), "7.3e69");
        assert_eq!(sci_up(&dec("957216.4"), 1), "1e6");
        assert_eq!(sci_up(&dec("97.36"), 2), "9.8e1");
    }
}
