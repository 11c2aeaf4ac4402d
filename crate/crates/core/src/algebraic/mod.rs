//! The dominant root of x^k - x^(k-1) - ... - 1 and the quantities built
//! from it: f_k, the Binet approximation, field norms and heights.

pub mod height;
pub mod poly;
pub mod roots;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{with_retry, PrecisionContext};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::sequences::LucasTable;

pub use height::{log_height_mobius, log_height_rational, minimal_polynomial, Mobius};
pub use poly::{resultant, resultant_linear, IntPolynomial};
pub use roots::{conjugate_disks, ComplexDisk, RootDisks};

/// A real root of `minpoly` isolated in `enclosure`.
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    pub minpoly: IntPolynomial,
    pub enclosure: Interval,
    pub precision_bits: u32,
}

impl RealAlgebraic {
    /// Exact sign check that the enclosure brackets a sign change.
    pub fn brackets_root(&self) -> bool {
        let b = self.enclosure.bits();
        let lo = self.minpoly.sign_at_dyadic(self.enclosure.lo_raw(), b);
        let hi = self.minpoly.sign_at_dyadic(self.enclosure.hi_raw(), b);
        lo * hi < 0
    }

    /// Bisect until the width is at most 2^-bits. Nested in the current enclosure.
    pub fn refine(&self, bits: u32) -> Result<RealAlgebraic> {
        if self.precision_bits >= bits {
            return Ok(self.clone());
        }
        let s = bits + 1;
        let enc = self.enclosure.with_bits(s);
        let (mut lo, mut hi) = (enc.lo_raw().clone(), enc.hi_raw().clone());
        let slo = self.minpoly.sign_at_dyadic(&lo, s);
        if slo == 0 {
            return Ok(self.exact_at(lo, s, bits));
        }
        while &hi - &lo > BigInt::from(2) {
            let mid: BigInt = (&lo + &hi) >> 1;
            let sm = self.minpoly.sign_at_dyadic(&mid, s);
            if sm == 0 {
                return Ok(self.exact_at(mid, s, bits));
            }
            if sm == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(RealAlgebraic {
            minpoly: self.minpoly.clone(),
            enclosure: Interval::from_raw(lo, hi, s),
            precision_bits: bits,
        })
    }

    fn exact_at(&self, m: BigInt, s: u32, bits: u32) -> RealAlgebraic {
        RealAlgebraic { minpoly: self.minpoly.clone(), enclosure: Interval::from_raw(m.clone(), m, s), precision_bits: bits }
    }
}

/// (x - 1)(x^k - ... - 1) = x^(k+1) - 2x^k + 1; its sign at m / 2^s for x > 1.
fn shifted_sign(k: usize, m: &BigInt, s: u32) -> i32 {
    let v = num_traits::pow(m.clone(), k) * (m - (BigInt::one() << (s + 1))) + (BigInt::one() << (s as usize * (k + 1)));
    poly::sign_of(&v)
}

fn fixed_pow(x: &BigInt, e: usize, w: u32) -> BigInt {
    let mut acc = BigInt::one() << w;
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base) >> w;
        }
        e >>= 1;
        if e > 0 {
            base = (&base * &base) >> w;
        }
    }
    acc
}

fn alpha_cache() -> &'static Mutex<HashMap<usize, RealAlgebraic>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, RealAlgebraic>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of the dominant root alpha(k) of width at most 2^-working_bits
/// (and never coarser than needed to separate alpha from 2(1 - 2^-k)).
pub fn dominant_root(k: usize, ctx: PrecisionContext) -> Result<RealAlgebraic> {
    if k < 2 {
        return Err(Error::domain(format!("dominant root needs k >= 2, got {k}")));
    }
    let bits = ctx.working_bits.max(k as u32 + 64);
    if let Some(hit) = alpha_cache().lock().expect("alpha cache").get(&k) {
        if hit.precision_bits >= bits {
            let s = bits + 2;
            let enclosure = if hit.enclosure.bits() > s { hit.enclosure.with_bits(s) } else { hit.enclosure.clone() };
            return Ok(RealAlgebraic { minpoly: hit.minpoly.clone(), enclosure, precision_bits: bits });
        }
    }
    let root = with_retry(ctx, "dominant root", |c| compute_dominant_root(k, c.working_bits.max(bits), c.guard_bits))?;
    alpha_cache().lock().expect("alpha cache").insert(k, root.clone());
    Ok(root)
}

fn compute_dominant_root(k: usize, bits: u32, guard: u32) -> Result<RealAlgebraic> {
    // Seed: bisect the a priori bracket [2 - 2^(1-k), 2] for a few steps at
    // low precision. h(x) = x^(k+1) - 2x^k + 1 is increasing and convex on it,
    // so Newton from the right endpoint decreases monotonically to alpha.
    let s0 = k as u32 + 8;
    let mut lo = (BigInt::one() << (s0 + 1)) - (BigInt::one() << (s0 + 1 - k as u32));
    let mut hi = BigInt::one() << (s0 + 1);
    for _ in 0..6 {
        let mid: BigInt = (&lo + &hi) >> 1;
        match shifted_sign(k, &mid, s0) {
            s if s < 0 => lo = mid,
            s if s > 0 => hi = mid,
            _ => return Err(Error::ProofFailed(format!("x^k - ... - 1 has a dyadic root for k = {k}"))),
        }
    }

    let klog = usize::BITS - k.leading_zeros();
    let w = bits + guard + 2 * klog;
    let two = BigInt::from(2) << w;
    let kk = BigInt::from(k);
    let mut x = hi << (w - s0);
    for _ in 0..(4 * w.ilog2() + 64) {
        let p = fixed_pow(&x, k - 1, w);
        let t = (&p * &x) >> w;
        let h = ((&t * (&x - &two)) >> w) + (BigInt::one() << w);
        let dh = (&p * ((&x * BigInt::from(k + 1)) - (&kk << (w + 1)))) >> w;
        if !dh.is_positive() {
            return Err(Error::needs_precision("Newton derivative lost sign", bits));
        }
        let dx = (h << w) / dh;
        x -= &dx;
        if dx.abs() <= BigInt::from(8) {
            break;
        }
    }

    let s = bits + 2;
    let a = x >> (w - s);
    let lo = &a - 2;
    let hi = &a + 2;
    if shifted_sign(k, &lo, s) >= 0 || shifted_sign(k, &hi, s) <= 0 {
        return Err(Error::needs_precision("dominant root bracket", bits));
    }
    // 2(1 - 2^-k) < lo and hi < 2
    let lower = (BigInt::one() << (s + 1)) - (BigInt::one() << (s + 1 - k as u32));
    if lo <= lower || hi >= BigInt::one() << (s + 1) {
        return Err(Error::ProofFailed(format!("dominant root for k = {k} escapes (2(1 - 2^-k), 2)")));
    }
    Ok(RealAlgebraic {
        minpoly: IntPolynomial::characteristic(k),
        enclosure: Interval::from_raw(lo, hi, s),
        precision_bits: bits,
    })
}

/// (x - 1) / (2 + (k + 1)(x - 2)) over an enclosure.
pub fn f_k_at(x: &Interval, k: usize) -> Result<Interval> {
    let num = x.add_int(&-BigInt::one());
    let den = x.mul_int(&BigInt::from(k + 1)).add_int(&-BigInt::from(2 * k));
    num.div(&den)
}

pub fn f_k_rational(x: &BigRational, k: usize) -> Result<BigRational> {
    let den = x * BigRational::from_integer(BigInt::from(k + 1)) - BigRational::from_integer(BigInt::from(2 * k));
    if den.is_zero() {
        return Err(Error::domain("f_k has a pole at 2k/(k+1)"));
    }
    Ok((x - BigRational::one()) / den)
}

#[derive(Clone, Debug)]
pub struct BinetError {
    pub k: usize,
    pub n: i64,
    pub error_enclosure: Interval,
}

/// L_n - f_k(alpha)(2 alpha - 1) alpha^(n-1), certified to lie in (-3/2, 3/2).
pub fn binet_error(k: usize, n: i64, ctx: PrecisionContext) -> Result<BinetError> {
    let mut table = LucasTable::lucas(k)?;
    with_retry(ctx, "binet error", |c| {
        let alpha = dominant_root(k, c)?;
        binet_error_with(&mut table, &alpha.enclosure, n)
    })
}

/// Same as [`binet_error`] with a caller-supplied table and alpha enclosure.
pub fn binet_error_with(table: &mut LucasTable, alpha: &Interval, n: i64) -> Result<BinetError> {
    let k = table.k();
    let l = Interval::from_biguint(table.term(n)?, alpha.bits());
    let main = binet_main_term(alpha, k, n)?;
    let e = l.sub(&main);
    let bound = BigRational::new(BigInt::from(3), BigInt::from(2));
    if !(e.certainly_lt_rational(&bound) && e.certainly_gt_rational(&-bound)) {
        return Err(Error::needs_precision(format!("Binet error k = {k}, n = {n}: {e}"), alpha.bits()));
    }
    Ok(BinetError { k, n, error_enclosure: e })
}

/// f_k(alpha)(2 alpha - 1) alpha^(n-1).
pub fn binet_main_term(alpha: &Interval, k: usize, n: i64) -> Result<Interval> {
    let f = f_k_at(alpha, k)?;
    let g = alpha.mul_int(&BigInt::from(2)).add_int(&-BigInt::one());
    Ok(f.mul(&g).mul(&alpha.powi(n - 1)?))
}

/// Field norm of a*alpha + b over Q(alpha), with the sign of the resultant.
pub fn norm_of_linear(a: i64, b: i64, k: usize) -> BigRational {
    norm_of_linear_big(&BigInt::from(a), &BigInt::from(b), k)
}

pub fn norm_of_linear_big(a: &BigInt, b: &BigInt, k: usize) -> BigRational {
    if a.is_zero() {
        return BigRational::from_integer(num_traits::pow(b.clone(), k));
    }
    BigRational::from_integer(resultant_linear(&IntPolynomial::characteristic(k), a, b))
}

/// (k - 1)^2 / (2^(k+1) k^k - (k + 1)^(k+1)).
pub fn fk_norm_closed_form(k: usize) -> BigRational {
    let kb = BigInt::from(k);
    let num = num_traits::pow(&kb - 1, 2);
    let den = (BigInt::one() << (k + 1)) * num_traits::pow(kb.clone(), k) - num_traits::pow(&kb + 1, k + 1);
    BigRational::new(num, den)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FkNorm {
    pub k: usize,
    /// N(f_k(alpha)) with the resultant sign.
    pub norm: String,
    pub matches_closed_form_abs: bool,
    /// N((2 alpha - 1) f_k(alpha)).
    pub product: String,
    pub product_below_one: bool,
    pub norm_2a_minus_1: String,
    pub norm_2a_minus_1_matches_abs: bool,
}

/// N(f_k(alpha)) = N(alpha - 1) / N((k + 1) alpha - 2k), compared with the
/// closed form and with the product bound |N((2 alpha - 1) f_k(alpha))| < 1.
pub fn norm_of_fk(k: usize) -> Result<(BigRational, FkNorm)> {
    if k < 2 {
        return Err(Error::domain("norm_of_fk needs k >= 2"));
    }
    let num = norm_of_linear(1, -1, k);
    let den = norm_of_linear_big(&BigInt::from(k + 1), &-BigInt::from(2 * k), k);
    let norm = num / den;
    let n2 = norm_of_linear(2, -1, k);
    let expected2 = BigRational::from_integer((BigInt::one() << (k + 1)) - 3);
    let product = &n2 * &norm;
    let rec = FkNorm {
        k,
        norm: norm.to_string(),
        matches_closed_form_abs: norm.abs() == fk_norm_closed_form(k).abs(),
        product: product.to_string(),
        product_below_one: product.abs() < BigRational::one(),
        norm_2a_minus_1: n2.to_string(),
        norm_2a_minus_1_matches_abs: n2.abs() == expected2,
    };
    Ok((norm, rec))
}

/// Every k in [2, k_max] with (2^(k+1) - 3)(k - 1)^2 = 2^(k+1) k^k - (k + 1)^(k+1).
pub fn verify_ggl(k_max: usize) -> Vec<usize> {
    (2..=k_max)
        .filter(|&k| {
            let kb = BigInt::from(k);
            let left = ((BigInt::one() << (k + 1)) - 3) * num_traits::pow(&kb - 1, 2);
            let right = (BigInt::one() << (k + 1)) * num_traits::pow(kb.clone(), k) - num_traits::pow(&kb + 1, k + 1);
            left == right
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::parse_decimal;

    fn ctx(bits: u32) -> PrecisionContext {
        PrecisionContext::with_bits(bits)
    }

    #[test]
    fn golden_ratio() {
        let a = dominant_root(2, ctx(200)).unwrap();
        let phi = parse_decimal("1.6180339887498948482045868343656381177203091798057628621354486227").unwrap();
        assert!(a.enclosure.contains(&phi));
        assert!(a.enclosure.width_log2().unwrap() <= -200);
        assert!(a.brackets_root());
    }

    #[test]
    fn root_brackets_and_interval() {
        for k in [3usize, 4, 7, 30, 100, 300] {
            let a = dominant_root(k, ctx(128)).unwrap();
            let psi = IntPolynomial::characteristic(k);
            let b = a.enclosure.bits();
            assert_eq!(psi.sign_at_dyadic(a.enclosure.lo_raw(), b), -1, "k={k}");
            assert_eq!(psi.sign_at_dyadic(a.enclosure.hi_raw(), b), 1, "k={k}");
            if k == 3 {
                assert!(a.enclosure.certainly_gt_rational(&parse_decimal("1.75").unwrap()));
            }
        }
    }

    #[test]
    fn refinement_is_nested() {
        let a = dominant_root(5, ctx(64)).unwrap();
        let generic = RealAlgebraic { precision_bits: 64, ..a.clone() };
        let r = generic.refine(160).unwrap();
        assert!(a.enclosure.contains_interval(&r.enclosure));
        let direct = dominant_root(5, ctx(160)).unwrap();
        assert!(!r.enclosure.certainly_lt(&direct.enclosure) && !direct.enclosure.certainly_lt(&r.enclosure));
    }

    #[test]
    fn f_k_values() {
        let two = BigRational::from_integer(2.into());
        for k in 2..20 {
            assert_eq!(f_k_rational(&two, k).unwrap(), BigRational::new(1.into(), 2.into()));
        }
        assert_eq!(f_k_rational(&parse_decimal("1.5").unwrap(), 2).unwrap(), BigRational::one());
        let a = dominant_root(3, ctx(128)).unwrap();
        let f = f_k_at(&a.enclosure, 3).unwrap();
        assert!(f.certainly_gt_rational(&parse_decimal("0.5").unwrap()));
        assert!(f.certainly_lt_rational(&parse_decimal("0.75").unwrap()));
    }

    #[test]
    fn binet_samples() {
        let e = binet_error(3, 7, ctx(256)).unwrap();
        assert!(e.error_enclosure.to_f64().abs() < 1.5);
        binet_error(2, 0, ctx(128)).unwrap();
        binet_error(20, 400, ctx(256)).unwrap();
        binet_error(20, -18, ctx(128)).unwrap();
    }

    #[test]
    fn norms() {
        assert_eq!(norm_of_linear(2, -1, 2), BigRational::from_integer((-5).into()));
        for k in 2..12 {
            assert_eq!(norm_of_linear(1, 0, k).abs(), BigRational::one());
            assert_eq!(norm_of_linear(0, 1, k), BigRational::one());
        }
        let (n2, r2) = norm_of_fk(2).unwrap();
        assert_eq!(n2.abs(), BigRational::new(1.into(), 5.into()));
        assert!(r2.matches_closed_form_abs);
        let (n3, r3) = norm_of_fk(3).unwrap();
        assert_eq!(n3.abs(), BigRational::new(4.into(), 176.into()));
        assert!(r3.product_below_one);
        assert!(r3.norm_2a_minus_1_matches_abs);
    }

    #[test]
    fn ggl_equality_set() {
        assert_eq!(verify_ggl(200), vec![2]);
    }
}
