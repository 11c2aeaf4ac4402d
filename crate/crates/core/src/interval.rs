//! Certified real enclosures with dyadic endpoints.
//!
//! An [`Interval`] stores two integers `lo`, `hi` and a scale `bits`; it
//! encloses every real in `[lo·2^-bits, hi·2^-bits]`. Every operation rounds
//! the lower endpoint down and the upper endpoint up, so the result always
//! contains the exact image of every point of the inputs.
//!
//! Transcendental support is limited to `ln` and `sqrt`, which is all the
//! proof needs. `ln` is a fixed-point `atanh` series whose truncation and
//! rounding error is counted term by term and absorbed by guard bits.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn floor_shr(a: &BigInt, s: u32) -> BigInt {
    // BigInt >> rounds toward negative infinity.
    a >> s
}

fn ceil_shr(a: &BigInt, s: u32) -> BigInt {
    -((-a) >> s)
}

impl Interval {
    /// Builds `[lo, hi]·2^-bits`. Panics if `lo > hi`.
    pub fn from_raw(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, bits }
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Self {
        let v = n << bits;
        Interval {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        Self::from_int(&BigInt::from(n), bits)
    }

    pub fn from_biguint(n: &BigUint, bits: u32) -> Self {
        Self::from_int(&BigInt::from(n.clone()), bits)
    }

    /// Tightest enclosure of `num/den` at the given scale.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num << bits;
        Interval {
            lo: floor_div(&scaled, &den),
            hi: ceil_div(&scaled, &den),
            bits,
        }
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), bits)
    }

    /// Enclosure of a decimal literal such as `"1.4"`, `"-0.16"`, `"6e194"` or
    /// `"7.3e69"`.
    pub fn from_decimal(s: &str, bits: u32) -> Result<Self> {
        Ok(Self::from_rational(&parse_decimal(s)?, bits))
    }

    /// Hull of two rationals.
    pub fn hull_of(a: &BigRational, b: &BigRational, bits: u32) -> Self {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let lo = Self::from_rational(x, bits).lo;
        let hi = Self::from_rational(y, bits).hi;
        Interval { lo, hi, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.bits)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.bits)
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.bits + 1))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.bits)
    }

    /// `log2` of the width, rounded up; `None` for a point interval.
    pub fn width_log2(&self) -> Option<i64> {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            None
        } else {
            Some((w - 1u32).bits() as i64 - self.bits as i64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo().to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi().to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo() <= *q && *q <= self.hi()
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        let (a, b) = align(self, other);
        a.lo <= b.lo && b.hi <= a.hi
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `self < other` for every pair of enclosed values.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        let (a, b) = align(self, other);
        a.hi < b.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        let (a, b) = align(self, other);
        a.hi <= b.lo
    }

    pub fn certainly_lt_rational(&self, q: &BigRational) -> bool {
        self.hi() < *q
    }

    pub fn certainly_gt_rational(&self, q: &BigRational) -> bool {
        self.lo() > *q
    }

    /// Changes the scale; coarsening rounds outward.
    pub fn with_bits(&self, bits: u32) -> Interval {
        if bits >= self.bits {
            let s = bits - self.bits;
            Interval {
                lo: &self.lo << s,
                hi: &self.hi << s,
                bits,
            }
        } else {
            let s = self.bits - bits;
            Interval {
                lo: floor_shr(&self.lo, s),
                hi: ceil_shr(&self.hi, s),
                bits,
            }
        }
    }

    /// The common floor of all enclosed values, if there is one.
    pub fn floor(&self) -> Option<BigInt> {
        let a = floor_shr(&self.lo, self.bits);
        let b = floor_shr(&self.hi, self.bits);
        (a == b).then_some(a)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let hi = std::cmp::max(-&self.lo, self.hi.clone());
            Interval {
                lo: BigInt::zero(),
                hi,
                bits: self.bits,
            }
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        Interval {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
            bits: a.bits,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn add_int(&self, n: &BigInt) -> Interval {
        self.add(&Interval::from_int(n, self.bits))
    }

    pub fn mul_int(&self, n: &BigInt) -> Interval {
        let a = &self.lo * n;
        let b = &self.hi * n;
        if n.is_negative() {
            Interval {
                lo: b,
                hi: a,
                bits: self.bits,
            }
        } else {
            Interval {
                lo: a,
                hi: b,
                bits: self.bits,
            }
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        let s = a.bits;
        if !a.lo.is_negative() && !b.lo.is_negative() {
            return Interval {
                lo: floor_shr(&(&a.lo * &b.lo), s),
                hi: ceil_shr(&(&a.hi * &b.hi), s),
                bits: s,
            };
        }
        let p = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = p.iter().min().expect("four products");
        let max = p.iter().max().expect("four products");
        Interval {
            lo: floor_shr(min, s),
            hi: ceil_shr(max, s),
            bits: s,
        }
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        let s = a.bits;
        Interval {
            lo: floor_shr(&(&a.lo * &a.lo), s),
            hi: ceil_shr(&(&a.hi * &a.hi), s),
            bits: s,
        }
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::needs_precision("divisor encloses zero", self.bits.max(other.bits)));
        }
        let (a, b) = align(self, other);
        let s = a.bits;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            let scaled = x << s;
            for y in [&b.lo, &b.hi] {
                let (n, d) = if y.is_negative() {
                    (-&scaled, -y)
                } else {
                    (scaled.clone(), y.clone())
                };
                let f = floor_div(&n, &d);
                let c = ceil_div(&n, &d);
                lo = Some(match lo {
                    Some(v) if v <= f => v,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(v) if v >= c => v,
                    _ => c,
                });
            }
        }
        Ok(Interval {
            lo: lo.expect("endpoints"),
            hi: hi.expect("endpoints"),
            bits: s,
        })
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::from_i64(1, self.bits).div(self)
    }

    pub fn div_int(&self, n: &BigInt) -> Interval {
        assert!(!n.is_zero(), "division by zero");
        let (lo, hi, d) = if n.is_negative() {
            (-&self.hi, -&self.lo, -n)
        } else {
            (self.lo.clone(), self.hi.clone(), n.clone())
        };
        Interval {
            lo: floor_div(&lo, &d),
            hi: ceil_div(&hi, &d),
            bits: self.bits,
        }
    }

    /// Integer power; negative exponents require an enclosure away from zero.
    pub fn powi(&self, e: i64) -> Result<Interval> {
        if e < 0 {
            return self.powi(-e)?.recip();
        }
        let mut e = e as u64;
        let mut base = self.clone();
        let mut acc = Interval::from_i64(1, self.bits);
        let nonneg = !self.lo.is_negative();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = if nonneg { base.mul(&base) } else { base.square() };
            }
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::domain("sqrt of a negative enclosure"));
        }
        let lo = if self.lo.is_negative() {
            BigInt::zero()
        } else {
            (&self.lo << self.bits).sqrt()
        };
        let h = &self.hi << self.bits;
        let mut hi = h.sqrt();
        if &hi * &hi < h {
            hi += 1;
        }
        Ok(Interval {
            lo,
            hi,
            bits: self.bits,
        })
    }

    /// Natural logarithm of a positive enclosure.
    pub fn ln(&self) -> Result<Interval> {
        if !self.lo.is_positive() {
            return Err(if self.hi.is_positive() {
                Error::needs_precision("ln argument not certainly positive", self.bits)
            } else {
                Error::domain("ln of a non-positive enclosure")
            });
        }
        let (lo, _) = ln_dyadic(&self.lo, self.bits, self.bits);
        let (_, hi) = ln_dyadic(&self.hi, self.bits, self.bits);
        Ok(Interval {
            lo,
            hi,
            bits: self.bits,
        })
    }

    /// Componentwise maximum, i.e. the enclosure of `max(x, y)`.
    pub fn max(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        Interval {
            lo: std::cmp::max(a.lo.clone(), b.lo.clone()),
            hi: std::cmp::max(a.hi.clone(), b.hi.clone()),
            bits: a.bits,
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        Interval {
            lo: std::cmp::min(a.lo.clone(), b.lo.clone()),
            hi: std::cmp::min(a.hi.clone(), b.hi.clone()),
            bits: a.bits,
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        let (a, b) = align(self, other);
        Interval {
            lo: std::cmp::min(a.lo.clone(), b.lo.clone()),
            hi: std::cmp::max(a.hi.clone(), b.hi.clone()),
            bits: a.bits,
        }
    }

    /// Serializable summary: midpoint in scientific notation plus a radius
    /// that covers both the half-width and the decimal rounding of the center.
    pub fn record(&self) -> EnclosureRecord {
        let mid = self.mid();
        let center = format_sci(&mid, 40);
        let rounded = parse_decimal(&center).unwrap_or_else(|_| mid.clone());
        let off = (&rounded - &mid).abs();
        let radius = self.width() / BigInt::from(2) + off;
        EnclosureRecord {
            center,
            radius: format_sci_up(&radius, 3),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_sci(&self.lo(), 20), format_sci(&self.hi(), 20))
    }
}

fn align<'a>(a: &'a Interval, b: &'a Interval) -> (std::borrow::Cow<'a, Interval>, std::borrow::Cow<'a, Interval>) {
    use std::borrow::Cow;
    if a.bits == b.bits {
        (Cow::Borrowed(a), Cow::Borrowed(b))
    } else if a.bits > b.bits {
        (Cow::Borrowed(a), Cow::Owned(b.with_bits(a.bits)))
    } else {
        (Cow::Owned(a.with_bits(b.bits)), Cow::Borrowed(b))
    }
}

/// Decimal enclosure as stored in certificates.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnclosureRecord {
    pub center: String,
    pub radius: String,
}

// ---------------------------------------------------------------------------
// logarithm

/// Fixed-point `2·atanh(t)` for `t = tn·2^-w`, `|t| ≤ 1/3`, with an upper bound
/// on the absolute error in units of `2^-w`.
fn two_atanh_fixed(tn: &BigInt, w: u32) -> (BigInt, u64) {
    let t2 = floor_shr(&(tn * tn), w);
    let mut power = tn.clone();
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    // truncation toward zero, so a negative power also underflows to 0
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * j + 1);
        power = (&power * &t2) / (BigInt::one() << w);
        j += 1;
    }
    // Per term: one ulp from the division, at most two from the running
    // power; the tail after the power underflows is below one ulp.
    let err = 2 * (3 * j + 4);
    (sum << 1, err)
}

fn ln2_fixed(w: u32) -> (BigInt, u64) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, u64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("ln2 cache").get(&w) {
        return v.clone();
    }
    let third = floor_div(&(BigInt::one() << w), &BigInt::from(3));
    let (v, e) = two_atanh_fixed(&third, w);
    // t itself is rounded by one ulp; d/dt 2atanh(t) ≤ 9/4 at t = 1/3.
    let out = (v, e + 3);
    cache.lock().expect("ln2 cache").insert(w, out.clone());
    out
}

/// Lower and upper bounds for `ln(x·2^-b)` at scale `out_bits`.
fn ln_dyadic(x: &BigInt, b: u32, out_bits: u32) -> (BigInt, BigInt) {
    debug_assert!(x.is_positive());
    let len = x.bits() as i64;
    // x·2^-b = 2^e · y with y in [1, 2)
    let mut e = len - 1 - b as i64;
    let guard = 64 + 2 * (64 - (e.unsigned_abs().max(1)).leading_zeros());
    let w = out_bits + guard;
    // y at scale w; shifting down truncates, so keep an exact rational bracket
    let shift = w as i64 - (len - 1);
    let (y_lo, y_hi) = if shift >= 0 {
        let y = x << (shift as u32);
        (y.clone(), y)
    } else {
        let s = (-shift) as u32;
        (floor_shr(x, s), ceil_shr(x, s))
    };
    let two = BigInt::one() << (w + 1);
    // keep y near 1: use y/2 when y > sqrt(2)
    let sqrt2 = (BigInt::from(2) << (2 * w)).sqrt();
    let (y_lo, y_hi) = if y_lo > sqrt2 {
        e += 1;
        (y_lo, y_hi)
    } else {
        (&y_lo << 1u32, &y_hi << 1u32)
    };
    // now the value is 2^e * (y / 2) with y/2 in (1/sqrt2, sqrt2]; work with
    // v = y/2 at scale w, i.e. numerators y_lo, y_hi at scale w+1.
    let atanh_arg = |y: &BigInt, round_up: bool| -> BigInt {
        // t = (v - 1)/(v + 1) = (y - 2)/(y + 2) at scale w+1
        let num = (y - &two) << w;
        let den = y + &two;
        if round_up {
            ceil_div(&num, &den)
        } else {
            floor_div(&num, &den)
        }
    };
    let t_lo = atanh_arg(&y_lo, false);
    let t_hi = atanh_arg(&y_hi, true);
    let (v_lo, e_lo) = two_atanh_fixed(&t_lo, w);
    let (v_hi, e_hi) = two_atanh_fixed(&t_hi, w);
    let (l2, l2e) = ln2_fixed(w);
    let eb = BigInt::from(e);
    let ea = e.unsigned_abs();
    let lo_total = v_lo - BigInt::from(e_lo + 3) + &l2 * &eb - BigInt::from(l2e * ea + 1);
    let hi_total = v_hi + BigInt::from(e_hi + 3) + &l2 * &eb + BigInt::from(l2e * ea + 1);
    (floor_shr(&lo_total, guard), ceil_shr(&hi_total, guard))
}

/// Certified `ln(n)` for a positive integer.
pub fn ln_int(n: &BigUint, bits: u32) -> Interval {
    assert!(!n.is_zero(), "ln(0)");
    let x = BigInt::from_biguint(Sign::Plus, n.clone());
    let (lo, hi) = ln_dyadic(&x, 0, bits);
    Interval { lo, hi, bits }
}

pub fn ln_rational(q: &BigRational, bits: u32) -> Result<Interval> {
    if !q.is_positive() {
        return Err(Error::domain("ln of a non-positive rational"));
    }
    let a = ln_int(&q.numer().to_biguint().expect("positive"), bits);
    let b = ln_int(&q.denom().to_biguint().expect("positive"), bits);
    Ok(a.sub(&b))
}

// ---------------------------------------------------------------------------
// decimal helpers

/// Parses `[-]digits[.digits][e[-]digits]` exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::domain(format!("not a decimal number: {s:?}"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

fn floor_log10(q: &BigRational) -> i64 {
    // q > 0
    let n = q.numer().abs();
    let d = q.denom();
    let est = ((n.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let ten = BigInt::from(10);
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let a = BigRational::new(n, d.clone());
    let mut e = est - 2;
    while pow10(e + 1) <= a {
        e += 1;
    }
    while pow10(e) > a {
        e -= 1;
    }
    e
}

fn format_sci_impl(q: &BigRational, digits: usize, round_up: bool) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let e = floor_log10(&a);
    let shift = digits as i64 - 1 - e;
    let ten = BigInt::from(10);
    let scaled = if shift >= 0 {
        &a * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
    } else {
        &a / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
    };
    let mut m = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.round().to_integer()
    };
    let mut e = e;
    if m >= num_traits::pow(ten.clone(), digits) {
        m /= &ten;
        e += 1;
    }
    let ds = m.to_string();
    let (head, tail) = ds.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Scientific notation with `digits` significant digits, rounded to nearest.
pub fn format_sci(q: &BigRational, digits: usize) -> String {
    format_sci_impl(q, digits, false)
}

/// Scientific notation of a nonnegative value, rounded up.
pub fn format_sci_up(q: &BigRational, digits: usize) -> String {
    format_sci_impl(q, digits, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn shift_rounds_toward_negative_infinity() {
        assert_eq!(floor_shr(&BigInt::from(-5), 1), BigInt::from(-3));
        assert_eq!(ceil_shr(&BigInt::from(-5), 1), BigInt::from(-2));
        assert_eq!(ceil_shr(&BigInt::from(5), 1), BigInt::from(3));
    }

    #[test]
    fn parses_decimals() {
        assert_eq!(q("1.4"), BigRational::new(14.into(), 10.into()));
        assert_eq!(q("6e194"), BigRational::from_integer(BigInt::from(6) * num_traits::pow(BigInt::from(10), 194)));
        assert_eq!(q("-0.16"), BigRational::new((-16).into(), 100.into()));
        assert_eq!(q("2.5e-3"), BigRational::new(25.into(), 10000.into()));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("e5").is_err());
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let a = Interval::from_decimal("1.1", 64).unwrap();
        let b = Interval::from_decimal("-2.3", 64).unwrap();
        assert!(a.mul(&b).contains(&(q("1.1") * q("-2.3"))));
        assert!(a.div(&b).unwrap().contains(&(q("1.1") / q("-2.3"))));
        assert!(a.sub(&b).contains(&q("3.4")));
        assert!(b.powi(3).unwrap().contains(&(q("-2.3") * q("-2.3") * q("-2.3"))));
        assert!(b.powi(-2).unwrap().contains(&(BigRational::one() / (q("-2.3") * q("-2.3")))));
    }

    #[test]
    fn ln_matches_known_values() {
        let l2 = ln_int(&BigUint::from(2u32), 200);
        // ln 2 = 0.693147180559945309417232121458176568...
        assert!((l2.mid() - q("0.6931471805599453094172321214581765680755")).abs() < q("1e-39"));
        assert!(l2.width_log2().unwrap() <= -195);
        let l3 = ln_int(&BigUint::from(3u32), 128);
        assert!((l3.to_f64() - 3f64.ln()).abs() < 1e-15);
        let lt = Interval::from_decimal("0.001", 128).unwrap().ln().unwrap();
        assert!((lt.to_f64() - 0.001f64.ln()).abs() < 1e-14);
        let big = ln_int(&(BigUint::from(10u32).pow(200)), 128);
        assert!((big.to_f64() - 200.0 * 10f64.ln()).abs() < 1e-12);
        assert!(big.width_log2().unwrap() <= -120);
    }

    #[test]
    fn ln_encloses_reference_values() {
        // references from an independent 90-digit evaluation
        let cases = [
            ("123456.789", "11.723646487185880981139958983910111586910377375134083047085106242189499638224294"),
            ("0.0001234", "-9.0000794464929866647111363827221820604177753694022923774072092155595601231559163"),
            ("1.4142", "0.34656400018800337872626087165991592141107604179359535085849851493003117142021019"),
            ("7", "1.9459101490553133051053527434431797296370847295818611884593901499375798627520693"),
            ("1e300", "690.77552789821370520539743640530926228033044658863189280999837029027178290320574"),
        ];
        let slack = q("1e-75");
        for bits in [80u32, 160, 240] {
            for (x, r) in cases {
                let l = Interval::from_decimal(x, bits + 40).unwrap().ln().unwrap();
                let r = q(r);
                assert!(l.lo() <= &r + &slack && &r - &slack <= l.hi(), "ln({x}) at {bits} bits: {l}");
                assert!(l.width_log2().unwrap() <= -(bits as i64), "ln({x}) too wide");
            }
        }
    }

    #[test]
    fn ln_is_consistent_across_precisions() {
        let x = BigUint::from(123456789u64);
        let a = ln_int(&x, 100);
        let b = ln_int(&x, 400);
        assert!(!a.certainly_lt(&b) && !b.certainly_lt(&a));
    }

    #[test]
    fn sqrt_brackets_irrationals() {
        let s = Interval::from_i64(2, 100).sqrt().unwrap();
        let lo = s.lo();
        let hi = s.hi();
        let two = BigRational::from_integer(2.into());
        assert!(&lo * &lo <= two && two <= &hi * &hi);
    }

    #[test]
    fn floor_requires_agreement() {
        let a = Interval::hull_of(&q("2.9"), &q("3.1"), 32);
        assert_eq!(a.floor(), None);
        let b = Interval::hull_of(&q("3.1"), &q("3.2"), 32);
        assert_eq!(b.floor(), Some(BigInt::from(3)));
        let c = Interval::hull_of(&q("-0.5"), &q("-0.25"), 32);
        assert_eq!(c.floor(), Some(BigInt::from(-1)));
    }

    #[test]
    fn formats_scientific() {
        assert_eq!(format_sci(&q("6e194"), 5), "6e194");
        assert_eq!(format_sci(&q("0.00012345"), 3), "1.23e-4");
        assert_eq!(format_sci(&q("999.96"), 4), "1e3");
        assert_eq!(format_sci_up(&q("1.231"), 3), "1.24e0");
    }
}
