//! Absolute logarithmic heights.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::PrecisionContext;
use crate::error::{Error, Result};
use crate::interval::{ln_int, Interval};

use super::poly::{resultant_linear_in_y, IntPolynomial};
use super::roots::conjugate_disks;
use super::dominant_root;

/// (a*alpha + b) / (c*alpha + d) for the dominant root alpha(k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mobius {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mobius { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    /// alpha itself.
    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// f_k(alpha) = (alpha - 1) / ((k + 1) alpha - 2k).
    pub fn f_k(k: usize) -> Self {
        Mobius { a: 1.into(), b: (-1).into(), c: BigInt::from(k + 1), d: -BigInt::from(2 * k) }
    }

    pub fn is_rational(&self) -> bool {
        (&self.a * &self.d - &self.b * &self.c).is_zero()
    }

    /// The constant value when the expression does not depend on alpha.
    pub fn rational_value(&self) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        if !self.c.is_zero() {
            Some(BigRational::new(self.a.clone(), self.c.clone()))
        } else if !self.d.is_zero() {
            Some(BigRational::new(self.b.clone(), self.d.clone()))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &Interval) -> Result<Interval> {
        let num = x.mul_int(&self.a).add_int(&self.b);
        let den = x.mul_int(&self.c).add_int(&self.d);
        num.div(&den)
    }
}

/// h(p/q) = log max(|p|, q).
pub fn log_height_rational(q: &BigRational, bits: u32) -> Result<Interval> {
    if q.is_zero() {
        return Err(Error::domain("height of zero"));
    }
    let m = std::cmp::max(q.numer().abs(), q.denom().abs());
    Ok(ln_int(&m.to_biguint().expect("positive"), bits))
}

/// Primitive minimal polynomial of the expression, by eliminating x from
/// Psi_k(x) and (c y - a) x + (d y - b). None when the expression is rational.
pub fn minimal_polynomial(k: usize, m: &Mobius) -> Option<IntPolynomial> {
    if m.is_rational() {
        return None;
    }
    let psi = IntPolynomial::characteristic(k);
    let a = vec![-m.a.clone(), m.c.clone()];
    let b = vec![-m.b.clone(), m.d.clone()];
    let r = resultant_linear_in_y(&psi, &a, &b);
    IntPolynomial::new(r).ok().map(|p| p.primitive())
}

fn log_plus(lo: &BigRational, hi: &BigRational, bits: u32) -> Result<Interval> {
    let one = BigRational::one();
    let l = if lo > &one { lo.clone() } else { one.clone() };
    let h = if hi > &one { hi.clone() } else { one };
    let li = Interval::from_rational(&l, bits + 8).ln()?;
    let hi_i = Interval::from_rational(&h, bits + 8).ln()?;
    Ok(Interval::hull_of(&li.lo(), &hi_i.hi(), bits))
}

/// Height of (a alpha + b)/(c alpha + d) from its minimal polynomial and
/// certified conjugate magnitudes. Falls back to the rational formula.
pub fn log_height_mobius(k: usize, m: &Mobius, bits: u32) -> Result<Interval> {
    if let Some(q) = m.rational_value() {
        return log_height_rational(&q, bits);
    }
    if m.c.is_zero() && m.d.is_zero() {
        return Err(Error::domain("expression with zero denominator"));
    }
    let poly = minimal_polynomial(k, m).ok_or_else(|| Error::domain("degenerate elimination"))?;
    if poly.degree() != k {
        return Err(Error::ProofFailed(format!("minimal polynomial of degree {} for k = {k}", poly.degree())));
    }
    let a0 = poly.leading().to_biguint().expect("positive leading coefficient");
    let mut sum = ln_int(&a0, bits + 8);

    let alpha = dominant_root(k, PrecisionContext::with_bits(bits + 16))?;
    let g = m.eval(&alpha.enclosure)?.abs();
    sum = sum.add(&log_plus(&g.lo(), &g.hi(), bits)?);

    let disks = conjugate_disks(k)?;
    let a = BigRational::from_integer(m.a.clone());
    let b = BigRational::from_integer(m.b.clone());
    let c = BigRational::from_integer(m.c.clone());
    let d = BigRational::from_integer(m.d.clone());
    for disk in disks.conjugates() {
        let (nlo, nhi) = disk.affine_modulus_bounds(&a, &b);
        let (dlo, dhi) = disk.affine_modulus_bounds(&c, &d);
        if !dlo.is_positive() {
            return Err(Error::needs_precision("conjugate denominator near zero", bits));
        }
        sum = sum.add(&log_plus(&(nlo / dhi), &(nhi / dlo), bits)?);
    }
    Ok(sum.div_int(&BigInt::from(k)))
}
