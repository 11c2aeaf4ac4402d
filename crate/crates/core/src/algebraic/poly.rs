use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Integer polynomial, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::domain("zero polynomial"));
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^k - x^(k-1) - ... - x - 1.
    pub fn characteristic(k: usize) -> Self {
        let mut c = vec![-BigInt::one(); k + 1];
        c[k] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    pub fn derivative(&self) -> Option<Self> {
        let c: Vec<BigInt> = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        Self::new(c).ok()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of p(m / 2^b), computed exactly from the homogenized sum.
    pub fn sign_at_dyadic(&self, m: &BigInt, b: u32) -> i32 {
        let d = self.degree() as u32;
        let mut acc = BigInt::zero();
        let mut mp = BigInt::one();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &mp << ((d - j as u32) * b);
            }
            mp *= m;
        }
        sign_of(&acc)
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let bits = x.bits();
        self.coeffs
            .iter()
            .rev()
            .fold(Interval::from_i64(0, bits), |acc, c| acc.mul(x).add_int(c))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn sign_of(v: &BigInt) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Resultant via a fraction-free (Bareiss) determinant of the Sylvester matrix.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> BigInt {
    let m = p.degree();
    let n = q.degree();
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut a = vec![vec![BigInt::zero(); size]; size];
    // rows 0..n: shifted copies of p, highest degree first
    for r in 0..n {
        for (j, c) in p.coeffs.iter().rev().enumerate() {
            a[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in q.coeffs.iter().rev().enumerate() {
            a[n + r][r + j] = c.clone();
        }
    }
    bareiss_det(a)
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Res(p, a*x + b) = lc(p) * prod (a*r + b) over the roots r of p,
/// i.e. (-1)^d * sum p_j (-b)^j a^(d-j).
pub fn resultant_linear(p: &IntPolynomial, a: &BigInt, b: &BigInt) -> BigInt {
    let d = p.degree();
    let mut acc = BigInt::zero();
    let nb = -b;
    let mut bp = BigInt::one();
    let apow: Vec<BigInt> = {
        let mut v = Vec::with_capacity(d + 1);
        let mut x = BigInt::one();
        for _ in 0..=d {
            v.push(x.clone());
            x *= a;
        }
        v
    };
    for j in 0..=d {
        acc += &p.coeffs[j] * &bp * &apow[d - j];
        bp *= &nb;
    }
    if d % 2 == 1 {
        -acc
    } else {
        acc
    }
}

/// Polynomials in y with integer coefficients, used for eliminations.
pub(crate) type YPoly = Vec<BigInt>;

pub(crate) fn ypoly_mul(a: &YPoly, b: &YPoly) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn ypoly_add_scaled(acc: &mut YPoly, p: &YPoly, s: &BigInt) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (i, c) in p.iter().enumerate() {
        acc[i] += c * s;
    }
}

/// Res_x(p(x), A(y) x + B(y)) as a polynomial in y.
pub(crate) fn resultant_linear_in_y(p: &IntPolynomial, a: &YPoly, b: &YPoly) -> YPoly {
    let d = p.degree();
    let nb: YPoly = b.iter().map(|c| -c).collect();
    let mut apow = vec![vec![BigInt::one()]];
    for i in 0..d {
        let next = ypoly_mul(&apow[i], a);
        apow.push(next);
    }
    let mut acc: YPoly = Vec::new();
    let mut bp: YPoly = vec![BigInt::one()];
    for j in 0..=d {
        let term = ypoly_mul(&bp, &apow[d - j]);
        ypoly_add_scaled(&mut acc, &term, &p.coeffs[j]);
        bp = ypoly_mul(&bp, &nb);
    }
    if d % 2 == 1 {
        acc.iter_mut().for_each(|c| *c = -&*c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn characteristic_shape() {
        assert_eq!(IntPolynomial::characteristic(3).to_string(), "x^3 - x^2 - x - 1");
        assert_eq!(IntPolynomial::characteristic(2).eval_int(&BigInt::from(2)), BigInt::one());
    }

    #[test]
    fn resultant_known() {
        // Res(x^2 - 2, x - 1) = (1 - 2) = -1 up to convention lc^deg
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-1, 1])), BigInt::from(-1));
        // common root gives zero
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[1, 1])), BigInt::zero());
        // Res(x^2 - x - 1, 2x - 1) = -5
        assert_eq!(resultant(&IntPolynomial::characteristic(2), &p(&[-1, 2])), BigInt::from(-5));
        assert_eq!(resultant_linear(&IntPolynomial::characteristic(2), &BigInt::from(2), &BigInt::from(-1)), BigInt::from(-5));
    }

    #[test]
    fn sign_at_dyadic_matches_rational_eval() {
        let q = IntPolynomial::characteristic(5);
        for m in -40..40i64 {
            let x = BigRational::new(BigInt::from(m), BigInt::from(8));
            let v = q.eval_rational(&x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            assert_eq!(q.sign_at_dyadic(&BigInt::from(m), 3), s);
        }
    }

    proptest! {
        #[test]
        fn linear_resultant_agrees_with_sylvester(k in 2usize..9, a in -9i64..10, b in -9i64..10) {
            prop_assume!(a != 0);
            let psi = IntPolynomial::characteristic(k);
            let lin = p(&[b, a]);
            prop_assert_eq!(resultant(&psi, &lin), resultant_linear(&psi, &BigInt::from(a), &BigInt::from(b)));
        }

        #[test]
        fn y_resultant_specializes(k in 2usize..7, a0 in -5i64..6, a1 in -5i64..6, b0 in -5i64..6, b1 in -5i64..6, y in -6i64..7) {
            let psi = IntPolynomial::characteristic(k);
            let r = resultant_linear_in_y(&psi, &vec![a0.into(), a1.into()], &vec![b0.into(), b1.into()]);
            let yv = BigInt::from(y);
            let at = r.iter().rev().fold(BigInt::zero(), |acc, c| acc * &yv + c);
            let direct = resultant_linear(&psi, &BigInt::from(a0 + a1 * y), &BigInt::from(b0 + b1 * y));
            prop_assert_eq!(at, direct);
        }
    }
}
