//! Inclusion disks for all complex roots of x^k - x^(k-1) - ... - 1.
//!
//! Approximations come from a floating-point Durand-Kerner iteration. They
//! are certified with interval arithmetic: with w_i = p(z_i) / prod_{j != i} (z_i - z_j), the
//! roots of the monic p are the eigenvalues of diag(z) - w 1^T, so by
//! Gershgorin every root lies in some disk D(z_i - w_i, (d - 1)|w_i|), and a
//! connected group of m disks holds exactly m roots.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;

use super::poly::IntPolynomial;

const BITS: u32 = 256;

/// Rectangular complex enclosure.
#[derive(Clone, Debug)]
struct Ci {
    re: Interval,
    im: Interval,
}

impl Ci {
    fn from_f64(z: Complex64) -> Result<Ci> {
        let re = BigRational::from_float(z.re).ok_or_else(|| Error::domain("non-finite root approximation"))?;
        let im = BigRational::from_float(z.im).ok_or_else(|| Error::domain("non-finite root approximation"))?;
        Ok(Ci { re: Interval::from_rational(&re, BITS), im: Interval::from_rational(&im, BITS) })
    }

    fn real(v: i64) -> Ci {
        Ci { re: Interval::from_i64(v, BITS), im: Interval::from_i64(0, BITS) }
    }

    fn sub(&self, o: &Ci) -> Ci {
        Ci { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn mul(&self, o: &Ci) -> Ci {
        Ci {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn add_int(&self, c: &BigInt) -> Ci {
        Ci { re: self.re.add_int(c), im: self.im.clone() }
    }

    fn norm_sqr(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }

    fn div(&self, o: &Ci) -> Result<Ci> {
        let d = o.norm_sqr();
        let num = self.mul(&Ci { re: o.re.clone(), im: o.im.neg() });
        Ok(Ci { re: num.re.div(&d)?, im: num.im.div(&d)? })
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Cq {
    re: BigRational,
    im: BigRational,
}

impl Cq {
    fn sub(&self, o: &Cq) -> Cq {
        Cq { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn add_real(&self, c: &BigRational) -> Cq {
        Cq { re: &self.re + c, im: self.im.clone() }
    }

    fn scale(&self, c: &BigRational) -> Cq {
        Cq { re: &self.re * c, im: &self.im * c }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// Closed disk with rational center and a rational upper bound on its radius.
#[derive(Clone, Debug)]
pub struct ComplexDisk {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
}

fn sqrt_bounds(q: &BigRational) -> (BigRational, BigRational) {
    let s = Interval::from_rational(q, BITS).sqrt().expect("nonnegative");
    (s.lo(), s.hi())
}

impl ComplexDisk {
    fn center(&self) -> Cq {
        Cq { re: self.re.clone(), im: self.im.clone() }
    }

    /// Bounds on |z| over the disk.
    pub fn modulus_bounds(&self) -> (BigRational, BigRational) {
        let (lo, hi) = sqrt_bounds(&self.center().norm_sqr());
        let lo = &lo - &self.radius;
        (if lo.is_negative() { BigRational::zero() } else { lo }, hi + &self.radius)
    }

    /// Bounds on |a z + b| over the disk, for real a, b.
    pub fn affine_modulus_bounds(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        let c = self.center().scale(a).add_real(b);
        let r = a.abs() * &self.radius;
        let (lo, hi) = sqrt_bounds(&c.norm_sqr());
        let lo = &lo - &r;
        (if lo.is_negative() { BigRational::zero() } else { lo }, hi + r)
    }

    pub fn disjoint_from(&self, o: &ComplexDisk) -> bool {
        let d = self.center().sub(&o.center()).norm_sqr();
        let r = &self.radius + &o.radius;
        &r * &r < d
    }

    /// The whole disk lies in the open unit disk.
    pub fn inside_unit_circle(&self) -> bool {
        self.modulus_bounds().1 < BigRational::one()
    }
}

#[derive(Clone, Debug)]
pub struct RootDisks {
    pub k: usize,
    pub disks: Vec<ComplexDisk>,
    /// Index of the disk isolating the dominant real root.
    pub dominant: usize,
}

impl RootDisks {
    pub fn conjugates(&self) -> impl Iterator<Item = &ComplexDisk> {
        self.disks.iter().enumerate().filter(move |(i, _)| *i != self.dominant).map(|(_, d)| d)
    }
}

fn durand_kerner(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|i| seed.powu(i as u32) * 1.1).collect();
    for _ in 0..2000 {
        let mut delta = 0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            return Some(z);
        }
    }
    if z.iter().all(|v| v.is_finite()) {
        Some(z)
    } else {
        None
    }
}

/// Certified disks for the k roots; the dominant disk is isolated from the
/// others and every other disk lies strictly inside the unit circle.
pub fn conjugate_disks(k: usize) -> Result<RootDisks> {
    if k < 2 {
        return Err(Error::domain("conjugate disks need k >= 2"));
    }
    let p = IntPolynomial::characteristic(k);
    let cf: Vec<f64> = p.coeffs().iter().map(|c| if c.is_negative() { -1.0 } else { 1.0 }).collect();
    let approx = durand_kerner(&cf).ok_or_else(|| Error::ProofFailed(format!("root iteration diverged for k = {k}")))?;
    let z: Vec<Ci> = approx.into_iter().map(Ci::from_f64).collect::<Result<_>>()?;
    let factor = BigRational::from_integer(BigInt::from(k - 1));
    let mut disks = Vec::with_capacity(k);
    for (i, zi) in z.iter().enumerate() {
        let val = p.coeffs().iter().rev().fold(Ci::real(0), |acc, c| acc.mul(zi).add_int(c));
        let mut den = Ci::real(1);
        for (j, zj) in z.iter().enumerate() {
            if i != j {
                den = den.mul(&zi.sub(zj));
            }
        }
        // w is only known inside a rectangle; center the disk at z - mid(w)
        // and widen the radius by the rectangle's half-diagonal.
        let w = val.div(&den)?;
        let (_, wabs) = sqrt_bounds(&w.norm_sqr().hi());
        let half = Cq { re: w.re.width(), im: w.im.width() }.norm_sqr() / BigRational::from_integer(BigInt::from(4));
        let (_, slack) = sqrt_bounds(&half);
        let c_re = zi.re.mid() - w.re.mid();
        let c_im = zi.im.mid() - w.im.mid();
        disks.push(ComplexDisk { re: c_re, im: c_im, radius: wabs * &factor + slack });
    }
    let dominant = (0..k)
        .max_by(|&a, &b| disks[a].re.cmp(&disks[b].re))
        .expect("at least two roots");
    for (i, d) in disks.iter().enumerate() {
        if i == dominant {
            continue;
        }
        if !d.disjoint_from(&disks[dominant]) || !d.inside_unit_circle() {
            return Err(Error::ProofFailed(format!("could not isolate the conjugates of alpha for k = {k}")));
        }
    }
    if disks[dominant].modulus_bounds().0 <= BigRational::one() {
        return Err(Error::ProofFailed(format!("dominant disk not separated from the unit circle for k = {k}")));
    }
    Ok(RootDisks { k, disks, dominant })
}

/// Certified |f_k(z)| < 1 on every conjugate disk.
pub fn fk_conjugates_below_one(disks: &RootDisks) -> bool {
    let k = disks.k;
    let one = BigRational::one();
    let kp1 = BigRational::from_integer(BigInt::from(k + 1));
    let m2k = BigRational::from_integer(-BigInt::from(2 * k));
    disks.conjugates().all(|d| {
        let (_, num_hi) = d.affine_modulus_bounds(&one, &-one.clone());
        let (den_lo, _) = d.affine_modulus_bounds(&kp1, &m2k);
        num_hi < den_lo
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_conjugate() {
        let r = conjugate_disks(2).unwrap();
        let d = r.conjugates().next().unwrap();
        // 1 - phi = -0.618...
        let (lo, hi) = d.modulus_bounds();
        assert!(lo < BigRational::new(619.into(), 1000.into()) && hi > BigRational::new(617.into(), 1000.into()));
    }

    #[test]
    fn conjugates_inside_unit_circle() {
        for k in 2..=50 {
            let r = conjugate_disks(k).unwrap();
            assert_eq!(r.disks.len(), k);
            assert!(fk_conjugates_below_one(&r), "k={k}");
        }
    }
}
