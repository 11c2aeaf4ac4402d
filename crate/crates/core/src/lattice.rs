//! Exact LLL reduction (integral variant, parameter 3/4) and the
//! lower bound for the distance from a lattice to a target vector that
//! turns a reduced basis into a new bound on the exponents.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebraic::poly::bareiss_det;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// Square integer basis, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    columns: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(columns: Vec<Vec<BigInt>>) -> Result<Self> {
        let b = LatticeBasis { columns };
        let d = b.columns.len();
        if d == 0 || b.columns.iter().any(|c| c.len() != d) {
            return Err(Error::domain("lattice basis must be a nonempty square matrix"));
        }
        if b.determinant().is_zero() {
            return Err(Error::DependentBasis);
        }
        Ok(b)
    }

    pub fn from_i64(columns: &[Vec<i64>]) -> Result<Self> {
        Self::new(columns.iter().map(|c| c.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<BigInt>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[BigInt] {
        &self.columns[j]
    }

    pub fn determinant(&self) -> BigInt {
        bareiss_det(self.columns.clone())
    }
}

#[derive(Clone, Debug)]
pub struct GramSchmidtData {
    pub bstar: Vec<Vec<BigRational>>,
    /// mu[i][j] for j < i.
    pub mu: Vec<Vec<BigRational>>,
}

impl GramSchmidtData {
    pub fn norm_sq(&self, i: usize) -> BigRational {
        dot_q(&self.bstar[i], &self.bstar[i])
    }
}

#[derive(Clone, Debug)]
pub struct ReducedBasis {
    pub basis: LatticeBasis,
    pub gs: GramSchmidtData,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn gram_schmidt(basis: &LatticeBasis) -> GramSchmidtData {
    let n = basis.dim();
    let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let bi: Vec<BigRational> = basis.columns[i].iter().map(|v| BigRational::from_integer(v.clone())).collect();
        let mut v = bi.clone();
        for j in 0..i {
            let m = dot_q(&bi, &bstar[j]) / &norms[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        norms.push(dot_q(&v, &v));
        bstar.push(v);
    }
    GramSchmidtData { bstar, mu }
}

/// Both reduction conditions, checked exactly.
pub fn is_lll_reduced(gs: &GramSchmidtData) -> bool {
    let half = BigRational::new(1.into(), 2.into());
    let three_quarters = BigRational::new(3.into(), 4.into());
    let n = gs.bstar.len();
    for i in 0..n {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let lhs = gs.norm_sq(i) + &gs.mu[i][i - 1] * &gs.mu[i][i - 1] * gs.norm_sq(i - 1);
            if lhs < &three_quarters * gs.norm_sq(i - 1) {
                return false;
            }
        }
    }
    true
}

/// Nearest integer to a/b (b > 0), halves rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * BigInt::from(2) + b).div_floor(&(b * BigInt::from(2)))
}

/// Integral LLL with exact Gram determinants d_i and scaled coefficients
/// lambda_ij = d_j mu_ij; all divisions below are exact.
pub fn lll_reduce(basis: &LatticeBasis) -> Result<ReducedBasis> {
    let n = basis.dim();
    // 1-based indices for b, d and lambda; d[0] = 1.
    let mut b: Vec<Vec<BigInt>> = std::iter::once(Vec::new()).chain(basis.columns.iter().cloned()).collect();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[1], &b[1]);
    if d[1].is_zero() {
        return Err(Error::DependentBasis);
    }
    let mut k = 2;
    let mut kmax = 1;

    fn red(k: usize, l: usize, b: &mut [Vec<BigInt>], d: &[BigInt], lam: &mut [Vec<BigInt>]) {
        if (&lam[k][l] * 2u32).abs() > d[l] {
            let q = round_div(&lam[k][l], &d[l]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] = &lam[k][l] - &q * &d[l];
            for i in 1..l {
                let v = &q * &lam[l][i];
                lam[k][i] -= v;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::DependentBasis);
                    }
                    d[k] = u;
                }
            }
        }
        red(k, k - 1, &mut b, &d, &mut lam);
        let lhs = &d[k] * &d[k - 2] * 4u32;
        let rhs = &d[k - 1] * &d[k - 1] * 3u32 - &lam[k][k - 1] * &lam[k][k - 1] * 4u32;
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let l = lam[k][k - 1].clone();
            let big_b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = big_b;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                red(k, l, &mut b, &d, &mut lam);
            }
            k += 1;
        }
    }
    let reduced = LatticeBasis { columns: b.into_iter().skip(1).collect() };
    let gs = gram_schmidt(&reduced);
    Ok(ReducedBasis { basis: reduced, gs })
}

/// Exact solution of B z = y for a nonsingular column basis B.
pub fn solve(basis: &LatticeBasis, y: &[BigInt]) -> Result<Vec<BigRational>> {
    let n = basis.dim();
    if y.len() != n {
        return Err(Error::domain("target dimension does not match the lattice"));
    }
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    // augmented rows: a[i] = (B[i][0..n], y[i])
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| q(&basis.columns[j][i])).chain(std::iter::once(q(&y[i]))).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::DependentBasis)?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        let row = a[c].clone();
        for (r, ar) in a.iter_mut().enumerate() {
            if r != c && !ar[c].is_zero() {
                let f = ar[c].clone();
                for (x, v) in ar.iter_mut().zip(&row) {
                    *x -= &f * v;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n].clone()).collect())
}

/// Distance from q to the nearest integer.
pub fn dist_to_int(q: &BigRational) -> BigRational {
    let f = q - q.floor();
    let g = BigRational::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

#[derive(Clone, Debug)]
pub struct DeWegerOutcome {
    /// c1^2 with c1 = max_j |b_1| / |b*_j|.
    pub c1_sq: BigRational,
    /// The same ratio with min in place of max.
    pub c1_min_sq: BigRational,
    pub lambda: BigRational,
    /// delta^2 = lambda^2 |b_1|^2 / c1^2.
    pub delta_sq: BigRational,
    pub delta_min_sq: BigRational,
}

impl DeWegerOutcome {
    pub fn delta(&self) -> Interval {
        Interval::from_rational(&self.delta_sq, 64).sqrt().expect("nonnegative")
    }
}

/// Certified lower bound delta <= min over x in L, x != y, of |x - y|.
pub fn de_weger_lower_bound(reduced: &ReducedBasis, y: &[BigInt]) -> Result<DeWegerOutcome> {
    let z = solve(&reduced.basis, y)?;
    let lambda = match z.iter().rposition(|v| !v.is_integer()) {
        Some(i) => dist_to_int(&z[i]),
        None => BigRational::one(),
    };
    let n = reduced.basis.dim();
    let norms: Vec<BigRational> = (0..n).map(|i| reduced.gs.norm_sq(i)).collect();
    let b1 = &norms[0];
    let min_star = norms.iter().min().expect("nonempty").clone();
    let max_star = norms.iter().max().expect("nonempty").clone();
    let c1_sq = b1 / &min_star;
    let c1_min_sq = b1 / &max_star;
    let l2 = &lambda * &lambda;
    Ok(DeWegerOutcome { delta_sq: &l2 * &min_star, delta_min_sq: &l2 * &max_star, c1_sq, c1_min_sq, lambda })
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub s: BigRational,
    pub t: BigRational,
    /// Upper bound H >= every admissible exponent height.
    pub bound: Interval,
    pub new_bound: BigInt,
}

/// S = sum of X_i^2 over all but the last coordinate, T = (1 + sum X_i) / 2.
pub fn s_and_t(xs: &[BigInt]) -> (BigRational, BigRational) {
    let s: BigInt = xs[..xs.len() - 1].iter().map(|x| x * x).sum();
    let t: BigInt = xs.iter().sum::<BigInt>() + 1;
    (BigRational::from_integer(s), BigRational::new(t, 2.into()))
}

/// H <= (log(C c3) - log(sqrt(delta^2 - S) - T)) / c4 when delta^2 > T^2 + S.
pub fn reduction_step(outcome: &DeWegerOutcome, c: &BigInt, c3: &Interval, c4: &Interval, xs: &[BigInt], bits: u32) -> Result<ReductionStep> {
    if xs.is_empty() {
        return Err(Error::domain("need at least one coefficient bound"));
    }
    let (s, t) = s_and_t(xs);
    if outcome.delta_sq <= &t * &t + &s {
        return Err(Error::EnlargeC { suggested: c * BigInt::from(10u64.pow(10)) });
    }
    let root = Interval::from_rational(&(&outcome.delta_sq - &s), bits).sqrt()?;
    let gap = root.sub(&Interval::from_rational(&t, bits));
    if !gap.is_certainly_positive() {
        return Err(Error::needs_precision("sqrt(delta^2 - S) - T", bits * 2));
    }
    let num = Interval::from_int(c, bits).mul(&c3.with_bits(bits)).ln()?.sub(&gap.ln()?);
    let bound = num.div(&c4.with_bits(bits))?;
    let new_bound = crate::interval::floor_div(bound.hi_raw(), &(BigInt::one() << bound.bits()));
    Ok(ReductionStep { s, t, bound, new_bound })
}

/// Columns e_1, ..., e_{d-1} atop the row of floor(C eta_i).
pub fn build_approx_lattice(etas: &[Interval], c: &BigInt) -> Result<LatticeBasis> {
    let d = etas.len();
    if d < 2 {
        return Err(Error::domain("approximation lattice needs at least two logarithms"));
    }
    let mut columns = Vec::with_capacity(d);
    for (j, eta) in etas.iter().enumerate() {
        let scaled = eta.mul_int(c);
        let f = scaled.floor().ok_or_else(|| {
            let need = eta.bits() + c.bits() as u32 + 64;
            Error::NeedsPrecision { context: format!("floor(C * eta_{})", j + 1), suggested_bits: need }
        })?;
        let mut col = vec![BigInt::zero(); d];
        if j + 1 < d {
            col[j] = BigInt::one();
        }
        col[d - 1] = f;
        columns.push(col);
    }
    LatticeBasis::new(columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn enumerate_min(basis: &LatticeBasis, y: &[BigInt], r: i64) -> BigInt {
        let n = basis.dim();
        let mut coeffs = vec![-r; n];
        let mut best: Option<BigInt> = None;
        loop {
            let mut v: Vec<BigInt> = y.iter().map(|x| -x).collect();
            for (j, &cj) in coeffs.iter().enumerate() {
                for (vi, bij) in v.iter_mut().zip(&basis.columns[j]) {
                    *vi += bij * cj;
                }
            }
            let nn = dot(&v, &v);
            if !nn.is_zero() && best.as_ref().map_or(true, |b| nn < *b) {
                best = Some(nn);
            }
            let mut i = 0;
            while i < n {
                coeffs[i] += 1;
                if coeffs[i] <= r {
                    break;
                }
                coeffs[i] = -r;
                i += 1;
            }
            if i == n {
                return best.expect("box has a nonzero point");
            }
        }
    }

    fn random_basis(rng: &mut ChaCha8Rng, n: usize, range: i64) -> LatticeBasis {
        loop {
            let cols: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-range..=range)).collect()).collect();
            if let Ok(b) = LatticeBasis::from_i64(&cols) {
                return b;
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        for n in 1..=5 {
            let cols: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| (i == j) as i64).collect()).collect();
            let b = LatticeBasis::from_i64(&cols).unwrap();
            assert_eq!(lll_reduce(&b).unwrap().basis, b);
        }
    }

    #[test]
    fn small_example() {
        let b = LatticeBasis::from_i64(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]).unwrap();
        let r = lll_reduce(&b).unwrap();
        assert!(is_lll_reduced(&r.gs));
        assert_eq!(r.basis.determinant().abs(), b.determinant().abs());
        let lam1 = enumerate_min(&b, &[0.into(), 0.into(), 0.into()], 10);
        let b1 = dot(&r.basis.columns[0], &r.basis.columns[0]);
        assert!(b1 <= lam1 * 4);
        let again = lll_reduce(&r.basis).unwrap();
        assert!(is_lll_reduced(&again.gs));
    }

    #[test]
    fn dependent_columns_rejected() {
        assert!(matches!(LatticeBasis::from_i64(&[vec![1, 2], vec![2, 4]]), Err(Error::DependentBasis)));
    }

    #[test]
    fn in_lattice_target() {
        let b = LatticeBasis::from_i64(&[vec![3, 1], vec![1, 4]]).unwrap();
        let r = lll_reduce(&b).unwrap();
        let o = de_weger_lower_bound(&r, &[0.into(), 0.into()]).unwrap();
        assert_eq!(o.lambda, BigRational::one());
        assert_eq!(o.delta_sq, BigRational::from_integer(dot(&r.basis.columns[0], &r.basis.columns[0])) / o.c1_sq.clone());
    }

    #[test]
    fn reduction_examples() {
        let ln15 = Interval::from_decimal("1.5", 128).unwrap().ln().unwrap();
        let fake = |delta: &str| {
            let d = crate::interval::parse_decimal(delta).unwrap();
            DeWegerOutcome { c1_sq: BigRational::one(), c1_min_sq: BigRational::one(), lambda: BigRational::one(), delta_sq: &d * &d, delta_min_sq: &d * &d }
        };
        // S = 2.22e130, T = 1.26e65 with three bounds X = 8.4e64 (approximately)
        let x = BigInt::parse_bytes(b"84000000000000000000000000000000000000000000000000000000000000000", 10).unwrap();
        let c = BigInt::from(6) * BigInt::from(10).pow(194);
        let c3 = Interval::from_decimal("1e28", 128).unwrap();
        let step = reduction_step(&fake("1e66"), &c, &c3, &ln15, &[x.clone(), x.clone(), x.clone()], 128).unwrap();
        assert!(step.new_bound < BigInt::from(891) && step.new_bound > BigInt::from(880));
        let c = BigInt::from(10).pow(21);
        let c3 = Interval::from_i64(33858, 128);
        let xs = vec![BigInt::from(11_270_000u64); 3];
        let step = reduction_step(&fake("1e10"), &c, &c3, &ln15, &xs, 128).unwrap();
        assert!(step.new_bound < BigInt::from(111), "{}", step.new_bound);
        // boundary: delta^2 = T^2 + S
        let xs = vec![BigInt::from(1), BigInt::from(1)];
        let (s, t) = s_and_t(&xs);
        let o = DeWegerOutcome { c1_sq: BigRational::one(), c1_min_sq: BigRational::one(), lambda: BigRational::one(), delta_sq: &t * &t + &s, delta_min_sq: BigRational::one() };
        assert!(matches!(reduction_step(&o, &BigInt::from(10), &c3, &ln15, &xs, 128), Err(Error::EnlargeC { .. })));
    }

    #[test]
    fn approx_lattice_integers() {
        let etas: Vec<Interval> = [2i64, -3, 5].iter().map(|&v| Interval::from_i64(v, 32)).collect();
        let b = build_approx_lattice(&etas, &BigInt::one()).unwrap();
        assert_eq!(b.column(2)[2], BigInt::from(5));
        assert_eq!(b.column(0), &[BigInt::from(1), BigInt::from(0), BigInt::from(2)]);
        let wide = vec![Interval::hull_of(&BigRational::new(1.into(), 3.into()), &BigRational::new(2.into(), 3.into()), 32), Interval::from_i64(1, 32)];
        assert!(matches!(build_approx_lattice(&wide, &BigInt::from(3)), Err(Error::NeedsPrecision { .. })));
    }

    #[test]
    fn random_reduced_and_short() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..=3);
            let b = random_basis(&mut rng, n, 20);
            let r = lll_reduce(&b).unwrap();
            assert!(is_lll_reduced(&r.gs));
            assert_eq!(r.basis.determinant().abs(), b.determinant().abs());
            let zero = vec![BigInt::zero(); n];
            let lam1 = enumerate_min(&r.basis, &zero, 4);
            let b1 = dot(&r.basis.columns[0], &r.basis.columns[0]);
            assert!(b1 <= lam1 << (n - 1));
        }
    }

    #[test]
    fn de_weger_sound_on_random_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let b = random_basis(&mut rng, 3, 12);
            let r = lll_reduce(&b).unwrap();
            let y: Vec<BigInt> = (0..3).map(|_| BigInt::from(rng.gen_range(-40..=40))).collect();
            let o = de_weger_lower_bound(&r, &y).unwrap();
            let m = enumerate_min(&r.basis, &y, 6);
            assert!(o.delta_sq <= BigRational::from_integer(m));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reduced_conditions_hold(seed in any::<u64>(), n in 3usize..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random_basis(&mut rng, n, 1000);
            let r = lll_reduce(&b).unwrap();
            prop_assert!(is_lll_reduced(&r.gs));
            prop_assert_eq!(r.basis.determinant().abs(), b.determinant().abs());
        }
    }
}
