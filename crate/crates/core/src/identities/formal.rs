//! Truncated power series and the local Euler-factor identity for the twisted
//! GL2 divisor series.

use super::VerificationReport;
use crate::class_group::cyclotomic::CyclotomicInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::time::Instant;

/// Coefficient ring for [`FormalSeries`].
pub trait Coefficient: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Inverse when `self` is a unit of the coefficient ring.
    fn unit_inverse(&self) -> Option<Self>;
    /// Size of `self - o`; zero iff equal.
    fn distance(&self, o: &Self) -> f64;
}

impl Coefficient for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.norm() > 0.0).then(|| self.inv())
    }
    fn distance(&self, o: &Self) -> f64 {
        (self - o).norm()
    }
}

/// Only `+-zeta^k` are inverted; that is all the series below need.
impl Coefficient for CyclotomicInt {
    fn zero_like(&self) -> Self {
        CyclotomicInt::zero(self.m)
    }
    fn one_like(&self) -> Self {
        CyclotomicInt::from_int(self.m, 1)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn unit_inverse(&self) -> Option<Self> {
        let m = self.m as i64;
        (0..m).find_map(|k| {
            let z = CyclotomicInt::root(self.m, k);
            if *self == z {
                Some(CyclotomicInt::root(self.m, -k))
            } else if *self == -&z {
                Some(-&CyclotomicInt::root(self.m, -k))
            } else {
                None
            }
        })
    }
    fn distance(&self, o: &Self) -> f64 {
        if self == o {
            0.0
        } else {
            (self.to_complex() - o.to_complex()).norm().max(1.0)
        }
    }
}

/// `sum_{k <= order} c_k X^k`.
#[derive(Clone, Debug)]
pub struct FormalSeries<T> {
    pub coeffs: Vec<T>,
}

impl<T: Coefficient> FormalSeries<T> {
    /// Pads or truncates to `order + 1` coefficients; `like` fixes the ring.
    pub fn new(mut coeffs: Vec<T>, order: usize, like: &T) -> Self {
        coeffs.resize(order + 1, like.zero_like());
        FormalSeries { coeffs }
    }

    pub fn one(order: usize, like: &T) -> Self {
        Self::new(vec![like.one_like()], order, like)
    }

    /// `1 - a X`
    pub fn one_minus(a: &T, order: usize) -> Self {
        let z = a.zero_like();
        Self::new(vec![a.one_like(), z.sub(a)], order, a)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        FormalSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        FormalSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        let n = self.order();
        let z = self.coeffs[0].zero_like();
        let mut c = vec![z; n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        FormalSeries { coeffs: c }
    }

    /// Exact to the truncation order; `None` unless the constant term is a unit.
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.coeffs[0].unit_inverse()?;
        let n = self.order();
        let mut b = vec![c0.clone()];
        for k in 1..=n {
            let mut acc = c0.zero_like();
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&b[k - i]));
            }
            b.push(c0.zero_like().sub(&c0.mul(&acc)));
        }
        Some(FormalSeries { coeffs: b })
    }

    pub fn max_distance(&self, o: &Self) -> f64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }
}

/// One prime's worth of data: Satake parameters with `alpha beta = chi(p)`,
/// character values, and `u` standing in for `N(p)^{-it}`.
#[derive(Clone, Debug)]
pub struct LocalData<T> {
    pub alpha: T,
    pub beta: T,
    pub chi: T,
    pub chi1: T,
    pub chi2: T,
    pub u: T,
}

fn pow<T: Coefficient>(x: &T, k: usize) -> T {
    (0..k).fold(x.one_like(), |acc, _| acc.mul(x))
}

/// Both sides of the local factor in `X = N(p)^{-(s-it)/2}`:
/// `sum_k sigma_{-it}(chi1, p^k) lambda(p^k) chi2(p)^k N(p)^{-k/2} X^k` with
/// `lambda` from the Hecke recursion, and
/// `(1 - chi chi1 chi2^2 u X^2) / ((1 - a chi2 X)(1 - b chi2 X)(1 - a chi1 chi2 u X)(1 - b chi1 chi2 u X))`.
pub fn r_series_sides<T: Coefficient>(p: &LocalData<T>, order: usize) -> (FormalSeries<T>, FormalSeries<T>) {
    let one = p.alpha.one_like();
    let omega = p.alpha.mul(&p.beta);
    let l1 = p.alpha.add(&p.beta);
    // normalised eigenvalues lambda(p^k) N(p)^{-k/2}
    let mut lam = vec![one.clone(), l1.clone()];
    while lam.len() <= order {
        let k = lam.len();
        lam.push(l1.mul(&lam[k - 1]).sub(&omega.mul(&lam[k - 2])));
    }
    let x = p.chi1.mul(&p.u);
    let mut sigma = one.clone();
    let mut xl = one.clone();
    let mut lhs = vec![];
    for (k, lk) in lam.iter().enumerate().take(order + 1) {
        if k > 0 {
            xl = xl.mul(&x);
            sigma = sigma.add(&xl);
        }
        lhs.push(sigma.mul(lk).mul(&pow(&p.chi2, k)));
    }
    let lhs = FormalSeries::new(lhs, order, &one);

    let c12u = p.chi1.mul(&p.chi2).mul(&p.u);
    // inverting the four linear factors separately keeps float rounding small
    let den_inv = [p.alpha.mul(&p.chi2), p.beta.mul(&p.chi2), p.alpha.mul(&c12u), p.beta.mul(&c12u)]
        .iter()
        .map(|a| FormalSeries::one_minus(a, order).inv().expect("constant term 1"))
        .fold(FormalSeries::one(order, &one), |acc, f| acc.mul(&f));
    let top = p.chi.mul(&p.chi1).mul(&p.chi2).mul(&p.chi2).mul(&p.u);
    let zero = one.zero_like();
    let num = FormalSeries::new(vec![one.clone(), zero.clone(), zero.sub(&top)], order, &one);
    let rhs = num.mul(&den_inv);
    (lhs, rhs)
}

const CHAR_ORDERS: [u64; 5] = [1, 2, 3, 4, 6];

fn random_float_data(rng: &mut ChaCha8Rng) -> LocalData<Complex64> {
    let m = CHAR_ORDERS[rng.gen_range(0..CHAR_ORDERS.len())];
    let mut root = || Complex64::from_polar(1.0, TAU * rng.gen_range(0..m) as f64 / m as f64);
    let (chi, chi1, chi2) = (root(), root(), root());
    let alpha = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    let u = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    LocalData { beta: chi / alpha, alpha, chi, chi1, chi2, u }
}

/// Exact data in `Z[zeta_12]`; `alpha` and `u` are 12th roots of unity.
fn random_exact_data(rng: &mut ChaCha8Rng) -> LocalData<CyclotomicInt> {
    const M: usize = 12;
    let m = CHAR_ORDERS[rng.gen_range(0..CHAR_ORDERS.len())] as i64;
    let step = M as i64 / m;
    let mut root = || step * rng.gen_range(0..m);
    let (c, c1, c2) = (root(), root(), root());
    let a = rng.gen_range(0..M as i64);
    let r = |k: i64| CyclotomicInt::root(M, k);
    LocalData { alpha: r(a), beta: r(c - a), chi: r(c), chi1: r(c1), chi2: r(c2), u: r(rng.gen_range(0..M as i64)) }
}

/// Float mode: `trials` random local factors, residual the largest
/// coefficient difference up to `X^order`.
pub fn verify_r_series(trials: usize, order: usize, seed: u64) -> VerificationReport {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (l, r) = r_series_sides(&random_float_data(&mut rng), order);
        worst = worst.max(l.max_distance(&r));
    }
    let params = serde_json::json!({ "mode": "float", "trials": trials, "order": order, "seed": seed });
    VerificationReport::new("r_series", params, worst, 1e-10, t0)
}

/// Exact mode over `Z[zeta_12]`; the residual is 0 only if every coefficient
/// agrees exactly.
pub fn verify_r_series_exact(trials: usize, order: usize, seed: u64) -> VerificationReport {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (l, r) = r_series_sides(&random_exact_data(&mut rng), order);
        worst = worst.max(l.max_distance(&r));
    }
    let params = serde_json::json!({ "mode": "exact", "trials": trials, "order": order, "seed": seed });
    VerificationReport::new("r_series_exact", params, worst, 0.0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_of_geometric() {
        let f = FormalSeries::one_minus(&c(0.5, 0.25), 8);
        let g = f.inv().unwrap();
        let one = FormalSeries::one(8, &c(1.0, 0.0));
        assert!(f.mul(&g).max_distance(&one) < 1e-15);
        assert!((g.coeffs[3] - c(0.5, 0.25).powi(3)).norm() < 1e-15);
        assert!(FormalSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0)], 3, &c(0.0, 0.0)).inv().is_none());
    }

    #[test]
    fn low_orders_by_hand() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_float_data(&mut rng);
        let (l, r) = r_series_sides(&p, 5);
        assert!((l.coeffs[0] - 1.0).norm() < 1e-15 && (r.coeffs[0] - 1.0).norm() < 1e-15);
        let want = (p.alpha + p.beta) * p.chi2 * (1.0 + p.chi1 * p.u);
        assert!((l.coeffs[1] - want).norm() < 1e-14);
        assert!((r.coeffs[1] - want).norm() < 1e-14);
    }

    #[test]
    fn cyclotomic_units_invert() {
        for k in 0..12 {
            let z = CyclotomicInt::root(12, k);
            assert_eq!(&z * &z.unit_inverse().unwrap(), CyclotomicInt::from_int(12, 1));
            let nz = -&z;
            assert_eq!(&nz * &nz.unit_inverse().unwrap(), CyclotomicInt::from_int(12, 1));
        }
        assert!(CyclotomicInt::from_int(12, 2).unit_inverse().is_none());
    }

    #[test]
    fn wrong_central_character_is_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut p = random_exact_data(&mut rng);
        p.beta = p.beta.mul(&CyclotomicInt::root(12, 1));
        let (l, r) = r_series_sides(&p, 6);
        assert!(l.max_distance(&r) > 0.0);
    }
}
