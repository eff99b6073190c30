//! Exact arithmetic in `Z[zeta_m]`, stored in the group ring `Z[x]/(x^m - 1)`
//! and compared after reduction modulo the cyclotomic polynomial.

use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_poly(n: usize) -> Vec<i128> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![0i128; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut q = vec![0i128; r.len() - dn];
    for i in (0..q.len()).rev() {
        let c = r[i + dn] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            r[i + j] -= c * dj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Remainder of `p` modulo the monic `Phi_n`.
pub fn reduce_mod_cyclotomic(p: &[i128], n: usize) -> Vec<i128> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let mut r = p.to_vec();
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for (j, &pj) in phi.iter().enumerate() {
                r[i - deg + j] -= c * pj;
            }
        }
    }
    r.truncate(deg);
    r.resize(deg, 0);
    r
}

#[derive(Clone, Debug)]
pub struct CyclotomicInt {
    pub m: usize,
    pub c: Vec<i128>,
}

impl CyclotomicInt {
    pub fn zero(m: usize) -> Self {
        CyclotomicInt { m, c: vec![0; m] }
    }

    pub fn from_int(m: usize, k: i128) -> Self {
        let mut z = Self::zero(m);
        z.c[0] = k;
        z
    }

    /// `zeta_m^k`.
    pub fn root(m: usize, k: i64) -> Self {
        let mut z = Self::zero(m);
        z.c[k.rem_euclid(m as i64) as usize] = 1;
        z
    }

    pub fn reduced(&self) -> Vec<i128> {
        reduce_mod_cyclotomic(&self.c, self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&x| x == 0)
    }

    /// Rational integer value if the element lies in `Z`.
    pub fn as_integer(&self) -> Option<i128> {
        let r = self.reduced();
        r[1..].iter().all(|&x| x == 0).then(|| r[0])
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let tau = std::f64::consts::TAU;
        self.c
            .iter()
            .enumerate()
            .map(|(k, &x)| num_complex::Complex64::from_polar(x as f64, tau * k as f64 / self.m as f64))
            .sum()
    }
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && (self - o).is_zero()
    }
}

impl<'a> Add<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn add(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.m, o.m);
        CyclotomicInt { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn sub(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.m, o.m);
        CyclotomicInt { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a CyclotomicInt> for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn mul(self, o: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.m, o.m);
        let m = self.m;
        let mut c = vec![0i128; m];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[(i + j) % m] += a * b;
            }
        }
        CyclotomicInt { m, c }
    }
}

impl<'a> Neg for &'a CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt { m: self.m, c: self.c.iter().map(|a| -a).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for m in [2usize, 3, 4, 6, 12] {
            let mut s = CyclotomicInt::zero(m);
            for k in 0..m {
                s = &s + &CyclotomicInt::root(m, k as i64);
            }
            assert!(s.is_zero());
        }
        let w = CyclotomicInt::root(3, 1);
        assert_eq!((&w * &w).as_integer(), None);
        assert_eq!((&(&w * &w) + &(&w + &CyclotomicInt::from_int(3, 1))).as_integer(), Some(0));
    }
}
