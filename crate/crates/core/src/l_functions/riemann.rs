use num_bigint::BigInt;
use crate::special_functions::{ln_gamma, ln_sin_pi};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::sync::OnceLock;

const TERMS: usize = 30;

/// `B_{2k} / (2k)!` for `k = 1..=TERMS`.
fn bernoulli_ratios() -> &'static [f64] {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| {
        let n = 2 * TERMS;
        // B_m from sum_{j<=m} C(m+1, j) B_j = 0
        let mut b: Vec<BigRational> = vec![BigRational::from_integer(1.into())];
        let binom = |m: usize, k: usize| -> BigInt {
            let mut r = BigInt::from(1);
            for i in 0..k {
                r = r * BigInt::from(m - i) / BigInt::from(i + 1);
            }
            r
        };
        for m in 1..=n {
            let mut s = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                s += BigRational::from_integer(binom(m + 1, j)) * bj;
            }
            b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let mut fact = BigInt::from(1);
        let mut out = vec![];
        for m in 1..=n {
            fact *= BigInt::from(m);
            if m % 2 == 0 {
                out.push((b[m].clone() / BigRational::from_integer(fact.clone())).to_f64().unwrap());
            }
        }
        out
    })
}

/// Euler-Maclaurin tail pieces: returns `(sum_{n<N} n^{-s} + N^{-s}/2 + corrections, N, N^{-s})`;
/// the caller adds the `N^{1-s}/(s-1)` term.
fn em_core(s: Complex64) -> (Complex64, f64, Complex64) {
    let n = (s.norm().ceil() + 20.0).max(20.0) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..n {
        acc += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_s = (-s * ln_n).exp();
    acc += n_s * 0.5;
    // sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut poch = s;
    let mut pw = n_s / nf;
    for (k, &bk) in bernoulli_ratios().iter().enumerate() {
        let term = poch * pw * bk;
        acc += term;
        let j = (2 * k) as f64;
        poch *= (s + j + 1.0) * (s + j + 2.0);
        pw /= nf * nf;
    }
    (acc, nf, n_s)
}

/// Riemann zeta for complex `s != 1`.
pub fn zeta(s: Complex64) -> Complex64 {
    if s.re < 0.0 && s.norm() > 0.5 {
        // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
        let one = Complex64::new(1.0, 0.0);
        let l = s * std::f64::consts::LN_2 + (s - 1.0) * std::f64::consts::PI.ln() + ln_sin_pi(s * 0.5) + ln_gamma(one - s);
        return l.exp() * zeta(one - s);
    }
    let (acc, nf, n_s) = em_core(s);
    acc + n_s * nf / (s - 1.0)
}

/// `zeta(s) - 1/(s-1)`, finite at `s = 1` (equal to Euler's constant there).
pub fn zeta_regular(s: Complex64) -> Complex64 {
    let (acc, nf, _) = em_core(s);
    let z = (Complex64::new(1.0, 0.0) - s) * nf.ln();
    // (N^{1-s} - 1)/(s-1) = -ln N * expm1(z)/z
    let ratio = if z.norm() < 1e-8 { Complex64::new(1.0, 0.0) + z * 0.5 } else { (z.exp() - 1.0) / z };
    acc - ratio * nf.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!((zeta(c(2.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(c(0.0, 0.0)).re + 0.5).abs() < 1e-15);
        assert!((zeta(c(-1.0, 0.0)).re + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta_regular(c(1.0, 0.0)).re - 0.577_215_664_901_532_9).abs() < 1e-15);
        // first nontrivial zero
        assert!(zeta(c(0.5, 14.134_725_141_734_693)).norm() < 1e-12);
    }

    #[test]
    fn regular_part_is_continuous() {
        let s = c(1.0 + 1e-7, 0.0);
        let a = zeta_regular(s);
        let b = zeta(s) - 1.0 / (s - 1.0);
        assert!((a - b).norm() < 1e-7);
    }
}
