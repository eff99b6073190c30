//! Epstein zeta `Z_Q(s) = sum' Q(m,n)^{-s}` of a positive definite integral
//! binary form, continued to all `s != 1`.

use super::riemann::zeta;
use crate::special_functions::{bessel_k, ln_gamma, rgamma, upper_incomplete_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Chowla-Selberg decomposition
/// `Z_Q(s) = A(s) + P(s) zeta(2s-1) a^{s-1} + B(s)` for `Q = (a, b, c)`,
/// where `P(s) = 2 sqrt(pi) Gamma(s-1/2)/Gamma(s) (Delta/4)^{1/2-s}` depends
/// only on the discriminant `-Delta`.
#[derive(Clone, Copy, Debug)]
pub struct CsPieces {
    /// `2 a^{-s} zeta(2s)`
    pub a_term: Complex64,
    /// K-Bessel series
    pub bessel: Complex64,
    /// `a^{s-1}`
    pub a_pow: Complex64,
    /// absolute size of the summed terms, for error estimates
    pub magnitude: f64,
}

pub fn cs_prefactor(delta: f64, s: Complex64) -> Complex64 {
    let half = Complex64::new(0.5, 0.0);
    let lg = ln_gamma(s - half) - ln_gamma(s);
    2.0 * PI.sqrt() * (lg + (half - s) * (delta / 4.0).ln()).exp()
}

fn sigma_pow(n: u64, e: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += (e * (d as f64).ln()).exp();
            let q = n / d;
            if q != d {
                acc += (e * (q as f64).ln()).exp();
            }
        }
        d += 1;
    }
    acc
}

pub fn cs_pieces(form: (i64, i64, i64), s: Complex64) -> CsPieces {
    let (a, b, c) = (form.0 as f64, form.1 as f64, form.2 as f64);
    let delta = 4.0 * a * c - b * b;
    let ln_a = a.ln();
    let a_ms = (-s * ln_a).exp();
    let a_term = a_ms * zeta(s * 2.0) * 2.0;
    let half = Complex64::new(0.5, 0.0);
    let nu = s - half;
    // a^{-s} 2 sqrt(pi)/Gamma(s) (2 pi a / sqrt(Delta))^{s-1/2} * 4
    let pre = a_ms * rgamma(s) * 2.0 * PI.sqrt() * (nu * (2.0 * PI * a / delta.sqrt()).ln()).exp() * 4.0;
    let step = PI * delta.sqrt() / a;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let e = Complex64::new(1.0, 0.0) - s * 2.0;
    for n in 1u64.. {
        let x = step * n as f64;
        let k = bessel_k(nu, x).unwrap_or(Complex64::new(0.0, 0.0));
        let bare = (nu * (n as f64).ln()).exp() * sigma_pow(n, e) * k;
        let term = bare * (PI * n as f64 * b / a).cos();
        sum += term;
        mag += term.norm();
        // the cosine may vanish at isolated n, so stop on the bare size
        if x > nu.im.abs() + 8.0 && bare.norm() < 1e-18 * (sum.norm() + 1e-300) {
            break;
        }
        if x > nu.im.abs() + 800.0 {
            break;
        }
    }
    let bessel = pre * sum;
    let a_pow = ((s - 1.0) * ln_a).exp();
    CsPieces { a_term, bessel, a_pow, magnitude: a_term.norm() + (pre * mag).norm() }
}

/// `Z_Q(s)` by Chowla-Selberg; `s` must avoid `1` and `1/2`.
pub fn epstein_cs(form: (i64, i64, i64), s: Complex64) -> Complex64 {
    let (a, b, c) = form;
    let delta = (4 * a * c - b * b) as f64;
    let p = cs_pieces(form, s);
    p.a_term + cs_prefactor(delta, s) * zeta(s * 2.0 - 1.0) * p.a_pow + p.bessel
}

/// `Z_Q(s)` by the theta-function representation split at `lambda`:
/// with `q = 2Q/sqrt(Delta)` of determinant one,
/// `Lambda(s) = sum' [(pi q)^{-s} Gamma(s, pi q lambda) + (pi q)^{s-1} Gamma(1-s, pi q / lambda)]
///  + lambda^{s-1}/(s-1) - lambda^s/s`
/// and `Z_Q(s) = (2 pi / sqrt(Delta))^s Lambda(s) / Gamma(s)`.
pub fn epstein_theta(form: (i64, i64, i64), s: Complex64, lambda: f64) -> Complex64 {
    let (a, b, c) = (form.0 as f64, form.1 as f64, form.2 as f64);
    let delta = 4.0 * a * c - b * b;
    let scale = 2.0 / delta.sqrt();
    let one = Complex64::new(1.0, 0.0);
    let lmin = lambda.min(1.0 / lambda);
    // e^{-pi q lmin} below 1e-19 relative
    let qmax = (46.0 + 2.0 * s.norm().ln().max(0.0)) / (PI * lmin);
    let qf = qmax / scale;
    let nmax = (4.0 * a * qf / delta).sqrt().floor() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -nmax..=nmax {
        let nf = n as f64;
        let rem = qf - delta * nf * nf / (4.0 * a);
        if rem < 0.0 {
            continue;
        }
        let center = -b * nf / (2.0 * a);
        let w = (rem / a).sqrt();
        for m in (center - w).floor() as i64..=(center + w).ceil() as i64 {
            if m == 0 && n == 0 {
                continue;
            }
            let mf = m as f64;
            let qv = (a * mf * mf + b * mf * nf + c * nf * nf) * scale;
            let x = PI * qv;
            acc += (-s * x.ln()).exp() * upper_incomplete_gamma(s, x * lambda)
                + ((s - 1.0) * x.ln()).exp() * upper_incomplete_gamma(one - s, x / lambda);
        }
    }
    let lam = acc + ((s - 1.0) * lambda.ln()).exp() / (s - 1.0) - (s * lambda.ln()).exp() / s;
    (s * (2.0 * PI / delta.sqrt()).ln()).exp() * lam * rgamma(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_two_squares() {
        // Z_{x^2+y^2}(s) = 4 zeta(s) L(s, chi_{-4}); at s=2: 4 * pi^2/6 * Catalan
        let catalan = 0.915_965_594_177_219_0;
        let want = 4.0 * PI * PI / 6.0 * catalan;
        let z = epstein_cs((1, 0, 1), Complex64::new(2.0, 0.0));
        assert!((z.re - want).abs() < 1e-13 * want);
        let th = epstein_theta((1, 0, 1), Complex64::new(2.0, 0.0), 1.0);
        assert!((th.re - want).abs() < 1e-12 * want);
    }

    #[test]
    fn theta_splits_agree_with_cs() {
        for form in [(1, 0, 5), (2, 2, 3), (2, 1, 3)] {
            for s in [Complex64::new(0.3, 2.0), Complex64::new(-0.5, 6.0), Complex64::new(1.7, -4.0)] {
                let cs = epstein_cs(form, s);
                let t1 = epstein_theta(form, s, 1.0);
                let t2 = epstein_theta(form, s, 1.3);
                assert!((cs - t1).norm() < 1e-9 * cs.norm(), "{form:?} {s} {cs} {t1} {t2}");
                assert!((t1 - t2).norm() < 1e-9 * cs.norm());
            }
        }
    }
}
