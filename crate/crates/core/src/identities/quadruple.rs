//! `sum_m sigma_{-it}(chi1, m) sigma_{it}(chi2, m) chi3(m) N(m)^{-s/2}` against
//! its five-L-function closed form.

use super::VerificationReport;
use crate::error::{Error, Result};
use crate::l_functions::sieve::coefficients;
use crate::l_functions::LContext;
use num_complex::Complex64;
use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadrupleSides {
    pub triple: [usize; 3],
    pub s: Complex64,
    pub t: f64,
    /// Truncated ideal sum up to norm `x`.
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Tail extrapolated from the partial sums at `x/2` and `x`.
    pub est_tail: f64,
    pub x: u64,
}

impl QuadrupleSides {
    pub fn rel_residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.rhs.norm()
    }
}

/// Default truncation for `Re s = 6`; the tail decays like `x^{1 - Re(s)/2}`.
pub const DEFAULT_X: u64 = 300_000;

pub fn quadruple_sides(l: &LContext, s: Complex64, t: f64, triple: [usize; 3], x: u64) -> Result<QuadrupleSides> {
    if s.re < 4.0 {
        return Err(Error::Domain(format!("quadruple-L check needs Re(s) >= 4, got {}", s.re)));
    }
    let g = l.group();
    let h = g.h();
    if triple.iter().any(|&c| c >= h) || x < 4 {
        return Err(Error::Domain(format!("bad character triple {triple:?} or cutoff {x}")));
    }
    let [c1, c2, c3] = triple;
    let primes = l.primes_up_to(x);
    let one = Complex64::new(1.0, 0.0);
    let local = |p: crate::l_functions::sieve::LocalPrime, k: u32| {
        let ln = (p.norm as f64).ln();
        let a = g.chi(c1, p.class) * Complex64::from_polar(1.0, -t * ln);
        let b = g.chi(c2, p.class) * Complex64::from_polar(1.0, t * ln);
        let geo = |z: Complex64| (0..=k).fold((Complex64::new(0.0, 0.0), one), |(acc, zl), _| (acc + zl, zl * z)).0;
        g.chi(c3, p.class).powu(k) * (-(s * 0.5) * ln * k as f64).exp() * geo(a) * geo(b)
    };
    let coef = coefficients(&primes, x, local);
    let half: Complex64 = coef[..=(x / 2) as usize].iter().sum();
    let lhs: Complex64 = half + coef[(x / 2) as usize + 1..].iter().sum::<Complex64>();
    let sigma = s.re / 2.0;
    let est_tail = (lhs - half).norm() / (2f64.powf(sigma - 1.0) - 1.0);

    let m = |a: usize, b: usize| g.mul_characters(a, b);
    let lv = |chi: usize, z: Complex64| l.hecke_l(chi, z).map(|v| v.value);
    let it = Complex64::new(0.0, t);
    let h2 = s * 0.5;
    let num = lv(c3, h2)? * lv(m(m(c1, c2), c3), h2)? * lv(m(c1, c3), h2 + it)? * lv(m(c2, c3), h2 - it)?;
    let rhs = num / lv(m(m(c1, c2), m(c3, c3)), s)?;
    Ok(QuadrupleSides { triple, s, t, lhs, rhs, est_tail, x })
}

/// Worst relative residual over `ts` and `triples`; fails loudly if a
/// truncation tail exceeds the tolerance.
pub fn verify_quadruple_l(l: &LContext, s: Complex64, ts: &[f64], triples: &[[usize; 3]], x: u64, tol: f64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for &t in ts {
        for &tr in triples {
            let q = quadruple_sides(l, s, t, tr, x)?;
            if q.est_tail > tol * q.lhs.norm() {
                return Err(Error::Numerical(format!("truncation tail {:.2e} above tolerance at t={t}, {tr:?}", q.est_tail)));
            }
            worst = worst.max(q.rel_residual());
        }
    }
    let params = serde_json::json!({
        "d": l.field().d(), "s": [s.re, s.im], "t": ts, "triples": triples, "x": x,
    });
    Ok(VerificationReport::new("quadruple_l", params, worst, tol, t0))
}

/// Every triple of character indices.
pub fn all_triples(h: usize) -> Vec<[usize; 3]> {
    let mut v = vec![];
    for a in 0..h {
        for b in 0..h {
            for c in 0..h {
                v.push([a, b, c]);
            }
        }
    }
    v
}
