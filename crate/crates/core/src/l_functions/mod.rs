//! Hecke L-functions of class group characters.
//!
//! `L(s, chi) = sum_C chi(C) zeta(s, C)` with `zeta(s, C) = Z_Q(s) / w` for the
//! reduced form `Q` of `C`. Each `Z_Q` is continued by the Chowla-Selberg
//! expansion; the theta-function form is kept as an independent check.

pub mod epstein;
pub mod riemann;
pub mod sieve;

use crate::class_group::ClassGroup;
use crate::error::{Error, Result};
use crate::number_field::{factor_rational_prime, valuation, Ideal, QuadField};
use crate::special_functions::ln_gamma;
use epstein::{cs_pieces, cs_prefactor};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use sieve::{LocalPrime, RationalPrime};
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TruncatedSeries,
    Continued,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LValue {
    pub s: Complex64,
    pub value: Complex64,
    pub method: Method,
    pub est_error: f64,
}

/// Field, class group and cached prime data for L-function evaluation.
pub struct LContext {
    group: ClassGroup,
    primes: OnceLock<Vec<RationalPrime>>,
    prime_bound: u64,
}

pub type LSeriesContext = LContext;

const DEFAULT_PRIME_BOUND: u64 = 100_000;

impl LContext {
    pub fn new(field: &QuadField) -> Result<Self> {
        Ok(Self::from_group(ClassGroup::new(field)?))
    }

    pub fn from_group(group: ClassGroup) -> Self {
        LContext { group, primes: OnceLock::new(), prime_bound: DEFAULT_PRIME_BOUND }
    }

    pub fn with_prime_bound(mut self, x: u64) -> Self {
        self.prime_bound = x;
        self
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn field(&self) -> &QuadField {
        self.group.field()
    }

    fn w(&self) -> f64 {
        self.field().unit_count() as f64
    }

    /// Splitting data for rational primes up to the context bound.
    pub fn primes(&self) -> &[RationalPrime] {
        self.primes.get_or_init(|| sieve::prime_table(&self.group, self.prime_bound))
    }

    /// Prime data up to `x`, reusing the cache when possible.
    pub fn primes_up_to(&self, x: u64) -> Vec<RationalPrime> {
        if x <= self.prime_bound {
            self.primes().iter().take_while(|r| r.p <= x).copied().collect()
        } else {
            sieve::prime_table(&self.group, x)
        }
    }

    fn check_s(&self, s: Complex64, trivial: bool) -> Result<()> {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::Domain(format!("non-finite s = {s}")));
        }
        if trivial && (s - 1.0).norm() < 1e-14 {
            return Err(Error::Pole("1".into()));
        }
        Ok(())
    }

    /// Partial zeta `zeta(s, C)` of class index `class`.
    pub fn partial_zeta(&self, class: usize, s: Complex64) -> Result<LValue> {
        self.check_s(s, true)?;
        let (value, err) = self.combine(s, &|c| if c == class { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }, false)?;
        Ok(LValue { s, value, method: Method::Continued, est_error: err })
    }

    /// `L(s, chi)` for character index `chi`.
    pub fn hecke_l(&self, chi: usize, s: Complex64) -> Result<LValue> {
        let ch = self.group.character(chi);
        self.check_s(s, ch.is_trivial())?;
        let (value, err) = self.combine(s, &|c| self.group.chi(chi, c), !ch.is_trivial())?;
        Ok(LValue { s, value, method: Method::Continued, est_error: err })
    }

    pub fn dedekind_zeta(&self, s: Complex64) -> Result<LValue> {
        self.hecke_l(0, s)
    }

    /// `(1/w) sum_C coef(C) Z_{Q_C}(s)`; with `balanced` the coefficients sum
    /// to zero and the pole at `s = 1` cancels analytically.
    fn combine(&self, s: Complex64, coef: &dyn Fn(usize) -> Complex64, balanced: bool) -> Result<(Complex64, f64)> {
        let half = Complex64::new(0.5, 0.0);
        if (s - half).norm() < 1e-7 {
            // removable singularity of the decomposition: average across it
            let e = Complex64::new(1e-4, 0.0);
            let (a, ea) = self.combine(s + e, coef, balanced)?;
            let (b, eb) = self.combine(s - e, coef, balanced)?;
            let (c2, _) = self.combine(s + e * 2.0, coef, balanced)?;
            let (d2, _) = self.combine(s - e * 2.0, coef, balanced)?;
            let v = ((a + b) * 4.0 - (c2 + d2)) / 6.0;
            return Ok((v, ea + eb + 1e-13 * v.norm()));
        }
        if s.im == 0.0 && s.re <= 0.5 && (s.re - 0.5).fract() == 0.0 {
            return Err(Error::Pole(format!("decomposition singular at s = {}", s.re)));
        }
        let h = self.group.h();
        let delta = self.field().abs_disc();
        let mut regular = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        let mut weighted_pow = Complex64::new(0.0, 0.0);
        let mut log_sum = Complex64::new(0.0, 0.0);
        for c in 0..h {
            let k = coef(c);
            if k.norm() == 0.0 {
                continue;
            }
            let form = self.group.form(c);
            let p = cs_pieces(form, s);
            regular += k * (p.a_term + p.bessel);
            mag += k.norm() * p.magnitude;
            weighted_pow += k * p.a_pow;
            // sum_C k_C (a^{s-1} - 1)/(s-1), stable near s = 1
            let la = (form.0 as f64).ln();
            let z = (s - 1.0) * la;
            let ratio = if z.norm() < 1e-8 { Complex64::new(la, 0.0) * (Complex64::new(1.0, 0.0) + z * 0.5) } else { (z.exp() - 1.0) / (s - 1.0) };
            log_sum += k * ratio;
        }
        let pre = cs_prefactor(delta, s);
        let pole_part = if balanced {
            // zeta(2s-1) = 1/(2(s-1)) + reg(2s-1), and sum_C k_C = 0
            let reg = riemann::zeta_regular(s * 2.0 - 1.0);
            pre * (reg * weighted_pow + log_sum * 0.5)
        } else {
            pre * riemann::zeta(s * 2.0 - 1.0) * weighted_pow
        };
        let value = (regular + pole_part) / self.w();
        let err = 1e-13 * (mag + pole_part.norm()) / self.w();
        Ok((value, err))
    }

    /// Truncated Dirichlet series `sum_{N(m) <= x} chi(m) N(m)^{-s}`, plus the
    /// main-term tail `c x^{1-s}/(s-1)` for trivial `chi`.
    pub fn hecke_l_truncated(&self, chi: usize, s: Complex64, x: u64) -> Result<LValue> {
        if s.re <= 1.0 {
            return Err(Error::Domain("truncated series needs Re(s) > 1".into()));
        }
        let primes = self.primes_up_to(x);
        let g = &self.group;
        let coeffs = sieve::coefficients(&primes, x, |pr: LocalPrime, j| {
            g.chi(chi, pr.class).powu(j) * (-s * (j as f64 * (pr.norm as f64).ln())).exp()
        });
        let mut value: Complex64 = coeffs.iter().sum();
        let xf = x as f64;
        let tail = self.ideal_density() * (Complex64::new(1.0, 0.0) - s).scale(xf.ln()).exp() / (s - 1.0);
        if g.character(chi).is_trivial() {
            value += tail;
        }
        // lattice-point error term O(x^{1/3}) in the ideal count
        let err = 3.0 * xf.powf(1.0 / 3.0) * xf.powf(-s.re) + 1e-15 * value.norm();
        Ok(LValue { s, value, method: Method::TruncatedSeries, est_error: err })
    }

    /// Ideals of norm at most `x` number `kappa x + O(x^{1/3})` with
    /// `kappa = 2 pi h / (w sqrt|d_F|)`.
    pub fn ideal_density(&self) -> f64 {
        2.0 * PI * self.group.h() as f64 / (self.w() * self.field().abs_disc().sqrt())
    }

    /// `Res_{s=1} zeta_F(s) = 2 pi h / (w sqrt|d_F|)`.
    pub fn residue_at_one(&self) -> f64 {
        self.ideal_density()
    }

    /// `xi(s, chi) = 2 (2 pi)^{-s} |d_F|^{s/2} Gamma(s) L(s, chi)`.
    /// At `s = 0` with `chi` nontrivial the pole of `Gamma` meets the zero of
    /// `L` and the limit is taken by symmetric averaging.
    pub fn completed_xi(&self, chi: usize, s: Complex64) -> Result<Complex64> {
        if s == Complex64::new(0.0, 0.0) && !self.group.character(chi).is_trivial() {
            let e = Complex64::new(0.0, 1e-5);
            return Ok((self.completed_xi(chi, e)? + self.completed_xi(chi, -e)?) * 0.5);
        }
        let l = self.hecke_l(chi, s)?;
        Ok(self.xi_factor(s)? * l.value)
    }

    /// `2 (2 pi)^{-s} |d_F|^{s/2} Gamma(s)`.
    pub fn xi_factor(&self, s: Complex64) -> Result<Complex64> {
        if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
            return Err(Error::Pole(format!("Gamma at {}", s.re)));
        }
        let d = self.field().abs_disc();
        Ok((ln_gamma(s) - s * (2.0 * PI).ln() + s * 0.5 * d.ln()).exp() * 2.0)
    }

    /// `L'/L(s, chi)` by central differences, with a Richardson error estimate.
    pub fn log_derivative(&self, chi: usize, s: Complex64) -> Result<(Complex64, f64)> {
        let h = f64::EPSILON.cbrt() * s.norm().max(1.0);
        let l0 = self.hecke_l(chi, s)?.value;
        if l0.norm() < 1e-10 {
            return Err(Error::Numerical(format!("L(s) too close to zero at s = {s}")));
        }
        let d = |h: f64| -> Result<Complex64> {
            let e = Complex64::new(h, 0.0);
            Ok((self.hecke_l(chi, s + e)?.value - self.hecke_l(chi, s - e)?.value) / (2.0 * h))
        };
        let d1 = d(h)?;
        let d2 = d(2.0 * h)?;
        let rich = (d1 * 4.0 - d2) / 3.0;
        Ok((rich / l0, (d1 - d2).norm() / l0.norm()))
    }

    /// `-L'/L(s, chi)` from the von Mangoldt series over prime powers of norm
    /// at most `x`, plus the main-term tail `x^{1-s}/(s-1)` for trivial `chi`.
    pub fn neg_log_derivative_series(&self, chi: usize, s: Complex64, x: u64) -> Complex64 {
        let primes = self.primes_up_to(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for rp in &primes {
            for pr in rp.primes_above() {
                let lnq = (pr.norm as f64).ln();
                let c = self.group.chi(chi, pr.class);
                let mut q = pr.norm;
                let mut k = 1i32;
                while q <= x {
                    acc += c.powi(k) * lnq * (-s * (k as f64 * lnq)).exp();
                    q = q.saturating_mul(pr.norm);
                    k += 1;
                }
            }
        }
        if self.group.character(chi).is_trivial() {
            acc += ((Complex64::new(1.0, 0.0) - s) * (x as f64).ln()).exp() / (s - 1.0);
        }
        acc
    }

    /// `prod_{N(P) <= x} (1 - chi(P) N(P)^{-s})^{-1}`.
    pub fn euler_product(&self, chi: usize, s: Complex64, x: u64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for rp in self.primes_up_to(x) {
            for pr in rp.primes_above() {
                if pr.norm <= x {
                    let f = self.group.chi(chi, pr.class) * (-s * (pr.norm as f64).ln()).exp();
                    acc /= Complex64::new(1.0, 0.0) - f;
                }
            }
        }
        acc
    }

    /// `sigma_s(chi, m) = sum_{a | m} chi(a) N(a)^s` for integral `m`.
    pub fn divisor_sigma(&self, chi: usize, s: Complex64, m: &Ideal) -> Result<Complex64> {
        if !m.is_integral() {
            return Err(Error::NotIntegral);
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for (pr, e) in self.factor_ideal(m)? {
            let x = self.group.chi(chi, pr.class) * (s * (pr.norm as f64).ln()).exp();
            let mut local = Complex64::new(1.0, 0.0);
            let mut pw = Complex64::new(1.0, 0.0);
            for _ in 0..e {
                pw *= x;
                local += pw;
            }
            acc *= local;
        }
        Ok(acc)
    }

    /// Prime factorisation of an integral ideal as (prime, exponent).
    pub fn factor_ideal(&self, m: &Ideal) -> Result<Vec<(LocalPrime, u32)>> {
        if !m.is_integral() {
            return Err(Error::NotIntegral);
        }
        let n = m.norm().to_integer().to_u64().ok_or_else(|| Error::Domain("ideal norm exceeds u64".into()))?;
        let mut out = vec![];
        for (p, _) in crate::arith::factor_u64(n) {
            for (pr, _) in factor_rational_prime(p, self.field())? {
                let v = valuation(m, &pr)?;
                if v > 0 {
                    let class = self.group.index_of_ideal(&pr.ideal);
                    out.push((LocalPrime { class, norm: pr.norm() }, v as u32));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: i64) -> LContext {
        LContext::new(&QuadField::new(d).unwrap()).unwrap().with_prime_bound(20_000)
    }

    #[test]
    fn continued_matches_truncated() {
        let c = ctx(-5);
        let s = Complex64::new(2.5, 0.0);
        for chi in 0..2 {
            let a = c.hecke_l(chi, s).unwrap().value;
            let b = c.hecke_l_truncated(chi, s, 20_000).unwrap().value;
            assert!((a - b).norm() < 1e-8 * a.norm(), "{chi}: {a} {b}");
        }
    }

    #[test]
    fn nontrivial_character_is_finite_at_one() {
        let c = ctx(-5);
        let l1 = c.hecke_l(1, Complex64::new(1.0, 0.0)).unwrap().value;
        let near = c.hecke_l(1, Complex64::new(1.0 + 1e-6, 0.0)).unwrap().value;
        assert!(l1.re.is_finite() && (l1 - near).norm() < 1e-5);
        assert!(c.hecke_l(0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn divisor_sums() {
        let c = ctx(-5);
        let f = c.field().clone();
        let o = Ideal::unit(&f);
        assert_eq!(c.divisor_sigma(1, Complex64::new(1.0, 0.0), &o).unwrap(), Complex64::new(1.0, 0.0));
        let p3 = Ideal::from_ints(&f, &[(3, 0), (1, 1)]).unwrap();
        let v = c.divisor_sigma(1, Complex64::new(1.0, 0.0), &p3).unwrap();
        assert!((v - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        let two = Ideal::from_ints(&f, &[(2, 0)]).unwrap();
        let v = c.divisor_sigma(0, Complex64::new(0.0, 0.0), &two).unwrap();
        assert!((v - Complex64::new(3.0, 0.0)).norm() < 1e-12);
    }
}
