//! Eisenstein series of `PSL2(O_F)` attached to each cusp.
//!
//! The Fourier expansion of `E_{eta_j}` at the cusp `eta_i` is
//! `delta_{ij} r^s + tau_{ij}(s) r^{2-s} + sum_n omega_{ij}(n,s) |n|^{s-1} r K_{s-1}(4 pi |n| r/sqrt|d_F|) e(<2 conj(n)/sqrt(d_F), z>)`
//! over `0 != n in m_i^2`, with `sqrt(d_F) = i sqrt|d_F|`. The coset sum in
//! [`direct`] is the independent oracle.

mod cusp;
mod direct;
mod fourier;

pub use cusp::{cusp_data, CuspData};
pub use direct::DirectSum;
pub use fourier::{bessel_cutoff, FourierEval, FourierSeries, RadialRow};

use crate::class_group::ClassGroup;
use crate::error::{Error, Result};
use crate::l_functions::LContext;
use crate::number_field::{FieldElement, QuadField};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

type SKey = (u64, u64);

fn skey(s: Complex64) -> SKey {
    (s.re.to_bits(), s.im.to_bits())
}

/// Cusps, L-values and Fourier coefficient tables for one field.
pub struct EisensteinContext {
    l: LContext,
    cusps: Vec<CuspData>,
    l_cache: Mutex<HashMap<(usize, SKey), Complex64>>,
    series_cache: Mutex<HashMap<(usize, usize, SKey), Arc<FourierSeries>>>,
    zeta2: OnceLock<f64>,
}

impl EisensteinContext {
    pub fn new(field: &QuadField) -> Result<Self> {
        Self::from_l(LContext::new(field)?)
    }

    pub fn from_l(l: LContext) -> Result<Self> {
        let cusps = cusp_data(l.group())?;
        Ok(EisensteinContext {
            l,
            cusps,
            l_cache: Mutex::new(HashMap::new()),
            series_cache: Mutex::new(HashMap::new()),
            zeta2: OnceLock::new(),
        })
    }

    pub fn l_context(&self) -> &LContext {
        &self.l
    }

    pub fn group(&self) -> &ClassGroup {
        self.l.group()
    }

    pub fn field(&self) -> &QuadField {
        self.l.field()
    }

    pub fn cusps(&self) -> &[CuspData] {
        &self.cusps
    }

    pub fn cusp(&self, j: usize) -> &CuspData {
        &self.cusps[j]
    }

    pub(crate) fn check_cusp(&self, j: usize) -> Result<()> {
        if j >= self.cusps.len() {
            return Err(Error::Domain(format!("cusp index {j} out of range 0..{}", self.cusps.len())));
        }
        Ok(())
    }

    pub(crate) fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_cusp(i)?;
        self.check_cusp(j)
    }

    /// Cached `L(s, chi)`.
    pub fn l_value(&self, chi: usize, s: Complex64) -> Result<Complex64> {
        let key = (chi, skey(s));
        if let Some(v) = self.l_cache.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = self.l.hecke_l(chi, s)?.value;
        self.l_cache.lock().unwrap().insert(key, v);
        Ok(v)
    }

    fn chi_pair(&self, chi: usize, i: usize, j: usize) -> Complex64 {
        let g = self.group();
        g.chi(chi, g.mul_index(self.cusps[i].class, self.cusps[j].class))
    }

    fn norm_ratio(&self, i: usize, j: usize, s: Complex64) -> Complex64 {
        ((Complex64::new(2.0, 0.0) - s) * self.cusps[i].norm.ln() - s * self.cusps[j].norm.ln()).exp()
    }

    /// `tau_{ij}(s) = 2 pi N(m_i)^{2-s} / (h (s-1) |d_F|^{1/2} N(m_j)^s) sum_chi chi(m_i m_j) L(s-1,chi)/L(s,chi)`.
    pub fn tau_entry(&self, i: usize, j: usize, s: Complex64) -> Result<Complex64> {
        self.check_pair(i, j)?;
        if (s - 1.0).norm() == 0.0 {
            return Err(Error::Pole("tau prefactor at s = 1".into()));
        }
        let h = self.group().h() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for chi in 0..self.group().h() {
            acc += self.chi_pair(chi, i, j) * self.l_value(chi, s - 1.0)? / self.l_value(chi, s)?;
        }
        let pre = 2.0 * PI / (h * (s - 1.0) * self.field().abs_disc().sqrt());
        Ok(pre * self.norm_ratio(i, j, s) * acc)
    }

    /// The same entry through completed L-functions:
    /// `N(m_i)^{2-s} N(m_j)^{-s} (1/h) sum_chi chi(m_i m_j) xi(s-1,chi)/xi(s,chi)`.
    pub fn tau_entry_xi(&self, i: usize, j: usize, s: Complex64) -> Result<Complex64> {
        self.check_pair(i, j)?;
        let h = self.group().h() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for chi in 0..self.group().h() {
            let num = self.l.xi_factor(s - 1.0)? * self.l_value(chi, s - 1.0)?;
            let den = self.l.xi_factor(s)? * self.l_value(chi, s)?;
            acc += self.chi_pair(chi, i, j) * num / den;
        }
        Ok(self.norm_ratio(i, j, s) * acc / h)
    }

    /// `Phi(s) = (tau_{ij}(s))`.
    pub fn scattering_matrix(&self, s: Complex64) -> Result<Vec<Vec<Complex64>>> {
        let h = self.cusps.len();
        (0..h).map(|i| (0..h).map(|j| self.tau_entry(i, j, s)).collect()).collect()
    }

    /// Integral coordinates of `A_i^2 n`, failing unless `n` lies in `m_i^2`.
    fn shifted_coords(&self, i: usize, n: &FieldElement) -> Result<(i64, i64)> {
        if n.is_zero() {
            return Err(Error::Zero);
        }
        let m2 = self.cusps[i].ideal.mul(&self.cusps[i].ideal)?;
        if !m2.contains(n) {
            return Err(Error::Domain(format!("{n} is not in m_{}^2", i + 1)));
        }
        let a = self.cusps[i].hnf.0;
        let nu = n.scale(&num_rational::BigRational::from_integer((a * a).into()));
        let c = |x: &num_rational::BigRational| x.to_integer().to_i64().ok_or_else(|| Error::Domain("coordinate overflow".into()));
        Ok((c(&nu.a)?, c(&nu.b)?))
    }

    /// `omega_{ij}(n, s) = 4 N(m_i)^{2-s} N(m_j)^{-s} (1/h) sum_chi chi(m_i m_j) sigma_{1-s}(chi, (n) m_i^{-2}) / xi(s, chi)`.
    pub fn omega_coeff(&self, i: usize, j: usize, n: &FieldElement, s: Complex64) -> Result<Complex64> {
        self.check_pair(i, j)?;
        let nu = self.shifted_coords(i, n)?;
        let fac = self.factor_shifted(i, nu);
        let g = self.group();
        let h = g.h() as f64;
        let xf = self.l.xi_factor(s)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for chi in 0..g.h() {
            let sig = self.l_divisor_sigma(chi, s, &fac);
            acc += self.chi_pair(chi, i, j) * sig / (xf * self.l_value(chi, s)?);
        }
        Ok(self.norm_ratio(i, j, s) * acc * 4.0 / h)
    }

    /// `omega_{ij}(n, s)` through the prefactor `2 (2 pi)^s / (h |d_F|^{s/2} Gamma(s))` and `1/L(s, chi)`.
    pub fn omega_coeff_l_form(&self, i: usize, j: usize, n: &FieldElement, s: Complex64) -> Result<Complex64> {
        self.check_pair(i, j)?;
        let nu = self.shifted_coords(i, n)?;
        self.omega_from_nu(i, j, nu, s)
    }

    fn l_divisor_sigma(&self, chi: usize, s: Complex64, fac: &[(usize, u64, u32)]) -> Complex64 {
        let g = self.group();
        let e = Complex64::new(1.0, 0.0) - s;
        let mut acc = Complex64::new(1.0, 0.0);
        for &(class, norm, ex) in fac {
            let x = g.chi(chi, class) * (e * (norm as f64).ln()).exp();
            acc *= (0..=ex).fold((Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)), |(sum, pw), _| (sum + pw, pw * x)).0;
        }
        acc
    }

    /// Coefficient table covering `|n| <= radius`, cached per `(i, j, s)`.
    pub fn series(&self, i: usize, j: usize, s: Complex64, radius: f64) -> Result<Arc<FourierSeries>> {
        let key = (i, j, skey(s));
        if let Some(ser) = self.series_cache.lock().unwrap().get(&key) {
            if ser.radius >= radius {
                return Ok(ser.clone());
            }
        }
        let ser = Arc::new(self.fourier_series(i, j, s, radius * 1.25)?);
        self.series_cache.lock().unwrap().insert(key, ser.clone());
        Ok(ser)
    }

    /// `E_{eta_j}(A_i^{-1} v, s)` at `v = (z, r)` by the truncated expansion,
    /// with `est_tail <= tol * |value|`.
    pub fn fourier_eval(&self, i: usize, j: usize, z: Complex64, r: f64, s: Complex64, tol: f64) -> Result<FourierEval> {
        self.check_pair(i, j)?;
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("height must be positive, got {r}")));
        }
        if s.im.abs() > 200.0 {
            return Err(Error::Domain(format!("|Im s| = {} outside the validated Bessel envelope", s.im.abs())));
        }
        let mut x_max = bessel_cutoff(s.im);
        for _ in 0..6 {
            let need = x_max * self.field().abs_disc().sqrt() / (4.0 * PI * r);
            let ser = self.series(i, j, s, need)?;
            let ev = ser.eval(z, r, x_max)?;
            if ev.est_tail <= tol * ev.value.norm() {
                return Ok(ev);
            }
            x_max += 10.0;
        }
        Err(Error::Numerical(format!("tolerance {tol} unreachable at r = {r}, s = {s}")))
    }

    /// `zeta_F(2)`.
    pub fn zeta_f2(&self) -> Result<f64> {
        if let Some(v) = self.zeta2.get() {
            return Ok(*v);
        }
        let v = self.l.dedekind_zeta(Complex64::new(2.0, 0.0))?.value.re;
        Ok(*self.zeta2.get_or_init(|| v))
    }

    /// `Res_{s=2} E_{eta_j} = 4 pi^2 N(m_j)^{-2} / (w |d_F| zeta_F(2))`, which is
    /// `2 pi^2 N(m_j^{-2}) / (|d_F| zeta_F(2))` for `w = 2`.
    pub fn residue_formula(&self, j: usize) -> Result<f64> {
        self.check_cusp(j)?;
        let w = self.field().unit_count() as f64;
        Ok(4.0 * PI * PI / (w * self.cusps[j].norm.powi(2) * self.field().abs_disc() * self.zeta_f2()?))
    }

    /// `(numeric, formula)` for the residue at `s = 2`; the numeric value is the
    /// Richardson limit of `(s-2) E_{eta_j}(v, s)` at `s = 2 + eps`,
    /// `eps in {1e-3, 5e-4, 2.5e-4}`, from the expansion at the cusp at infinity.
    pub fn residue_at_2(&self, j: usize, z: Complex64, r: f64) -> Result<(f64, f64)> {
        let f = |eps: f64| -> Result<f64> {
            let s = Complex64::new(2.0 + eps, 0.0);
            Ok(eps * self.fourier_eval(0, j, z, r, s, 1e-10)?.value.re)
        };
        let (f1, f2, f4) = (f(1e-3)?, f(5e-4)?, f(2.5e-4)?);
        let r1 = 2.0 * f2 - f1;
        let r2 = 2.0 * f4 - f2;
        let numeric = (4.0 * r2 - r1) / 3.0;
        if (r2 - r1).abs() > 1e-2 * numeric.abs() {
            return Err(Error::Numerical(format!("residue extrapolation not converging: {r1} vs {r2}")));
        }
        Ok((numeric, self.residue_formula(j)?))
    }
}
