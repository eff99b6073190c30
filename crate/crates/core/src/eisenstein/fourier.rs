use super::EisensteinContext;
use crate::arith::factor_u64;
use crate::error::{Error, Result};
use crate::number_field::{factor_element_i64, FloatLattice};
use crate::special_functions::bessel_k_weighted_fast;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;

/// Result of a truncated Fourier evaluation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FourierEval {
    pub value: Complex64,
    pub s: Complex64,
    pub pair: (usize, usize),
    /// Largest `|n|` retained.
    pub radius: f64,
    pub terms: usize,
    pub est_tail: f64,
}

/// Nonzero Fourier modes of `E_{eta_j}(A_i^{-1} v, s)` sharing one `|n|`.
#[derive(Clone, Debug)]
pub(crate) struct Shell {
    pub abs_n: f64,
    /// `(w, c)`: frequency `w = 2 conj(n)/sqrt(d_F)` and `c = omega_{i,j}(n,s) |n|^{s-1}`.
    pub modes: Vec<(Complex64, Complex64)>,
}

/// Coefficients of the expansion for fixed `(i, j, s)` up to `|n| <= radius`.
#[derive(Clone, Debug)]
pub struct FourierSeries {
    pub i: usize,
    pub j: usize,
    pub s: Complex64,
    pub tau: Complex64,
    pub radius: f64,
    pub(crate) shells: Vec<Shell>,
    sqrt_abs_d: f64,
}

/// Bessel factors of one height, shared by all points at that height.
#[derive(Clone, Debug)]
pub struct RadialRow {
    pub r: f64,
    pub radius: f64,
    edge_from: usize,
    k: Vec<Complex64>,
}

/// Relative size below which a mode is counted in the tail instead of summed.
const NEGLIGIBLE: f64 = 1e-18;

/// Truncation in the Bessel argument: `4 pi |n| r / sqrt|d_F| <= X(t)`.
pub fn bessel_cutoff(t: f64) -> f64 {
    let t = t.abs();
    t + 12.0 * t.cbrt() + 40.0
}

/// `sum_chi k_chi sigma_{1-s}(chi, a)` for the ideal `a` with the given
/// factorisation `(class, norm, exponent)`.
fn sigma_combo(ctx: &EisensteinContext, weights: &[Complex64], fac: &[(usize, u64, u32)], s: Complex64) -> Complex64 {
    let g = ctx.group();
    let e = Complex64::new(1.0, 0.0) - s;
    let mut total = Complex64::new(0.0, 0.0);
    for (chi, k) in weights.iter().enumerate() {
        let mut acc = Complex64::new(1.0, 0.0);
        for &(class, norm, ex) in fac {
            let x = g.chi(chi, class) * (e * (norm as f64).ln()).exp();
            let mut local = Complex64::new(1.0, 0.0);
            let mut pw = Complex64::new(1.0, 0.0);
            for _ in 0..ex {
                pw *= x;
                local += pw;
            }
            acc *= local;
        }
        total += k * acc;
    }
    total
}

impl EisensteinContext {
    /// Factorisation of `(n) m_i^{-2}` for `n = nu / A^2`, `nu` integral in `(A m_i)^2`.
    pub(crate) fn factor_shifted(&self, i: usize, nu: (i64, i64)) -> Vec<(usize, u64, u32)> {
        let g = self.group();
        let (a, b) = self.cusps[i].hnf;
        let mut out = vec![];
        for (p, root, e) in factor_element_i64(g.field(), nu.0, nu.1) {
            let mut e = e as i64;
            let (class, norm) = match root {
                None => (0, p * p),
                Some(r) => {
                    if a % p as i64 == 0 && (-b).rem_euclid(p as i64) as u64 == r {
                        let va = factor_u64(a as u64).iter().find(|f| f.0 == p).map_or(0, |f| f.1) as i64;
                        let v = if g.field().disc() % p as i64 == 0 { va.min(1) } else { va };
                        e -= 2 * v;
                    }
                    (g.index_of_prime(p, r), p)
                }
            };
            debug_assert!(e >= 0);
            if e > 0 {
                out.push((class, norm, e as u32));
            }
        }
        out
    }

    /// `sum_chi chi(m_i m_j) / L(s, chi)` weights times the prefactor
    /// `2 (2pi)^s N(m_i)^{2-s} / (h |d_F|^{s/2} Gamma(s) N(m_j)^s)`.
    fn omega_weights(&self, i: usize, j: usize, s: Complex64) -> Result<Vec<Complex64>> {
        let g = self.group();
        let h = g.h() as f64;
        let cls = g.mul_index(self.cusps[i].class, self.cusps[j].class);
        let d = g.field().abs_disc();
        let pre = 2.0 / h
            * ((s * (2.0 * PI).ln() - s * 0.5 * d.ln() - crate::special_functions::ln_gamma(s))
                + (Complex64::new(2.0, 0.0) - s) * self.cusps[i].norm.ln()
                - s * self.cusps[j].norm.ln())
            .exp();
        (0..g.h())
            .map(|chi| Ok(pre * g.chi(chi, cls) / self.l_value(chi, s)?))
            .collect()
    }

    /// `omega_{i,j}(n, s)` for `n = nu / A_i^2` given by integral coordinates of `nu`.
    pub(crate) fn omega_from_nu(&self, i: usize, j: usize, nu: (i64, i64), s: Complex64) -> Result<Complex64> {
        let w = self.omega_weights(i, j, s)?;
        Ok(sigma_combo(self, &w, &self.factor_shifted(i, nu), s))
    }

    /// Builds the coefficient table for `|n| <= radius`.
    pub fn fourier_series(&self, i: usize, j: usize, s: Complex64, radius: f64) -> Result<FourierSeries> {
        self.check_pair(i, j)?;
        let g = self.group();
        let f = g.field();
        let sqrt_abs_d = f.abs_disc().sqrt();
        let tau = self.tau_entry(i, j, s)?;
        let weights = self.omega_weights(i, j, s)?;
        let m2 = self.cusps[i].ideal.mul(&self.cusps[i].ideal)?;
        let lat = FloatLattice::from_ideal(&m2);
        let a2 = (self.cusps[i].hnf.0 as i128).pow(2);
        let den = lat.den as i128;
        let w = f.omega();
        let mut pts: Vec<(i128, (i64, i64), Complex64)> = vec![];
        lat.for_each_in_disc(Complex64::new(0.0, 0.0), radius, |(p, q), z| {
            if p == 0 && q == 0 {
                return;
            }
            let (p, q) = (p as i128, q as i128);
            let key = p * p + p * q * w.tr as i128 + q * q * w.nm as i128;
            debug_assert!((a2 * p) % den == 0 && (a2 * q) % den == 0);
            let nu = ((a2 * p / den) as i64, (a2 * q / den) as i64);
            pts.push((key, nu, z));
        });
        pts.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        let sqrt_d = Complex64::new(0.0, sqrt_abs_d);
        let mut memo: HashMap<(i64, i64), Complex64> = HashMap::new();
        let mut shells: Vec<Shell> = vec![];
        let mut last_key = None;
        for (key, nu, z) in pts {
            // omega depends on n only through the ideal (n)
            let canon = if nu > (0, 0) { nu } else { (-nu.0, -nu.1) };
            let c = match memo.get(&canon) {
                Some(c) => *c,
                None => {
                    let c = sigma_combo(self, &weights, &self.factor_shifted(i, canon), s);
                    memo.insert(canon, c);
                    c
                }
            };
            let abs_n = z.norm();
            let coef = c * ((s - 1.0) * abs_n.ln()).exp();
            let freq = z.conj() * 2.0 / sqrt_d;
            if last_key != Some(key) {
                shells.push(Shell { abs_n, modes: vec![] });
                last_key = Some(key);
            }
            shells.last_mut().unwrap().modes.push((freq, coef));
        }
        Ok(FourierSeries { i, j, s, tau, radius, shells, sqrt_abs_d })
    }
}

impl FourierSeries {
    /// Radius needed for the point height `r` under cutoff `x_max`.
    pub fn radius_for(&self, r: f64, x_max: f64) -> f64 {
        x_max * self.sqrt_abs_d / (4.0 * PI * r)
    }

    pub fn shell_count(&self) -> usize {
        self.shells.len()
    }

    /// Constant term `delta_{ij} r^s + tau_{ij}(s) r^{2-s}`.
    pub fn constant_term(&self, r: f64) -> Complex64 {
        let lr = r.ln();
        let delta = if self.i == self.j { (self.s * lr).exp() } else { Complex64::new(0.0, 0.0) };
        delta + self.tau * ((Complex64::new(2.0, 0.0) - self.s) * lr).exp()
    }

    /// `r K_{s-1}(4 pi |n| r / sqrt|d_F|)` for every shell within the cutoff;
    /// reusable for all points at height `r`.
    pub fn radial_row(&self, r: f64, x_max: f64) -> Result<RadialRow> {
        let need = self.radius_for(r, x_max);
        if need > self.radius * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("table radius {} below required {}", self.radius, need)));
        }
        let nu = self.s - 1.0;
        let t = nu.im.abs();
        let damp = (-0.5 * PI * t).exp();
        let scale = 4.0 * PI * r / self.sqrt_abs_d;
        let mut k = vec![];
        let mut edge_from = usize::MAX;
        let mut peak = 0.0f64;
        for sh in &self.shells {
            let x = scale * sh.abs_n;
            if x > x_max {
                break;
            }
            if x > x_max - 1.0 && edge_from == usize::MAX {
                edge_from = k.len();
            }
            let kv = bessel_k_weighted_fast(nu, x);
            if !(kv.re.is_finite() && kv.im.is_finite()) {
                return Err(Error::Numerical(format!("K_{nu}({x}) not finite")));
            }
            peak = peak.max(kv.norm());
            k.push(kv * damp * r);
            // past the turning point K decreases monotonically; the rest is noise
            if x > t + 1.0 && kv.norm() < 1e-20 * peak {
                let last = x - 1.0;
                edge_from = self.shells[..k.len()].iter().position(|s| scale * s.abs_n > last).unwrap_or(0).min(edge_from);
                break;
            }
        }
        Ok(RadialRow { r, radius: need, edge_from: edge_from.min(k.len()), k })
    }

    /// Evaluates at `(z, r)` keeping modes with Bessel argument at most `x_max`.
    /// Fails if the table does not reach far enough.
    pub fn eval(&self, z: Complex64, r: f64, x_max: f64) -> Result<FourierEval> {
        let row = self.radial_row(r, x_max)?;
        Ok(self.eval_row(z, &row))
    }

    pub fn eval_row(&self, z: Complex64, row: &RadialRow) -> FourierEval {
        let zc = z.conj();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut edge = 0.0;
        let mut terms = 0;
        for (idx, (sh, k)) in self.shells.iter().zip(&row.k).enumerate() {
            let mut part = Complex64::new(0.0, 0.0);
            for &(w, c) in &sh.modes {
                let ph = 2.0 * PI * (w * zc).re;
                let (sn, cs) = ph.sin_cos();
                part += c * Complex64::new(cs, sn);
            }
            let term = part * k;
            sum += term;
            terms += sh.modes.len();
            if idx >= row.edge_from {
                edge += term.norm();
            }
        }
        let value = self.constant_term(row.r) + sum;
        // beyond the cutoff each unit of x costs at least a factor e^{-1}
        let est_tail = 10.0 * edge + 1e-15 * value.norm();
        FourierEval { value, s: self.s, pair: (self.i, self.j), radius: row.radius, terms, est_tail }
    }

    /// Largest `|n|` whose mode at height `row.r` is above `NEGLIGIBLE` of the
    /// biggest one.
    pub fn effective_abs_n(&self, row: &RadialRow) -> f64 {
        let amp = |sh: &Shell, k: &Complex64| sh.modes.iter().map(|m| (m.1 * k).norm()).fold(0.0, f64::max);
        let top = self.shells.iter().zip(&row.k).map(|(sh, k)| amp(sh, k)).fold(0.0, f64::max);
        self.shells
            .iter()
            .zip(&row.k)
            .filter(|(sh, k)| amp(sh, k) >= NEGLIGIBLE * top)
            .map(|(sh, _)| sh.abs_n)
            .fold(0.0, f64::max)
    }

    /// Values on the tensor grid `xs x ys` at the height of `row`, indexed
    /// `[ix * ys.len() + iy]`, with a uniform tail bound. The phase
    /// `e(Re(w conj z))` factors as `e(w_re x) e(w_im y)`.
    pub fn eval_tensor(&self, xs: &[f64], ys: &[f64], row: &RadialRow) -> (Vec<Complex64>, f64) {
        let mut amp = vec![];
        let mut freq = vec![];
        let mut edge = 0.0;
        let top = self.shells.iter().zip(&row.k).flat_map(|(sh, k)| sh.modes.iter().map(move |m| (m.1 * k).norm())).fold(0.0, f64::max);
        for (idx, (sh, k)) in self.shells.iter().zip(&row.k).enumerate() {
            for &(w, c) in &sh.modes {
                let a = c * k;
                if idx >= row.edge_from || a.norm() < NEGLIGIBLE * top {
                    edge += a.norm();
                }
                if a.norm() >= NEGLIGIBLE * top {
                    amp.push(a);
                    freq.push(w);
                }
            }
        }
        let phase = |f: f64, u: f64| Complex64::from_polar(1.0, 2.0 * PI * f * u);
        let ex: Vec<Vec<Complex64>> = xs.iter().map(|&x| freq.iter().zip(&amp).map(|(w, a)| a * phase(w.re, x)).collect()).collect();
        let ey: Vec<Vec<Complex64>> = ys.iter().map(|&y| freq.iter().map(|w| phase(w.im, y)).collect()).collect();
        let c0 = self.constant_term(row.r);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for rx in &ex {
            for ry in &ey {
                out.push(c0 + rx.iter().zip(ry).map(|(a, b)| a * b).sum::<Complex64>());
            }
        }
        let scale = out.iter().map(|v| v.norm()).fold(0.0, f64::max);
        (out, 10.0 * edge + 1e-15 * scale)
    }
}
