use super::bessel::bessel_k_weighted_fast;
use super::gamma::ln_gamma;
use crate::arith::gauss_legendre;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Both sides of `int_0^inf K_{it}(r) K_{i nu}(r) r^{s-1} dr`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BesselMellin {
    pub numeric: Complex64,
    /// `2^{s-3} T(s)`, with `T(s)` the four-gamma quotient.
    pub gamma_formula: Complex64,
    /// `T(s)` alone, as printed without the power of two.
    pub printed_formula: Complex64,
    /// `numeric / gamma_formula`.
    pub calibration: f64,
    /// `numeric / printed_formula`; equals `2^{s-3}` when the table identity holds.
    pub printed_ratio: Complex64,
}

/// Quadrature nodes in `y = log r`, shared across orders and exponents.
pub struct MellinGrid {
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl MellinGrid {
    /// Nodes valid for `Re s >= re_min` and oscillation frequency up to `freq`.
    pub fn new(re_min: f64, freq: f64) -> Result<Self> {
        if !(re_min > 0.0) {
            return Err(Error::Domain("Bessel-Mellin integral needs Re(s) > 0".into()));
        }
        let (gx, gw) = gauss_legendre(16);
        let (ylo, yhi) = (-46.0 / re_min, 32f64.ln());
        let (mut y, mut w) = (vec![], vec![]);
        let mut a = ylo;
        while a < yhi {
            let rate = freq + 2.0 * a.exp() + 1.0;
            let b = (a + (0.25f64).min(std::f64::consts::PI / rate)).min(yhi);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (xi, wi) in gx.iter().zip(&gw) {
                y.push(mid + half * xi);
                w.push(half * wi);
            }
            a = b;
        }
        Ok(MellinGrid { y, w })
    }

    /// `K_{it}(e^y)` at every node.
    pub fn k_table(&self, t: f64) -> Vec<f64> {
        let damp = (-FRAC_PI_2 * t.abs()).exp();
        self.y.iter().map(|&y| bessel_k_weighted_fast(Complex64::new(0.0, t), y.exp()).re * damp).collect()
    }

    pub fn integrate(&self, kt: &[f64], kn: &[f64], s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.y.len() {
            acc += (s * self.y[i]).exp() * (self.w[i] * kt[i] * kn[i]);
        }
        acc
    }
}

/// `log T(s) = sum log Gamma((s +- it +- i nu)/2) - log Gamma(s)`.
pub fn ln_t_factor(t: f64, nu: f64, s: Complex64) -> Complex64 {
    let mut acc = -ln_gamma(s);
    for a in [t, -t] {
        for b in [nu, -nu] {
            acc += ln_gamma((s + Complex64::new(0.0, a + b)) * 0.5);
        }
    }
    acc
}

pub fn mellin_sides(numeric: Complex64, t: f64, nu: f64, s: Complex64) -> BesselMellin {
    let lt = ln_t_factor(t, nu, s);
    let printed = lt.exp();
    let gamma_formula = (lt + (s - 3.0) * std::f64::consts::LN_2).exp();
    BesselMellin {
        numeric,
        gamma_formula,
        printed_formula: printed,
        calibration: (numeric / gamma_formula).re,
        printed_ratio: numeric / printed,
    }
}

pub fn bessel_mellin(t: f64, nu: f64, s: Complex64) -> Result<BesselMellin> {
    let grid = MellinGrid::new(s.re, t.abs() + nu.abs() + s.im.abs())?;
    let kt = grid.k_table(t);
    let kn = if nu == t { kt.clone() } else { grid.k_table(nu) };
    let numeric = grid.integrate(&kt, &kn, s);
    if !numeric.re.is_finite() || !numeric.im.is_finite() {
        return Err(Error::Numerical("Bessel-Mellin quadrature did not converge".into()));
    }
    Ok(mellin_sides(numeric, t, nu, s))
}

/// `|T(1-it) / Gamma(1+it)|`, evaluated in the log domain.
pub fn gamma_factor_ratio(t: f64, nu: f64) -> Result<f64> {
    if t < 1.0 {
        return Err(Error::Domain("gamma_factor_ratio needs t >= 1".into()));
    }
    let s = Complex64::new(1.0, -t);
    let l = ln_t_factor(t, nu, s) - ln_gamma(Complex64::new(1.0, t));
    Ok(l.re.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_squared_moment() {
        // int_0^inf K_0(r)^2 r dr = 1/2
        let m = bessel_mellin(0.0, 0.0, Complex64::new(2.0, 0.0)).unwrap();
        assert!((m.numeric.re - 0.5).abs() < 1e-12);
        assert!((m.calibration - 1.0).abs() < 1e-12);
        assert!((m.printed_ratio.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ratio_decays_like_inverse_t() {
        let nu = 1.0;
        let lim = std::f64::consts::PI / (std::f64::consts::PI * nu / 2.0).cosh();
        let v = 100.0 * gamma_factor_ratio(100.0, nu).unwrap();
        assert!((v / lim - 1.0).abs() < 1e-2);
    }
}
