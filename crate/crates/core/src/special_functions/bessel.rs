use crate::arith::gauss_legendre;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    Raw,
    /// `e^{pi |t| / 2} K_{it}(x)`
    ExpWeighted,
}

/// Contour offset parameter: the line `Im u = alpha` stops `C_SHIFT / |t|`
/// short of `pi/2`, trading a factor `e^{C_SHIFT}` of cancellation for decay.
const C_SHIFT: f64 = 4.0;
/// Drop the integrand once it is `e^{-CUTOFF}` below its peak.
const CUTOFF: f64 = 46.0;

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

/// `e^{pi|Im nu|/2} K_nu(x)` with an error estimate from two panel grids.
///
/// Uses `K_nu(x) = 1/2 int_R exp(-x cosh u + nu u) du` on the line
/// `u = v + i alpha`; for `|Im nu| > x` the line sits just below the saddles
/// at `Im u = pi/2`, otherwise it passes through the saddle `i asin(t/x)`.
pub fn bessel_k_weighted(nu: Complex64, x: f64) -> Result<(Complex64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_nu needs x > 0, got {x}")));
    }
    let coarse = k_line(nu, x, 1.0);
    let fine = k_line(nu, x, 0.5);
    let err = (coarse - fine).norm() + 1e-16 * fine.norm();
    Ok((fine, err))
}

pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64> {
    let (w, _) = bessel_k_weighted(nu, x)?;
    Ok(w * (-FRAC_PI_2 * nu.im.abs()).exp())
}

/// Single-grid evaluation, about half the cost of [`bessel_k_weighted`].
pub fn bessel_k_weighted_fast(nu: Complex64, x: f64) -> Complex64 {
    k_line(nu, x, 0.5)
}

/// `K_{it}(x)` for real `t`, real-valued.
pub fn bessel_k_imag(t: f64, x: f64, scaling: Scaling) -> Result<f64> {
    if t.abs() > 200.0 {
        return Err(Error::Domain(format!("|t| = {} outside the supported range", t.abs())));
    }
    let (w, _) = bessel_k_weighted(Complex64::new(0.0, t), x)?;
    Ok(match scaling {
        Scaling::ExpWeighted => w.re,
        Scaling::Raw => w.re * (-FRAC_PI_2 * t.abs()).exp(),
    })
}

fn contour_alpha(t: f64, x: f64) -> f64 {
    let at = t.abs();
    if at == 0.0 {
        return 0.0;
    }
    let saddle = (at / x).min(1.0).asin();
    let cap = FRAC_PI_2 - (C_SHIFT / at).min(FRAC_PI_2);
    t.signum() * saddle.min(cap)
}

fn k_line(nu: Complex64, x: f64, width_factor: f64) -> Complex64 {
    let (sigma, t) = (nu.re, nu.im);
    let alpha = contour_alpha(t, x);
    let (sa, ca) = alpha.sin_cos();
    let w = FRAC_PI_2 * t.abs();
    let xc = x * ca;
    let xs = x * sa;
    // log-magnitude along the line
    let g = |v: f64| -xc * v.cosh() + sigma * v - t * alpha + w;
    let vstar = if xc > 0.0 { (sigma / xc).asinh() } else { 0.0 };
    let gmax = g(vstar);
    let edge = |dir: f64| {
        let mut step = 0.5;
        let mut v = vstar;
        while g(v) > gmax - CUTOFF {
            v += dir * step;
            step *= 1.5;
        }
        // tighten by bisection
        let (mut lo, mut hi) = (vstar, v);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > gmax - CUTOFF {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let vmin = edge(-1.0);
    let vmax = edge(1.0);
    let (gx, gw) = gl16();
    let integrand = |v: f64| {
        // -x cosh(v + i alpha) + nu (v + i alpha) + w
        let (ch, sh) = (v.cosh(), v.sinh());
        let re = -xc * ch + sigma * v - t * alpha + w;
        let im = -xs * sh + t * v + sigma * alpha;
        Complex64::from_polar(re.exp(), im)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = vmin;
    while a < vmax {
        let ch = a.cosh();
        let rate = (t - xs * ch).abs() + (xc * a.sinh() - sigma).abs() + 1.0;
        let hw = (0.5 * width_factor).min(std::f64::consts::PI * width_factor / rate);
        let b = (a + hw).min(vmax);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = Complex64::new(0.0, 0.0);
        for (xi, wi) in gx.iter().zip(gw) {
            s += integrand(mid + half * xi) * *wi;
        }
        acc += s * half;
        a = b;
    }
    acc * 0.5
}
