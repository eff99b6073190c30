use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// B_{2k} / (2k (2k-1)), k = 1..
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `log Gamma(z)`; the imaginary part is a continuous branch, not necessarily
/// the principal one.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let zi = z.inv();
    let zi2 = zi * zi;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = zi;
    for c in STIRLING {
        series += p * c;
        p *= zi2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift
}

/// `log sin(pi z)` without overflow for large `|Im z|`.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 5.0 {
        return (z * PI).sin().ln();
    }
    if z.im > 0.0 {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
        let i = Complex64::i();
        -i * PI * z + Complex64::new(0.5f64.ln(), PI / 2.0) + (Complex64::new(1.0, 0.0) - (i * 2.0 * PI * z).exp()).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("Gamma at {}", z.re)));
    }
    Ok(ln_gamma(z).exp())
}

/// `1 / Gamma(z)`, entire.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma(z)).exp()
}

/// Upper incomplete gamma `Gamma(a, x)` for `x > 0`.
pub fn upper_incomplete_gamma(a: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0);
    if x < 2.0 {
        // Gamma(a) - gamma(a, x), with gamma by its power series
        let mut term = Complex64::new(1.0, 0.0) / a;
        let mut sum = term;
        for n in 1..400 {
            term *= x / (a + n as f64);
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        let lower = sum * (a * x.ln() - x).exp();
        if is_pole(a) {
            // only reached through limits; callers never pass poles
            return Complex64::new(f64::NAN, f64::NAN);
        }
        return ln_gamma(a).exp() - lower;
    }
    // modified Lentz on e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - ...))
    let tiny = 1e-300;
    let mut b = Complex64::new(x + 1.0, 0.0) - a;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..5000 {
        let an = -(i as f64) * (Complex64::new(i as f64, 0.0) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}
