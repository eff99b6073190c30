//! Checks built on continued L-values, Bessel integrals and the scattering
//! matrix.

use super::VerificationReport;
use crate::eisenstein::EisensteinContext;
use crate::error::{Error, Result};
use crate::l_functions::LContext;
use crate::special_functions::{gamma_factor_ratio, mellin_sides, MellinGrid};
use num_complex::Complex64;
use std::time::Instant;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `max ||xi(1+it, chi)| - |xi(it, chi)|| / |xi(1+it, chi)|` over `ts` and all
/// characters; `t = 0` is skipped for the trivial character (pole).
pub fn verify_xi_modulus(l: &LContext, ts: &[f64]) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for chi in 0..l.group().h() {
        for &t in ts {
            if t == 0.0 && l.group().character(chi).is_trivial() {
                continue;
            }
            let a = l.completed_xi(chi, c(1.0, t))?.norm();
            let b = l.completed_xi(chi, c(0.0, t))?.norm();
            worst = worst.max((a - b).abs() / a);
        }
    }
    let params = serde_json::json!({ "d": l.field().d(), "t": ts });
    Ok(VerificationReport::new("xi_modulus", params, worst, 1e-6, t0))
}

/// The 27-point grid `t, nu in {0, 1, 3}`, `s in {1.5, 2, 3}`.
pub fn bessel_mellin_grid() -> Vec<(f64, f64, f64)> {
    let mut g = vec![];
    for t in [0.0, 1.0, 3.0] {
        for nu in [0.0, 1.0, 3.0] {
            for s in [1.5, 2.0, 3.0] {
                g.push((t, nu, s));
            }
        }
    }
    g
}

/// Relative spread of the calibration constant `numeric / (2^{s-3} T(s))`
/// across the grid.
pub fn verify_bessel_mellin(grid: &[(f64, f64, f64)]) -> Result<VerificationReport> {
    let t0 = Instant::now();
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let re_min = grid.iter().map(|g| g.2).fold(f64::INFINITY, f64::min);
    if re_min < 1.0 {
        return Err(Error::Domain(format!("Bessel-Mellin check needs Re(s) >= 1, got {re_min}")));
    }
    let freq = grid.iter().map(|g| g.0.abs() + g.1.abs()).fold(0.0, f64::max);
    // one quadrature rule and one K table per order serve the whole grid
    let mg = MellinGrid::new(re_min, freq)?;
    let mut tables: Vec<(f64, Vec<f64>)> = vec![];
    let mut table = |x: f64| -> usize {
        if let Some(i) = tables.iter().position(|(y, _)| *y == x) {
            return i;
        }
        tables.push((x, mg.k_table(x)));
        tables.len() - 1
    };
    let idx: Vec<(usize, usize)> = grid.iter().map(|&(t, nu, _)| (table(t), table(nu))).collect();
    let mut cals = vec![];
    let mut printed = vec![];
    for (&(t, nu, s), &(it, inu)) in grid.iter().zip(&idx) {
        let numeric = mg.integrate(&tables[it].1, &tables[inu].1, c(s, 0.0));
        if !numeric.re.is_finite() {
            return Err(Error::Numerical("Bessel-Mellin quadrature did not converge".into()));
        }
        let m = mellin_sides(numeric, t, nu, c(s, 0.0));
        cals.push(m.calibration);
        printed.push(m.printed_ratio.re / 2f64.powf(s - 3.0));
    }
    let c0 = cals[0];
    let spread = cals.iter().map(|x| (x / c0 - 1.0).abs()).fold(0.0, f64::max);
    let params = serde_json::json!({
        "points": grid.len(),
        "calibration": c0,
        "printed_ratio_over_2_pow_s_minus_3_max_dev": printed.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max),
    });
    Ok(VerificationReport::new("bessel_mellin", params, spread, 1e-6, t0))
}

/// `max / min` of `t |T(1-it) / Gamma(1+it)|` on `t_min, t_min + step, .. <= t_max`;
/// bounded when the ratio decays like `1/t`.
pub fn verify_gamma_decay(nu: f64, t_min: f64, t_max: f64, step: f64) -> Result<VerificationReport> {
    let t0 = Instant::now();
    if !(step > 0.0) || t_max < t_min {
        return Err(Error::Domain("bad t grid".into()));
    }
    let n = ((t_max - t_min) / step + 1e-9).floor() as usize;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..=n {
        let t = t_min + k as f64 * step;
        let v = t * gamma_factor_ratio(t, nu)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let params = serde_json::json!({ "nu": nu, "t_min": t_min, "t_max": t_max, "step": step, "min": lo, "max": hi });
    Ok(VerificationReport::new("gamma_decay", params, hi / lo, 3.0, t0))
}

fn spectral_norm(m: &[Vec<Complex64>]) -> f64 {
    let n = m.len();
    // power iteration on M^* M
    let mut v = vec![c(1.0, 0.0); n];
    let mut lam = 0.0;
    for _ in 0..200 {
        let mv: Vec<Complex64> = (0..n).map(|i| (0..n).map(|k| m[i][k] * v[k]).sum()).collect();
        let w: Vec<Complex64> = (0..n).map(|k| (0..n).map(|i| m[i][k].conj() * mv[i]).sum()).collect();
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lam = norm / v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v = w.iter().map(|x| x / norm).collect();
    }
    lam.sqrt()
}

/// `max_t ||Phi(1+it) Phi(1-it) - I||_2`.
pub fn verify_scattering_unitary(e: &EisensteinContext, ts: &[f64]) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let h = e.group().h();
    let mut worst = 0.0f64;
    for &t in ts {
        let a = e.scattering_matrix(c(1.0, t))?;
        let b = e.scattering_matrix(c(1.0, -t))?;
        let mut d = vec![vec![c(0.0, 0.0); h]; h];
        for i in 0..h {
            for j in 0..h {
                d[i][j] = (0..h).map(|k| a[i][k] * b[k][j]).sum::<Complex64>() - if i == j { 1.0 } else { 0.0 };
            }
        }
        worst = worst.max(spectral_norm(&d));
    }
    let params = serde_json::json!({ "d": e.field().d(), "t": ts });
    Ok(VerificationReport::new("scattering", params, worst, 1e-6, t0))
}

/// Residue at `s = 2` of every cusp's series at each point, against the
/// closed form; relative residual.
pub fn verify_residue(e: &EisensteinContext, points: &[(Complex64, f64)]) -> Result<VerificationReport> {
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    for j in 0..e.group().h() {
        for &(z, r) in points {
            let (num, formula) = e.residue_at_2(j, z, r)?;
            worst = worst.max((num - formula).abs() / formula);
        }
    }
    let pts: Vec<[f64; 3]> = points.iter().map(|(z, r)| [z.re, z.im, *r]).collect();
    let params = serde_json::json!({ "d": e.field().d(), "points": pts });
    Ok(VerificationReport::new("residue", params, worst, 1e-3, t0))
}

/// Fourier expansion against the coset sum at `n` seeded points of
/// `[-1/2, 1/2] x [0, 1.1] x [0.6, 1.4]`, for each cusp pair `(i, j)`.
pub fn verify_fourier_direct(e: &EisensteinContext, pairs: &[(usize, usize)], s: Complex64, n: usize, seed: u64) -> Result<VerificationReport> {
    use rand::{Rng, SeedableRng};
    let t0 = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut pts = vec![];
    for _ in 0..n {
        let (x, y, r) = (rng.gen_range(-0.5..0.5), rng.gen_range(0.0..1.1), rng.gen_range(0.6..1.4));
        pts.push([x, y, r]);
        for &(i, j) in pairs {
            let f = e.fourier_eval(i, j, c(x, y), r, s, 1e-12)?;
            // the coset sum is taken at cusp j in the frame of cusp i
            let (zi, ri) = e.cusp(i).matrix.inverse().ok_or(Error::Zero)?.act(c(x, y), r);
            let d = e.direct_sum(j, zi, ri, s, 2e-3)?;
            worst = worst.max((f.value - d.value).norm() / f.value.norm());
        }
    }
    let params = serde_json::json!({ "d": e.field().d(), "s": [s.re, s.im], "pairs": pairs, "points": pts, "seed": seed });
    Ok(VerificationReport::new("fourier-direct", params, worst, 1e-6, t0))
}
