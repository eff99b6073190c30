use super::EisensteinContext;
use crate::error::{Error, Result};
use crate::number_field::FloatLattice;
use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

/// Truncated coset sum with its analytic tail correction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DirectSum {
    pub value: Complex64,
    /// Tail correction included in `value`.
    pub tail: Complex64,
    pub cosets: usize,
    /// Cosets with `|cz+d|^2 + |c|^2 r^2 <= q_max` were summed.
    pub q_max: f64,
}

impl EisensteinContext {
    /// Visits `Q = |cz+d|^2 + |c|^2 r^2 <= q_max` for every pair `(c, d)` in
    /// `m_eta^2` generating `m_eta`; each coset of `Gamma_eta \ Gamma` is seen
    /// once per unit. Returns the number of cosets.
    pub(crate) fn for_each_coset<F: FnMut(f64)>(&self, j: usize, z: Complex64, r: f64, q_max: f64, mut f: F) -> usize {
        let field = self.field();
        let w = field.omega();
        let (a, b) = self.cusps[j].hnf;
        let cc = (b * b + b * w.tr + w.nm) / a;
        // multiplication by omega in the basis (1, eta), eta = (b + omega)/a
        let mul_w = |(u, v): (i128, i128)| (-(b as i128) * u - cc as i128 * v, a as i128 * u + (b + w.tr) as i128 * v);
        let lat = FloatLattice::new(w, a, (a, 0), (b, 1));
        let to_uv = |(p, q): (i64, i64)| (((p - b * q) / a) as i128, q as i128);
        let units = field.unit_count() as usize;
        let mut visits = 0usize;
        let rc = q_max.sqrt() / r;
        lat.for_each_in_disc(Complex64::new(0.0, 0.0), rc, |pc, c| {
            let rem = q_max - c.norm_sqr() * r * r;
            if rem < 0.0 {
                return;
            }
            let vc = to_uv(pc);
            let wc = mul_w(vc);
            let cr2 = c.norm_sqr() * r * r;
            lat.for_each_in_disc(-c * z, rem.sqrt(), |pd, d| {
                if pc == (0, 0) && pd == (0, 0) {
                    return;
                }
                let vd = to_uv(pd);
                let wd = mul_w(vd);
                let cols = [vc, wc, vd, wd];
                let mut g: i128 = 0;
                for x in 0..4 {
                    for y in x + 1..4 {
                        g = g.gcd(&(cols[x].0 * cols[y].1 - cols[x].1 * cols[y].0));
                    }
                }
                if g == 1 {
                    let q = (c * z + d).norm_sqr() + cr2;
                    if q <= q_max {
                        visits += 1;
                        f(q);
                    }
                }
            });
        });
        debug_assert!(visits % units == 0);
        visits / units
    }

    /// `E_{eta_j}(v, s)` as the coset sum of `Im(A_j gamma v)^s`, cut at heights
    /// below `height_bound` and completed by the tail
    /// `Res_j r^{s-2} B^{2-s}/(s-2)` with `B = r / height_bound`.
    pub fn direct_sum(&self, j: usize, z: Complex64, r: f64, s: Complex64, height_bound: f64) -> Result<DirectSum> {
        self.check_cusp(j)?;
        if s.re < 3.0 {
            return Err(Error::Domain(format!("direct sum needs Re(s) >= 3, got {s}")));
        }
        if !(r > 0.0) || !(height_bound > 0.0) {
            return Err(Error::Domain("need r > 0 and height_bound > 0".into()));
        }
        let q_max = r / height_bound;
        let mut acc = vec![];
        let lr = r.ln();
        let cosets = self.for_each_coset(j, z, r, q_max, |q| acc.push((q, (s * (lr - q.ln())).exp())));
        // fixed order regardless of enumeration details
        acc.sort_by(|x, y| y.0.total_cmp(&x.0));
        let units = self.field().unit_count() as f64;
        let mut value: Complex64 = acc.iter().map(|t| t.1).sum::<Complex64>() / units;
        let tail = self.residue_formula(j)? * ((s - 2.0) * lr + (Complex64::new(2.0, 0.0) - s) * q_max.ln()).exp() / (s - 2.0);
        value += tail;
        Ok(DirectSum { value, tail, cosets, q_max })
    }

    /// `E_{eta_i}(v | psi) = sum psi(Im(A_i gamma v))` for `psi` vanishing below `r0`.
    pub fn incomplete_eisenstein(&self, i: usize, z: Complex64, r: f64, psi: &dyn Fn(f64) -> f64, r0: f64) -> Result<f64> {
        self.check_cusp(i)?;
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Domain("profile must vanish on (0, r0) for some r0 > 0".into()));
        }
        if !(r > 0.0) {
            return Err(Error::Domain("need r > 0".into()));
        }
        let mut hs = vec![];
        self.for_each_coset(i, z, r, r / r0, |q| hs.push(r / q));
        hs.sort_by(f64::total_cmp);
        Ok(hs.iter().map(|&y| psi(y)).sum::<f64>() / self.field().unit_count() as f64)
    }
}
