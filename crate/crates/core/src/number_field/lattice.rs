use super::element::FieldElement;
use super::field::OmegaPoly;
use super::ideal::Ideal;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Rank-2 lattice `{(u*p1 + v*p2) + (u*q1 + v*q2) omega} / den` with a
/// Lagrange-reduced integer basis, for fast floating point enumeration.
#[derive(Clone, Debug)]
pub struct FloatLattice {
    pub w: OmegaPoly,
    pub den: i64,
    pub basis: [(i64, i64); 2],
    e: [Complex64; 2],
}

fn norm_i(w: OmegaPoly, p: i64, q: i64) -> i128 {
    let (p, q) = (p as i128, q as i128);
    p * p + p * q * w.tr as i128 + q * q * w.nm as i128
}

impl FloatLattice {
    pub fn from_ideal(x: &Ideal) -> Self {
        let [e1, e2] = x.basis();
        let den = num_integer::Integer::lcm(&e1.denominator(), &e2.denominator());
        let c = |v: &BigRational| (v * BigRational::from_integer(den.clone())).to_integer().to_i64().unwrap();
        let b1 = (c(&e1.a), c(&e1.b));
        let b2 = (c(&e2.a), c(&e2.b));
        Self::new(x.omega_poly(), den.to_i64().unwrap(), b1, b2)
    }

    pub fn new(w: OmegaPoly, den: i64, mut b1: (i64, i64), mut b2: (i64, i64)) -> Self {
        // Lagrange reduction on exact integer norms
        loop {
            if norm_i(w, b2.0, b2.1) < norm_i(w, b1.0, b1.1) {
                std::mem::swap(&mut b1, &mut b2);
            }
            let n1 = norm_i(w, b1.0, b1.1);
            let cross = norm_i(w, b1.0 + b2.0, b1.1 + b2.1) - n1 - norm_i(w, b2.0, b2.1);
            // mu = round(Re(b2 conj b1) / |b1|^2) = round(cross / (2 n1))
            let mu = ((cross as f64) / (2.0 * n1 as f64)).round() as i64;
            if mu == 0 {
                break;
            }
            b2 = (b2.0 - mu * b1.0, b2.1 - mu * b1.1);
            if norm_i(w, b2.0, b2.1) >= n1 {
                break;
            }
        }
        let om = w.complex();
        let to_c = |b: (i64, i64)| (Complex64::new(b.0 as f64, 0.0) + om * b.1 as f64) / den as f64;
        FloatLattice { w, den, basis: [b1, b2], e: [to_c(b1), to_c(b2)] }
    }

    pub fn covolume(&self) -> f64 {
        (self.e[0].conj() * self.e[1]).im.abs()
    }

    pub fn shortest(&self) -> f64 {
        self.e[0].norm()
    }

    /// Visits `(numerator coords (p, q), complex value)` of every lattice point
    /// with `|point - center| <= radius`, in a fixed order.
    pub fn for_each_in_disc<F: FnMut((i64, i64), Complex64)>(&self, center: Complex64, radius: f64, mut f: F) {
        let [e1, e2] = self.e;
        let n1 = e1.norm_sqr();
        let area = self.covolume();
        let h = area / e1.norm();
        // coordinates of the centre
        let det = e1.re * e2.im - e1.im * e2.re;
        let vc = (e1.re * center.im - e1.im * center.re) / det;
        let vlo = (vc - radius / h - 1e-9).ceil() as i64;
        let vhi = (vc + radius / h + 1e-9).floor() as i64;
        let r2 = radius * radius;
        for v in vlo..=vhi {
            let wv = center - e2 * v as f64;
            let proj = (wv * e1.conj()).re / n1;
            let dist2 = ((wv * e1.conj()).im).powi(2) / n1;
            if dist2 > r2 * (1.0 + 1e-12) + 1e-12 {
                continue;
            }
            let half = ((r2 - dist2).max(0.0)).sqrt() / e1.norm();
            let ulo = (proj - half - 1e-9).ceil() as i64;
            let uhi = (proj + half + 1e-9).floor() as i64;
            for u in ulo..=uhi {
                let z = e1 * u as f64 + e2 * v as f64;
                if (z - center).norm_sqr() <= r2 * (1.0 + 1e-12) {
                    let p = u * self.basis[0].0 + v * self.basis[1].0;
                    let q = u * self.basis[0].1 + v * self.basis[1].1;
                    f((p, q), z);
                }
            }
        }
    }
}

/// All nonzero `n` in `x` with `|n| <= r`, sorted by `(norm, Re, Im)`.
pub fn enumerate_elements(x: &Ideal, r: f64) -> Vec<FieldElement> {
    let lat = FloatLattice::from_ideal(x);
    let den = BigInt::from(lat.den);
    let mut out = vec![];
    lat.for_each_in_disc(Complex64::new(0.0, 0.0), r * (1.0 + 1e-9), |(p, q), _| {
        if p == 0 && q == 0 {
            return;
        }
        let el = FieldElement::with_omega(
            lat.w,
            BigRational::new(BigInt::from(p), den.clone()),
            BigRational::new(BigInt::from(q), den.clone()),
        );
        if el.norm().to_f64().unwrap() <= r * r {
            out.push(el);
        }
    });
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.cmp_re_im(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::QuadField;

    #[test]
    fn units_and_small_elements() {
        let f = QuadField::new(-5).unwrap();
        let o = Ideal::unit(&f);
        assert_eq!(enumerate_elements(&o, 1.0).len(), 2);
        let v = enumerate_elements(&o, 2.3);
        let expect: Vec<_> = [(-1, 0), (1, 0), (-2, 0), (2, 0), (0, -1), (0, 1)]
            .iter()
            .map(|&(a, b)| FieldElement::from_ints(&f, a, b))
            .collect();
        assert_eq!(v, expect);
        let two = Ideal::from_ints(&f, &[(2, 0)]).unwrap();
        assert!(enumerate_elements(&two, 1.0).is_empty());
    }
}
