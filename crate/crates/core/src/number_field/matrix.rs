use super::element::FieldElement;
use super::field::QuadField;
use num_complex::Complex64;
use std::fmt;

/// `(a b; c d)` over `F`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix2F {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Matrix2F {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        Matrix2F { a, b, c, d }
    }

    pub fn identity(field: &QuadField) -> Self {
        let (o, z) = (FieldElement::one_in(field), FieldElement::zero_in(field));
        Matrix2F::new(o.clone(), z.clone(), z, o)
    }

    pub fn from_ints(field: &QuadField, e: [(i64, i64); 4]) -> Self {
        let f = |(x, y): (i64, i64)| FieldElement::from_ints(field, x, y);
        Matrix2F::new(f(e[0]), f(e[1]), f(e[2]), f(e[3]))
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Matrix2F) -> Matrix2F {
        Matrix2F {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn scale(&self, k: &FieldElement) -> Matrix2F {
        Matrix2F { a: &self.a * k, b: &self.b * k, c: &self.c * k, d: &self.d * k }
    }

    /// `None` when singular.
    pub fn inverse(&self) -> Option<Matrix2F> {
        let di = self.det().inv()?;
        Some(Matrix2F { a: &self.d * &di, b: -(&self.b * &di), c: -(&self.c * &di), d: &self.a * &di })
    }

    /// Adjugate `(d -b; -c a)`; inverse up to the determinant.
    pub fn adjugate(&self) -> Matrix2F {
        Matrix2F { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integral())
    }

    /// `ac, ad, bc, bd` all in `O_F`.
    pub fn is_quasi_integral(&self) -> bool {
        [(&self.a, &self.c), (&self.a, &self.d), (&self.b, &self.c), (&self.b, &self.d)]
            .iter()
            .all(|(x, y)| (*x * *y).is_integral())
    }

    /// Integral with unit determinant.
    pub fn in_gl2_of(&self) -> bool {
        self.is_integral() && {
            let n = self.det().norm();
            n == num_rational::BigRational::from_integer(1.into())
        }
    }

    /// Action on `H^3 = {(z, r)}`:
    /// `z' = ((az+b) conj(cz+d) + a conj(c) r^2) / D`, `r' = |det| r / D`,
    /// `D = |cz+d|^2 + |c|^2 r^2`.
    pub fn act(&self, z: Complex64, r: f64) -> (Complex64, f64) {
        let [a, b, c, d] = [&self.a, &self.b, &self.c, &self.d].map(|x| x.to_complex());
        let cz = c * z + d;
        let den = cz.norm_sqr() + c.norm_sqr() * r * r;
        let det = (a * d - b * c).norm();
        (((a * z + b) * cz.conj() + a * c.conj() * r * r) / den, det * r / den)
    }

    /// Mobius action on `P^1(F)`; `None` is the point at infinity.
    pub fn act_cusp(&self, eta: Option<&FieldElement>) -> Option<FieldElement> {
        match eta {
            None => {
                if self.c.is_zero() {
                    None
                } else {
                    Some(&self.a / &self.c)
                }
            }
            Some(e) => {
                let den = &(&self.c * e) + &self.d;
                if den.is_zero() {
                    None
                } else {
                    Some(&(&(&self.a * e) + &self.b) / &den)
                }
            }
        }
    }
}

impl fmt::Debug for Matrix2F {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_action() {
        let f = QuadField::new(-5).unwrap();
        let g = Matrix2F::from_ints(&f, [(1, 1), (2, 0), (-1, 1), (-4, 0)]);
        // det = -4(1+w) + 2(1-w) = -2 - 6w
        assert_eq!(g.det(), FieldElement::from_ints(&f, -2, -6));
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi), Matrix2F::identity(&f));
        let s = Matrix2F::from_ints(&f, [(0, 0), (-1, 0), (1, 0), (0, 0)]);
        let (z, r) = (Complex64::new(0.3, 0.2), 0.7);
        let (z1, r1) = s.act(z, r);
        let (z2, r2) = s.act(z1, r1);
        assert!((z2 - z).norm() < 1e-14 && (r2 - r).abs() < 1e-14);
        assert!((r1 - r / (z.norm_sqr() + r * r)).abs() < 1e-14);
    }

    #[test]
    fn quasi_integral() {
        let f = QuadField::new(-5).unwrap();
        let half = FieldElement::from_ratios(&f, (1, 2), (0, 1));
        let two = FieldElement::from_ints(&f, 2, 0);
        let z = FieldElement::zero_in(&f);
        let m = Matrix2F::new(half.clone(), z.clone(), z, two);
        assert!(m.is_quasi_integral() && !m.is_integral());
        let m2 = Matrix2F::new(half.clone(), half, FieldElement::one_in(&f), FieldElement::one_in(&f));
        assert!(!m2.is_quasi_integral());
    }
}
