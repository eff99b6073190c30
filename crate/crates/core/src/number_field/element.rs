use super::field::{OmegaPoly, QuadField};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `a + b*omega` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: BigRational,
    pub b: BigRational,
    pub(crate) w: OmegaPoly,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElement {
    pub fn new(field: &QuadField, a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b, w: field.omega() }
    }

    pub fn from_ints(field: &QuadField, a: i64, b: i64) -> Self {
        Self::new(field, rat(a), rat(b))
    }

    pub fn from_ratios(field: &QuadField, a: (i64, i64), b: (i64, i64)) -> Self {
        let r = |(p, q): (i64, i64)| BigRational::new(BigInt::from(p), BigInt::from(q));
        Self::new(field, r(a), r(b))
    }

    pub fn from_bigints(w: OmegaPoly, a: BigInt, b: BigInt) -> Self {
        FieldElement { a: BigRational::from_integer(a), b: BigRational::from_integer(b), w }
    }

    pub(crate) fn with_omega(w: OmegaPoly, a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b, w }
    }

    pub fn zero_in(field: &QuadField) -> Self {
        Self::from_ints(field, 0, 0)
    }

    pub fn one_in(field: &QuadField) -> Self {
        Self::from_ints(field, 1, 0)
    }

    pub fn omega_in(field: &QuadField) -> Self {
        Self::from_ints(field, 0, 1)
    }

    pub fn omega_poly(&self) -> OmegaPoly {
        self.w
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        let tr = rat(self.w.tr);
        FieldElement { a: &self.a + &self.b * tr, b: -&self.b, w: self.w }
    }

    pub fn norm(&self) -> BigRational {
        let tr = rat(self.w.tr);
        let nm = rat(self.w.nm);
        &self.a * &self.a + &self.a * &self.b * tr + &self.b * &self.b * nm
    }

    pub fn trace(&self) -> BigRational {
        rat(2) * &self.a + &self.b * rat(self.w.tr)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(FieldElement { a: c.a / &n, b: c.b / &n, w: self.w })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { a: &self.a * q, b: &self.b * q, w: self.w }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = FieldElement { a: BigRational::one(), b: BigRational::zero(), w: self.w };
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Complex embedding with `omega` in the upper half plane.
    pub fn to_complex(&self) -> Complex64 {
        let om = self.w.complex();
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        Complex64::new(a, 0.0) + om * b
    }

    /// Lexicographic key `(Re, Im)` compared exactly.
    pub fn re_exact(&self) -> BigRational {
        &self.a + &self.b * BigRational::new(BigInt::from(self.w.tr), BigInt::from(2))
    }

    pub fn cmp_re_im(&self, other: &Self) -> Ordering {
        self.re_exact()
            .cmp(&other.re_exact())
            .then_with(|| self.b.cmp(&other.b))
    }

    /// Least common denominator of both coordinates.
    pub fn denominator(&self) -> BigInt {
        num_integer::Integer::lcm(self.a.denom(), self.b.denom())
    }

    pub fn abs_sq_f64(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn is_negative_rational(&self) -> bool {
        self.b.is_zero() && self.a.is_negative()
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*w", self.b)
        } else {
            write!(f, "{} + {}*w", self.a, self.b)
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a + &o.a, b: &self.b + &o.b, w: self.w }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a - &o.a, b: &self.b - &o.b, w: self.w }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        // omega^2 = tr*omega - nm
        let bd = &self.b * &o.b;
        let a = &self.a * &o.a - &bd * rat(self.w.nm);
        let b = &self.a * &o.b + &self.b * &o.a + &bd * rat(self.w.tr);
        FieldElement { a, b, w: self.w }
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, o: &FieldElement) -> FieldElement {
        self * &o.inv().expect("division by zero field element")
    }
}

impl<'a> Neg for &'a FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b, w: self.w }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_and_conj() {
        let f = QuadField::new(-5).unwrap();
        let x = FieldElement::from_ints(&f, 2, -1);
        assert_eq!(x.norm(), rat(9));
        assert_eq!(&x * &x.conj(), FieldElement::from_ints(&f, 9, 0));
        let g = QuadField::new(-23).unwrap();
        let w = FieldElement::omega_in(&g);
        assert_eq!(w.norm(), rat(6));
        assert_eq!(w.trace(), rat(1));
        assert!((w.to_complex() - Complex64::new(0.5, 23f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse() {
        let f = QuadField::new(-23).unwrap();
        let x = FieldElement::from_ratios(&f, (3, 2), (-5, 7));
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, FieldElement::one_in(&f));
    }
}
