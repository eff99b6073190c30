use crate::arith::is_squarefree;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Minimal polynomial `X^2 - tr X + nm` of the ring generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OmegaPoly {
    pub tr: i64,
    pub nm: i64,
}

impl OmegaPoly {
    pub fn complex(&self) -> Complex64 {
        let im = ((4 * self.nm - self.tr * self.tr) as f64).sqrt() / 2.0;
        Complex64::new(self.tr as f64 / 2.0, im)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
    disc: i64,
    unit_count: u32,
    omega: OmegaPoly,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !is_squarefree(d) {
            return Err(Error::BadField(d));
        }
        let one_mod_four = d.rem_euclid(4) == 1;
        let disc = if one_mod_four { d } else { 4 * d };
        let omega = if one_mod_four {
            OmegaPoly { tr: 1, nm: (1 - d) / 4 }
        } else {
            OmegaPoly { tr: 0, nm: -d }
        };
        let unit_count = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        Ok(QuadField { d, disc, unit_count, omega })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The field discriminant `d_F`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn abs_disc(&self) -> f64 {
        (self.disc.unsigned_abs()) as f64
    }

    pub fn unit_count(&self) -> u32 {
        self.unit_count
    }

    pub fn omega(&self) -> OmegaPoly {
        self.omega
    }

    pub fn omega_complex(&self) -> Complex64 {
        self.omega.complex()
    }

    /// `sqrt(d_F) = i sqrt|d_F|`.
    pub fn sqrt_disc(&self) -> Complex64 {
        Complex64::new(0.0, self.abs_disc().sqrt())
    }

    pub fn minkowski_bound(&self) -> f64 {
        2.0 / std::f64::consts::PI * self.abs_disc().sqrt()
    }

    pub fn ring_gen_str(&self) -> String {
        if self.omega.tr == 1 {
            format!("(1+sqrt({}))/2", self.d)
        } else {
            format!("sqrt({})", self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        let f = QuadField::new(-5).unwrap();
        assert_eq!(f.disc(), -20);
        assert_eq!(f.omega(), OmegaPoly { tr: 0, nm: 5 });
        let g = QuadField::new(-23).unwrap();
        assert_eq!(g.disc(), -23);
        assert_eq!(g.omega(), OmegaPoly { tr: 1, nm: 6 });
        assert_eq!(g.unit_count(), 2);
        assert_eq!(QuadField::new(-3).unwrap().unit_count(), 6);
    }

    #[test]
    fn rejects_bad_d() {
        assert_eq!(QuadField::new(-4), Err(Error::BadField(-4)));
        assert_eq!(QuadField::new(5), Err(Error::BadField(5)));
        assert_eq!(QuadField::new(0), Err(Error::BadField(0)));
    }
}
