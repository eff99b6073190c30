use super::element::FieldElement;
use super::field::{OmegaPoly, QuadField};
use super::ideal::Ideal;
use crate::arith::{factor_u64, is_prime, kronecker, sqrt_mod};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    pub p: u64,
    pub residue_deg: u8,
    pub ramified: bool,
    /// Root `r` of the minimal polynomial of omega with `omega = r mod P`
    /// (degree-one primes only).
    pub root: Option<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_deg as u32)
    }

    /// Ramification index over `p`.
    pub fn e(&self) -> i64 {
        if self.ramified {
            2
        } else {
            1
        }
    }
}

pub(crate) fn minpoly_roots(w: OmegaPoly, p: u64) -> Vec<u64> {
    let f = |x: u64| -> bool {
        let x = x as i128;
        let v = x * x - w.tr as i128 * x + w.nm as i128;
        v.rem_euclid(p as i128) == 0
    };
    if p < 64 {
        return (0..p).filter(|&x| f(x)).collect();
    }
    // disc of X^2 - tr X + nm is d_F; p odd here
    let disc = (w.tr * w.tr - 4 * w.nm).rem_euclid(p as i64) as u64;
    let Some(s) = sqrt_mod(disc, p) else { return vec![] };
    let inv2 = (p + 1) / 2;
    let mut roots: Vec<u64> = [s, (p - s) % p]
        .iter()
        .map(|&r| (((w.tr.rem_euclid(p as i64) as u128 + r as u128) % p as u128) * inv2 as u128 % p as u128) as u64)
        .collect();
    roots.sort();
    roots.dedup();
    debug_assert!(roots.iter().all(|&r| f(r)));
    roots
}

/// Primes above `p` with their exponents in `(p)`.
pub fn factor_rational_prime(p: u64, field: &QuadField) -> Result<Vec<(PrimeIdeal, u32)>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p as i64));
    }
    let w = field.omega();
    let k = kronecker(field.disc(), p);
    let pb = BigInt::from(p);
    let mk = |r: u64| {
        // <p, omega - r> = pZ + (-r + omega)Z
        Ideal::from_primitive_unchecked(w, pb.clone(), -BigInt::from(r))
    };
    let out = match k {
        0 => {
            let roots = minpoly_roots(w, p);
            let r = roots[0];
            vec![(PrimeIdeal { ideal: mk(r), p, residue_deg: 1, ramified: true, root: Some(r) }, 2)]
        }
        1 => {
            let roots = minpoly_roots(w, p);
            let mut v: Vec<_> = roots
                .iter()
                .map(|&r| (PrimeIdeal { ideal: mk(r), p, residue_deg: 1, ramified: false, root: Some(r) }, 1))
                .collect();
            v.sort_by(|a, b| a.0.ideal.primitive_b().cmp(b.0.ideal.primitive_b()));
            v
        }
        _ => {
            let ideal = Ideal::from_ints(field, &[(p as i64, 0)])?;
            vec![(PrimeIdeal { ideal, p, residue_deg: 2, ramified: false, root: None }, 1)]
        }
    };
    Ok(out)
}

fn vp_rational(q: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        e
    };
    count(q.numer().abs()) - count(q.denom().abs())
}

/// Exact valuation of a nonzero fractional ideal at a prime.
pub fn valuation(x: &Ideal, pr: &PrimeIdeal) -> Result<i64> {
    if x.omega_poly() != pr.ideal.omega_poly() {
        return Err(Error::FieldMismatch);
    }
    let from_scale = pr.e() * vp_rational(x.scale(), pr.p);
    if pr.residue_deg == 2 {
        return Ok(from_scale);
    }
    let a = x.primitive_norm();
    let pb = BigInt::from(pr.p);
    if !(a % &pb).is_zero() {
        return Ok(from_scale);
    }
    let prim = Ideal::from_primitive_unchecked(x.omega_poly(), a.clone(), x.primitive_b().clone());
    if !pr.ideal.contains_ideal(&prim) {
        return Ok(from_scale);
    }
    let k = vp_rational(&BigRational::from_integer(a.clone()), pr.p);
    Ok(from_scale + k)
}

pub fn valuation_of_element(x: &FieldElement, pr: &PrimeIdeal) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::Zero);
    }
    valuation(&Ideal::principal(x)?, pr)
}

/// Factorisation of the principal ideal `(x + y*omega)` for small integers, as
/// `(p, root or None, exponent)`. A `None` root marks an inert prime; for split
/// and ramified primes the root identifies `<p, omega - root>`.
pub fn factor_element_i64(field: &QuadField, x: i64, y: i64) -> Vec<(u64, Option<u64>, u32)> {
    let w = field.omega();
    let n = (x as i128 * x as i128 + (x as i128) * (y as i128) * w.tr as i128
        + (y as i128) * (y as i128) * w.nm as i128) as u64;
    let mut out = vec![];
    for (p, e) in factor_u64(n) {
        let k = kronecker(field.disc(), p);
        match k {
            -1 => out.push((p, None, e / 2)),
            0 => {
                let r = minpoly_roots(w, p)[0];
                out.push((p, Some(r), e));
            }
            _ => {
                let roots = minpoly_roots(w, p);
                let g = (x.gcd(&y)).unsigned_abs();
                let mut c = 0u32;
                let mut gg = g;
                while gg % p == 0 {
                    gg /= p;
                    c += 1;
                }
                let pc = p.pow(c) as i64;
                let (x1, y1) = (x / pc, y / pc);
                let rest = e - 2 * c;
                // omega = r mod P, so x1 + y1*omega in P iff x1 + y1*r = 0 mod p
                let in_p = |r: u64| ((x1 as i128 + y1 as i128 * r as i128).rem_euclid(p as i128)) == 0;
                for &r in &roots {
                    let extra = if rest > 0 && in_p(r) { rest } else { 0 };
                    let tot = c + extra;
                    if tot > 0 {
                        out.push((p, Some(r), tot));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_types_d5() {
        let f = QuadField::new(-5).unwrap();
        let two = factor_rational_prime(2, &f).unwrap();
        assert_eq!(two.len(), 1);
        assert!(two[0].0.ramified && two[0].1 == 2);
        assert_eq!(two[0].0.ideal, Ideal::from_ints(&f, &[(2, 0), (1, 1)]).unwrap());
        let three = factor_rational_prime(3, &f).unwrap();
        assert_eq!(three.len(), 2);
        assert!(three.iter().all(|(p, e)| p.norm() == 3 && *e == 1));
        assert_eq!(three[0].0.ideal.conj(), three[1].0.ideal);
        let eleven = factor_rational_prime(11, &f).unwrap();
        assert_eq!(eleven[0].0.norm(), 121);
        assert_eq!(factor_rational_prime(15, &f), Err(Error::NotPrime(15)));
    }

    #[test]
    fn valuations() {
        let f = QuadField::new(-5).unwrap();
        let p2 = factor_rational_prime(2, &f).unwrap()[0].0.clone();
        let two = FieldElement::from_ints(&f, 2, 0);
        assert_eq!(valuation_of_element(&two, &p2).unwrap(), 2);
        assert_eq!(valuation_of_element(&FieldElement::one_in(&f), &p2).unwrap(), 0);
        let p3 = Ideal::from_ints(&f, &[(3, 0), (1, 1)]).unwrap();
        let pr3 = factor_rational_prime(3, &f)
            .unwrap()
            .into_iter()
            .find(|(p, _)| p.ideal == p3)
            .unwrap()
            .0;
        assert_eq!(valuation(&p3, &pr3).unwrap(), 1);
        assert_eq!(valuation(&p3.conj(), &pr3).unwrap(), 0);
        assert_eq!(valuation(&p3.inverse(), &pr3).unwrap(), -1);
    }

    #[test]
    fn element_factorisation_matches_ideal_valuations() {
        let f = QuadField::new(-23).unwrap();
        for (x, y) in [(3, 1), (12, -5), (7, 0), (-9, 4), (30, 6)] {
            let el = FieldElement::from_ints(&f, x, y);
            for (p, root, e) in factor_element_i64(&f, x, y) {
                let primes = factor_rational_prime(p, &f).unwrap();
                let pr = primes.iter().find(|(q, _)| q.root == root).unwrap();
                assert_eq!(valuation_of_element(&el, &pr.0).unwrap(), e as i64);
            }
        }
    }
}
