use super::element::FieldElement;
use super::field::{OmegaPoly, QuadField};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Fractional ideal `scale * (aZ + (b + omega)Z)`, `0 <= b < a`.
///
/// The integral part is always primitive (the `c` entry of the HNF triple is 1);
/// any rational content lives in `scale`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    scale: BigRational,
    a: BigInt,
    b: BigInt,
    w: OmegaPoly,
}

/// Rank-2 HNF `{(A, 0), (B, C)}` of an integer lattice, with each basis vector
/// written as an integer combination of the inputs.
struct Hnf2 {
    a: BigInt,
    a_coef: Vec<BigInt>,
    b: BigInt,
    c: BigInt,
    p_coef: Vec<BigInt>,
}

fn axpy(u: &BigInt, x: &[BigInt], v: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(x, y)| u * x + v * y).collect()
}

fn hnf2(vecs: &[(BigInt, BigInt)]) -> Option<Hnf2> {
    let n = vecs.len();
    let unit = |k: usize| -> Vec<BigInt> {
        (0..n).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect()
    };
    let mut av: Option<(BigInt, Vec<BigInt>)> = None;
    let mut pv: Option<(BigInt, BigInt, Vec<BigInt>)> = None;

    fn push_flat(av: &mut Option<(BigInt, Vec<BigInt>)>, x: BigInt, e: Vec<BigInt>) {
        if x.is_zero() {
            return;
        }
        match av.take() {
            None => *av = Some((x, e)),
            Some((a, ca)) => {
                let g = a.extended_gcd(&x);
                *av = Some((g.gcd, axpy(&g.x, &ca, &g.y, &e)));
            }
        }
    }

    for (k, (x, y)) in vecs.iter().enumerate() {
        let e = unit(k);
        if y.is_zero() {
            push_flat(&mut av, x.clone(), e);
            continue;
        }
        match pv.take() {
            None => pv = Some((x.clone(), y.clone(), e)),
            Some((pb, pc, cp)) => {
                let g = pc.extended_gcd(y);
                let nb = &g.x * &pb + &g.y * x;
                let ncoef = axpy(&g.x, &cp, &g.y, &e);
                let yg = y / &g.gcd;
                let cg = &pc / &g.gcd;
                let fx = &yg * &pb - &cg * x;
                let fcoef = axpy(&yg, &cp, &(-&cg), &e);
                pv = Some((nb, g.gcd.clone(), ncoef));
                push_flat(&mut av, fx, fcoef);
            }
        }
    }
    let (mut a, mut a_coef) = av?;
    let (mut b, mut c, mut p_coef) = pv?;
    if a.is_negative() {
        a = -a;
        a_coef = a_coef.into_iter().map(|x| -x).collect();
    }
    if c.is_negative() {
        b = -b;
        c = -c;
        p_coef = p_coef.into_iter().map(|x| -x).collect();
    }
    let q = b.div_floor(&a);
    b -= &q * &a;
    p_coef = axpy(&BigInt::one(), &p_coef, &(-q), &a_coef);
    Some(Hnf2 { a, a_coef, b, c, p_coef })
}

fn lcm_denoms(gens: &[FieldElement]) -> BigInt {
    gens.iter().fold(BigInt::one(), |l, g| l.lcm(&g.denominator()))
}

fn to_int_vec(x: &FieldElement, l: &BigInt) -> (BigInt, BigInt) {
    let a = &x.a * BigRational::from_integer(l.clone());
    let b = &x.b * BigRational::from_integer(l.clone());
    (a.to_integer(), b.to_integer())
}

impl Ideal {
    /// HNF of the O_F-module generated by `gens`.
    pub fn from_generators(field: &QuadField, gens: &[FieldElement]) -> Result<Self> {
        Self::from_gens_w(field.omega(), gens)
    }

    pub(crate) fn from_gens_w(w: OmegaPoly, gens: &[FieldElement]) -> Result<Self> {
        if gens.iter().any(|g| g.omega_poly() != w) {
            return Err(Error::FieldMismatch);
        }
        let om = FieldElement::with_omega(w, BigRational::zero(), BigRational::one());
        let mut zgens = Vec::with_capacity(2 * gens.len());
        for g in gens {
            zgens.push(g.clone());
            zgens.push(g * &om);
        }
        Self::from_z_basis(w, &zgens)
    }

    /// Assumes `zgens` already span an O_F-module over Z.
    fn from_z_basis(w: OmegaPoly, zgens: &[FieldElement]) -> Result<Self> {
        let l = lcm_denoms(zgens);
        let vecs: Vec<_> = zgens.iter().map(|g| to_int_vec(g, &l)).collect();
        let h = hnf2(&vecs).ok_or(Error::ZeroIdeal)?;
        debug_assert!((&h.a % &h.c).is_zero() && (&h.b % &h.c).is_zero());
        let a = &h.a / &h.c;
        let b = (&h.b / &h.c).mod_floor(&a);
        let scale = BigRational::new(h.c, l);
        Ok(Ideal { scale, a, b, w })
    }

    pub fn unit(field: &QuadField) -> Self {
        Ideal { scale: BigRational::one(), a: BigInt::one(), b: BigInt::zero(), w: field.omega() }
    }

    pub fn principal(x: &FieldElement) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        Self::from_gens_w(x.omega_poly(), std::slice::from_ref(x))
    }

    pub fn from_ints(field: &QuadField, gens: &[(i64, i64)]) -> Result<Self> {
        let g: Vec<_> = gens.iter().map(|&(a, b)| FieldElement::from_ints(field, a, b)).collect();
        Self::from_generators(field, &g)
    }

    /// Ideal `aZ + (b + omega)Z` scaled by 1; caller guarantees it is an O_F-module.
    pub(crate) fn from_primitive_unchecked(w: OmegaPoly, a: BigInt, b: BigInt) -> Self {
        let b = b.mod_floor(&a);
        Ideal { scale: BigRational::one(), a, b, w }
    }

    pub fn omega_poly(&self) -> OmegaPoly {
        self.w
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    /// `(a, b, c)` of the primitive part; `c` is normalised to 1.
    pub fn hnf(&self) -> (BigInt, BigInt, BigInt) {
        (self.a.clone(), self.b.clone(), BigInt::one())
    }

    pub fn primitive_norm(&self) -> &BigInt {
        &self.a
    }

    pub fn primitive_b(&self) -> &BigInt {
        &self.b
    }

    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * BigRational::from_integer(self.a.clone())
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm().to_f64().unwrap()
    }

    /// Z-basis `[scale*a, scale*(b + omega)]`.
    pub fn basis(&self) -> [FieldElement; 2] {
        let e1 = FieldElement::with_omega(
            self.w,
            &self.scale * BigRational::from_integer(self.a.clone()),
            BigRational::zero(),
        );
        let e2 = FieldElement::with_omega(
            self.w,
            &self.scale * BigRational::from_integer(self.b.clone()),
            self.scale.clone(),
        );
        [e1, e2]
    }

    pub fn is_integral(&self) -> bool {
        self.scale.is_integer()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.scale.is_one() && self.a.is_one()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        if x.omega_poly() != self.w {
            return false;
        }
        let p = &x.a / &self.scale;
        let q = &x.b / &self.scale;
        if !q.is_integer() {
            return false;
        }
        let rest = p - q * BigRational::from_integer(self.b.clone());
        if !rest.is_integer() {
            return false;
        }
        (rest.to_integer() % &self.a).is_zero()
    }

    /// `self` divides `other`, i.e. `other` is contained in `self`.
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.basis().iter().all(|g| self.contains(g))
    }

    fn check(&self, o: &Ideal) -> Result<()> {
        if self.w != o.w {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, o: &Ideal) -> Result<Ideal> {
        self.check(o)?;
        let [x1, x2] = self.basis();
        let [y1, y2] = o.basis();
        let prods = [&x1 * &y1, &x1 * &y2, &x2 * &y1, &x2 * &y2];
        Self::from_gens_w(self.w, &prods)
    }

    pub fn sum(&self, o: &Ideal) -> Result<Ideal> {
        self.check(o)?;
        let [x1, x2] = self.basis();
        let [y1, y2] = o.basis();
        Self::from_z_basis(self.w, &[x1, x2, y1, y2])
    }

    pub fn conj(&self) -> Ideal {
        let [x1, x2] = self.basis();
        Self::from_gens_w(self.w, &[x1.conj(), x2.conj()]).expect("nonzero")
    }

    pub fn inverse(&self) -> Ideal {
        // J * conj(J) = (a) for primitive J
        let c = self.conj();
        let s = BigRational::one() / (&self.scale * &self.scale * BigRational::from_integer(self.a.clone()));
        c.scale_by(&s)
    }

    pub fn scale_by(&self, q: &BigRational) -> Ideal {
        assert!(!q.is_zero());
        Ideal { scale: &self.scale * q.abs(), a: self.a.clone(), b: self.b.clone(), w: self.w }
    }

    pub fn mul_element(&self, x: &FieldElement) -> Result<Ideal> {
        self.mul(&Ideal::principal(x)?)
    }

    pub fn pow(&self, e: i64) -> Ideal {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut r = Ideal { scale: BigRational::one(), a: BigInt::one(), b: BigInt::zero(), w: self.w };
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b).unwrap();
            }
            b = b.mul(&b).unwrap();
            k >>= 1;
        }
        r
    }

    /// Binary quadratic form `N(u*e1 + v*e2)/N(self)` in the HNF basis.
    pub fn norm_form(&self) -> (BigInt, BigInt, BigInt) {
        let tr = BigInt::from(self.w.tr);
        let nm = BigInt::from(self.w.nm);
        let a = self.a.clone();
        let bq = BigInt::from(2) * &self.b + &tr;
        let c = (&self.b * &self.b + &self.b * &tr + nm) / &a;
        (a, bq, c)
    }

    /// A generator of the ideal if it is principal, chosen with the smallest
    /// `(Re, Im)` among all generators.
    pub fn principal_generator(&self) -> Option<FieldElement> {
        let (fa, fb, fc) = self.norm_form();
        let disc = (&fb * &fb - BigInt::from(4) * &fa * &fc).abs();
        let vmax: BigInt = num_integer::Roots::sqrt(&(BigInt::from(4) * &fa / &disc)) + 1;
        let mut sols = vec![];
        let mut v = -vmax.clone();
        while v <= vmax {
            // fa*u^2 + fb*v*u + fc*v^2 - 1 = 0
            let bb: BigInt = &fb * &v;
            let cc: BigInt = &fc * &v * &v - 1;
            let dd: BigInt = &bb * &bb - BigInt::from(4) * &fa * &cc;
            if !dd.is_negative() {
                let r: BigInt = num_integer::Roots::sqrt(&dd);
                if &r * &r == dd {
                    for sgn in [1i32, -1] {
                        let num = -&bb + BigInt::from(sgn) * &r;
                        let den = BigInt::from(2) * &fa;
                        if (&num % &den).is_zero() {
                            sols.push((num / den, v.clone()));
                        }
                    }
                }
            }
            v += 1;
        }
        let [e1, e2] = self.basis();
        let mut gens: Vec<FieldElement> = sols
            .into_iter()
            .map(|(u, v)| {
                let uq = BigRational::from_integer(u);
                let vq = BigRational::from_integer(v);
                &e1.scale(&uq) + &e2.scale(&vq)
            })
            .collect();
        gens.sort_by(|x, y| x.cmp_re_im(y));
        gens.dedup();
        gens.into_iter().next()
    }

    pub fn is_principal(&self) -> bool {
        self.principal_generator().is_some()
    }

    /// Canonical representative of `x` modulo this integral ideal.
    pub fn reduce(&self, x: &FieldElement) -> FieldElement {
        assert!(self.is_integral() && x.is_integral());
        let s = self.scale.to_integer();
        let p = x.a.to_integer();
        let q = x.b.to_integer();
        let k2 = q.div_floor(&s);
        let q2 = &q - &k2 * &s;
        let p2 = (&p - &k2 * &s * &self.b).mod_floor(&(&s * &self.a));
        FieldElement::from_bigints(self.w, p2, q2)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale.is_one() {
            write!(f, "<{}, {}+w>", self.a, self.b)
        } else {
            write!(f, "({})*<{}, {}+w>", self.scale, self.a, self.b)
        }
    }
}

/// `u + v = 1` with `u` in `m1`, `v` in `m2`, for coprime integral ideals.
fn unit_split(m1: &Ideal, m2: &Ideal) -> Option<(FieldElement, FieldElement)> {
    let [x1, x2] = m1.basis();
    let [y1, y2] = m2.basis();
    let gens = [x1, x2, y1, y2];
    let l = lcm_denoms(&gens);
    if !l.is_one() {
        return None;
    }
    let vecs: Vec<_> = gens.iter().map(|g| to_int_vec(g, &l)).collect();
    let h = hnf2(&vecs)?;
    if !(h.a.is_one() && h.c.is_one() && h.b.is_zero()) {
        return None;
    }
    let comb = |range: std::ops::Range<usize>| {
        let mut acc = FieldElement::with_omega(m1.w, BigRational::zero(), BigRational::zero());
        for k in range {
            acc = &acc + &gens[k].scale(&BigRational::from_integer(h.a_coef[k].clone()));
        }
        acc
    };
    let u = comb(0..2);
    let v = comb(2..4);
    let _ = &h.p_coef;
    Some((u, v))
}

/// Solve `mu = r_i mod m_i` for pairwise coprime integral moduli.
pub fn crt_solve(congruences: &[(FieldElement, Ideal)]) -> Result<FieldElement> {
    let Some((r0, m0)) = congruences.first() else {
        return Err(Error::Domain("empty congruence list".into()));
    };
    for (r, m) in congruences {
        if !m.is_integral() || !r.is_integral() {
            return Err(Error::NotIntegral);
        }
    }
    for i in 0..congruences.len() {
        for j in i + 1..congruences.len() {
            let s = congruences[i].1.sum(&congruences[j].1)?;
            if !s.is_unit_ideal() {
                return Err(Error::NotCoprime);
            }
        }
    }
    let mut x = m0.reduce(r0);
    let mut m = m0.clone();
    for (r, m2) in &congruences[1..] {
        let (u, v) = unit_split(&m, m2).ok_or(Error::NotCoprime)?;
        x = &(&x * &v) + &(r * &u);
        m = m.mul(m2)?;
        x = m.reduce(&x);
    }
    Ok(x)
}
