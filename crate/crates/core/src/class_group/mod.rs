//! The ideal class group as an explicit finite abelian group.
//!
//! Classes are found from reduced binary quadratic forms of discriminant `d_F`,
//! multiplied through ideal products, and decomposed into cyclic factors with
//! a Smith normal form. Classes are numbered `0..h` in the order of their
//! representatives `m_1 = O_F, m_2, ...`.

pub mod cyclotomic;
pub mod forms;
pub mod snf;

use crate::error::Result;
use crate::number_field::{Ideal, QuadField};
use forms::Form;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::HashMap;

/// Exponent vector relative to the cyclic decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealClass {
    pub exps: Vec<u64>,
}

/// `exp(2 pi i num / order)` with `gcd(num, order) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootOfUnity {
    pub num: u64,
    pub order: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, order: u64) -> Self {
        let num = num % order;
        let g = num.gcd(&order);
        RootOfUnity { num: num / g, order: order / g }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, order: 1 }
    }

    pub fn mul(self, o: Self) -> Self {
        let l = self.order.lcm(&o.order);
        Self::new(self.num * (l / self.order) + o.num * (l / o.order), l)
    }

    pub fn conj(self) -> Self {
        Self::new(self.order - self.num, self.order)
    }

    pub fn pow(self, k: i64) -> Self {
        let e = (self.num as i128 * k as i128).rem_euclid(self.order as i128) as u64;
        Self::new(e, self.order)
    }

    /// Exponent of `zeta_m` representing this root; `m` must be a multiple of the order.
    pub fn exponent_in(self, m: u64) -> u64 {
        debug_assert_eq!(m % self.order, 0);
        self.num * (m / self.order)
    }

    pub fn to_complex(self) -> Complex64 {
        if self.order <= 2 {
            return Complex64::new(if self.num == 0 { 1.0 } else { -1.0 }, 0.0);
        }
        if self.order == 4 {
            return if self.num == 1 { Complex64::i() } else { -Complex64::i() };
        }
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.order as f64)
    }
}

/// Class group character with dual exponent vector `dual`:
/// `chi(y) = exp(2 pi i sum_j dual_j y_j / d_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Character {
    pub index: usize,
    pub dual: Vec<u64>,
    orders: Vec<u64>,
}

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.dual.iter().all(|&k| k == 0)
    }

    pub fn eval(&self, c: &IdealClass) -> RootOfUnity {
        let l = self.orders.iter().fold(1u64, |acc, &d| acc.lcm(&d));
        let mut num = 0u64;
        for ((&k, &y), &d) in self.dual.iter().zip(&c.exps).zip(&self.orders) {
            num = (num + (k * y % d) * (l / d)) % l;
        }
        RootOfUnity::new(num, l)
    }

    pub fn eval_c(&self, c: &IdealClass) -> Complex64 {
        self.eval(c).to_complex()
    }

    /// Order of the character as a group element.
    pub fn order(&self) -> u64 {
        self.dual.iter().zip(&self.orders).fold(1u64, |acc, (&k, &d)| acc.lcm(&(d / k.gcd(&d))))
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroup {
    field: QuadField,
    /// Cyclic orders `d_1 | d_2 | ...`, all greater than one.
    orders: Vec<u64>,
    /// Class index of each cyclic generator.
    generators: Vec<usize>,
    reps: Vec<Ideal>,
    forms: Vec<Form>,
    classes: Vec<IdealClass>,
    form_index: HashMap<(i128, i128), usize>,
    class_index: HashMap<IdealClass, usize>,
    table: Vec<Vec<usize>>,
    characters: Vec<Character>,
}

fn form_to_ideal(field: &QuadField, f: Form) -> Ideal {
    let w = field.omega();
    let (a, b, _) = f;
    // norm form of aZ + (r + omega)Z is (a, 2r + tr, .)
    let r = ((b - w.tr as i128) / 2).rem_euclid(a);
    Ideal::from_ints(field, &[(a as i64, 0), (r as i64, 1)]).expect("nonzero")
}

fn ideal_form(x: &Ideal) -> Form {
    let (a, b, c) = x.norm_form();
    forms::reduce_big(&a, &b, &c)
}

impl ClassGroup {
    pub fn new(field: &QuadField) -> Result<Self> {
        let disc = field.disc();
        let raw = forms::reduced_forms(disc);
        let h = raw.len();

        // minimal-norm integral representative of each class, then sort
        let mut entries: Vec<(Ideal, Form)> = raw
            .iter()
            .map(|&f| {
                let (a, _, _) = f;
                let w = field.omega();
                let rep = (0..a)
                    .filter(|&r| (r * r + r * w.tr as i128 + w.nm as i128).rem_euclid(a) == 0)
                    .map(|r| Ideal::from_ints(field, &[(a as i64, 0), (r as i64, 1)]).expect("nonzero"))
                    .find(|i| ideal_form(i) == f)
                    .expect("class contains an ideal of norm a");
                (rep, f)
            })
            .collect();
        entries.sort_by(|x, y| {
            let (ha, hb, _) = x.0.hnf();
            let (ka, kb, _) = y.0.hnf();
            (ha, hb).cmp(&(ka, kb))
        });
        let reps: Vec<Ideal> = entries.iter().map(|e| e.0.clone()).collect();
        let forms_v: Vec<Form> = entries.iter().map(|e| e.1).collect();
        let form_index: HashMap<(i128, i128), usize> =
            forms_v.iter().enumerate().map(|(i, f)| ((f.0, f.1), i)).collect();

        let mut table = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in i..h {
                let p = reps[i].mul(&reps[j])?;
                let f = ideal_form(&p);
                let k = form_index[&(f.0, f.1)];
                table[i][j] = k;
                table[j][i] = k;
            }
        }

        let (orders, classes, generators) = decompose(&table);
        let class_index = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();

        let mut characters = vec![];
        let mut dual = vec![0u64; orders.len()];
        loop {
            characters.push(Character { index: characters.len(), dual: dual.clone(), orders: orders.clone() });
            // lexicographic increment, last coordinate fastest
            let mut k = orders.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                dual[k] += 1;
                if dual[k] < orders[k] {
                    break;
                }
                dual[k] = 0;
            }
            if dual.iter().all(|&x| x == 0) {
                break;
            }
        }

        Ok(ClassGroup {
            field: field.clone(),
            orders,
            generators,
            reps,
            forms: forms_v,
            classes,
            form_index,
            class_index,
            table,
            characters,
        })
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn h(&self) -> usize {
        self.reps.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Cyclic generators as class indices, paired with their orders.
    pub fn generators(&self) -> Vec<(usize, u64)> {
        self.generators.iter().copied().zip(self.orders.iter().copied()).collect()
    }

    /// Representatives `m_1 = O_F, ..., m_h`, indexed from zero.
    pub fn reps(&self) -> &[Ideal] {
        &self.reps
    }

    pub fn rep(&self, j: usize) -> &Ideal {
        &self.reps[j]
    }

    /// Reduced form of the class `j` (also of its inverse, up to `b -> -b`).
    pub fn form(&self, j: usize) -> (i64, i64, i64) {
        let (a, b, c) = self.forms[j];
        (a as i64, b as i64, c as i64)
    }

    pub fn class(&self, j: usize) -> &IdealClass {
        &self.classes[j]
    }

    pub fn index_of(&self, c: &IdealClass) -> usize {
        self.class_index[c]
    }

    pub fn identity(&self) -> IdealClass {
        IdealClass { exps: vec![0; self.orders.len()] }
    }

    /// Class of a nonzero fractional ideal.
    pub fn class_of(&self, x: &Ideal) -> IdealClass {
        self.classes[self.index_of_ideal(x)].clone()
    }

    pub fn index_of_ideal(&self, x: &Ideal) -> usize {
        let f = ideal_form(x);
        self.form_index[&(f.0, f.1)]
    }

    /// Class index of the primitive ideal `pZ + (-r + omega)Z`, i.e. `<p, omega - r>`.
    pub fn index_of_prime(&self, p: u64, r: u64) -> usize {
        let w = self.field.omega();
        let (p, r) = (p as i128, r as i128);
        let b = -2 * r + w.tr as i128;
        let c = (r * r - r * w.tr as i128 + w.nm as i128) / p;
        let f = forms::reduce((p, b, c));
        self.form_index[&(f.0, f.1)]
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn add(&self, x: &IdealClass, y: &IdealClass) -> IdealClass {
        IdealClass { exps: x.exps.iter().zip(&y.exps).zip(&self.orders).map(|((a, b), d)| (a + b) % d).collect() }
    }

    pub fn neg(&self, x: &IdealClass) -> IdealClass {
        IdealClass { exps: x.exps.iter().zip(&self.orders).map(|(a, d)| (d - a) % d).collect() }
    }

    pub fn scalar(&self, x: &IdealClass, k: i64) -> IdealClass {
        IdealClass {
            exps: x
                .exps
                .iter()
                .zip(&self.orders)
                .map(|(&a, &d)| (a as i128 * k as i128).rem_euclid(d as i128) as u64)
                .collect(),
        }
    }

    pub fn inverse_index(&self, j: usize) -> usize {
        self.index_of(&self.neg(&self.classes[j]))
    }

    pub fn is_identity(&self, x: &IdealClass) -> bool {
        x.exps.iter().all(|&e| e == 0)
    }

    /// Indices of the classes in `Cl_F[2]`.
    pub fn two_torsion(&self) -> Vec<usize> {
        (0..self.h()).filter(|&j| self.table[j][j] == 0).collect()
    }

    /// Exponent of the group (lcm of cyclic orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &d| acc.lcm(&d))
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn character(&self, i: usize) -> &Character {
        &self.characters[i]
    }

    /// Index of the conjugate character.
    pub fn conj_character(&self, i: usize) -> usize {
        let dual: Vec<u64> = self.characters[i].dual.iter().zip(&self.orders).map(|(k, d)| (d - k) % d).collect();
        self.characters.iter().position(|c| c.dual == dual).unwrap()
    }

    /// Index of the product character.
    pub fn mul_characters(&self, i: usize, j: usize) -> usize {
        let dual: Vec<u64> = self.characters[i]
            .dual
            .iter()
            .zip(&self.characters[j].dual)
            .zip(&self.orders)
            .map(|((a, b), d)| (a + b) % d)
            .collect();
        self.characters.iter().position(|c| c.dual == dual).unwrap()
    }

    /// `chi(C)` by class index, as a complex number.
    pub fn chi(&self, chi: usize, class: usize) -> Complex64 {
        self.characters[chi].eval_c(&self.classes[class])
    }

    /// `(1/h) sum_chi chi(c)` with the sum of roots of unity reduced exactly in
    /// `Z[zeta_L]`; returns the rational value.
    pub fn averaged_character_sum_exact(&self, c: &IdealClass) -> num_rational::Ratio<i64> {
        let l = self.exponent() as usize;
        let mut acc = cyclotomic::CyclotomicInt::zero(l);
        for chi in &self.characters {
            let z = chi.eval(c);
            acc.c[z.exponent_in(l as u64) as usize] += 1;
        }
        let v = acc.as_integer().expect("character sums over the full dual group are rational");
        num_rational::Ratio::new(v as i64, self.h() as i64)
    }

    pub fn averaged_character_sum(&self, c: &IdealClass) -> Complex64 {
        let s: Complex64 = self.characters.iter().map(|chi| chi.eval_c(c)).sum();
        s / self.h() as f64
    }

    /// Ideal of norm `n` from a class's reduced form (diagnostics).
    pub fn form_ideal(&self, j: usize) -> Ideal {
        form_to_ideal(&self.field, self.forms[j])
    }

    pub fn norm_of_rep(&self, j: usize) -> u64 {
        self.reps[j].norm().to_integer().to_u64().unwrap_or(0)
    }

    pub fn hnf_of_rep(&self, j: usize) -> (BigInt, BigInt) {
        let (a, b, _) = self.reps[j].hnf();
        (a, b)
    }
}

/// Cyclic decomposition of a finite abelian group from its Cayley table, with
/// element 0 the identity. Returns orders, per-element exponent vectors and
/// the generator elements.
fn decompose(table: &[Vec<usize>]) -> (Vec<u64>, Vec<IdealClass>, Vec<usize>) {
    let h = table.len();
    let mut coords: HashMap<usize, Vec<i64>> = HashMap::from([(0usize, vec![])]);
    let mut gens: Vec<usize> = vec![];
    let mut relations: Vec<Vec<i64>> = vec![];
    for g in 1..h {
        if coords.contains_key(&g) {
            continue;
        }
        let mut cur = g;
        let mut e = 1i64;
        while !coords.contains_key(&cur) {
            cur = table[cur][g];
            e += 1;
        }
        // e*g = element already in the subgroup
        let mut rel: Vec<i64> = coords[&cur].iter().map(|&x| -x).collect();
        rel.resize(gens.len(), 0);
        rel.push(e);
        let old: Vec<(usize, Vec<i64>)> = coords.iter().map(|(&k, v)| (k, v.clone())).collect();
        for (k, mut v) in old.iter().cloned() {
            v.resize(gens.len(), 0);
            v.push(0);
            coords.insert(k, v);
        }
        let mut pw = g;
        for i in 1..e {
            for (k, v) in &old {
                let el = table[*k][pw];
                let mut nv = v.clone();
                nv.resize(gens.len(), 0);
                nv.push(i);
                coords.insert(el, nv);
            }
            pw = table[pw][g];
        }
        for r in relations.iter_mut() {
            r.push(0);
        }
        relations.push(rel);
        gens.push(g);
    }
    let k = gens.len();
    if k == 0 {
        return (vec![], vec![IdealClass { exps: vec![] }], vec![]);
    }
    let s = snf::smith(&relations);
    let keep: Vec<usize> = (0..k).filter(|&j| s.diag[j] > 1).collect();
    let orders: Vec<u64> = keep.iter().map(|&j| s.diag[j] as u64).collect();
    let classes: Vec<IdealClass> = (0..h)
        .map(|el| {
            let x = &coords[&el];
            let exps = keep
                .iter()
                .map(|&j| {
                    let y: i64 = (0..k).map(|i| x[i] * s.v[i][j]).sum();
                    y.rem_euclid(s.diag[j]) as u64
                })
                .collect();
            IdealClass { exps }
        })
        .collect();
    let generators = (0..keep.len())
        .map(|t| classes.iter().position(|c| c.exps.iter().enumerate().all(|(u, &e)| e == (u == t) as u64)).unwrap())
        .collect();
    (orders, classes, generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::FieldElement;

    fn group(d: i64) -> ClassGroup {
        ClassGroup::new(&QuadField::new(d).unwrap()).unwrap()
    }

    #[test]
    fn small_groups() {
        let g = group(-5);
        assert_eq!((g.h(), g.orders().to_vec()), (2, vec![2]));
        assert_eq!(group(-23).orders(), &[3]);
        let g21 = group(-21);
        assert_eq!(g21.orders(), &[2, 2]);
        assert_eq!(g21.two_torsion().len(), 4);
        assert_eq!(group(-14).orders(), &[4]);
        assert_eq!(group(-1).h(), 1);
    }

    #[test]
    fn class_of_examples_d5() {
        let g = group(-5);
        let f = g.field().clone();
        assert!(g.rep(0).is_unit_ideal());
        assert_eq!(g.rep(1), &Ideal::from_ints(&f, &[(2, 0), (1, 1)]).unwrap());
        let seven = Ideal::principal(&FieldElement::from_ints(&f, 7, 0)).unwrap();
        assert!(g.is_identity(&g.class_of(&seven)));
        let p3 = Ideal::from_ints(&f, &[(3, 0), (1, 1)]).unwrap();
        assert!(!g.is_identity(&g.class_of(&p3)));
        assert!(g.is_identity(&g.class_of(&p3.pow(2))));
        let chi = g.character(1);
        assert_eq!(chi.eval(&g.class_of(&p3)), RootOfUnity::new(1, 2));
    }

    #[test]
    fn cube_roots_d23() {
        let g = group(-23);
        let chi = g.character(1);
        for j in 1..3 {
            assert_eq!(chi.eval(g.class(j)).order, 3);
        }
    }

    #[test]
    fn prime_index_matches_ideal_class() {
        let g = group(-23);
        let f = g.field().clone();
        for p in [2u64, 3, 13, 29, 31, 41, 47, 59] {
            for (pr, _) in crate::number_field::factor_rational_prime(p, &f).unwrap() {
                if let Some(r) = pr.root {
                    assert_eq!(g.index_of_prime(p, r), g.index_of_ideal(&pr.ideal));
                }
            }
        }
    }

    #[test]
    fn exact_orthogonality() {
        let g = group(-21);
        for j in 0..g.h() {
            let v = g.averaged_character_sum_exact(g.class(j));
            assert_eq!(v, num_rational::Ratio::from_integer((j == 0) as i64));
        }
    }
}
