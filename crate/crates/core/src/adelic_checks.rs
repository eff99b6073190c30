//! Matrix-level checks for the groups `Gamma^[j]`, `tilde Gamma^[j]` and the
//! map `rho_j` onto `Cl_F[2]`.
//!
//! Nothing adelic is materialised. With `n_{p,j} = ord_p(m_j)` for the cusp
//! ideal `m_j = <1, eta_j>`, conjugating `g = (a b; c d)` by `t_j` only shifts
//! valuations, so every condition is a finite list of inequalities over the
//! primes where some valuation is nonzero.

use crate::arith::is_prime;
use crate::class_group::{ClassGroup, IdealClass};
use crate::eisenstein::{cusp_data, CuspData};
use crate::identities::VerificationReport;
use crate::error::{Error, Result};
use crate::number_field::{crt_solve, factor_rational_prime, valuation, valuation_of_element, FieldElement, Ideal, Matrix2F, PrimeIdeal, QuadField};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    GammaJ,
    GammaTildeJ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

/// Valuation data of one prime: shifted entry valuations (`None` for a zero
/// entry) and the determinant valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEntry {
    pub prime: PrimeIdeal,
    /// `ord(a), ord(b) + k n, ord(c) - k n, ord(d)`
    pub shifted: [Option<i64>; 4],
    pub det: i64,
    /// `n_{p,j}`
    pub n: i64,
}

impl LocalEntry {
    pub fn min_shifted(&self) -> i64 {
        self.shifted.iter().flatten().copied().min().expect("nonzero matrix")
    }
}

/// Valuations of `t_j^{-k} g t_j^k` at the primes dividing `det g`, `m_j` or a
/// denominator of `g`; elsewhere every condition holds automatically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalProfile {
    pub matrix: Matrix2F,
    pub j: usize,
    /// Power of `t_j` in the conjugation: 1 for `Gamma^[j]`, 2 for the conjugation lemma.
    pub k: i64,
    pub support: Vec<LocalEntry>,
}

/// `g = (l1 l2; l3 l4)` with `det g = lambda`, `(lambda) = p^2`.
#[derive(Clone, Debug)]
pub struct TorsionWitness {
    pub prime: PrimeIdeal,
    pub j: usize,
    pub lambda: FieldElement,
    pub lambdas: [FieldElement; 4],
    pub mu: FieldElement,
    pub n1: PrimeIdeal,
    pub n2: PrimeIdeal,
    pub matrix: Matrix2F,
}

/// Per-field context: class group, cusp ideals and their prime factorisations.
pub struct AdelicContext {
    group: ClassGroup,
    cusps: Vec<CuspData>,
    prime_bound: u64,
}

fn rational_primes_of(n: &BigInt, out: &mut Vec<u64>) -> Result<()> {
    let mut n = n.abs();
    if n.is_zero() {
        return Ok(());
    }
    let mut p = 2u64;
    while n > BigInt::one() && p < 1_000_000 {
        let pb = BigInt::from(p);
        if (&n % &pb).is_zero() {
            out.push(p);
            while (&n % &pb).is_zero() {
                n /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        match n.to_u64() {
            Some(q) if is_prime(q) => out.push(q),
            _ => return Err(Error::Domain(format!("cannot certify the factorisation of {n}"))),
        }
    }
    Ok(())
}

fn val_or_inf(x: &FieldElement, pr: &PrimeIdeal) -> Result<Option<i64>> {
    if x.is_zero() {
        Ok(None)
    } else {
        valuation_of_element(x, pr).map(Some)
    }
}

impl AdelicContext {
    pub fn new(field: &QuadField) -> Result<Self> {
        let group = ClassGroup::new(field)?;
        let cusps = cusp_data(&group)?;
        Ok(AdelicContext { group, cusps, prime_bound: 10_000 })
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn field(&self) -> &QuadField {
        self.group.field()
    }

    pub fn cusp_ideal(&self, j: usize) -> &Ideal {
        &self.cusps[j].ideal
    }

    pub fn scaling_matrix(&self, j: usize) -> &Matrix2F {
        &self.cusps[j].matrix
    }

    fn check_j(&self, j: usize) -> Result<()> {
        if j >= self.cusps.len() {
            return Err(Error::Domain(format!("index {j} out of range 0..{}", self.cusps.len())));
        }
        Ok(())
    }

    /// Profile of `t_j^{-k} g t_j^k`; `extra` rational primes are added to the
    /// scanned set (they never change a verdict).
    pub fn profile_with(&self, g: &Matrix2F, j: usize, k: i64, extra: &[u64]) -> Result<LocalProfile> {
        self.check_j(j)?;
        let det = g.det();
        if det.is_zero() {
            return Err(Error::Domain("singular matrix".into()));
        }
        // at a prime not dividing det, m_j or an entry denominator all entries
        // are integral and 2 min <= ord(det) = 0, so nothing can fail there
        let mut ps: Vec<u64> = extra.to_vec();
        let dn = det.norm();
        rational_primes_of(dn.numer(), &mut ps)?;
        rational_primes_of(dn.denom(), &mut ps)?;
        for x in g.entries() {
            rational_primes_of(&x.denominator(), &mut ps)?;
        }
        let nm = self.cusps[j].ideal.norm();
        rational_primes_of(nm.numer(), &mut ps)?;
        rational_primes_of(nm.denom(), &mut ps)?;
        ps.sort_unstable();
        ps.dedup();
        let mut support = vec![];
        for p in ps {
            for (pr, _) in factor_rational_prime(p, self.field())? {
                let n = valuation(&self.cusps[j].ideal, &pr)?;
                let v = |x: &FieldElement| val_or_inf(x, &pr);
                let shifted = [v(&g.a)?, v(&g.b)?.map(|x| x + k * n), v(&g.c)?.map(|x| x - k * n), v(&g.d)?];
                let dv = valuation_of_element(&det, &pr)?;
                let e = LocalEntry { prime: pr, shifted, det: dv, n };
                if e.det != 0 || e.n != 0 || e.shifted.iter().any(|s| *s != Some(0)) {
                    support.push(e);
                }
            }
        }
        Ok(LocalProfile { matrix: g.clone(), j, k, support })
    }

    pub fn profile(&self, g: &Matrix2F, j: usize) -> Result<LocalProfile> {
        self.profile_with(g, j, 1, &[])
    }

    /// Membership with the local data as certificate.
    pub fn membership(&self, kind: GroupKind, g: &Matrix2F, j: usize) -> Result<(bool, LocalProfile)> {
        let prof = self.profile(g, j)?;
        Ok((Self::verdict(kind, &prof), prof))
    }

    pub fn verdict(kind: GroupKind, prof: &LocalProfile) -> bool {
        match kind {
            GroupKind::GammaJ => prof.support.iter().all(|e| e.det == 0 && e.shifted.iter().flatten().all(|&v| v >= 0)),
            GroupKind::GammaTildeJ => prof.support.iter().all(|e| 2 * e.min_shifted() == e.det),
        }
    }

    pub fn is_member(&self, kind: GroupKind, g: &Matrix2F, j: usize) -> Result<bool> {
        Ok(self.membership(kind, g, j)?.0)
    }

    /// `rho_j(g) = [prod p^{m_p}]`, `m_p` the minimal shifted valuation.
    pub fn rho(&self, g: &Matrix2F, j: usize) -> Result<IdealClass> {
        let (ok, prof) = self.membership(GroupKind::GammaTildeJ, g, j)?;
        if !ok {
            return Err(Error::Domain("matrix is not in tilde Gamma^[j]".into()));
        }
        let mut a = Ideal::unit(self.field());
        for e in &prof.support {
            let m = e.min_shifted();
            if m != 0 {
                a = a.mul(&e.prime.ideal.pow(m))?;
            }
        }
        let c = self.group.class_of(&a);
        debug_assert!(self.group.is_identity(&self.group.scalar(&c, 2)));
        Ok(c)
    }

    /// Prime ideals in class `class` by increasing norm, skipping `exclude`.
    pub fn prime_in_class(&self, class: usize, exclude: &[&Ideal]) -> Result<PrimeIdeal> {
        let mut p = 2u64;
        while p <= self.prime_bound {
            if is_prime(p) {
                for (pr, _) in factor_rational_prime(p, self.field())? {
                    if self.group.index_of_ideal(&pr.ideal) == class && !exclude.contains(&&pr.ideal) {
                        return Ok(pr);
                    }
                }
            }
            p += 1;
        }
        Err(Error::SearchExhausted(format!("no prime of norm <= {} in class {class}", self.prime_bound)))
    }

    fn generator(&self, x: &Ideal) -> Result<FieldElement> {
        x.principal_generator().ok_or_else(|| Error::Numerical(format!("ideal {x:?} expected principal")))
    }

    /// The explicit matrix with `rho_j = [p]` for a prime `p` with `[p]` in `Cl_F[2]`.
    pub fn two_torsion_witness(&self, p: &PrimeIdeal, j: usize) -> Result<TorsionWitness> {
        self.check_j(j)?;
        let g = &self.group;
        let pc = g.index_of_ideal(&p.ideal);
        if !g.is_identity(&g.scalar(g.class(pc), 2)) {
            return Err(Error::Domain("prime class is not 2-torsion".into()));
        }
        let mj = &self.cusps[j].ideal;
        let lambda = self.generator(&p.ideal.pow(2))?;
        let c2 = g.mul_index(pc, self.cusps[j].class);
        let n2 = self.prime_in_class(c2, &[&p.ideal])?;
        let l2 = self.generator(&n2.ideal.mul(&p.ideal)?.mul(&mj.inverse())?)?;
        let n1 = self.prime_in_class(pc, &[&p.ideal, &n2.ideal])?;
        let one = FieldElement::one_in(self.field());
        let zero = FieldElement::zero_in(self.field());
        let mu = crt_solve(&[(one.clone(), n2.ideal.clone()), (zero, p.ideal.mul(&n1.ideal)?)])?;
        let n4 = Ideal::principal(&mu)?.mul(&n1.ideal.inverse())?;
        let mut l1 = self.generator(&p.ideal.mul(&n1.ideal)?)?;
        let l4 = self.generator(&p.ideal.mul(&n4)?)?;
        let target = &lambda * &mu;
        let prod = &l1 * &l4;
        if prod != target {
            // generators are fixed up to the units +-1 only
            l1 = -l1;
            if &l1 * &l4 != target {
                return Err(Error::Numerical("unit adjustment failed".into()));
            }
        }
        let l3 = &(&(&l1 * &l4) - &lambda) / &l2;
        let matrix = Matrix2F::new(l1.clone(), l2.clone(), l3.clone(), l4.clone());
        Ok(TorsionWitness { prime: p.clone(), j, lambda, lambdas: [l1, l2, l3, l4], mu, n1, n2, matrix })
    }

    /// Exact postconditions: `det = lambda`, `(lambda) = p^2`, `l1 l4 = lambda mu`,
    /// min shifted valuation 1 at `p` and 0 elsewhere.
    pub fn check_witness(&self, w: &TorsionWitness) -> Result<bool> {
        let [l1, l2, l3, l4] = &w.lambdas;
        let det_ok = &(l1 * l4) - &(l2 * l3) == w.lambda;
        let lam_ok = Ideal::principal(&w.lambda)? == w.prime.ideal.pow(2);
        let mu_ok = l1 * l4 == &w.lambda * &w.mu;
        let prof = self.profile(&w.matrix, w.j)?;
        let local_ok = prof.support.iter().all(|e| {
            let want = if e.prime.ideal == w.prime.ideal { 1 } else { 0 };
            e.min_shifted() == want
        }) && prof.support.iter().any(|e| e.prime.ideal == w.prime.ideal);
        Ok(det_ok && lam_ok && mu_ok && local_ok)
    }

    /// `det(g)^{-1} g^2` lies in `Gamma^[j]`.
    pub fn square_descends(&self, g: &Matrix2F, j: usize) -> Result<bool> {
        if !self.is_member(GroupKind::GammaTildeJ, g, j)? {
            return Err(Error::Domain("matrix is not in tilde Gamma^[j]".into()));
        }
        let lam = g.det();
        let sq = g.mul(g).scale(&lam.inv().expect("invertible"));
        self.is_member(GroupKind::GammaJ, &sq, j)
    }

    fn t2_integral(&self, m: &Matrix2F, j: usize) -> Result<bool> {
        let prof = self.profile_with(m, j, 2, &[])?;
        Ok(prof.support.iter().all(|e| e.det == 0 && e.shifted.iter().flatten().all(|&v| v >= 0)))
    }

    /// Forward: `X` in `GL2(O_F)` gives `A_j X A_j^{-1}` with
    /// `t_j^{-2} (.) t_j^2` integral of unit determinant at every prime.
    /// Backward: such an `X` pulls back to `A_j^{-1} X A_j` in `GL2(O_F)`.
    pub fn conjugation_check(&self, x: &Matrix2F, j: usize, dir: Direction) -> Result<bool> {
        self.check_j(j)?;
        let a = &self.cusps[j].matrix;
        let ai = a.inverse().expect("det 1");
        match dir {
            Direction::Forward => {
                if !x.in_gl2_of() {
                    return Err(Error::Domain("X is not in GL2(O_F)".into()));
                }
                self.t2_integral(&a.mul(x).mul(&ai), j)
            }
            Direction::Backward => {
                if !self.t2_integral(x, j)? {
                    return Err(Error::Domain("X fails the t_j^2 integrality profile".into()));
                }
                Ok(ai.mul(x).mul(a).in_gl2_of())
            }
        }
    }

    /// Random word in the elementary generators of `SL2(O_F)`.
    pub fn random_sl2<R: Rng>(&self, rng: &mut R, len: usize) -> Matrix2F {
        let f = self.field();
        let mut g = Matrix2F::identity(f);
        for _ in 0..len {
            let (x, y) = (rng.gen_range(-2..=2), rng.gen_range(-1..=1));
            let e = if rng.gen_bool(0.5) {
                Matrix2F::from_ints(f, [(1, 0), (x, y), (0, 0), (1, 0)])
            } else {
                Matrix2F::from_ints(f, [(1, 0), (0, 0), (x, y), (1, 0)])
            };
            g = g.mul(&e);
        }
        g
    }

    /// Random element of `Gamma^[j]`: words in `(1 b; 0 1)`, `b in m_j^{-1}`,
    /// and `(1 0; c 1)`, `c in m_j`.
    pub fn random_gamma_j<R: Rng>(&self, rng: &mut R, j: usize, len: usize) -> Matrix2F {
        let f = self.field();
        let m = &self.cusps[j].ideal;
        let up = m.inverse().basis();
        let lo = m.basis();
        let one = FieldElement::one_in(f);
        let zero = FieldElement::zero_in(f);
        let mut g = Matrix2F::identity(f);
        for _ in 0..len {
            let (x, y) = (BigInt::from(rng.gen_range(-2..=2)), BigInt::from(rng.gen_range(-2..=2)));
            let q = |t: &BigInt| num_rational::BigRational::from_integer(t.clone());
            let e = if rng.gen_bool(0.5) {
                let b = &up[0].scale(&q(&x)) + &up[1].scale(&q(&y));
                Matrix2F::new(one.clone(), b, zero.clone(), one.clone())
            } else {
                let c = &lo[0].scale(&q(&x)) + &lo[1].scale(&q(&y));
                Matrix2F::new(one.clone(), zero.clone(), c, one.clone())
            };
            g = g.mul(&e);
        }
        g
    }

    /// One prime per class of `Cl_F[2]`, smallest norm first.
    pub fn torsion_primes(&self) -> Result<Vec<PrimeIdeal>> {
        self.group.two_torsion().into_iter().map(|c| self.prime_in_class(c, &[])).collect()
    }
}

impl AdelicContext {
    /// For `rho_j(g)` trivial: `lambda` generating `prod p^{m_p}`, with
    /// `lambda^{-1} g` in `Gamma^[j]`. `None` when the class is nontrivial.
    pub fn kernel_scalar(&self, g: &Matrix2F, j: usize) -> Result<Option<FieldElement>> {
        let (ok, prof) = self.membership(GroupKind::GammaTildeJ, g, j)?;
        if !ok {
            return Err(Error::Domain("matrix is not in tilde Gamma^[j]".into()));
        }
        let mut a = Ideal::unit(self.field());
        for e in &prof.support {
            a = a.mul(&e.prime.ideal.pow(e.min_shifted()))?;
        }
        Ok(a.principal_generator())
    }

    /// All witnesses at cusp `j`, one per class of `Cl_F[2]`.
    pub fn witnesses(&self, j: usize) -> Result<Vec<TorsionWitness>> {
        self.torsion_primes()?.iter().map(|p| self.two_torsion_witness(p, j)).collect()
    }

    /// Product of `1..=3` witnesses interleaved with random `Gamma^[j]` words.
    pub fn random_tilde<R: Rng>(&self, rng: &mut R, ws: &[TorsionWitness], j: usize) -> Matrix2F {
        let mut g = self.random_gamma_j(rng, j, 2);
        for _ in 0..rng.gen_range(1..=3) {
            let w = &ws[rng.gen_range(0..ws.len())];
            g = g.mul(&w.matrix).mul(&self.random_gamma_j(rng, j, 2));
        }
        g
    }
}

/// Failure counts of the matrix-level suite for one field.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteCounts {
    pub d: i64,
    pub witnesses: usize,
    pub witness_failures: usize,
    pub uncovered_classes: usize,
    pub homomorphism: usize,
    pub homomorphism_failures: usize,
    pub square: usize,
    pub square_failures: usize,
    pub conjugation: usize,
    pub conjugation_failures: usize,
}

impl SuiteCounts {
    pub fn failures(&self) -> usize {
        self.witness_failures + self.uncovered_classes + self.homomorphism_failures + self.square_failures + self.conjugation_failures
    }
}

/// Witness postconditions for every class of `Cl_F[2]` and every cusp, then
/// `n_hom` homomorphism checks, `n_sq` square descents and `n_conj` forward
/// conjugations on seeded samples.
pub fn run_suite(d: i64, seed: u64, n_hom: usize, n_sq: usize, n_conj: usize) -> Result<SuiteCounts> {
    use rand::SeedableRng;
    let field = QuadField::new(d)?;
    let ctx = AdelicContext::new(&field)?;
    let g = ctx.group();
    let h = g.h();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (d.unsigned_abs() << 32));
    let mut out = SuiteCounts { d, ..Default::default() };
    let tors = g.two_torsion();
    let mut ws = vec![];
    for j in 0..h {
        let wj = ctx.witnesses(j)?;
        let mut hit = vec![false; h];
        for w in &wj {
            out.witnesses += 1;
            let cls = g.index_of(&ctx.rho(&w.matrix, j)?);
            hit[cls] = true;
            let ok = ctx.check_witness(w)?
                && cls == g.index_of_ideal(&w.prime.ideal)
                && !ctx.is_member(GroupKind::GammaJ, &w.matrix, j)?;
            out.witness_failures += usize::from(!ok);
        }
        out.uncovered_classes += tors.iter().filter(|&&c| !hit[c]).count();
        ws.push(wj);
    }
    for k in 0..n_hom {
        let j = k % h;
        let (a, b) = (ctx.random_tilde(&mut rng, &ws[j], j), ctx.random_tilde(&mut rng, &ws[j], j));
        let lhs = ctx.rho(&a.mul(&b), j)?;
        let rhs = g.add(&ctx.rho(&a, j)?, &ctx.rho(&b, j)?);
        out.homomorphism += 1;
        out.homomorphism_failures += usize::from(lhs != rhs);
    }
    for k in 0..n_sq {
        let j = k % h;
        let x = ctx.random_tilde(&mut rng, &ws[j], j);
        out.square += 1;
        out.square_failures += usize::from(!ctx.square_descends(&x, j)?);
    }
    for k in 0..n_conj {
        let j = k % h;
        let x = ctx.random_sl2(&mut rng, 8);
        out.conjugation += 1;
        out.conjugation_failures += usize::from(!ctx.conjugation_check(&x, j, Direction::Forward)?);
    }
    Ok(out)
}

/// The suite on `d = -5, -21, -30` with 50 products, 200 squares and 200
/// conjugations per field; the residual is the total failure count.
pub fn verify_adelic(seed: u64) -> Result<(VerificationReport, Vec<SuiteCounts>)> {
    let t0 = std::time::Instant::now();
    let counts: Vec<SuiteCounts> = [-5, -21, -30].iter().map(|&d| run_suite(d, seed, 50, 200, 200)).collect::<Result<_>>()?;
    let fails: usize = counts.iter().map(SuiteCounts::failures).sum();
    let params = serde_json::json!({ "seed": seed, "fields": counts });
    Ok((VerificationReport::new("adelic", params, fails as f64, 0.0, t0), counts))
}
