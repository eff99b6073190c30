//! Sums of multiplicative functions over integral ideals, organised by norm.

use crate::arith::{kronecker, spf_table};
use crate::class_group::ClassGroup;
use crate::number_field::minpoly_roots;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// Two primes of norm `p`, by class index.
    Split(usize, usize),
    Ramified(usize),
    /// `(p)` is prime of norm `p^2` and principal.
    Inert,
}

#[derive(Clone, Copy, Debug)]
pub struct RationalPrime {
    pub p: u64,
    pub kind: Splitting,
}

/// Prime ideal seen by a local factor: class index and norm.
#[derive(Clone, Copy, Debug)]
pub struct LocalPrime {
    pub class: usize,
    pub norm: u64,
}

impl RationalPrime {
    pub fn primes_above(&self) -> Vec<LocalPrime> {
        match self.kind {
            Splitting::Split(a, b) => vec![LocalPrime { class: a, norm: self.p }, LocalPrime { class: b, norm: self.p }],
            Splitting::Ramified(a) => vec![LocalPrime { class: a, norm: self.p }],
            Splitting::Inert => vec![LocalPrime { class: 0, norm: self.p * self.p }],
        }
    }
}

pub fn classify_prime(g: &ClassGroup, p: u64) -> RationalPrime {
    let w = g.field().omega();
    let kind = match kronecker(g.field().disc(), p) {
        -1 => Splitting::Inert,
        0 => Splitting::Ramified(g.index_of_prime(p, minpoly_roots(w, p)[0])),
        _ => {
            let r = minpoly_roots(w, p);
            Splitting::Split(g.index_of_prime(p, r[0]), g.index_of_prime(p, r[1]))
        }
    };
    RationalPrime { p, kind }
}

/// Rational primes up to `x` with their splitting data.
pub fn prime_table(g: &ClassGroup, x: u64) -> Vec<RationalPrime> {
    crate::arith::primes_up_to(x as usize).into_iter().map(|p| classify_prime(g, p)).collect()
}

/// `sum_{N(m) <= x} f(m)` for `f` multiplicative over ideals, given by its
/// values `local(P, j) = f(P^j)` on prime powers.
pub fn multiplicative_ideal_sum<F>(primes: &[RationalPrime], x: u64, local: F) -> Complex64
where
    F: Fn(LocalPrime, u32) -> Complex64,
{
    coefficients(primes, x, local).iter().sum()
}

/// `g(n) = sum_{N(m) = n} f(m)` for `n <= x`.
pub fn coefficients<F>(primes: &[RationalPrime], x: u64, local: F) -> Vec<Complex64>
where
    F: Fn(LocalPrime, u32) -> Complex64,
{
    let n = x as usize;
    let spf = spf_table(n);
    let zero = Complex64::new(0.0, 0.0);
    let mut g = vec![zero; n + 1];
    if n == 0 {
        return g;
    }
    g[1] = Complex64::new(1.0, 0.0);
    let mut pidx = vec![usize::MAX; n + 1];
    for (i, rp) in primes.iter().enumerate() {
        if (rp.p as usize) <= n {
            pidx[rp.p as usize] = i;
        }
    }
    // local sums by prime, indexed by the exponent of p in the norm
    let mut cache: Vec<Vec<Complex64>> = vec![vec![]; primes.len()];
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut k = 0u32;
        let mut rest = m;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        let i = pidx[p];
        if cache[i].len() <= k as usize {
            cache[i] = local_sums(&primes[i], k.max(1) * 2, &local);
        }
        g[m] = cache[i][k as usize] * g[rest];
    }
    g
}

/// Sum of `f` over ideals of norm `p^k`, for `k = 0..=kmax`.
fn local_sums<F>(rp: &RationalPrime, kmax: u32, local: &F) -> Vec<Complex64>
where
    F: Fn(LocalPrime, u32) -> Complex64,
{
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; kmax as usize + 1];
    match rp.kind {
        Splitting::Split(a, b) => {
            let pa = LocalPrime { class: a, norm: rp.p };
            let pb = LocalPrime { class: b, norm: rp.p };
            let fa: Vec<_> = (0..=kmax).map(|j| if j == 0 { Complex64::new(1.0, 0.0) } else { local(pa, j) }).collect();
            let fb: Vec<_> = (0..=kmax).map(|j| if j == 0 { Complex64::new(1.0, 0.0) } else { local(pb, j) }).collect();
            for k in 0..=kmax as usize {
                out[k] = (0..=k).map(|i| fa[i] * fb[k - i]).sum();
            }
        }
        Splitting::Ramified(a) => {
            let pa = LocalPrime { class: a, norm: rp.p };
            for k in 0..=kmax {
                out[k as usize] = if k == 0 { Complex64::new(1.0, 0.0) } else { local(pa, k) };
            }
        }
        Splitting::Inert => {
            let pa = LocalPrime { class: 0, norm: rp.p * rp.p };
            for k in 0..=kmax {
                if k % 2 == 0 {
                    out[k as usize] = if k == 0 { Complex64::new(1.0, 0.0) } else { local(pa, k / 2) };
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::{Ideal, QuadField};

    #[test]
    fn ideal_counts_match_enumeration() {
        let f = QuadField::new(-5).unwrap();
        let g = ClassGroup::new(&f).unwrap();
        let x = 300u64;
        let primes = prime_table(&g, x);
        let counts = coefficients(&primes, x, |_, _| Complex64::new(1.0, 0.0));
        // integral ideals aZ + (b + omega)Z scaled by k: norm k^2 a
        let mut brute = vec![0u32; x as usize + 1];
        for a in 1..=x as i64 {
            for b in 0..a {
                if (b * b + 5) % a != 0 {
                    continue;
                }
                let i = Ideal::from_ints(&f, &[(a, 0), (b, 1)]).unwrap();
                assert_eq!(i.norm().to_integer(), a.into());
                let mut k = 1;
                while k * k * a <= x as i64 {
                    brute[(k * k * a) as usize] += 1;
                    k += 1;
                }
            }
        }
        for n in 1..=x as usize {
            assert_eq!(counts[n].re as u32, brute[n], "n={n}");
        }
    }
}
