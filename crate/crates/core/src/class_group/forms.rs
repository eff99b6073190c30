use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

/// Positive definite binary quadratic form `a x^2 + b xy + c y^2`.
pub type Form = (i128, i128, i128);

/// Reduced forms of discriminant `disc < 0`: `|b| <= a <= c`, `b >= 0` when
/// `|b| = a` or `a = c`.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let dd = disc as i128;
    let mut out = vec![];
    let mut a = 1i128;
    while 3 * a * a <= -dd {
        for b in -a + 1..=a {
            if (b * b - dd) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - dd) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

fn normalize(f: Form) -> Form {
    let (a, b, c) = f;
    if -a < b && b <= a {
        return f;
    }
    // b' = b + 2ak in (-a, a]
    let k = Integer::div_floor(&(a - b), &(2 * a));
    let b2 = b + 2 * a * k;
    let c2 = a * k * k + b * k + c;
    (a, b2, c2)
}

pub fn reduce(f: Form) -> Form {
    let mut f = normalize(f);
    loop {
        let (a, b, c) = f;
        if a > c {
            f = normalize((c, -b, a));
            continue;
        }
        if a == c && b < 0 {
            f = (a, -b, c);
        }
        return f;
    }
}

/// Reduction for forms whose coefficients may not fit in `i128`.
pub fn reduce_big(a: &BigInt, b: &BigInt, c: &BigInt) -> Form {
    if let (Some(x), Some(y), Some(z)) = (a.to_i128(), b.to_i128(), c.to_i128()) {
        if x.abs() < (1 << 60) && y.abs() < (1 << 60) && z.abs() < (1 << 60) {
            return reduce((x, y, z));
        }
    }
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    loop {
        let two_a: BigInt = &a * 2;
        if !(-&a < b && b <= a) {
            let k = (&a - &b).div_floor(&two_a);
            let nb = &b + &two_a * &k;
            c = &a * &k * &k + &b * &k + &c;
            b = nb;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a.abs() < BigInt::from(1u64 << 60) && c.abs() < BigInt::from(1u64 << 60) {
            return reduce((a.to_i128().unwrap(), b.to_i128().unwrap(), c.to_i128().unwrap()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(reduced_forms(-20).len(), 2);
        assert_eq!(reduced_forms(-23).len(), 3);
        assert_eq!(reduced_forms(-84).len(), 4);
        assert_eq!(reduced_forms(-4).len(), 1);
    }

    #[test]
    fn reduction_is_idempotent_on_orbits() {
        for f in reduced_forms(-23) {
            let (a, b, c) = f;
            // x -> x + 3y, then swap
            let g = (a, b + 6 * a, 9 * a + 3 * b + c);
            assert_eq!(reduce(g), f);
            assert_eq!(reduce((c, -b, a)), reduce(f));
            let big = reduce_big(&BigInt::from(g.0), &BigInt::from(g.1), &BigInt::from(g.2));
            assert_eq!(big, f);
        }
    }
}
