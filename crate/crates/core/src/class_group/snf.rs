//! Smith normal form of small square integer matrices with transforms.

pub struct Snf {
    pub diag: Vec<i64>,
    /// Right transform `V` with `U M V = diag`.
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

pub fn smith(m: &[Vec<i64>]) -> Snf {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let id = |n: usize| -> Vec<Vec<i128>> {
        (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect()
    };
    let mut v = id(n);
    let mut vi = id(n);

    for t in 0..n {
        loop {
            let mut piv = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && piv.map_or(true, |(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                        piv = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = piv else { break };
            a.swap(t, pi);
            if pj != t {
                for r in a.iter_mut() {
                    r.swap(t, pj);
                }
                for r in v.iter_mut() {
                    r.swap(t, pj);
                }
                vi.swap(t, pj);
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for i in 0..n {
                        a[i][j] -= q * a[i][t];
                        v[i][j] -= q * v[i][t];
                    }
                    for k in 0..n {
                        vi[t][k] += q * vi[j][k];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in 0..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].abs() as i64).collect();
    let cv = |x: Vec<Vec<i128>>| x.into_iter().map(|r| r.into_iter().map(|y| y as i64).collect()).collect();
    Snf { diag, v: cv(v), v_inv: cv(vi) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    #[test]
    fn invariant_factors() {
        let m = vec![vec![2, 0, 0], vec![0, 3, 0], vec![1, 0, 4]];
        let s = smith(&m);
        let mut d = s.diag.clone();
        d.sort();
        // Z/2 x Z/3 x Z/4 relations twisted: order 24
        assert_eq!(d.iter().product::<i64>(), 24);
        for w in s.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        let idn = mul(&s.v, &s.v_inv);
        for (i, r) in idn.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                assert_eq!(x, (i == j) as i64);
            }
        }
    }
}
