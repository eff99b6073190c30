use bianchi_core::eisenstein::EisensteinContext;
use bianchi_core::{FieldElement, Matrix2F, QuadField};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ctx5() -> &'static EisensteinContext {
    static C: OnceLock<EisensteinContext> = OnceLock::new();
    C.get_or_init(|| EisensteinContext::new(&QuadField::new(-5).unwrap()).unwrap())
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn cusp_matrices_are_quasi_integral_with_unit_determinant() {
    for d in [-5, -6, -14, -21, -23] {
        let e = EisensteinContext::new(&QuadField::new(d).unwrap()).unwrap();
        let f = e.field();
        let first = e.cusp(0);
        assert!(first.is_infinity());
        assert_eq!(first.matrix, Matrix2F::identity(f));
        for cd in e.cusps() {
            assert_eq!(cd.matrix.det(), FieldElement::one_in(f));
            assert!(cd.matrix.is_quasi_integral());
            assert_eq!(e.group().index_of_ideal(&cd.ideal), cd.index);
            // A_j sends eta_j to infinity
            assert_eq!(cd.matrix.act_cusp(cd.eta.as_ref()), None);
        }
    }
    let e = ctx5();
    assert!(!e.cusp(1).ideal.is_principal());
}

#[test]
fn tau_forms_agree_and_stay_bounded() {
    let e = ctx5();
    let s = c(1.0, 7.0);
    for i in 0..2 {
        for j in 0..2 {
            let a = e.tau_entry(i, j, s).unwrap();
            let b = e.tau_entry_xi(i, j, s).unwrap();
            assert!(rel(a, b) < 1e-8, "{i}{j} {a} {b}");
            let lo = e.tau_entry(i, j, c(1.0, -7.0)).unwrap();
            assert!(rel(lo, a.conj()) < 1e-10);
        }
    }
    let mut t = 5.0;
    while t <= 50.0 {
        for i in 0..2 {
            for j in 0..2 {
                assert!(e.tau_entry(i, j, c(1.0, t)).unwrap().norm() < 10.0);
            }
        }
        t += 2.5;
    }
}

#[test]
fn scattering_matrix_is_unitary_on_the_line() {
    let e = ctx5();
    let a = e.scattering_matrix(c(1.0, 7.0)).unwrap();
    let b = e.scattering_matrix(c(1.0, -7.0)).unwrap();
    assert_eq!(a.len(), 2);
    for i in 0..2 {
        for j in 0..2 {
            let p: Complex64 = (0..2).map(|k| a[i][k] * b[k][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((p - want).norm() < 1e-6);
        }
    }
    let m4 = e.scattering_matrix(c(4.0, 0.0)).unwrap();
    assert!(m4.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite()));
}

#[test]
fn omega_normalisations_agree() {
    let e = ctx5();
    let f = e.field();
    let s = c(1.0, 5.0);
    let two = FieldElement::from_ints(f, 2, 0);
    let a = e.omega_coeff(0, 1, &two, s).unwrap();
    let b = e.omega_coeff_l_form(0, 1, &two, s).unwrap();
    assert!(rel(a, b) < 1e-10);
    let x = FieldElement::from_ints(f, 3, -1);
    for j in 0..2 {
        let p = e.omega_coeff(0, j, &x, s).unwrap();
        let m = e.omega_coeff(0, j, &(-x.clone()), s).unwrap();
        assert!(rel(p, m) < 1e-14);
    }
    // m_2^2 = (1/2) O_F does not contain 1/3
    assert!(e.omega_coeff(1, 0, &FieldElement::from_ratios(f, (1, 3), (0, 1)), s).is_err());
}

#[test]
fn omega_divisor_sum_is_multiplicative() {
    // (3 + omega)(3 - omega) = 14 over d = -5 with 2 and 7 coprime:
    // sigma(chi, (14)) = sigma(chi, (2)) sigma(chi, (7)) for every chi, so the
    // coefficient ratio only sees the normalisation
    let e = ctx5();
    let f = e.field();
    let s = c(2.5, 1.0);
    let l = e.l_context();
    let ideal = |x: i64| bianchi_core::Ideal::from_ints(f, &[(x, 0)]).unwrap();
    for chi in 0..2 {
        let a = l.divisor_sigma(chi, c(1.0, 0.0) - s, &ideal(14)).unwrap();
        let b = l.divisor_sigma(chi, c(1.0, 0.0) - s, &ideal(2)).unwrap()
            * l.divisor_sigma(chi, c(1.0, 0.0) - s, &ideal(7)).unwrap();
        assert!(rel(a, b) < 1e-13);
    }
}

#[test]
fn fourier_matches_direct_sum_at_s4() {
    let e = ctx5();
    let s = c(4.0, 0.0);
    let z = c(0.13, 0.27);
    for j in 0..2 {
        let f = e.fourier_eval(0, j, z, 0.8, s, 1e-12).unwrap();
        let d = e.direct_sum(j, z, 0.8, s, 3e-3).unwrap();
        assert!(rel(d.value, f.value) < 1e-6, "{j}: {} {}", f.value, d.value);
        assert!(f.est_tail <= 1e-12 * f.value.norm());
    }
}

#[test]
fn fourier_translation_and_conjugation() {
    let e = ctx5();
    let f = e.field();
    let s = c(1.0, 9.0);
    let z = c(0.21, 0.4);
    let w = FieldElement::omega_in(f).to_complex();
    for j in 0..2 {
        let a = e.fourier_eval(0, j, z, 0.7, s, 1e-12).unwrap().value;
        let b = e.fourier_eval(0, j, z + 1.0 - w, 0.7, s, 1e-12).unwrap().value;
        assert!((a - b).norm() < 1e-10 * a.norm());
        let cj = e.fourier_eval(0, j, z, 0.7, s.conj(), 1e-12).unwrap().value;
        assert!((cj - a.conj()).norm() < 1e-10 * a.norm());
    }
}

#[test]
fn direct_sum_behaviour() {
    let e = ctx5();
    let s = c(4.0, 0.0);
    let z = c(0.1, 0.3);
    let a = e.direct_sum(0, z, 0.9, s, 2e-3).unwrap();
    let b = e.direct_sum(0, z, 0.9, s, 1e-3).unwrap();
    assert!(rel(a.value, b.value) < 1e-8);
    assert!(e.direct_sum(0, z, 0.9, c(2.5, 0.0), 1e-3).is_err());
    // high up the constant term r^s dominates
    let hi = e.direct_sum(0, z, 10.0, s, 1e-1).unwrap();
    assert!((hi.value.re / 1e4 - 1.0).abs() < 1e-3);
}

#[test]
fn incomplete_eisenstein_sums() {
    let e = ctx5();
    let z = c(0.2, 0.1);
    // every coset has height at most max(r, 1/(|c|^2 r)) < 10 here
    let bump = |y: f64| if y >= 10.0 { (-(1.0 / (y - 9.9))).exp() } else { 0.0 };
    assert_eq!(e.incomplete_eisenstein(0, z, 0.5, &bump, 10.0).unwrap(), 0.0);
    assert_eq!(e.incomplete_eisenstein(0, z, 0.5, &|_| 0.0, 0.3).unwrap(), 0.0);
    assert!(e.incomplete_eisenstein(0, z, 0.5, &|_| 1.0, 0.0).is_err());
    // counting cosets above height 0.3 is invariant under Gamma
    let count = |z: Complex64, r: f64| e.incomplete_eisenstein(1, z, r, &|y| if y >= 0.3 { 1.0 } else { 0.0 }, 0.3).unwrap();
    let g = Matrix2F::from_ints(e.field(), [(1, 1), (-1, 0), (1, 0), (0, 0)]);
    let (gz, gr) = g.act(z, 0.5);
    assert_eq!(count(z, 0.5), count(gz, gr));
}

#[test]
fn residue_at_two() {
    let e = ctx5();
    let (n0, f0) = e.residue_at_2(0, c(0.1, 0.2), 0.9).unwrap();
    let (n0b, _) = e.residue_at_2(0, c(-0.3, 0.1), 1.3).unwrap();
    let (n1, f1) = e.residue_at_2(1, c(0.1, 0.2), 0.9).unwrap();
    assert!((n0 - f0).abs() < 1e-3 * f0);
    assert!((n1 - f1).abs() < 1e-3 * f1);
    assert!((n0 - n0b).abs() < 1e-3 * n0);
    // N(m_2) = 1/2, so the ratio is N(m_2)^{-2} = 4
    assert!((n1 / n0 - 4.0).abs() < 4e-3);
}

#[test]
fn constant_term_is_the_cell_average() {
    let e = ctx5();
    let s = c(4.0, 0.0);
    let w = FieldElement::omega_in(e.field()).to_complex();
    let r = 0.8;
    for j in 0..2 {
        let x_max = bianchi_core::eisenstein::bessel_cutoff(0.0);
        let probe = e.series(0, j, s, 1.0).unwrap();
        let ser = e.series(0, j, s, probe.radius_for(r, x_max)).unwrap();
        let row = ser.radial_row(r, x_max).unwrap();
        let n = 48;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                let z = (a as f64 / n as f64) + w * (b as f64 / n as f64);
                acc += ser.eval_row(z, &row).value;
            }
        }
        acc /= (n * n) as f64;
        let want = ser.constant_term(r);
        assert!(rel(acc, want) < 1e-6, "{j}: {acc} {want}");
    }
}

fn generators(f: &QuadField) -> Vec<Matrix2F> {
    vec![
        Matrix2F::from_ints(f, [(1, 0), (1, 0), (0, 0), (1, 0)]),
        Matrix2F::from_ints(f, [(1, 0), (-1, 0), (0, 0), (1, 0)]),
        Matrix2F::from_ints(f, [(1, 0), (0, 1), (0, 0), (1, 0)]),
        Matrix2F::from_ints(f, [(1, 0), (0, -1), (0, 0), (1, 0)]),
        Matrix2F::from_ints(f, [(0, 0), (-1, 0), (1, 0), (0, 0)]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn oracle_agreement(x in -0.5f64..0.5, y in 0.0f64..1.1, r in 0.6f64..1.4, k in 0usize..3) {
        let e = ctx5();
        let s = c([3.5, 4.0, 5.0][k], 0.0);
        for j in 0..2 {
            let f = e.fourier_eval(0, j, c(x, y), r, s, 1e-12).unwrap();
            let d = e.direct_sum(j, c(x, y), r, s, 2e-3).unwrap();
            prop_assert!(rel(d.value, f.value) < 1e-6, "{} {}", f.value, d.value);
        }
    }

    #[test]
    fn gamma_invariance(word in prop::collection::vec(0usize..5, 1..8), x in -0.5f64..0.5, y in 0.0f64..1.1) {
        let e = ctx5();
        let gens = generators(e.field());
        let mut g = Matrix2F::identity(e.field());
        for &k in &word {
            g = g.mul(&gens[k]);
        }
        let (z, r) = (c(x, y), 1.0);
        let (gz, gr) = g.act(z, r);
        prop_assume!(gr > 0.35);
        let s = c(4.0, 0.0);
        for j in 0..2 {
            let a = e.fourier_eval(0, j, z, r, s, 1e-13).unwrap().value;
            let b = e.fourier_eval(0, j, gz, gr, s, 1e-13).unwrap().value;
            prop_assert!((a - b).norm() <= 1e-8 * a.norm(), "{a} {b}");
        }
    }

    #[test]
    fn truncation_certificate(x in -0.5f64..0.5, y in 0.0f64..1.1, r in 0.4f64..1.5, t in 0.0f64..30.0) {
        let e = ctx5();
        let s = c(1.0, t);
        let ser = e.series(0, 1, s, 1.0).unwrap();
        let x0 = bianchi_core::eisenstein::bessel_cutoff(t);
        let need = ser.radius_for(r, 2.0 * x0);
        let big = e.series(0, 1, s, need).unwrap();
        let a = big.eval(c(x, y), r, x0).unwrap();
        let b = big.eval(c(x, y), r, 2.0 * x0).unwrap();
        prop_assert!((a.value - b.value).norm() <= a.est_tail.max(1e-14 * a.value.norm()));
    }
}
