use bianchi_core::identities::*;
use bianchi_core::{EisensteinContext, Error, LContext, QuadField};
use num_complex::Complex64;
use proptest::prelude::*;
use std::sync::OnceLock;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e5() -> &'static EisensteinContext {
    static C: OnceLock<EisensteinContext> = OnceLock::new();
    C.get_or_init(|| EisensteinContext::new(&QuadField::new(-5).unwrap()).unwrap())
}

fn e23() -> &'static EisensteinContext {
    static C: OnceLock<EisensteinContext> = OnceLock::new();
    C.get_or_init(|| EisensteinContext::new(&QuadField::new(-23).unwrap()).unwrap())
}

fn l5() -> &'static LContext {
    e5().l_context()
}

/// `zeta(s) L(s, chi_{-20})` by direct summation, `s >= 3`.
fn zeta_f_d5(s: f64) -> f64 {
    let chi = |n: u64| match n % 20 {
        1 | 3 | 7 | 9 => 1.0,
        11 | 13 | 17 | 19 => -1.0,
        _ => 0.0,
    };
    let n = 2_000_000u64;
    let z: f64 = (1..=n).rev().map(|k| (k as f64).powf(-s)).sum::<f64>() + (n as f64).powf(1.0 - s) / (s - 1.0);
    let l: f64 = (1..=n).rev().map(|k| chi(k) * (k as f64).powf(-s)).sum();
    z * l
}

#[test]
fn r_series_float_and_exact() {
    let f = verify_r_series(100, 20, 17);
    assert!(f.pass, "{}", f.summary_line());
    let e = verify_r_series_exact(100, 10, 17);
    assert!(e.pass && e.max_residual == 0.0, "{}", e.summary_line());
}

#[test]
fn quadruple_trivial_triple_is_ramanujan() {
    // sum d(m)^2 N(m)^{-3} = zeta_F(3)^4 / zeta_F(6)
    let want = zeta_f_d5(3.0).powi(4) / zeta_f_d5(6.0);
    let q = quadruple_sides(l5(), c(6.0, 0.0), 0.0, [0, 0, 0], DEFAULT_X).unwrap();
    assert!((q.rhs.re - want).abs() / want < 1e-10, "{} vs {want}", q.rhs);
    assert!((q.lhs.re - want).abs() / want < 1e-6);
    assert!((want - 2.3973791043776).abs() < 1e-11);
}

#[test]
fn quadruple_all_triples_d5() {
    let r = verify_quadruple_l(l5(), c(6.0, 0.0), &[0.0, 1.3], &all_triples(2), DEFAULT_X, 1e-6).unwrap();
    assert!(r.pass, "{}", r.summary_line());
}

#[test]
fn quadruple_cubic_triple_d23() {
    let l = e23().l_context();
    let q = quadruple_sides(l, c(7.0, 0.0), 0.7, [1, 2, 1], DEFAULT_X).unwrap();
    assert!(q.rel_residual() < 1e-6);
    assert!(q.rhs.im.abs() > 1e-3, "a genuinely complex instance");
}

#[test]
fn quadruple_truncation_rate() {
    // error ~ x^{1 - Re(s)/2} = x^{-2} up to logs
    let e = |x| quadruple_sides(l5(), c(6.0, 0.0), 0.0, [0, 0, 0], x).unwrap().rel_residual();
    let (a, b) = (e(5_000), e(20_000));
    assert!(b < a / 6.0 && b > a / 40.0, "{a:e} -> {b:e}");
}

#[test]
fn quadruple_rejects_small_real_part() {
    assert!(matches!(quadruple_sides(l5(), c(3.5, 0.0), 0.0, [0, 0, 0], 1000), Err(Error::Domain(_))));
    assert!(quadruple_sides(l5(), c(6.0, 0.0), 0.0, [0, 2, 0], 1000).is_err());
}

#[test]
fn xi_modulus_examples() {
    let r = verify_xi_modulus(l5(), &[0.5]).unwrap();
    assert!(r.pass);
    let r = verify_xi_modulus(l5(), &[5.0, 10.0, 20.0]).unwrap();
    assert!(r.pass, "{}", r.summary_line());
    // removable point at s = 0 for the nontrivial character
    let a = l5().completed_xi(1, c(1.0, 0.0)).unwrap().norm();
    let b = l5().completed_xi(1, c(0.0, 0.0)).unwrap().norm();
    assert!((a - b).abs() / a < 1e-8);
    assert!(verify_xi_modulus(e23().l_context(), &[0.0, 3.0]).unwrap().pass);
}

#[test]
fn bessel_mellin_calibration_constant() {
    let along_s = verify_bessel_mellin(&[(2.0, 1.0, 1.5), (2.0, 1.0, 2.0), (2.0, 1.0, 3.0)]).unwrap();
    assert!(along_s.pass);
    let mut tn = vec![];
    for t in [0.0, 1.0, 3.0] {
        for nu in [0.0, 1.0, 3.0] {
            tn.push((t, nu, 2.0));
        }
    }
    assert!(verify_bessel_mellin(&tn).unwrap().pass);
    let full = verify_bessel_mellin(&bessel_mellin_grid()).unwrap();
    assert!(full.pass && full.max_residual < 1e-9, "{}", full.summary_line());
    assert!((full.params["calibration"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let sym = verify_bessel_mellin(&[(1.0, 3.0, 2.5), (3.0, 1.0, 2.5)]).unwrap();
    assert!(sym.max_residual < 1e-12);
    assert!(verify_bessel_mellin(&[(1.0, 1.0, 0.5)]).is_err());
}

#[test]
fn gamma_ratio_decays_like_inverse_t() {
    let r = verify_gamma_decay(1.0, 10.0, 100.0, 0.5).unwrap();
    assert!(r.pass);
    let lim = std::f64::consts::PI / (std::f64::consts::PI / 2.0).cosh();
    assert!((r.params["max"].as_f64().unwrap() / lim - 1.0).abs() < 1e-9);
}

#[test]
fn scattering_is_unitary() {
    assert!(verify_scattering_unitary(e5(), &[5.0, 7.0]).unwrap().pass);
    assert!(verify_scattering_unitary(e23(), &[5.0, 7.0]).unwrap().pass);
}

#[test]
fn residue_both_cusps() {
    let pts = [(c(0.1, 0.2), 1.1), (c(-0.3, 0.45), 0.8)];
    let r = verify_residue(e5(), &pts).unwrap();
    assert!(r.pass, "{}", r.summary_line());
}

#[test]
fn reports_serialize_deterministically() {
    let a = serde_json::to_string(&verify_r_series(10, 12, 3)).unwrap();
    let b = serde_json::to_string(&verify_r_series(10, 12, 3)).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains("runtime"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn r_series_holds_for_every_seed(seed in any::<u64>()) {
        prop_assert!(verify_r_series(5, 20, seed).pass);
        prop_assert_eq!(verify_r_series_exact(5, 10, seed).max_residual, 0.0);
    }

    #[test]
    fn series_inverse_round_trip(re in proptest::collection::vec(-2.0f64..2.0, 1..8), im in proptest::collection::vec(-2.0f64..2.0, 8)) {
        let mut co: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| c(*a, *b)).collect();
        co[0] = c(1.0, im[0] * 0.1);
        let f = FormalSeries::new(co, 7, &c(0.0, 0.0));
        let g = f.inv().unwrap();
        let one = FormalSeries::one(7, &c(0.0, 0.0));
        prop_assert!(f.mul(&g).max_distance(&one) < 1e-8);
    }
}
