//! One PASS/FAIL line per acceptance criterion; run with `--nocapture` to see them.

use bianchi_core::identities::{run_check, CheckOutput};
use bianchi_core::qe::{qe_scan, ScanConfig, TGrid};
use bianchi_core::{BoxRegion, ClassGroup, EisensteinContext, LContext, QuadField, C64};
use num_complex::Complex64;
use std::process::Command;
use std::time::Instant;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn from_check(name: &str, limit_s: Option<f64>) -> Verdict {
    from_reports(name, None, limit_s)
}

/// `only` restricts the verdict to the report of that name.
fn from_reports(name: &str, only: Option<&str>, limit_s: Option<f64>) -> Verdict {
    let t0 = Instant::now();
    match run_check(name, 0) {
        Ok(mut out) => {
            if let Some(keep) = only {
                out.reports.retain(|r| r.name == keep);
                if out.reports.is_empty() {
                    return verdict(false, format!("no {keep} report"));
                }
            }
            let secs = t0.elapsed().as_secs_f64();
            let in_time = limit_s.map_or(true, |l| secs < l);
            verdict(out.pass() && in_time, format!("{} in {secs:.1}s", residuals(&out)))
        }
        Err(e) => verdict(false, e.to_string()),
    }
}

fn residuals(out: &CheckOutput) -> String {
    out.reports.iter().map(|r| format!("{}={:.2e}/{:.0e}", r.name, r.max_residual, r.tolerance)).collect::<Vec<_>>().join(" ")
}

fn disc_of(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Reduced primitive forms of discriminant `disc`.
fn reduced_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    let gcd = |mut a: i64, mut b: i64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    };
    let mut out = vec![];
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

fn class_groups() -> Verdict {
    let t0 = Instant::now();
    let mut bad = vec![];
    for d in [-5, -6, -10, -13, -14, -21, -23] {
        let g = ClassGroup::new(&QuadField::new(d).unwrap()).unwrap();
        let forms = reduced_forms(disc_of(d));
        let ambiguous = forms.iter().filter(|&&(a, b, c)| b == 0 || b == a || a == c).count();
        if g.h() != forms.len() || g.two_torsion().len() != ambiguous {
            bad.push(d);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    verdict(bad.is_empty() && secs < 1.0, format!("mismatches {bad:?} in {secs:.2}s"))
}

fn orthogonality() -> Verdict {
    let mut exact_ok = true;
    let mut worst = 0.0f64;
    for d in [-5, -6, -10, -13, -14, -21, -23] {
        let g = ClassGroup::new(&QuadField::new(d).unwrap()).unwrap();
        let h = g.h();
        for a in 0..h {
            let want = if a == 0 { 1 } else { 0 };
            let avg = g.averaged_character_sum_exact(g.class(a));
            exact_ok &= *avg.numer() == want && *avg.denom() == 1;
            for b in 0..h {
                let sum: C64 = (0..h).map(|chi| g.chi(chi, a) * g.chi(chi, b).conj()).sum();
                let delta = if a == b { h as f64 } else { 0.0 };
                worst = worst.max((sum - delta).norm());
            }
        }
    }
    verdict(exact_ok && worst <= 1e-12, format!("exact={exact_ok} float={worst:.1e}"))
}

fn continuation() -> Verdict {
    let t0 = Instant::now();
    let s = Complex64::new(2.5, 0.0);
    let mut worst = 0.0f64;
    for d in [-5, -23] {
        let l = LContext::new(&QuadField::new(d).unwrap()).unwrap();
        for chi in 0..l.group().h() {
            let cont = l.hecke_l(chi, s).unwrap().value;
            let trunc = l.hecke_l_truncated(chi, s, 100_000).unwrap().value;
            worst = worst.max((cont - trunc).norm() / trunc.norm());
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    verdict(worst <= 1e-8 && secs < 10.0, format!("rel {worst:.2e} in {secs:.1}s"))
}

fn qe_trend() -> Verdict {
    let e = EisensteinContext::new(&QuadField::new(-5).unwrap()).unwrap();
    let a = BoxRegion::new([0.0, 0.4], [0.0, 0.4], [1.1, 1.4], "A");
    let b = BoxRegion::new([0.5, 0.9], [0.9, 1.3], [1.1, 1.4], "B");
    let scan = |min: f64, max: f64, boxes: Vec<BoxRegion>| {
        let cfg = ScanConfig {
            d: -5,
            cusp_j: 0,
            t_grid: TGrid { min, max, step: 1.0 },
            boxes,
            quad_order: 24,
            tol: 1e-8,
            seed: 0,
            out: None,
        };
        qe_scan(&e, &cfg)
    };
    let (lo, hi) = match (scan(10.0, 20.0, vec![a.clone(), b.clone()]), scan(30.0, 40.0, vec![a.clone(), b])) {
        (Ok(lo), Ok(hi)) => (lo.mean_dev("B", 10.0, 20.0), hi.mean_dev("B", 30.0, 40.0)),
        (Err(e), _) | (_, Err(e)) => return verdict(false, e.to_string()),
    };
    let shifted = match scan(10.0, 10.0, vec![a.clone(), a.translated(1.0, 0.0, "A+1")]) {
        Ok(r) => r.rows[1].rel_dev,
        Err(e) => return verdict(false, e.to_string()),
    };
    let (Some(lo), Some(hi), Some(shifted)) = (lo, hi, shifted) else {
        return verdict(false, "ratios suppressed");
    };
    verdict(hi <= lo && shifted <= 1e-4, format!("mean dev [10,20]={lo:.3} [30,40]={hi:.3}; A vs A+1 {shifted:.1e}"))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.json");
    std::fs::write(
        &cfg,
        r#"{"d": -5, "cusp_j": 1, "t_grid": {"min": 8, "max": 9, "step": 1},
            "boxes": [{"x": [0, 0.4], "y": [0, 0.4], "r": [1.1, 1.4], "label": "A"},
                      {"x": [0.5, 0.9], "y": [0.9, 1.3], "r": [1.1, 1.4], "label": "B"}],
            "quad_order": 16, "tol": 1e-8, "seed": 11, "out": null}"#,
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_bianchi-qe");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let cfg = cfg.to_str().unwrap();
    let mut same = true;
    for args in [
        vec!["qe", "scan", "--config", cfg],
        vec!["verify", "r-series", "--seed", "5", "--json"],
        vec!["verify", "adelic", "--seed", "5", "--json"],
        vec!["bounds", "scan", "--kind", "logderiv_L", "--d", "-5", "--t-min", "3", "--t-max", "8", "--t-step", "0.5"],
    ] {
        let (x, y) = (run(&args), run(&args));
        same &= x.status.success() && x.stdout == y.stdout && x.stderr == y.stderr;
    }
    verdict(same, "csv and json byte-identical across two processes")
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("class groups against reduced forms", Box::new(class_groups)),
        ("character orthogonality", Box::new(orthogonality)),
        ("continued L against truncated series", Box::new(continuation)),
        ("xi modulus", Box::new(|| from_check("xi-modulus", None))),
        ("Fourier against direct sum", Box::new(|| from_check("fourier-direct", Some(60.0)))),
        ("residue at s = 2", Box::new(|| from_check("residue", None))),
        ("quadruple L identity", Box::new(|| from_check("quadruple-l", Some(120.0)))),
        ("R-series identity", Box::new(|| from_check("r-series", None))),
        ("Bessel Mellin calibration", Box::new(|| from_reports("bessel-mellin", Some("bessel_mellin"), None))),
        ("gamma ratio decay", Box::new(|| from_reports("bessel-mellin", Some("gamma_decay"), None))),
        ("scattering unitarity", Box::new(|| from_check("scattering", None))),
        ("adelic suite", Box::new(|| from_check("adelic", None))),
        ("QE trend and translation invariance", Box::new(qe_trend)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = vec![];
    for (k, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("{} {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, k + 1, v.detail);
        if !v.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
