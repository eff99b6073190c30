//! `bianchi-qe`: field data, L-values, Eisenstein series, identity checks and scans.

use bianchi_core::identities::{run_check, CHECK_NAMES};
use bianchi_core::qe::{bounds_scan, bounds_to_csv, qe_scan, rows_to_csv, BoundKind, ScanConfig, TGrid};
use bianchi_core::{ClassGroup, EisensteinContext, Error, LContext, QuadField};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bianchi-qe", version, about = "Eisenstein series on Bianchi orbifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Basic invariants of Q(sqrt d).
    Field {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Class group, representatives and characters.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Hecke L-function L(s, chi).
    Lfun {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        chi: usize,
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// E_{eta_j}(A_i^{-1} v, s) at v = (x + iy, r); cusp indices are 0-based.
    Eisenstein {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// `x,y,r`
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Sum over cosets instead of the Fourier expansion.
        #[arg(long)]
        direct: bool,
        /// Relative truncation tolerance of the expansion.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run one of the standard identity checks.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(CHECK_NAMES))]
        check: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the full JSON report.
        #[arg(long)]
        json: bool,
    },
    /// Measure mu_t on boxes over a grid of t.
    Qe {
        #[command(subcommand)]
        cmd: QeCmd,
    },
    /// Tabulate |L| against the conjectured bound shapes.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
}

#[derive(Subcommand)]
enum QeCmd {
    Scan {
        #[arg(long)]
        config: String,
        /// CSV destination; overrides `out` in the config.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    Scan {
        #[arg(long)]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        t_step: f64,
        #[arg(long)]
        out: Option<String>,
    },
}

/// A run either completes with a verdict or stops on an error.
enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Domain(_) | Error::BadField(_) => Failure::Config(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn parse_floats(text: &str, n: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let v: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Config(format!("{what}: {e}")))?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Config(format!("{what}: expected {n} finite comma-separated numbers, got {text:?}")));
    }
    Ok(v)
}

fn parse_s(text: &str) -> Result<Complex64, Failure> {
    let v = parse_floats(text, 2, "--s")?;
    Ok(Complex64::new(v[0], v[1]))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn field(d: i64) -> Outcome {
    let f = QuadField::new(d)?;
    let w = f.omega_complex();
    println!(
        "{}",
        pretty(&json!({
            "d": f.d(),
            "disc": f.disc(),
            "ring": f.ring_gen_str(),
            "omega": [w.re, w.im],
            "units": f.unit_count(),
            "minkowski_bound": f.minkowski_bound(),
        }))
    );
    Ok(true)
}

fn classgroup(d: i64) -> Outcome {
    let g = ClassGroup::new(&QuadField::new(d)?)?;
    let classes: Vec<Value> = (0..g.h())
        .map(|j| {
            let (a, b, c) = g.form(j);
            json!({
                "index": j,
                "exps": g.class(j).exps,
                "form": [a, b, c],
                "ideal": g.rep(j).to_string(),
                "norm": g.norm_of_rep(j),
            })
        })
        .collect();
    let chars: Vec<Value> = g
        .characters()
        .iter()
        .map(|ch| {
            // `k/n` stands for exp(2 pi i k / n)
            let vals: Vec<String> = (0..g.h()).map(|j| ch.eval(g.class(j))).map(|r| format!("{}/{}", r.num, r.order)).collect();
            json!({ "index": ch.index, "order": ch.order(), "real": ch.is_real(), "values": vals })
        })
        .collect();
    println!(
        "{}",
        pretty(&json!({
            "d": d,
            "h": g.h(),
            "orders": g.orders(),
            "classes": classes,
            "characters": chars,
        }))
    );
    Ok(true)
}

fn lfun(d: i64, chi: usize, s: &str) -> Outcome {
    let s = parse_s(s)?;
    let l = LContext::new(&QuadField::new(d)?)?;
    if chi >= l.group().h() {
        return Err(Failure::Config(format!("--chi {chi} out of range; h = {}", l.group().h())));
    }
    let v = l.hecke_l(chi, s)?;
    println!("{}", pretty(&json!({ "d": d, "chi": chi, "result": v })));
    Ok(true)
}

fn eisenstein(d: i64, i: usize, j: usize, point: &str, s: &str, direct: bool, tol: f64) -> Outcome {
    let p = parse_floats(point, 3, "--point")?;
    let s = parse_s(s)?;
    if p[2] <= 0.0 {
        return Err(Failure::Config("--point: r must be positive".into()));
    }
    let e = EisensteinContext::new(&QuadField::new(d)?)?;
    let h = e.cusps().len();
    if i >= h || j >= h {
        return Err(Failure::Config(format!("cusp index out of range; h = {h}")));
    }
    let z = Complex64::new(p[0], p[1]);
    let out = if direct {
        if s.re <= 2.0 {
            return Err(Failure::Config("--direct needs Re s > 2".into()));
        }
        let inv = e.cusp(i).matrix.inverse().ok_or(Error::Zero)?;
        let (zi, ri) = inv.act(z, p[2]);
        json!({ "method": "direct", "i": i, "j": j, "point": p, "result": e.direct_sum(j, zi, ri, s, 1e-3)? })
    } else {
        json!({ "method": "fourier", "i": i, "j": j, "point": p, "result": e.fourier_eval(i, j, z, p[2], s, tol)? })
    };
    println!("{}", pretty(&out));
    Ok(true)
}

fn verify(check: &str, seed: u64, as_json: bool) -> Outcome {
    let out = run_check(check, seed)?;
    if as_json {
        println!("{}", pretty(&serde_json::to_value(&out).expect("json")));
    } else {
        for r in &out.reports {
            println!("{}", r.summary_line());
        }
    }
    println!("{} {check}", status(out.pass()));
    Ok(out.pass())
}

/// CSV goes to `out` when given, else to stdout with the summary moved to stderr.
fn emit(csv: &str, summary: &Value, pass: bool, what: &str, out: Option<&str>) -> Outcome {
    match out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Failure::Config(format!("{path}: {e}")))?;
            println!("{}", pretty(summary));
            println!("{} {what}", status(pass));
        }
        None => {
            print!("{csv}");
            eprintln!("{}", pretty(summary));
            eprintln!("{} {what}", status(pass));
        }
    }
    Ok(pass)
}

fn scan_qe(config: &str, out: Option<String>) -> Outcome {
    let text = std::fs::read_to_string(config).map_err(|e| Failure::Config(format!("{config}: {e}")))?;
    let cfg = ScanConfig::from_json(&text)?;
    let e = EisensteinContext::new(&QuadField::new(cfg.d)?)?;
    let res = qe_scan(&e, &cfg)?;
    let pass = res.failures.is_empty();
    let summary = json!({
        "d": cfg.d,
        "cusp_j": cfg.cusp_j,
        "rows": res.rows.len(),
        "failures": res.failures,
        "fit": res.fit,
    });
    emit(&rows_to_csv(&res.rows), &summary, pass, "qe scan", out.or(cfg.out.clone()).as_deref())
}

fn scan_bounds(kind: &str, d: i64, grid: TGrid, out: Option<String>) -> Outcome {
    let kind: BoundKind = kind.parse()?;
    let l = LContext::new(&QuadField::new(d)?)?;
    let res = bounds_scan(&l, kind, &grid)?;
    let pass = res.failures.is_empty();
    let summary = json!({
        "kind": res.kind,
        "d": res.d,
        "t_grid": grid,
        "rows": res.rows.len(),
        "failures": res.failures,
        "fitted": res.fitted,
    });
    emit(&bounds_to_csv(&res.rows), &summary, pass, "bounds scan", out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Field { d } => field(d),
        Cmd::Classgroup { d } => classgroup(d),
        Cmd::Lfun { d, chi, s } => lfun(d, chi, &s),
        Cmd::Eisenstein { d, i, j, point, s, direct, tol } => eisenstein(d, i, j, &point, &s, direct, tol),
        Cmd::Verify { check, seed, json } => verify(&check, seed, json),
        Cmd::Qe { cmd: QeCmd::Scan { config, out } } => scan_qe(&config, out),
        Cmd::Bounds { cmd: BoundsCmd::Scan { kind, d, t_min, t_max, t_step, out } } => {
            scan_bounds(&kind, d, TGrid { min: t_min, max: t_max, step: t_step }, out)
        }
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            println!("FAIL");
            ExitCode::from(1)
        }
    }
}
