//! Quantum-ergodicity experiments: `mu_t(A) = int_A |E_eta(v, 1+it)|^2 dV`
//! over boxes in `H^3`, their ratios, and scans of the L-function bounds.

mod bounds;

pub use bounds::{bounds_scan, bounds_to_csv, BoundKind, BOUNDS_HEADER, BoundsRow, BoundsScan};

use crate::arith::gauss_legendre;
use crate::eisenstein::{bessel_cutoff, EisensteinContext};
use crate::error::{Error, Result};
use crate::number_field::{FieldElement, Ideal, Matrix2F, QuadField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `[x0, x1] x [y0, y1] x [r0, r1]` in `H^3 = {(x + iy, r) : r > 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub r: [f64; 2],
    pub label: String,
}

impl BoxRegion {
    pub fn new(x: [f64; 2], y: [f64; 2], r: [f64; 2], label: &str) -> Self {
        BoxRegion { x, y, r, label: label.to_string() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |[a, b]: [f64; 2]| a.is_finite() && b.is_finite() && a < b;
        if !(ok(self.x) && ok(self.y) && ok(self.r)) || self.r[0] <= 0.0 {
            return Err(Error::Domain(format!("degenerate box {:?}", self.label)));
        }
        if self.label.is_empty() || self.label.contains([',', '"', '\n', '\r']) {
            return Err(Error::Domain(format!("box label {:?} must be nonempty and CSV-safe", self.label)));
        }
        Ok(())
    }

    pub fn translated(&self, dx: f64, dy: f64, label: &str) -> Self {
        BoxRegion::new([self.x[0] + dx, self.x[1] + dx], [self.y[0] + dy, self.y[1] + dy], self.r, label)
    }
}

/// `dx dy dr / r^3` volume: `dx dy (1/(2 r0^2) - 1/(2 r1^2))`.
pub fn box_volume(b: &BoxRegion) -> Result<f64> {
    b.validate()?;
    let (dx, dy) = (b.x[1] - b.x[0], b.y[1] - b.y[0]);
    Ok(dx * dy * 0.5 * (b.r[0].powi(-2) - b.r[1].powi(-2)))
}

/// Result of the overlap search. Without a witness the box embeds in
/// `Gamma \ H^3`; a witness is an element that may map a point of the box
/// back into it.
#[derive(Clone, Debug)]
pub struct InjectivityCertificate {
    pub certified: bool,
    pub witness: Option<Matrix2F>,
    /// Translations and bottom rows examined.
    pub candidates: usize,
}

fn lattice_in_rect(field: &QuadField, re: [f64; 2], im: [f64; 2]) -> Vec<FieldElement> {
    let w = field.omega().complex();
    let (n0, n1) = ((im[0] / w.im).floor() as i64, (im[1] / w.im).ceil() as i64);
    let mut out = vec![];
    for n in n0..=n1 {
        let off = n as f64 * w.re;
        for m in (re[0] - off).floor() as i64..=(re[1] - off).ceil() as i64 {
            let z = Complex64::new(m as f64 + off, n as f64 * w.im);
            if z.re >= re[0] && z.re <= re[1] && z.im >= im[0] && z.im <= im[1] {
                out.push(FieldElement::from_ints(field, m, n));
            }
        }
    }
    out
}

/// Searches `PSL2(O_F)` for elements with `gamma A` meeting `A`.
///
/// Translations `z -> z + b` overlap iff `|Re b| < dx` and `|Im b| < dy`. For
/// `c != 0`, `Im(gamma v) <= r / (|c|^2 (|z + d/c|^2 + r^2))`, so only finitely
/// many bottom rows `(c, d)` can reach height `r0`; any such coprime row is
/// reported (conservatively) as a witness.
pub fn injectivity_certificate(b: &BoxRegion, field: &QuadField) -> Result<InjectivityCertificate> {
    b.validate()?;
    let (dx, dy) = (b.x[1] - b.x[0], b.y[1] - b.y[0]);
    let mut candidates = 0;
    let one = FieldElement::one_in(field);
    let zero = FieldElement::zero_in(field);
    let mut trans = lattice_in_rect(field, [-dx, dx], [-dy, dy]);
    trans.sort_by(|a, b| a.abs_sq_f64().total_cmp(&b.abs_sq_f64()));
    for t in trans {
        let z = t.to_complex();
        candidates += 1;
        if !t.is_zero() && z.re.abs() < dx && z.im.abs() < dy {
            let g = Matrix2F::new(one.clone(), t, zero.clone(), one.clone());
            return Ok(InjectivityCertificate { certified: false, witness: Some(g), candidates });
        }
    }
    let [r0, r1] = b.r;
    let c_max = 1.0 / (r0 * r0);
    let cs = lattice_in_rect(field, [-c_max.sqrt(), c_max.sqrt()], [0.0, c_max.sqrt()]);
    for c in cs {
        let n = c.abs_sq_f64();
        if c.is_zero() || n > c_max * (1.0 + 1e-12) {
            continue;
        }
        // one of +-c
        let cz = c.to_complex();
        if cz.im == 0.0 && cz.re < 0.0 {
            continue;
        }
        // need |z + d/c|^2 <= r / (|c|^2 r0) - r^2 for some r in [r0, r1]
        let rstar = (1.0 / (2.0 * n * r0)).clamp(r0, r1);
        let rho2 = rstar / (n * r0) - rstar * rstar;
        if rho2 < 0.0 {
            continue;
        }
        let rho = rho2.sqrt();
        // d in -c (base + disc of radius rho): enclose in a rectangle
        let corners = [(b.x[0], b.y[0]), (b.x[0], b.y[1]), (b.x[1], b.y[0]), (b.x[1], b.y[1])]
            .map(|(x, y)| -cz * Complex64::new(x, y));
        let pad = cz.norm() * rho;
        let re = [corners.iter().map(|p| p.re).fold(f64::INFINITY, f64::min) - pad, corners.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max) + pad];
        let im = [corners.iter().map(|p| p.im).fold(f64::INFINITY, f64::min) - pad, corners.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max) + pad];
        for d in lattice_in_rect(field, re, im) {
            candidates += 1;
            let dc = -(d.to_complex() / cz);
            let ex = (dc.re.clamp(b.x[0], b.x[1]) - dc.re, dc.im.clamp(b.y[0], b.y[1]) - dc.im);
            if ex.0 * ex.0 + ex.1 * ex.1 > rho2 {
                continue;
            }
            if !Ideal::from_generators(field, &[c.clone(), d.clone()])?.is_unit_ideal() {
                continue;
            }
            let g = complete_row(field, &c, &d)?;
            return Ok(InjectivityCertificate { certified: false, witness: Some(g), candidates });
        }
    }
    Ok(InjectivityCertificate { certified: true, witness: None, candidates })
}

/// `(a b; c d)` of determinant 1 for a coprime bottom row.
fn complete_row(field: &QuadField, c: &FieldElement, d: &FieldElement) -> Result<Matrix2F> {
    let n = c.norm().to_integer().to_string().parse::<i64>().map_err(|_| Error::Numerical("norm overflow".into()))?;
    let one = FieldElement::one_in(field);
    for x in 0..n.max(1) {
        for y in 0..n.max(1) {
            let a = FieldElement::from_ints(field, x, y);
            let b = &(&(&a * d) - &one) / c;
            if b.is_integral() {
                return Ok(Matrix2F::new(a, b, c.clone(), d.clone()));
            }
        }
    }
    Err(Error::Numerical("bottom row has no completion".into()))
}

/// `mu_t` with its error estimate and the final node counts `(nx, ny, nr)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MuEstimate {
    pub mu: f64,
    pub est_err: f64,
    pub nodes: (usize, usize, usize),
}

fn gl_nodes(n: usize, [a, b]: [f64; 2]) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect())
}

const MAX_REFINEMENTS: usize = 8;

/// `int_A |E_{eta_j}(v, 1+it)|^2 dx dy dr / r^3` by tensor Gauss-Legendre
/// from the expansion at infinity. Orders `n` and `n + 8` in each direction are
/// compared, `n` growing until they agree to `tol` (relative). Node counts
/// start at `q` and at 6 per wavelength of `|E|^2`.
pub fn mu_measure(ctx: &EisensteinContext, b: &BoxRegion, t: f64, j: usize, q: usize, tol: f64) -> Result<MuEstimate> {
    b.validate()?;
    if !injectivity_certificate(b, ctx.field())?.certified {
        return Err(Error::Domain(format!("box {:?} is not certified injective", b.label)));
    }
    let s = Complex64::new(1.0, t);
    let x_max = bessel_cutoff(t);
    let probe = ctx.series(0, j, s, 1.0)?;
    let radius = probe.radius_for(b.r[0], x_max);
    let series = ctx.series(0, j, s, radius)?;
    // largest retained frequency |w| = 2|n| / sqrt|d|, modes being largest at r0
    let wmax = 2.0 * series.effective_abs_n(&series.radial_row(b.r[0], x_max)?) / ctx.field().abs_disc().sqrt();
    let per = |span: f64, cycles: f64| ((6.0 * span * cycles).ceil() as usize).max(q);
    let mut nx = per(b.x[1] - b.x[0], 2.0 * wmax);
    let mut ny = per(b.y[1] - b.y[0], 2.0 * wmax);
    let mut nr = per((b.r[1] / b.r[0]).ln(), 2.0 * t.abs() / std::f64::consts::TAU + 1.0);
    let eval = |nx: usize, ny: usize, nr: usize| -> Result<(f64, f64)> {
        let (xs, wx) = gl_nodes(nx, b.x);
        let (ys, wy) = gl_nodes(ny, b.y);
        let (rs, wr) = gl_nodes(nr, b.r);
        let (mut acc, mut tail) = (0.0, 0.0);
        for (&r, &w) in rs.iter().zip(&wr) {
            let row = series.radial_row(r, x_max)?;
            let (vals, tl) = series.eval_tensor(&xs, &ys, &row);
            let mut plane = 0.0;
            let mut vmax = 0.0f64;
            for (ix, a) in wx.iter().enumerate() {
                for (iy, c) in wy.iter().enumerate() {
                    let v = vals[ix * ys.len() + iy];
                    plane += a * c * v.norm_sqr();
                    vmax = vmax.max(v.norm());
                }
            }
            let wr3 = w / (r * r * r);
            acc += wr3 * plane;
            tail += wr3 * (b.x[1] - b.x[0]) * (b.y[1] - b.y[0]) * (2.0 * vmax * tl + tl * tl);
        }
        Ok((acc, tail))
    };
    let (mut prev, _) = eval(nx, ny, nr)?;
    for _ in 0..MAX_REFINEMENTS {
        let (cur, tail) = eval(nx + 8, ny + 8, nr + 8)?;
        let diff = (cur - prev).abs();
        if diff <= tol * cur.abs() {
            return Ok(MuEstimate { mu: cur, est_err: diff + tail, nodes: (nx + 8, ny + 8, nr + 8) });
        }
        nx += 8;
        ny += 8;
        nr += 8;
        prev = cur;
    }
    Err(Error::Numerical(format!("quadrature refinement cap reached for box {:?} at t = {t}", b.label)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl TGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.min <= self.max) || !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!("bad t grid {self:?}")));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.min + k as f64 * self.step).collect())
    }
}

fn default_quad() -> usize {
    16
}

fn default_tol() -> f64 {
    1e-6
}

/// Scan parameters; read from JSON with keys
/// `{d, cusp_j, t_grid: {min, max, step}, boxes, quad_order, tol, seed, out}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub d: i64,
    #[serde(default)]
    pub cusp_j: usize,
    pub t_grid: TGrid,
    pub boxes: Vec<BoxRegion>,
    #[serde(default = "default_quad")]
    pub quad_order: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<String>,
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScanConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Static checks; the injectivity certificates need the field and are
    /// run by [`qe_scan`].
    pub fn validate(&self) -> Result<()> {
        self.t_grid.points()?;
        if self.boxes.is_empty() {
            return Err(Error::Config("no boxes".into()));
        }
        for b in &self.boxes {
            b.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.quad_order < 2 || !(self.tol > 0.0) {
            return Err(Error::Config("quad_order must be >= 2 and tol > 0".into()));
        }
        Ok(())
    }
}

/// One CSV line: box `box_label` at height `t` against the first box.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub box_label: String,
    pub mu: f64,
    pub vol: f64,
    /// `mu / mu_first`; `None` when either measure is within 10x its error.
    pub ratio_to_first: Option<f64>,
    pub vol_ratio_to_first: f64,
    /// `|ratio / vol_ratio - 1|`
    pub rel_dev: Option<f64>,
    pub est_err: f64,
}

/// Least-squares fit of `mu_t(A) / vol(A)` against `log t` for the first box.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(2 pi)^2 N(m_j^{-2}) / (|d_F| zeta_F(2))`
    pub theoretical: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// `(t, message)` for every aborted row.
    pub failures: Vec<(f64, String)>,
    pub fit: Option<SlopeFit>,
}

impl ScanResult {
    /// Mean `rel_dev` of box `k` over `t` in `[lo, hi]`.
    pub fn mean_dev(&self, label: &str, lo: f64, hi: f64) -> Option<f64> {
        let v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.box_label == label && r.t >= lo - 1e-9 && r.t <= hi + 1e-9)
            .filter_map(|r| r.rel_dev)
            .collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    }
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| (sxy / sxx, my - sxy / sxx * mx))
}

/// Runs the scan; a failing box aborts its row, which is recorded in
/// `failures` and skipped.
pub fn qe_scan(ctx: &EisensteinContext, cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    if ctx.field().d() != cfg.d {
        return Err(Error::Config(format!("context is for d = {}, config asks for {}", ctx.field().d(), cfg.d)));
    }
    if cfg.cusp_j >= ctx.group().h() {
        return Err(Error::Config(format!("cusp_j = {} out of range", cfg.cusp_j)));
    }
    for b in &cfg.boxes {
        let cert = injectivity_certificate(b, ctx.field())?;
        if !cert.certified {
            return Err(Error::Config(format!("box {:?} is not injective: witness {:?}", b.label, cert.witness)));
        }
    }
    let vols: Vec<f64> = cfg.boxes.iter().map(box_volume).collect::<Result<_>>()?;
    let mut rows = vec![];
    let mut failures = vec![];
    let mut fit_pts = (vec![], vec![]);
    for t in cfg.t_grid.points()? {
        let ms: Result<Vec<MuEstimate>> = cfg.boxes.iter().map(|b| mu_measure(ctx, b, t, cfg.cusp_j, cfg.quad_order, cfg.tol)).collect();
        let ms = match ms {
            Ok(m) => m,
            Err(e) => {
                failures.push((t, e.to_string()));
                continue;
            }
        };
        let first = ms[0];
        let first_ok = first.mu > 10.0 * first.est_err;
        if t > 1.0 {
            fit_pts.0.push(t.ln());
            fit_pts.1.push(first.mu / vols[0]);
        }
        for (k, m) in ms.iter().enumerate() {
            let ratio = (first_ok && m.mu > 10.0 * m.est_err).then(|| m.mu / first.mu);
            let vr = vols[k] / vols[0];
            rows.push(ScanRow {
                t,
                box_label: cfg.boxes[k].label.clone(),
                mu: m.mu,
                vol: vols[k],
                ratio_to_first: ratio,
                vol_ratio_to_first: vr,
                rel_dev: ratio.map(|r| (r / vr - 1.0).abs()),
                est_err: m.est_err,
            });
        }
    }
    let nj = ctx.cusp(cfg.cusp_j).norm;
    let theoretical = 4.0 * std::f64::consts::PI.powi(2) / (nj * nj * ctx.field().abs_disc() * ctx.zeta_f2()?);
    let fit = least_squares(&fit_pts.0, &fit_pts.1).map(|(slope, intercept)| SlopeFit { slope, intercept, theoretical });
    Ok(ScanResult { rows, failures, fit })
}

/// Twelve significant digits, scientific notation; empty for a missing value.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

pub const SCAN_HEADER: &str = "t,box_label,mu,vol,ratio_to_first,vol_ratio_to_first,rel_dev,est_err";

pub fn rows_to_csv(rows: &[ScanRow]) -> String {
    let mut s = String::from(SCAN_HEADER);
    s.push('\n');
    for r in rows {
        let fields = [
            fmt_sig(r.t),
            r.box_label.clone(),
            fmt_sig(r.mu),
            fmt_sig(r.vol),
            fmt_opt(r.ratio_to_first),
            fmt_sig(r.vol_ratio_to_first),
            fmt_opt(r.rel_dev),
            fmt_sig(r.est_err),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}
