//! Empirical scans of the subconvexity, `1/L` and `L'/L` bounds.

use super::{fmt_sig, least_squares, TGrid};
use crate::error::{Error, Result};
use crate::l_functions::LContext;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `|L(1/2 + it, chi)|` against `t^{1/6}`.
    Subconvexity,
    /// `|1/L(1 + it, chi)|` against `(log t)^{2/3} (log log t)^{1/3}`.
    #[serde(rename = "inv_L")]
    InvL,
    /// `|L'/L(1 + it, chi)|` against the same shape.
    #[serde(rename = "logderiv_L")]
    LogderivL,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subconvexity" => Ok(BoundKind::Subconvexity),
            "inv_L" => Ok(BoundKind::InvL),
            "logderiv_L" => Ok(BoundKind::LogderivL),
            _ => Err(Error::Config(format!("unknown bound kind {s:?}"))),
        }
    }
}

impl BoundKind {
    pub fn shape(self, t: f64) -> f64 {
        match self {
            BoundKind::Subconvexity => t.powf(1.0 / 6.0),
            _ => {
                let l = t.ln();
                l.powf(2.0 / 3.0) * l.ln().cbrt()
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsRow {
    pub t: f64,
    pub chi: usize,
    pub value: f64,
    pub bound_shape: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsScan {
    pub kind: BoundKind,
    pub d: i64,
    pub rows: Vec<BoundsRow>,
    pub failures: Vec<(f64, usize, String)>,
    /// Subconvexity: least-squares exponent of `log|L|` against `log t`, per
    /// character. Otherwise: `max value / bound_shape`, per character.
    pub fitted: Vec<f64>,
}

/// Every character at every grid point; failing points are logged and skipped.
pub fn bounds_scan(l: &LContext, kind: BoundKind, grid: &TGrid) -> Result<BoundsScan> {
    let ts = grid.points()?;
    let t_lo = if kind == BoundKind::Subconvexity { 1.0 } else { 3.0 };
    if ts[0] < t_lo {
        return Err(Error::Config(format!("{kind:?} scan needs t >= {t_lo}")));
    }
    let h = l.group().h();
    let mut rows = vec![];
    let mut failures = vec![];
    for &t in &ts {
        for chi in 0..h {
            let v = match kind {
                BoundKind::Subconvexity => l.hecke_l(chi, Complex64::new(0.5, t)).map(|v| v.value.norm()),
                BoundKind::InvL => l.hecke_l(chi, Complex64::new(1.0, t)).map(|v| 1.0 / v.value.norm()),
                BoundKind::LogderivL => l.log_derivative(chi, Complex64::new(1.0, t)).map(|v| v.0.norm()),
            };
            match v {
                Ok(value) if value.is_finite() => rows.push(BoundsRow { t, chi, value, bound_shape: kind.shape(t) }),
                Ok(value) => failures.push((t, chi, format!("non-finite value {value}"))),
                Err(e) => failures.push((t, chi, e.to_string())),
            }
        }
    }
    let fitted = (0..h)
        .map(|chi| {
            let mine: Vec<&BoundsRow> = rows.iter().filter(|r| r.chi == chi).collect();
            match kind {
                BoundKind::Subconvexity => {
                    let xs: Vec<f64> = mine.iter().map(|r| r.t.ln()).collect();
                    let ys: Vec<f64> = mine.iter().map(|r| r.value.ln()).collect();
                    least_squares(&xs, &ys).map(|f| f.0).unwrap_or(f64::NAN)
                }
                _ => mine.iter().map(|r| r.value / r.bound_shape).fold(0.0, f64::max),
            }
        })
        .collect();
    Ok(BoundsScan { kind, d: l.field().d(), rows, failures, fitted })
}

pub const BOUNDS_HEADER: &str = "t,chi,value,bound_shape";

pub fn bounds_to_csv(rows: &[BoundsRow]) -> String {
    let mut s = String::from(BOUNDS_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!("{},{},{},{}\n", fmt_sig(r.t), r.chi, fmt_sig(r.value), fmt_sig(r.bound_shape)));
    }
    s
}
