//! The standard parameter sets behind `bianchi-qe verify <name>`.

use super::*;
use crate::adelic_checks::verify_adelic;
use crate::eisenstein::EisensteinContext;
use crate::error::{Error, Result};
use crate::number_field::QuadField;
use num_complex::Complex64;
use serde::Serialize;

pub const CHECK_NAMES: [&str; 8] =
    ["r-series", "quadruple-l", "xi-modulus", "bessel-mellin", "scattering", "adelic", "residue", "fourier-direct"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutput {
    pub check: String,
    pub seed: u64,
    pub reports: Vec<VerificationReport>,
    /// Per-field counts for the adelic suite; null otherwise.
    pub details: serde_json::Value,
}

impl CheckOutput {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

fn ctx(d: i64) -> Result<EisensteinContext> {
    EisensteinContext::new(&QuadField::new(d)?)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn run_check(name: &str, seed: u64) -> Result<CheckOutput> {
    let mut details = serde_json::Value::Null;
    let reports = match name {
        "r-series" => vec![verify_r_series(100, 20, seed), verify_r_series_exact(100, 10, seed)],
        "quadruple-l" => {
            let e5 = ctx(-5)?;
            let e23 = ctx(-23)?;
            vec![
                verify_quadruple_l(e5.l_context(), c(6.0, 0.0), &[0.0, 1.3], &all_triples(2), DEFAULT_X, 1e-6)?,
                verify_quadruple_l(e23.l_context(), c(6.0, 0.0), &[0.7], &[[1, 2, 1]], DEFAULT_X, 1e-6)?,
            ]
        }
        "xi-modulus" => vec![verify_xi_modulus(ctx(-5)?.l_context(), &[0.5, 5.0, 10.0, 20.0])?],
        "bessel-mellin" => vec![verify_bessel_mellin(&bessel_mellin_grid())?, verify_gamma_decay(1.0, 10.0, 100.0, 0.5)?],
        "scattering" => vec![verify_scattering_unitary(&ctx(-5)?, &[5.0, 7.0])?, verify_scattering_unitary(&ctx(-23)?, &[5.0, 7.0])?],
        "adelic" => {
            let (r, counts) = verify_adelic(seed)?;
            details = serde_json::to_value(counts).expect("counts serialize");
            vec![r]
        }
        "residue" => vec![verify_residue(&ctx(-5)?, &[(c(0.1, 0.2), 1.1), (c(-0.3, 0.45), 0.8)])?],
        "fourier-direct" => vec![verify_fourier_direct(&ctx(-5)?, &[(0, 0), (0, 1)], c(4.0, 0.0), 10, seed)?],
        _ => return Err(Error::Config(format!("unknown check {name:?}; expected one of {}", CHECK_NAMES.join(", ")))),
    };
    Ok(CheckOutput { check: name.to_string(), seed, reports, details })
}
