//! Verification of the unfolding identities and the scattering matrix.

mod analytic;
mod formal;
mod quadruple;
mod suite;

pub use analytic::{
    bessel_mellin_grid, verify_bessel_mellin, verify_fourier_direct, verify_gamma_decay, verify_residue, verify_scattering_unitary, verify_xi_modulus,
};
pub use quadruple::{all_triples, quadruple_sides, verify_quadruple_l, QuadrupleSides, DEFAULT_X};
pub use suite::{run_check, CheckOutput, CHECK_NAMES};
pub use formal::{r_series_sides, verify_r_series, verify_r_series_exact, Coefficient, FormalSeries, LocalData};

use serde::Serialize;
use std::time::Instant;

/// Outcome of one identity check. `pass` is false exactly when the residual
/// exceeds the tolerance (or is not finite).
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub params: serde_json::Value,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Kept out of the JSON so repeated runs serialize identically.
    #[serde(skip)]
    pub runtime_s: f64,
}

impl VerificationReport {
    pub fn new(name: &str, params: serde_json::Value, max_residual: f64, tolerance: f64, started: Instant) -> Self {
        VerificationReport {
            name: name.to_string(),
            params,
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
            runtime_s: started.elapsed().as_secs_f64(),
        }
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// `PASS name residual=... tol=... (1.23s)`
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} residual={:.3e} tol={:.1e} ({:.2}s)",
            self.status(),
            self.name,
            self.max_residual,
            self.tolerance,
            self.runtime_s
        )
    }
}
