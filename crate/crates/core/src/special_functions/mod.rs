//! Complex gamma, K-Bessel functions of complex order, and the Mellin
//! transform of a product of two K-Bessel functions.

mod bessel;
mod gamma;
mod mellin;

pub use bessel::{bessel_k, bessel_k_imag, bessel_k_weighted, bessel_k_weighted_fast, Scaling};
pub(crate) use gamma::ln_sin_pi;
pub use gamma::{gamma, ln_gamma, rgamma, upper_incomplete_gamma};
pub use mellin::{bessel_mellin, gamma_factor_ratio, mellin_sides, BesselMellin, MellinGrid};
