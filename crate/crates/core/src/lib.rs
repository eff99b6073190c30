//! Arithmetic, L-functions and Eisenstein series for Bianchi groups `PSL2(O_F)`
//! over imaginary quadratic fields with class number greater than one.

pub mod adelic_checks;
pub mod arith;
pub mod class_group;
pub mod eisenstein;
pub mod error;
pub mod identities;
pub mod l_functions;
pub mod number_field;
pub mod qe;
pub mod special_functions;

pub use error::{Error, Result};

pub use class_group::{Character, ClassGroup, IdealClass, RootOfUnity};
pub use eisenstein::{CuspData, EisensteinContext};
pub use identities::VerificationReport;
pub use l_functions::{LContext, LValue, Method};
pub use number_field::{FieldElement, Ideal, Matrix2F, PrimeIdeal, QuadField};
pub use qe::{BoxRegion, ScanConfig, ScanRow};

pub use num_complex::Complex64 as C64;
