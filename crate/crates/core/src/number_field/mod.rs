//! Exact arithmetic in `F = Q(sqrt d)`, `d < 0` squarefree.
//!
//! Elements are `a + b*omega` with rational `a, b`; fractional ideals are kept as
//! `scale * (aZ + (b + omega)Z)` with a canonical primitive integral part.

mod element;
mod field;
mod ideal;
mod lattice;
mod matrix;
mod prime;

pub use element::FieldElement;
pub use field::{OmegaPoly, QuadField};
pub use ideal::{crt_solve, Ideal};
pub use lattice::{enumerate_elements, FloatLattice};
pub use matrix::Matrix2F;
pub(crate) use prime::minpoly_roots;
pub use prime::{factor_element_i64, factor_rational_prime, valuation, valuation_of_element, PrimeIdeal};
