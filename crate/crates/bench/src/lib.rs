//! Benchmark fixtures for `bianchi-core`.

use bianchi_core::{BoxRegion, EisensteinContext, QuadField};

/// Fields with `h = 2, 2, 3, 4` in increasing discriminant size.
pub const FIELDS: [i64; 4] = [-5, -6, -23, -21];

pub fn context(d: i64) -> EisensteinContext {
    EisensteinContext::new(&QuadField::new(d).expect("valid d")).expect("context")
}

/// A certified box for `d = -5`.
pub fn unit_box() -> BoxRegion {
    BoxRegion::new([0.0, 0.4], [0.0, 0.4], [1.1, 1.4], "A")
}
