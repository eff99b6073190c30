use crate::class_group::ClassGroup;
use crate::error::{Error, Result};
use crate::number_field::{enumerate_elements, FieldElement, Ideal, Matrix2F};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// A cusp `eta_j` with its scaling matrix `A_j` and ideal `m_j = <1, eta_j>`.
#[derive(Clone, Debug)]
pub struct CuspData {
    pub index: usize,
    /// `None` is the cusp at infinity.
    pub eta: Option<FieldElement>,
    pub matrix: Matrix2F,
    pub ideal: Ideal,
    pub norm: f64,
    /// Class index of `m_j` in the class group.
    pub class: usize,
    /// `m_j = (Z*A + (b + omega)Z) / A` with `A = hnf.0`, `b = hnf.1`.
    pub(crate) hnf: (i64, i64),
}

impl CuspData {
    pub fn is_infinity(&self) -> bool {
        self.eta.is_none()
    }

    /// Exact norm `N(m_j)`.
    pub fn norm_exact(&self) -> BigRational {
        self.ideal.norm()
    }
}

/// One cusp per ideal class. For the class of `m = AZ + (b+omega)Z` the cusp is
/// `eta = (b+omega)/A`, so that `<1, eta> = A^{-1} m`.
pub fn cusp_data(g: &ClassGroup) -> Result<Vec<CuspData>> {
    let f = g.field();
    let mut out = Vec::with_capacity(g.h());
    for j in 0..g.h() {
        if j == 0 {
            out.push(CuspData {
                index: 0,
                eta: None,
                matrix: Matrix2F::identity(f),
                ideal: Ideal::unit(f),
                norm: 1.0,
                class: 0,
                hnf: (1, 0),
            });
            continue;
        }
        let (a, b) = g.hnf_of_rep(j);
        let (ai, bi) = (a.to_i64().unwrap(), b.to_i64().unwrap());
        let eta = FieldElement::new(f, BigRational::new(b.clone(), a.clone()), BigRational::new(BigInt::one(), a.clone()));
        let ideal = Ideal::from_generators(f, &[FieldElement::one_in(f), eta.clone()])?;
        let class = g.index_of_ideal(&ideal);
        if class != j {
            return Err(Error::Numerical(format!("cusp ideal for class {j} landed in class {class}")));
        }
        let matrix = complete_matrix(&eta, &ideal)?;
        out.push(CuspData { index: j, norm: ideal.norm_f64(), eta: Some(eta), matrix, ideal, class, hnf: (ai, bi) });
    }
    Ok(out)
}

/// `A = (a, -1 - a*eta; 1, -eta)` with `a` in `m^{-1}` chosen so that `A` is
/// quasi-integral; searched over growing discs of `m^{-1}`.
fn complete_matrix(eta: &FieldElement, m: &Ideal) -> Result<Matrix2F> {
    let w = eta.omega_poly();
    let one = FieldElement::with_omega(w, BigRational::one(), BigRational::from_integer(0.into()));
    let build = |a: &FieldElement| {
        let b = -(&one + &(a * eta));
        Matrix2F::new(a.clone(), b, one.clone(), -eta.clone())
    };
    let inv = m.inverse();
    let mut radius = 2.0 * inv.norm_f64().sqrt().max(1.0);
    for _ in 0..12 {
        for a in enumerate_elements(&inv, radius) {
            let mat = build(&a);
            if mat.is_quasi_integral() {
                return Ok(mat);
            }
        }
        radius *= 2.0;
    }
    Err(Error::SearchExhausted(format!("no quasi-integral completion for eta = {eta} within radius {radius}")))
}
