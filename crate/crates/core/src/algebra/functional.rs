use super::{FiniteHyperbialgebra, Functional};
use crate::error::{Error, Result};
use crate::expectation::ConditionalExpectation;
use crate::numerics::{matrix_exp, psd_certificate_unchecked, CMatrix, PsdCertificate, C64};

fn check_dim(h: &FiniteHyperbialgebra, f: &Functional) -> Result<()> {
    if f.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!("functional has {} coefficients, algebra dimension is {}", f.dim(), h.dim())));
    }
    Ok(())
}

/// `(f⋆g)(a) = (f⊗g)(Δa)`.
pub fn convolve(f: &Functional, g: &Functional, h: &FiniteHyperbialgebra) -> Result<Functional> {
    check_dim(h, f)?;
    check_dim(h, g)?;
    let n = h.dim();
    let coeffs = (0..n).map(|i| (f.0.transpose() * h.coproduct_basis(i) * &g.0)[(0, 0)]);
    Ok(Functional(crate::numerics::CVector::from_iterator(n, coeffs)))
}

/// Matrix of `(id⊗f)∘Δ` on coefficient space; column `i` is the image of `b_i`.
pub fn convolution_operator(f: &Functional, h: &FiniteHyperbialgebra) -> Result<CMatrix> {
    check_dim(h, f)?;
    let n = h.dim();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m.set_column(i, &(h.coproduct_basis(i) * &f.0));
    }
    Ok(m)
}

/// `ε ∘ exp(t M_f)`, the convolution semigroup generated by `f`.
pub fn conv_exp(f: &Functional, t: f64, h: &FiniteHyperbialgebra) -> Result<Functional> {
    let m = convolution_operator(f, h)? * C64::new(t, 0.0);
    let row = h.coalgebra.counit.transpose() * matrix_exp(&m);
    Ok(Functional(row.transpose()))
}

/// Truncated series `Σ_{k<terms} tᵏ/k! f^{⋆k}` with `f^{⋆0} = ε`.
pub fn conv_exp_series(f: &Functional, t: f64, h: &FiniteHyperbialgebra, terms: usize) -> Result<Functional> {
    check_dim(h, f)?;
    let mut power = h.counit();
    let mut sum = Functional::zero(h.dim());
    let mut coef = 1.0;
    for k in 0..terms {
        if k > 0 {
            power = convolve(&power, f, h)?;
            coef *= t / k as f64;
        }
        sum.0 += &power.0 * C64::new(coef, 0.0);
    }
    Ok(sum)
}

/// Gram criterion `[f(b_i* b_j)] ≥ 0`. A non-Hermitian Gram matrix is
/// reported as not positive.
pub fn is_positive_functional(f: &Functional, h: &FiniteHyperbialgebra, tol: f64) -> PsdCertificate {
    let n = h.dim();
    let gram = CMatrix::from_fn(n, n, |i, j| f.eval(&h.algebra.star_product(i, j)));
    let mut cert = psd_certificate_unchecked(&gram, tol);
    if crate::numerics::asymmetry(&gram) > 10.0 * tol {
        cert.is_psd = false;
    }
    cert
}

/// `(id⊗φ)∘Δ` evaluated on the basis: `components[i][j]` is the
/// `B(V)`-coefficient of `b_j` in the image of `b_i`.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub components: Vec<Vec<CMatrix>>,
}

impl TensorOperator {
    /// Apply a functional to the `A` leg.
    pub fn contract(&self, f: &Functional) -> Vec<CMatrix> {
        self.components
            .iter()
            .map(|row| {
                let (r, c) = row.first().map(|m| m.shape()).unwrap_or((0, 0));
                row.iter().zip(f.0.iter()).fold(CMatrix::zeros(r, c), |acc, (m, x)| acc + m * *x)
            })
            .collect()
    }
}

pub fn r_map(phi: &[CMatrix], h: &FiniteHyperbialgebra) -> Result<TensorOperator> {
    let n = h.dim();
    if phi.len() != n {
        return Err(Error::DimensionMismatch(format!("map has {} basis images, algebra dimension is {n}", phi.len())));
    }
    let shape = phi.first().map(|m| m.shape()).unwrap_or((0, 0));
    if phi.iter().any(|m| m.shape() != shape) {
        return Err(Error::DimensionMismatch("basis images must share one shape".into()));
    }
    let components = (0..n)
        .map(|i| {
            let d = h.coproduct_basis(i);
            (0..n)
                .map(|j| (0..n).fold(CMatrix::zeros(shape.0, shape.1), |acc, k| acc + &phi[k] * d[(j, k)]))
                .collect()
        })
        .collect();
    Ok(TensorOperator { components })
}

/// Lift a map given on the range basis of `p` to all of `A` as `φ̃∘P`.
pub fn compose_with_expectation(phi_tilde: &[CMatrix], p: &ConditionalExpectation) -> Result<Vec<CMatrix>> {
    let coords = p.range_coordinates();
    if phi_tilde.len() != coords.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} basis images, range of P has dimension {}",
            phi_tilde.len(),
            coords.nrows()
        )));
    }
    let shape = phi_tilde.first().map(|m| m.shape()).unwrap_or((0, 0));
    Ok((0..coords.ncols())
        .map(|i| {
            (0..coords.nrows()).fold(CMatrix::zeros(shape.0, shape.1), |acc, r| acc + &phi_tilde[r] * coords[(r, i)])
        })
        .collect())
}
