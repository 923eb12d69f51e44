//! Finite-dimensional C*-bialgebras and C*-hyperbialgebras.
//!
//! An algebra `A` is stored through its basis `b_0 … b_{n-1}`: structure
//! constants, the matrix of the involution, the unit, and a faithful unital
//! *-representation on `ℂᵐ`. Elements are coefficient vectors in `ℂⁿ`;
//! elements of `A ⊗ A` are `n×n` coefficient matrices `C` with
//! `C = Σ C[j,k] b_j ⊗ b_k`. Positivity questions are decided through the
//! representation.

mod builtins;
mod functional;
pub mod groups;
mod irreps;
mod verify;

pub use builtins::{function_algebra, group_algebra};
pub use functional::{
    compose_with_expectation, conv_exp, conv_exp_series, convolution_operator, convolve,
    is_positive_functional, r_map, TensorOperator,
};
pub use irreps::{commutant_basis, irreducible_representations};
pub use verify::{cp_gram_matrix, verify_hyperbialgebra};

use crate::error::{Error, Result};
use crate::numerics::{c, CMatrix, CVector, C64};

/// A finite-dimensional unital *-algebra with a faithful representation.
#[derive(Clone, Debug)]
pub struct FiniteStarAlgebra {
    labels: Vec<String>,
    /// `left_mult[i][(k, j)]` is the coefficient of `b_k` in `b_i·b_j`.
    left_mult: Vec<CMatrix>,
    /// Column `i` holds the coefficients of `b_i*`.
    star: CMatrix,
    unit: CVector,
    rep: Vec<CMatrix>,
}

impl FiniteStarAlgebra {
    /// Build from structure-constant triplets `(i, j, k, m)` meaning
    /// `b_i·b_j ∋ m·b_k`. Repeated triplets accumulate.
    pub fn from_triplets(
        labels: Vec<String>,
        mult: &[(usize, usize, usize, C64)],
        star: CMatrix,
        unit: CVector,
        rep: Vec<CMatrix>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut left_mult = vec![CMatrix::zeros(n, n); n];
        for &(i, j, k, v) in mult {
            if i >= n || j >= n || k >= n {
                return Err(Error::DimensionMismatch(format!(
                    "structure constant index ({i},{j},{k}) out of range for dimension {n}"
                )));
            }
            left_mult[i][(k, j)] += v;
        }
        Self::from_left_mult(labels, left_mult, star, unit, rep)
    }

    pub fn from_left_mult(
        labels: Vec<String>,
        left_mult: Vec<CMatrix>,
        star: CMatrix,
        unit: CVector,
        rep: Vec<CMatrix>,
    ) -> Result<Self> {
        let n = labels.len();
        let shape_err = |what: &str| Err(Error::DimensionMismatch(format!("{what} does not match dimension {n}")));
        if left_mult.len() != n || left_mult.iter().any(|m| m.shape() != (n, n)) {
            return shape_err("structure tensor");
        }
        if star.shape() != (n, n) {
            return shape_err("star matrix");
        }
        if unit.len() != n {
            return shape_err("unit");
        }
        if rep.len() != n {
            return shape_err("representation");
        }
        let m = rep.first().map(|r| r.nrows()).unwrap_or(0);
        if rep.iter().any(|r| r.shape() != (m, m)) {
            return Err(Error::DimensionMismatch("representation matrices must share one square shape".into()));
        }
        if left_mult.iter().chain(rep.iter()).chain(std::iter::once(&star)).any(|x| x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::InvalidInput("non-finite entry in algebra data".into()));
        }
        Ok(FiniteStarAlgebra { labels, left_mult, star, unit, rep })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rep_dim(&self) -> usize {
        self.rep.first().map(|r| r.nrows()).unwrap_or(0)
    }

    pub fn rep(&self) -> &[CMatrix] {
        &self.rep
    }

    pub fn star_matrix(&self) -> &CMatrix {
        &self.star
    }

    pub fn unit(&self) -> &CVector {
        &self.unit
    }

    pub fn left_mult(&self, i: usize) -> &CMatrix {
        &self.left_mult[i]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> C64 {
        self.left_mult[i][(k, j)]
    }

    pub fn basis(&self, i: usize) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[i] = c(1.0);
        v
    }

    pub fn mul(&self, x: &CVector, y: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        for (i, xi) in x.iter().enumerate() {
            if *xi != C64::new(0.0, 0.0) {
                out += (&self.left_mult[i] * y) * *xi;
            }
        }
        out
    }

    /// `b_i · b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> CVector {
        self.left_mult[i].column(j).into_owned()
    }

    /// Conjugate-linear involution.
    pub fn star(&self, x: &CVector) -> CVector {
        &self.star * x.conjugate()
    }

    /// `b_i* · b_j`, the building block of every Gram-type matrix.
    pub fn star_product(&self, i: usize, j: usize) -> CVector {
        self.mul(&self.star(&self.basis(i)), &self.basis(j))
    }

    pub fn represent(&self, x: &CVector) -> CMatrix {
        let m = self.rep_dim();
        let mut out = CMatrix::zeros(m, m);
        for (i, xi) in x.iter().enumerate() {
            if *xi != C64::new(0.0, 0.0) {
                out += &self.rep[i] * *xi;
            }
        }
        out
    }

    /// Non-zero structure constants as `(i, j, k, value)`.
    pub fn structure_triplets(&self) -> Vec<(usize, usize, usize, C64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.structure_constant(i, j, k);
                    if v.norm() > 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }
}

/// Coproduct and counit, `Δ(b_i) = Σ coproduct[i][(j,k)] b_j ⊗ b_k`.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    pub coproduct: Vec<CMatrix>,
    pub counit: CVector,
}

#[derive(Clone, Debug)]
pub struct FiniteHyperbialgebra {
    pub algebra: FiniteStarAlgebra,
    pub coalgebra: Coalgebra,
    /// Whether Δ is claimed to be multiplicative (a C*-bialgebra).
    pub delta_multiplicative: bool,
}

impl FiniteHyperbialgebra {
    pub fn new(algebra: FiniteStarAlgebra, coalgebra: Coalgebra, delta_multiplicative: bool) -> Result<Self> {
        let n = algebra.dim();
        if coalgebra.coproduct.len() != n || coalgebra.coproduct.iter().any(|d| d.shape() != (n, n)) {
            return Err(Error::DimensionMismatch(format!("coproduct does not match dimension {n}")));
        }
        if coalgebra.counit.len() != n {
            return Err(Error::DimensionMismatch(format!("counit does not match dimension {n}")));
        }
        Ok(FiniteHyperbialgebra { algebra, coalgebra, delta_multiplicative })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// ε(x), linear.
    pub fn counit_of(&self, x: &CVector) -> C64 {
        self.coalgebra.counit.iter().zip(x.iter()).map(|(e, v)| e * v).sum()
    }

    pub fn counit(&self) -> Functional {
        Functional(self.coalgebra.counit.clone())
    }

    /// Δ(x) as a coefficient matrix.
    pub fn coproduct_of(&self, x: &CVector) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if *xi != C64::new(0.0, 0.0) {
                out += &self.coalgebra.coproduct[i] * *xi;
            }
        }
        out
    }

    pub fn coproduct_basis(&self, i: usize) -> &CMatrix {
        &self.coalgebra.coproduct[i]
    }

    /// Product in `A ⊗ A`: `(x⊗y)(z⊗w) = xz ⊗ yw`, extended bilinearly.
    pub fn tensor_mul(&self, lhs: &CMatrix, rhs: &CMatrix) -> CMatrix {
        let n = self.dim();
        // right_struct[r][(j,p)] = coefficient of b_r in b_j b_p
        let right_struct: Vec<CMatrix> =
            (0..n).map(|r| CMatrix::from_fn(n, n, |j, p| self.algebra.structure_constant(j, p, r))).collect();
        let mut out = CMatrix::zeros(n, n);
        for s in 0..n {
            let inner = lhs * &right_struct[s] * rhs.transpose();
            for r in 0..n {
                out[(r, s)] = right_struct[r].component_mul(&inner).sum();
            }
        }
        out
    }

    /// `(M ⊗ N)(C)` for linear maps on coefficient space.
    pub fn tensor_apply(&self, left: &CMatrix, right: &CMatrix, t: &CMatrix) -> CMatrix {
        left * t * right.transpose()
    }

    /// Element `Σ C[j,k] π(b_j) ⊗ π(b_k)` under the tensor square of the representation.
    pub fn represent_tensor(&self, t: &CMatrix) -> CMatrix {
        let m = self.algebra.rep_dim();
        let mut out = CMatrix::zeros(m * m, m * m);
        for j in 0..self.dim() {
            for k in 0..self.dim() {
                let v = t[(j, k)];
                if v.norm() > 0.0 {
                    out += crate::numerics::kron(&self.algebra.rep[j], &self.algebra.rep[k]) * v;
                }
            }
        }
        out
    }
}

/// A linear functional `f(b_i) = coeffs[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional(pub CVector);

impl Functional {
    pub fn zero(n: usize) -> Self {
        Functional(CVector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, x: &CVector) -> C64 {
        self.0.iter().zip(x.iter()).map(|(f, v)| f * v).sum()
    }

    pub fn coeffs(&self) -> &CVector {
        &self.0
    }
}

/// A linear map on `A` acting on coefficient vectors: column `i` is the
/// image of `b_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMapOnAlgebra {
    pub matrix: CMatrix,
}

impl LinearMapOnAlgebra {
    pub fn identity(n: usize) -> Self {
        LinearMapOnAlgebra { matrix: CMatrix::identity(n, n) }
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        &self.matrix * x
    }
}
