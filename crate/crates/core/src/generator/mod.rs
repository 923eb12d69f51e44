//! Stochastic generators `φ: A → B(k̂)`, their Kolmogorov data and the
//! characterizing tuple `(K, ρ, D, ξ, d, e, t)`.

mod decompose;
mod extract;
mod kernel;

pub use decompose::{cp_decomposition, markov_generator, tuple_intertwiner, CpDecomposition, Intertwiner};
pub use extract::{extract_tuple, is_cpc, solve_e, solve_inner_vector, CpcReport};
pub use kernel::{build_kernel, induce_representation, induce_representation_unchecked, kolmogorov_extract, GeneratorKernel, InducedRepresentation, KolmogorovData};

use crate::algebra::FiniteHyperbialgebra;
use crate::error::{Error, Result};
use crate::numerics::{c, max_abs, max_abs_vec, op_norm, psd_sqrt, CMatrix, CVector, C64};

/// `k = ℂ^dk`, `k̂ = ℂ ⊕ k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiseSpace {
    pub dk: usize,
}

impl NoiseSpace {
    pub fn new(dk: usize) -> Self {
        NoiseSpace { dk }
    }

    pub fn hat_dim(&self) -> usize {
        1 + self.dk
    }

    pub fn e0(&self) -> CVector {
        let mut v = CVector::zeros(self.hat_dim());
        v[0] = c(1.0);
        v
    }

    /// `diag(0, I_k)`.
    pub fn qs_proj(&self) -> CMatrix {
        let mut m = CMatrix::identity(self.hat_dim(), self.hat_dim());
        m[(0, 0)] = c(0.0);
        m
    }
}

/// One `(1+dk)×(1+dk)` block per basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMap {
    pub noise: NoiseSpace,
    pub blocks: Vec<CMatrix>,
}

impl GeneratorMap {
    pub fn new(dk: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        let m = 1 + dk;
        if let Some(b) = blocks.iter().find(|b| b.shape() != (m, m)) {
            return Err(Error::DimensionMismatch(format!(
                "generator block is {}x{}, expected {m}x{m}",
                b.nrows(),
                b.ncols()
            )));
        }
        if blocks.iter().any(|b| b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::InvalidInput("non-finite generator entry".into()));
        }
        Ok(GeneratorMap { noise: NoiseSpace::new(dk), blocks })
    }

    pub fn zero(n: usize, dk: usize) -> Self {
        GeneratorMap { noise: NoiseSpace::new(dk), blocks: vec![CMatrix::zeros(1 + dk, 1 + dk); n] }
    }

    pub fn dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn dk(&self) -> usize {
        self.noise.dk
    }

    pub fn check_algebra(&self, h: &FiniteHyperbialgebra) -> Result<()> {
        if self.dim() != h.dim() {
            return Err(Error::DimensionMismatch(format!(
                "generator has {} blocks, algebra dimension is {}",
                self.dim(),
                h.dim()
            )));
        }
        Ok(())
    }

    /// `φ(x)` for a coefficient vector `x`.
    pub fn eval(&self, x: &CVector) -> CMatrix {
        let m = self.noise.hat_dim();
        let mut out = CMatrix::zeros(m, m);
        for (b, xi) in self.blocks.iter().zip(x.iter()) {
            if *xi != C64::new(0.0, 0.0) {
                out += b * *xi;
            }
        }
        out
    }

    pub fn lambda(&self, x: &CVector) -> C64 {
        self.eval(x)[(0, 0)]
    }

    /// Column block `η(x) ∈ k`.
    pub fn eta(&self, x: &CVector) -> CVector {
        self.eval(x).view((1, 0), (self.dk(), 1)).column(0).into_owned()
    }

    /// Row block `η†(x)` as a `1×dk` matrix.
    pub fn eta_dag(&self, x: &CVector) -> CMatrix {
        self.eval(x).view((0, 1), (1, self.dk())).into_owned()
    }

    /// `σ(x)`: lower-right block plus `ε(x)I`.
    pub fn sigma(&self, x: &CVector, eps: C64) -> CMatrix {
        let dk = self.dk();
        self.eval(x).view((1, 1), (dk, dk)).into_owned() + CMatrix::identity(dk, dk) * eps
    }

    /// `max_i ‖φ(b_i*) − φ(b_i)*‖_max`.
    pub fn reality_residual(&self, h: &FiniteHyperbialgebra) -> f64 {
        (0..self.dim())
            .map(|i| max_abs(&(self.eval(&h.algebra.star(&h.algebra.basis(i))) - self.blocks[i].adjoint())))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference over all blocks.
    pub fn max_diff(&self, other: &GeneratorMap) -> f64 {
        if self.blocks.len() != other.blocks.len() {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| if a.shape() == b.shape() { max_abs(&(a - b)) } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    /// Top-left `(1+dk0)`-corner of every block, i.e. `P₀ φ(·) P₀`.
    pub fn compress(&self, dk0: usize) -> Result<GeneratorMap> {
        if dk0 > self.dk() {
            return Err(Error::DimensionMismatch(format!("cannot compress noise of dimension {} to {dk0}", self.dk())));
        }
        let blocks = self.blocks.iter().map(|b| b.view((0, 0), (1 + dk0, 1 + dk0)).into_owned()).collect();
        Ok(GeneratorMap { noise: NoiseSpace::new(dk0), blocks })
    }
}

/// The characterizing tuple of a CPC generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTuple {
    pub k_dim: usize,
    /// `ρ(b_i)`, each `K×K`.
    pub rho: Vec<CMatrix>,
    /// `D: k → K`, shape `K×dk`.
    pub d_op: CMatrix,
    pub xi: CVector,
    pub d: CVector,
    pub e: CVector,
    pub t: f64,
}

impl GeneratorTuple {
    /// The tuple of `φ ≡ 0`.
    pub fn zero(n: usize, dk: usize) -> Self {
        GeneratorTuple {
            k_dim: 0,
            rho: vec![CMatrix::zeros(0, 0); n],
            d_op: CMatrix::zeros(0, dk),
            xi: CVector::zeros(0),
            d: CVector::zeros(dk),
            e: CVector::zeros(dk),
            t: 0.0,
        }
    }

    pub fn dk(&self) -> usize {
        self.d.len()
    }

    pub fn rho_of(&self, x: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.k_dim, self.k_dim);
        for (r, xi) in self.rho.iter().zip(x.iter()) {
            if *xi != C64::new(0.0, 0.0) {
                out += r * *xi;
            }
        }
        out
    }

    /// `δ(x) = (ρ(x) − ε(x))ξ`.
    pub fn delta(&self, h: &FiniteHyperbialgebra, x: &CVector) -> CVector {
        self.rho_of(x) * &self.xi - &self.xi * h.counit_of(x)
    }

    /// `λ(x) = ε(x)(t − ‖ξ‖²) + ⟨ξ, ρ(x)ξ⟩`.
    pub fn lambda(&self, h: &FiniteHyperbialgebra, x: &CVector) -> C64 {
        h.counit_of(x) * c(self.t - self.xi.norm_squared()) + self.xi.dotc(&(self.rho_of(x) * &self.xi))
    }

    /// `(ρ, D, ξ) ↦ (UρU*, UD, Uξ)` for a unitary `U` on `K`.
    pub fn conjugate(&self, u: &CMatrix) -> GeneratorTuple {
        GeneratorTuple {
            rho: self.rho.iter().map(|r| u * r * u.adjoint()).collect(),
            d_op: u * &self.d_op,
            xi: u * &self.xi,
            ..self.clone()
        }
    }

    fn shapes_ok(&self, n: usize) -> Result<()> {
        let (k, dk) = (self.k_dim, self.dk());
        let bad = self.rho.len() != n
            || self.rho.iter().any(|r| r.shape() != (k, k))
            || self.d_op.shape() != (k, dk)
            || self.xi.len() != k
            || self.e.len() != dk;
        if bad {
            return Err(Error::InvalidTuple(format!("tuple shapes inconsistent with K={k}, dk={dk}, n={n}")));
        }
        Ok(())
    }

    /// Residuals of the tuple invariants. Minimality is not required.
    pub fn invariant_residuals(&self, h: &FiniteHyperbialgebra) -> Result<Vec<(&'static str, f64)>> {
        self.shapes_ok(h.dim())?;
        let a = &h.algebra;
        let k = self.k_dim;
        let mut rep: f64 = max_abs(&(self.rho_of(a.unit()) - CMatrix::identity(k, k)));
        for i in 0..h.dim() {
            rep = rep.max(max_abs(&(self.rho_of(&a.star(&a.basis(i))) - self.rho[i].adjoint())));
            for j in 0..h.dim() {
                rep = rep.max(max_abs(&(self.rho_of(&a.basis_product(i, j)) - &self.rho[i] * &self.rho[j])));
            }
        }
        let contraction = (op_norm(&self.d_op) - 1.0).max(0.0);
        let dk = self.dk();
        let root = psd_sqrt(&(CMatrix::identity(dk, dk) - self.d_op.adjoint() * &self.d_op))
            .map_err(|_| Error::InvalidTuple("D is not a contraction".into()))?;
        let d_res = max_abs_vec(&(root * &self.e - &self.d));
        let t_sign = self.t.max(0.0);
        let e_bound = (self.e.norm_squared() + self.t).max(0.0);
        Ok(vec![
            ("representation", rep),
            ("contraction", contraction),
            ("t_nonpositive", t_sign),
            ("d_from_e", d_res),
            ("e_bound", e_bound),
        ])
    }

    pub fn validate(&self, h: &FiniteHyperbialgebra, tol: f64) -> Result<()> {
        for (name, r) in self.invariant_residuals(h)? {
            if !(r <= tol) {
                return Err(Error::InvalidTuple(format!("{name} residual {r:.3e} exceeds {tol:.1e}")));
            }
        }
        Ok(())
    }
}

/// φ from a tuple:
/// `[[λ, ε⟨d| + δ(a*)†D], [ε|d⟩ + D*δ(a), D*ρD − εI]]`.
pub fn assemble_from_tuple(tup: &GeneratorTuple, h: &FiniteHyperbialgebra, tol: f64) -> Result<GeneratorMap> {
    tup.validate(h, tol)?;
    Ok(assemble_unchecked(tup, h))
}

pub(crate) fn assemble_unchecked(tup: &GeneratorTuple, h: &FiniteHyperbialgebra) -> GeneratorMap {
    let dk = tup.dk();
    let blocks = (0..h.dim())
        .map(|i| {
            let x = h.algebra.basis(i);
            let eps = h.counit_of(&x);
            let delta = tup.delta(h, &x);
            let delta_star = tup.delta(h, &h.algebra.star(&x));
            let col = &tup.d * eps + tup.d_op.adjoint() * &delta;
            let row = tup.d.adjoint() * eps + delta_star.adjoint() * &tup.d_op;
            let corner = tup.d_op.adjoint() * &tup.rho[i] * &tup.d_op - CMatrix::identity(dk, dk) * eps;
            let mut b = CMatrix::zeros(1 + dk, 1 + dk);
            b[(0, 0)] = tup.lambda(h, &x);
            b.view_mut((1, 0), (dk, 1)).copy_from(&col);
            b.view_mut((0, 1), (1, dk)).copy_from(&row);
            b.view_mut((1, 1), (dk, dk)).copy_from(&corner);
            b
        })
        .collect();
    GeneratorMap { noise: NoiseSpace::new(dk), blocks }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::function_algebra;
    use crate::algebra::groups::cyclic;
    use crate::numerics::{real_matrix, real_vector};

    pub(crate) fn poisson(rate: f64) -> (FiniteHyperbialgebra, GeneratorTuple) {
        let h = function_algebra(&cyclic(2), 0).unwrap();
        let tup = GeneratorTuple {
            k_dim: 1,
            rho: vec![real_matrix(1, 1, &[0.0]), real_matrix(1, 1, &[1.0])],
            d_op: real_matrix(1, 1, &[1.0]),
            xi: real_vector(&[rate.sqrt()]),
            d: real_vector(&[0.0]),
            e: real_vector(&[0.0]),
            t: 0.0,
        };
        (h, tup)
    }

    #[test]
    fn zero_tuple_gives_zero_generator() {
        let h = function_algebra(&cyclic(3), 0).unwrap();
        let phi = assemble_from_tuple(&GeneratorTuple::zero(3, 0), &h, 1e-10).unwrap();
        assert_eq!(phi, GeneratorMap::zero(3, 0));
        // with noise, K = 0 leaves the −ε(a)I corner
        let phi = assemble_from_tuple(&GeneratorTuple::zero(3, 2), &h, 1e-10).unwrap();
        assert_eq!(phi.blocks[0].view((1, 1), (2, 2)).into_owned(), -CMatrix::identity(2, 2));
    }

    #[test]
    fn scalar_algebra_damping() {
        let h = function_algebra(&vec![vec![0]], 0).unwrap();
        let mut tup = GeneratorTuple::zero(1, 1);
        tup.t = -1.0;
        let phi = assemble_from_tuple(&tup, &h, 1e-10).unwrap();
        assert_eq!(phi.blocks[0], real_matrix(2, 2, &[-1.0, 0.0, 0.0, -1.0]));
    }

    #[test]
    fn poisson_blocks() {
        let (h, tup) = poisson(0.5);
        let phi = assemble_from_tuple(&tup, &h, 1e-12).unwrap();
        let s = 0.5_f64.sqrt();
        assert!(max_abs(&(&phi.blocks[0] - real_matrix(2, 2, &[-0.5, -s, -s, -1.0]))) < 1e-15);
        assert!(max_abs(&(&phi.blocks[1] - real_matrix(2, 2, &[0.5, s, s, 1.0]))) < 1e-15);
        assert!(phi.reality_residual(&h) < 1e-15);
    }

    #[test]
    fn invalid_tuples_rejected() {
        let (h, mut tup) = poisson(0.5);
        tup.t = 0.5;
        assert!(matches!(assemble_from_tuple(&tup, &h, 1e-10), Err(Error::InvalidTuple(_))));
        let (h, mut tup) = poisson(0.5);
        tup.d_op = real_matrix(1, 1, &[1.5]);
        assert!(assemble_from_tuple(&tup, &h, 1e-10).is_err());
        let (h, mut tup) = poisson(0.5);
        tup.rho[1] = real_matrix(1, 1, &[0.5]);
        assert!(assemble_from_tuple(&tup, &h, 1e-10).is_err());
    }

    #[test]
    fn non_selfadjoint_basis_stays_real() {
        use rand::SeedableRng;
        // b_g* = b_{g⁻¹} in ℂ[Z3], so the top row must use δ(a*)
        let h = crate::algebra::group_algebra(&cyclic(3)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let tup = crate::sampling::random_tuple(&h, 2, 3, &mut rng);
            let phi = assemble_from_tuple(&tup, &h, 1e-10).unwrap();
            assert!(phi.reality_residual(&h) < 1e-12);
        }
    }

    #[test]
    fn noise_space() {
        let n = NoiseSpace::new(2);
        assert_eq!(n.hat_dim(), 3);
        assert_eq!(&n.qs_proj() * n.e0(), CVector::zeros(3));
    }
}
