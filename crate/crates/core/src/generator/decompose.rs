use super::{GeneratorMap, GeneratorTuple};
use crate::algebra::{cp_gram_matrix, FiniteHyperbialgebra, Functional};
use crate::error::Result;
use crate::numerics::{c, max_abs, pinv, psd_certificate_unchecked, CMatrix, CVector, PsdCertificate, PSD_TOL};

/// `λ = ⟨e0, φ(·)e0⟩`.
pub fn markov_generator(phi: &GeneratorMap) -> Functional {
    Functional(CVector::from_iterator(phi.dim(), phi.blocks.iter().map(|b| b[(0, 0)])))
}

/// `φ(a) = ψ(a) − ε(a)(Δ + |e0⟩⟨χ| + |χ⟩⟨e0|)` with `ψ(a) = S*ρ(a)S`,
/// `S = [|ξ⟩ D]`.
#[derive(Clone, Debug)]
pub struct CpDecomposition {
    pub psi: Vec<CMatrix>,
    pub chi: CVector,
    /// Entrywise residual of the decomposition against the assembled `φ`.
    pub residual: f64,
    /// `max_i |λ₀(b_i) − λ₀(1)ε(b_i)|` with `λ₀ = λ − ⟨ξ, ρ(·)ξ⟩`.
    pub lambda0_residual: f64,
    pub cp_certificate: PsdCertificate,
}

pub fn cp_decomposition(tup: &GeneratorTuple, h: &FiniteHyperbialgebra, tol: f64) -> Result<CpDecomposition> {
    let phi = super::assemble_from_tuple(tup, h, tol)?;
    let (k, dk) = (tup.k_dim, tup.dk());
    let mut s = CMatrix::zeros(k, 1 + dk);
    s.view_mut((0, 0), (k, 1)).copy_from(&tup.xi);
    s.view_mut((0, 1), (k, dk)).copy_from(&tup.d_op);

    let psi: Vec<CMatrix> = tup.rho.iter().map(|r| s.adjoint() * r * &s).collect();

    let unit = h.algebra.unit();
    let lambda0 = |x: &CVector| tup.lambda(h, x) - tup.xi.dotc(&(tup.rho_of(x) * &tup.xi));
    let lambda0_one = lambda0(unit);
    let mut chi = CVector::zeros(1 + dk);
    chi[0] = -lambda0_one * c(0.5);
    let tail = tup.d_op.adjoint() * &tup.xi - &tup.d;
    chi.rows_mut(1, dk).copy_from(&tail);

    let e0 = super::NoiseSpace::new(dk).e0();
    let correction = super::NoiseSpace::new(dk).qs_proj() + &e0 * chi.adjoint() + &chi * e0.adjoint();
    let mut residual: f64 = 0.0;
    let mut lambda0_residual: f64 = 0.0;
    for i in 0..h.dim() {
        let x = h.algebra.basis(i);
        let eps = h.counit_of(&x);
        residual = residual.max(max_abs(&(&psi[i] - &correction * eps - &phi.blocks[i])));
        lambda0_residual = lambda0_residual.max((lambda0(&x) - lambda0_one * eps).norm());
    }
    let gram = cp_gram_matrix(h, |x| {
        let r = tup.rho_of(x);
        s.adjoint() * r * &s
    });
    let cp_certificate = psd_certificate_unchecked(&gram, PSD_TOL);
    Ok(CpDecomposition { psi, chi, residual, lambda0_residual, cp_certificate })
}

/// Isometry `V: K → K'` with `Vδ = δ'`, `Vρ = ρ'V`, `VD = D'`, where the
/// first tuple is minimal.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub v: CMatrix,
    pub residual: f64,
}

fn spanning(tup: &GeneratorTuple, h: &FiniteHyperbialgebra) -> CMatrix {
    let (k, dk, n) = (tup.k_dim, tup.dk(), h.dim());
    let mut out = CMatrix::zeros(k, n * (1 + dk));
    for i in 0..n {
        let x = h.algebra.basis(i);
        out.view_mut((0, i * (1 + dk)), (k, 1)).copy_from(&tup.delta(h, &x));
        out.view_mut((0, i * (1 + dk) + 1), (k, dk)).copy_from(&(&tup.rho[i] * &tup.d_op));
    }
    out
}

pub fn tuple_intertwiner(minimal: &GeneratorTuple, other: &GeneratorTuple, h: &FiniteHyperbialgebra) -> Intertwiner {
    let x = spanning(minimal, h);
    let y = spanning(other, h);
    let v = &y * pinv(&x);
    let mut residual = max_abs(&(&v * &x - &y));
    residual = residual.max(max_abs(&(v.adjoint() * &v - CMatrix::identity(minimal.k_dim, minimal.k_dim))));
    residual = residual.max(max_abs(&(&v * &minimal.d_op - &other.d_op)));
    for (r1, r2) in minimal.rho.iter().zip(&other.rho) {
        residual = residual.max(max_abs(&(&v * r1 - r2 * &v)));
    }
    Intertwiner { v, residual }
}
