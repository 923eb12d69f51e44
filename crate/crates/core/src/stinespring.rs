//! Generator-level Stinespring decomposition: a *-homomorphic generator `θ`
//! on `k₀ ⊕ K` perturbed by a constant `τ`.

use crate::algebra::FiniteHyperbialgebra;
use crate::error::{Error, Result};
use crate::generator::{assemble_from_tuple, GeneratorMap, GeneratorTuple, NoiseSpace};
use crate::homdil::{homold_residual, pad_with_counit};
use crate::numerics::{c, max_abs, op_norm, psd_certificate_unchecked, CMatrix, PsdCertificate, PSD_TOL};
use crate::report::{Check, Checks};

/// `θ(a) = [[λ − tε, 0, δ(a*)†], [0, −εI₀, 0], [δ, 0, ρ − εI₁]]`.
pub fn build_theta(tup: &GeneratorTuple, h: &FiniteHyperbialgebra, tol: f64) -> Result<GeneratorMap> {
    tup.validate(h, tol)?;
    let (k, dk0) = (tup.k_dim, tup.dk());
    let m = 1 + dk0 + k;
    let blocks = (0..h.dim())
        .map(|i| {
            let x = h.algebra.basis(i);
            let eps = h.counit_of(&x);
            let delta = tup.delta(h, &x);
            let delta_star = tup.delta(h, &h.algebra.star(&x));
            let mut b = CMatrix::zeros(m, m);
            b[(0, 0)] = tup.lambda(h, &x) - eps * c(tup.t);
            for r in 1..=dk0 {
                b[(r, r)] = -eps;
            }
            b.view_mut((0, 1 + dk0), (1, k)).copy_from(&delta_star.adjoint());
            b.view_mut((1 + dk0, 0), (k, 1)).copy_from(&delta);
            let corner = &tup.rho[i] - CMatrix::identity(k, k) * eps;
            b.view_mut((1 + dk0, 1 + dk0), (k, k)).copy_from(&corner);
            b
        })
        .collect();
    let theta = GeneratorMap { noise: NoiseSpace::new(dk0 + k), blocks };
    if h.delta_multiplicative {
        let residual = homold_residual(&theta, h);
        if residual > tol {
            return Err(Error::HomoldFailed { residual });
        }
    }
    Ok(theta)
}

/// `τ = [[t/2, ⟨d|, 0], [0, −I₀, B], [0, D, −I₁]]` with `B: K → k₀`
/// (default 0).
pub fn build_tau(tup: &GeneratorTuple, b: Option<&CMatrix>) -> Result<CMatrix> {
    let (k, dk0) = (tup.k_dim, tup.dk());
    let zero = CMatrix::zeros(dk0, k);
    let b = b.unwrap_or(&zero);
    if b.shape() != (dk0, k) {
        return Err(Error::DimensionMismatch(format!("B must be {dk0}x{k}, got {}x{}", b.nrows(), b.ncols())));
    }
    let norm = op_norm(b);
    if norm > 1.0 + 1e-12 {
        return Err(Error::BNotContraction { norm });
    }
    let m = 1 + dk0 + k;
    let mut tau = CMatrix::zeros(m, m);
    tau[(0, 0)] = c(0.5 * tup.t);
    tau.view_mut((0, 1), (1, dk0)).copy_from(&tup.d.adjoint());
    tau.view_mut((1, 1), (dk0, dk0)).copy_from(&-CMatrix::identity(dk0, dk0));
    tau.view_mut((1, 1 + dk0), (dk0, k)).copy_from(b);
    tau.view_mut((1 + dk0, 1), (k, dk0)).copy_from(&tup.d_op);
    tau.view_mut((1 + dk0, 1 + dk0), (k, k)).copy_from(&-CMatrix::identity(k, k));
    Ok(tau)
}

fn qs_proj_for(tau: &CMatrix) -> CMatrix {
    NoiseSpace::new(tau.nrows().saturating_sub(1)).qs_proj()
}

/// `τ + τ* + τ*Δτ`.
pub fn contraction_combination(tau: &CMatrix) -> CMatrix {
    tau + tau.adjoint() + tau.adjoint() * qs_proj_for(tau) * tau
}

/// Certificate that `−(τ + τ* + τ*Δτ)` is PSD.
pub fn check_contraction_condition(tau: &CMatrix) -> PsdCertificate {
    psd_certificate_unchecked(&-contraction_combination(tau), PSD_TOL)
}

fn same_shape(phi: &GeneratorMap, tau: &CMatrix, h: &FiniteHyperbialgebra) -> Result<usize> {
    phi.check_algebra(h)?;
    let m = phi.noise.hat_dim();
    if tau.shape() != (m, m) {
        return Err(Error::DimensionMismatch(format!("τ is {}x{}, generator blocks are {m}x{m}", tau.nrows(), tau.ncols())));
    }
    Ok(m)
}

fn map_blocks(phi: &GeneratorMap, f: impl Fn(usize, &CMatrix) -> CMatrix) -> GeneratorMap {
    GeneratorMap { noise: phi.noise, blocks: phi.blocks.iter().enumerate().map(|(i, b)| f(i, b)).collect() }
}

/// `ψ(a) = ε(a)(τ + τ* + τ*Δτ) + (I + τ*Δ)θ(a)(I + Δτ)`.
pub fn perturbed_generator(theta: &GeneratorMap, tau: &CMatrix, h: &FiniteHyperbialgebra) -> Result<GeneratorMap> {
    let m = same_shape(theta, tau, h)?;
    let delta = qs_proj_for(tau);
    let comb = contraction_combination(tau);
    let left = CMatrix::identity(m, m) + tau.adjoint() * &delta;
    let right = CMatrix::identity(m, m) + &delta * tau;
    Ok(map_blocks(theta, |i, b| &comb * h.coalgebra.counit[i] + &left * b * &right))
}

/// `ψ(a) = ε(a)τ + φ(a)(I + Δτ)`.
pub fn right_perturbed_generator(phi: &GeneratorMap, tau: &CMatrix, h: &FiniteHyperbialgebra) -> Result<GeneratorMap> {
    let m = same_shape(phi, tau, h)?;
    let right = CMatrix::identity(m, m) + qs_proj_for(tau) * tau;
    Ok(map_blocks(phi, |i, b| tau * h.coalgebra.counit[i] + b * &right))
}

/// `ψ(a) = ε(a)τ* + (I + τ*Δ)φ(a)`.
pub fn left_perturbed_generator(phi: &GeneratorMap, tau: &CMatrix, h: &FiniteHyperbialgebra) -> Result<GeneratorMap> {
    let m = same_shape(phi, tau, h)?;
    let left = CMatrix::identity(m, m) + tau.adjoint() * qs_proj_for(tau);
    Ok(map_blocks(phi, |i, b| tau.adjoint() * h.coalgebra.counit[i] + &left * b))
}

/// `[[t, ⟨d|, 0], [|d⟩, D*D − I₀, 0], [0, 0, B*B − I₁]]`.
pub fn expected_combination(tup: &GeneratorTuple, b: &CMatrix) -> CMatrix {
    let (k, dk0) = (tup.k_dim, tup.dk());
    let mut out = CMatrix::zeros(1 + dk0 + k, 1 + dk0 + k);
    out[(0, 0)] = c(tup.t);
    out.view_mut((0, 1), (1, dk0)).copy_from(&tup.d.adjoint());
    out.view_mut((1, 0), (dk0, 1)).copy_from(&tup.d);
    let top = tup.d_op.adjoint() * &tup.d_op - CMatrix::identity(dk0, dk0);
    out.view_mut((1, 1), (dk0, dk0)).copy_from(&top);
    let bottom = b.adjoint() * b - CMatrix::identity(k, k);
    out.view_mut((1 + dk0, 1 + dk0), (k, k)).copy_from(&bottom);
    out
}

#[derive(Clone, Debug)]
pub struct StinespringData {
    pub theta: GeneratorMap,
    pub tau: CMatrix,
    pub b: CMatrix,
    pub psi: GeneratorMap,
    pub checks: Checks,
}

impl StinespringData {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Build `θ`, `τ`, perturb, and compare with `diag(φ, −εI_K)`.
pub fn verify_stinespring_identity(
    tup: &GeneratorTuple,
    b: Option<&CMatrix>,
    h: &FiniteHyperbialgebra,
    tol: f64,
) -> Result<StinespringData> {
    let phi = assemble_from_tuple(tup, h, tol)?;
    let theta = build_theta(tup, h, tol)?;
    let tau = build_tau(tup, b)?;
    let b = b.cloned().unwrap_or_else(|| CMatrix::zeros(tup.dk(), tup.k_dim));
    let psi = perturbed_generator(&theta, &tau, h)?;
    let target = pad_with_counit(&phi, tup.k_dim, h);

    let mut checks = Checks::new();
    if h.delta_multiplicative {
        checks.push(Check::within("theta_homold", homold_residual(&theta, h), tol));
    }
    checks.push(Check::psd("contraction_condition", &check_contraction_condition(&tau)));
    checks.push(Check::within(
        "combination",
        max_abs(&(contraction_combination(&tau) - expected_combination(tup, &b))),
        1e-12,
    ));
    checks.push(Check::within("block_diagonal", psi.max_diff(&target), tol));
    Ok(StinespringData { theta, tau, b, psi, checks })
}
