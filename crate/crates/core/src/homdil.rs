//! Structure relations of *-homomorphic generators and the explicit dilation
//! of a CPC generator to a *-homomorphic one on a larger noise space.

use crate::algebra::FiniteHyperbialgebra;
use crate::error::{Error, Result};
use crate::generator::{assemble_unchecked, extract_tuple, GeneratorMap, GeneratorTuple, NoiseSpace};
use crate::numerics::{c, max_abs, max_abs_vec, null_space, op_norm, psd_sqrt, CMatrix, CVector, RANK_TOL};
use crate::report::{Check, Checks};

/// Largest residual of
/// `φ(a*b) = ε(a)‾φ(b) + ε(b)φ(a)* + φ(a)*Δφ(b)` over basis pairs.
pub fn homold_residual(phi: &GeneratorMap, h: &FiniteHyperbialgebra) -> f64 {
    let a = &h.algebra;
    let delta = phi.noise.qs_proj();
    let mut worst: f64 = 0.0;
    for i in 0..h.dim() {
        let pa = &phi.blocks[i];
        let ea = h.coalgebra.counit[i].conj();
        let pa_adj = pa.adjoint();
        let lhs_part = &pa_adj * &delta;
        for j in 0..h.dim() {
            let pb = &phi.blocks[j];
            let eb = h.coalgebra.counit[j];
            let lhs = phi.eval(&a.star_product(i, j));
            let rhs = pb * ea + &pa_adj * eb + &lhs_part * pb;
            worst = worst.max(max_abs(&(lhs - rhs)));
        }
    }
    worst
}

/// The structure relation as a single check named `homold`.
pub fn check_homold(phi: &GeneratorMap, h: &FiniteHyperbialgebra, tol: f64) -> Result<Checks> {
    if !h.delta_multiplicative {
        return Err(Error::NotABialgebra);
    }
    phi.check_algebra(h)?;
    let mut checks = Checks::new();
    checks.push(Check::within("homold", homold_residual(phi, h), tol));
    Ok(checks)
}

/// Tuple-level form of the structure relations:
/// (i) `D*DD*D = D*D`, (ii) `Dd = 0`, (iii) `[DD*, ρ] = 0`,
/// (iv) `t = −‖d‖²`, (v) `(DD* − I)δ = 0`.
pub fn check_tuple_conditions(tup: &GeneratorTuple, h: &FiniteHyperbialgebra, tol: f64) -> Checks {
    let k = tup.k_dim;
    let dd = &tup.d_op * tup.d_op.adjoint();
    let dsd = tup.d_op.adjoint() * &tup.d_op;
    let mut comm: f64 = 0.0;
    let mut range: f64 = 0.0;
    for i in 0..h.dim() {
        comm = comm.max(op_norm(&(&dd * &tup.rho[i] - &tup.rho[i] * &dd)));
        let delta = tup.delta(h, &h.algebra.basis(i));
        range = range.max((&dd * &delta - &delta).norm());
    }
    let mut checks = Checks::new();
    checks.push(Check::within("partial_isometry", max_abs(&(&dsd * &dsd - &dsd)), tol));
    checks.push(Check::within("d_in_kernel", (&tup.d_op * &tup.d).norm(), tol));
    checks.push(Check::within("commutant", comm, tol));
    checks.push(Check::within("t_equals_minus_norm_d", (tup.t + tup.d.norm_squared()).abs(), tol));
    checks.push(Check::within("delta_in_range", if k == 0 { 0.0 } else { range }, tol));
    checks
}

/// The dilated generator and the data used to build it.
#[derive(Clone, Debug)]
pub struct DilationResult {
    pub psi: GeneratorMap,
    pub dk0: usize,
    pub dk1: usize,
    pub dk2: usize,
    /// `D₁ = (I − DD*)^{1/2}` on `K`.
    pub d1_op: CMatrix,
    pub d1: CVector,
    pub d2: f64,
    /// Tuple of `ψ`: same `K, ρ, ξ, t` with `D̃ = [D D₁ 0]`, `d̃ = ẽ = (d, d₁, d₂)`.
    pub tuple: GeneratorTuple,
    pub report: Checks,
}

/// Dilate onto `k₀ ⊕ K ⊕ ℂ`.
///
/// `d₁ = −De` so that `D̃d̃ = D(I − D*D)^{1/2}e + (I − DD*)^{1/2}d₁` vanishes.
pub fn dilate(tup: &GeneratorTuple, h: &FiniteHyperbialgebra, tol: f64) -> Result<DilationResult> {
    tup.validate(h, tol)?;
    let (k, dk0) = (tup.k_dim, tup.dk());
    let d1_op = psd_sqrt(&(CMatrix::identity(k, k) - &tup.d_op * tup.d_op.adjoint()))
        .map_err(|_| Error::InvalidTuple("D is not a contraction".into()))?;
    let d1 = -(&tup.d_op * &tup.e);
    let d2 = (-(tup.t + tup.e.norm_squared())).max(0.0).sqrt();

    let dk = dk0 + k + 1;
    let mut d_tilde = CMatrix::zeros(k, dk);
    d_tilde.view_mut((0, 0), (k, dk0)).copy_from(&tup.d_op);
    d_tilde.view_mut((0, dk0), (k, k)).copy_from(&d1_op);
    let mut dvec = CVector::zeros(dk);
    dvec.rows_mut(0, dk0).copy_from(&tup.d);
    dvec.rows_mut(dk0, k).copy_from(&d1);
    dvec[dk - 1] = c(d2);

    let tuple = GeneratorTuple { d_op: d_tilde, d: dvec.clone(), e: dvec, ..tup.clone() };
    let psi = assemble_unchecked(&tuple, h);
    let phi = assemble_unchecked(tup, h);

    let mut report = Checks::new();
    report.push(Check::within(
        "coisometry",
        max_abs(&(&tuple.d_op * tuple.d_op.adjoint() - CMatrix::identity(k, k))),
        tol,
    ));
    report.push(Check::within("d_in_kernel", max_abs_vec(&(&tuple.d_op * &tuple.d)), tol));
    report.push(Check::within("t_equals_minus_norm_d", (tuple.t + tuple.d.norm_squared()).abs(), tol));
    report.push(Check::within("compression", psi.compress(dk0)?.max_diff(&phi), tol));
    if h.delta_multiplicative {
        report.extend("", check_homold(&psi, h, tol)?);
    }
    report.extend("conditions.", check_tuple_conditions(&tuple, h, tol));
    Ok(DilationResult { psi, dk0, dk1: k, dk2: 1, d1_op, d1, d2, tuple, report })
}

/// Compression of `ψ` against `φ`, plus the structure relations of `ψ` and
/// the tuple conditions of its extracted tuple.
pub fn verify_dilation(psi: &GeneratorMap, phi: &GeneratorMap, h: &FiniteHyperbialgebra, tol: f64) -> Result<Checks> {
    let dk0 = phi.dk();
    psi.check_algebra(h)?;
    phi.check_algebra(h)?;
    let mut checks = Checks::new();
    checks.push(Check::within("compression", psi.compress(dk0)?.max_diff(phi), tol));
    if h.delta_multiplicative {
        checks.extend("", check_homold(psi, h, tol)?);
    }
    match extract_tuple(psi, h, tol) {
        Ok(t) => {
            checks.push(Check::flag("extraction", true));
            checks.extend("conditions.", check_tuple_conditions(&t, h, tol));
        }
        Err(_) => checks.push(Check::flag("extraction", false)),
    }
    Ok(checks)
}

/// Basis of the `(ε,ε)`-derivations `δ(ab) = ε(a)δ(b) + δ(a)ε(b)`, one per
/// column. Empty for every finite-dimensional C*-algebra.
pub fn counit_derivations(h: &FiniteHyperbialgebra) -> CMatrix {
    let n = h.dim();
    let eps = &h.coalgebra.counit;
    let mut sys = CMatrix::zeros(n * n, n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            let prod = h.algebra.basis_product(i, j);
            for k in 0..n {
                sys[(row, k)] += prod[k];
            }
            sys[(row, j)] -= eps[i];
            sys[(row, i)] -= eps[j];
        }
    }
    null_space(&sys, RANK_TOL)
}

/// `diag(φ(·), −ε(·)I)` on `k ⊕ ℂ^extra`.
pub fn pad_with_counit(phi: &GeneratorMap, extra: usize, h: &FiniteHyperbialgebra) -> GeneratorMap {
    let m = 1 + phi.dk();
    let blocks = phi
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut out = CMatrix::zeros(m + extra, m + extra);
            out.view_mut((0, 0), (m, m)).copy_from(b);
            let eps = h.coalgebra.counit[i];
            for r in m..m + extra {
                out[(r, r)] = -eps;
            }
            out
        })
        .collect();
    GeneratorMap { noise: NoiseSpace::new(phi.dk() + extra), blocks }
}
