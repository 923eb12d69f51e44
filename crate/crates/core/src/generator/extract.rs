use super::kernel::{build_kernel, induce_representation, kolmogorov_extract};
use super::{assemble_unchecked, GeneratorMap, GeneratorTuple};
use crate::algebra::FiniteHyperbialgebra;
use crate::error::{Error, Result, Stage};
use crate::numerics::{column, least_squares_solve, psd_certificate_unchecked, psd_sqrt, CMatrix, CVector, PSD_TOL};
use crate::report::{Check, Checks};

/// Minimal-norm `ξ` with `(ρ(b_i) − ε(b_i))ξ = δ(b_i)` for all `i`.
pub fn solve_inner_vector(
    rho: &[CMatrix],
    delta: &[CVector],
    h: &FiniteHyperbialgebra,
    tol: f64,
) -> Result<(CVector, f64)> {
    let k = rho.first().map(|r| r.nrows()).unwrap_or(0);
    let n = rho.len();
    if delta.len() != n || n != h.dim() {
        return Err(Error::DimensionMismatch("one ρ and one δ per basis element required".into()));
    }
    let mut a = CMatrix::zeros(n * k, k);
    let mut b = CMatrix::zeros(n * k, 1);
    for i in 0..n {
        let shifted = &rho[i] - CMatrix::identity(k, k) * h.coalgebra.counit[i];
        a.view_mut((i * k, 0), (k, k)).copy_from(&shifted);
        b.view_mut((i * k, 0), (k, 1)).copy_from(&delta[i]);
    }
    let ls = least_squares_solve(&a, &b)?;
    if ls.residual > tol {
        return Err(Error::NotInner { residual: ls.residual });
    }
    Ok((ls.x.column(0).into_owned(), ls.residual))
}

/// Minimal-norm `e` with `(I − D*D)^{1/2} e = d`; the flag reports whether
/// `‖e‖² ≤ −t` as well.
pub fn solve_e(d_op: &CMatrix, d: &CVector, t: f64, tol: f64) -> Result<(CVector, bool)> {
    let dk = d.len();
    let root = psd_sqrt(&(CMatrix::identity(dk, dk) - d_op.adjoint() * d_op))?;
    let ls = least_squares_solve(&root, &column(d))?;
    if ls.residual > tol {
        return Err(Error::NoSolution { residual: ls.residual });
    }
    let e = ls.x.column(0).into_owned();
    let ok = e.norm_squared() <= -t + tol;
    Ok((e, ok))
}

fn stage(stage: Stage) -> impl Fn(Error) -> Error {
    move |e| Error::NotCpc { stage, detail: e.to_string() }
}

/// Kernel → Kolmogorov pair → `ρ, D` → `ξ` → `t, d` → `e`, then a
/// reconstruction check against `φ`.
pub fn extract_tuple(phi: &GeneratorMap, h: &FiniteHyperbialgebra, tol: f64) -> Result<GeneratorTuple> {
    phi.check_algebra(h)?;
    let kern = build_kernel(phi, h, tol).map_err(stage(Stage::Reality))?;
    let kd = kolmogorov_extract(&kern, h).map_err(stage(Stage::Kernel))?;
    if kd.delta_one > tol {
        return Err(Error::NotCpc { stage: Stage::Kolmogorov, detail: format!("δ(1) has norm {:.3e}", kd.delta_one) });
    }
    let ind = induce_representation(&kd, h, tol).map_err(stage(Stage::Representation))?;
    let deltas: Vec<CVector> = (0..h.dim()).map(|i| kd.delta(i)).collect();
    let (xi, _) = solve_inner_vector(&ind.rho, &deltas, h, tol).map_err(stage(Stage::InnerVector))?;

    let unit = h.algebra.unit();
    let lambda_one = phi.lambda(unit);
    if lambda_one.im.abs() > tol {
        return Err(Error::NotCpc {
            stage: Stage::Reality,
            detail: Error::NotReal { residual: lambda_one.im.abs() }.to_string(),
        });
    }
    let t = lambda_one.re;
    let d = phi.eta(unit);
    let (e, ok) = solve_e(&ind.d_op, &d, t, tol).map_err(stage(Stage::Contractivity))?;
    if !ok {
        return Err(Error::NotCpc {
            stage: Stage::Contractivity,
            detail: format!("‖e‖² = {:.6e} exceeds −t = {:.6e}", e.norm_squared(), -t),
        });
    }
    let tup = GeneratorTuple { k_dim: kd.k_dim, rho: ind.rho, d_op: ind.d_op, xi, d, e, t };
    let residual = assemble_unchecked(&tup, h).max_diff(phi);
    if residual > tol {
        return Err(Error::NotCpc { stage: Stage::Reconstruction, detail: format!("residual {residual:.3e}") });
    }
    Ok(tup)
}

/// Outcome of the CPC decision.
#[derive(Clone, Debug)]
pub struct CpcReport {
    pub checks: Checks,
    pub tuple: Option<GeneratorTuple>,
    pub failure: Option<Error>,
}

impl CpcReport {
    pub fn is_cpc(&self) -> bool {
        self.checks.passed()
    }

    pub fn failed_stage(&self) -> Option<Stage> {
        match &self.failure {
            Some(Error::NotCpc { stage, .. }) => Some(*stage),
            _ => None,
        }
    }
}

/// Reality, kernel positivity, `φ(1) ≤ 0`, and extraction with
/// reconstruction. CPC iff every check passes.
pub fn is_cpc(phi: &GeneratorMap, h: &FiniteHyperbialgebra, tol: f64) -> Result<CpcReport> {
    phi.check_algebra(h)?;
    let mut checks = Checks::new();
    let reality = phi.reality_residual(h);
    checks.push(Check::within("reality", reality, tol));
    if reality > tol {
        let failure = Some(Error::NotCpc { stage: Stage::Reality, detail: format!("residual {reality:.3e}") });
        return Ok(CpcReport { checks, tuple: None, failure });
    }
    let kern = build_kernel(phi, h, tol)?;
    checks.push(Check::psd("kernel_psd", &kern.certificate()));
    let neg_one = -phi.eval(h.algebra.unit());
    checks.push(Check::psd("phi_one_nonpositive", &psd_certificate_unchecked(&neg_one, PSD_TOL)));
    let (tuple, failure) = match extract_tuple(phi, h, tol) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e)),
    };
    checks.push(Check::flag("extraction", tuple.is_some()));
    if let Some(t) = &tuple {
        checks.push(Check::within("reconstruction", assemble_unchecked(t, h).max_diff(phi), tol));
    }
    Ok(CpcReport { checks, tuple, failure })
}
