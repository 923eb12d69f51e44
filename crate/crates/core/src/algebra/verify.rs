use super::FiniteHyperbialgebra;
use crate::numerics::{c, max_abs, max_abs_vec, psd_certificate_unchecked, CMatrix, CVector};
use crate::report::{Check, Checks};

/// Block matrix `[ψ(b_i* b_j)]_{i,j}` for a map `ψ: A → B(H)`.
///
/// For any finite family `a_r = Σ_i c_ri b_i` and vectors `h_r`,
/// `Σ_rs ⟨h_r, ψ(a_r* a_s) h_s⟩ = Σ_ij ⟨k_i, ψ(b_i* b_j) k_j⟩` with
/// `k_i = Σ_r c_ri h_r`, so ψ is completely positive iff this one matrix is PSD.
pub fn cp_gram_matrix(h: &FiniteHyperbialgebra, psi: impl Fn(&CVector) -> CMatrix) -> CMatrix {
    let n = h.dim();
    let blocks: Vec<Vec<CMatrix>> =
        (0..n).map(|i| (0..n).map(|j| psi(&h.algebra.star_product(i, j))).collect()).collect();
    let b = blocks.first().and_then(|r| r.first()).map(|m| m.nrows()).unwrap_or(0);
    let mut out = CMatrix::zeros(n * b, n * b);
    for (i, row) in blocks.iter().enumerate() {
        for (j, blk) in row.iter().enumerate() {
            out.view_mut((i * b, j * b), (b, b)).copy_from(blk);
        }
    }
    out
}

/// Residuals of every C*-hyperbialgebra axiom, measured through the faithful
/// representation. The multiplicativity residual is always reported; it is
/// only required to be small when `delta_multiplicative` is set.
pub fn verify_hyperbialgebra(h: &FiniteHyperbialgebra, tol: f64) -> Checks {
    let a = &h.algebra;
    let n = h.dim();
    let basis: Vec<CVector> = (0..n).map(|i| a.basis(i)).collect();
    let mut checks = Checks::new();

    let mut assoc: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ij = a.basis_product(i, j);
            for k in 0..n {
                let lhs = a.mul(&ij, &basis[k]);
                let rhs = a.mul(&basis[i], &a.basis_product(j, k));
                assoc = assoc.max(max_abs_vec(&(lhs - rhs)));
            }
        }
    }
    checks.push(Check::within("associativity", assoc, tol));

    let mut invol: f64 = 0.0;
    let mut anti: f64 = 0.0;
    for i in 0..n {
        invol = invol.max(max_abs_vec(&(a.star(&a.star(&basis[i])) - &basis[i])));
        for j in 0..n {
            let lhs = a.star(&a.basis_product(i, j));
            let rhs = a.mul(&a.star(&basis[j]), &a.star(&basis[i]));
            anti = anti.max(max_abs_vec(&(lhs - rhs)));
        }
    }
    checks.push(Check::within("involution", invol, tol));
    checks.push(Check::within("antimultiplicative", anti, tol));

    let mut unit: f64 = 0.0;
    for b in &basis {
        unit = unit.max(max_abs_vec(&(a.mul(a.unit(), b) - b)));
        unit = unit.max(max_abs_vec(&(a.mul(b, a.unit()) - b)));
    }
    checks.push(Check::within("unit", unit, tol));

    let m = a.rep_dim();
    let rep_unit = max_abs(&(a.represent(a.unit()) - CMatrix::identity(m, m)));
    checks.push(Check::within("rep_unital", rep_unit, tol));
    let mut rep_mul: f64 = 0.0;
    let mut rep_star: f64 = 0.0;
    for i in 0..n {
        rep_star = rep_star.max(max_abs(&(a.represent(&a.star(&basis[i])) - a.rep()[i].adjoint())));
        for j in 0..n {
            let lhs = a.represent(&a.basis_product(i, j));
            rep_mul = rep_mul.max(max_abs(&(lhs - &a.rep()[i] * &a.rep()[j])));
        }
    }
    checks.push(Check::within("rep_multiplicative", rep_mul, tol));
    checks.push(Check::within("rep_star", rep_star, tol));
    let stacked = CMatrix::from_fn(m * m, n, |r, i| a.rep()[i][(r / m.max(1), r % m.max(1))]);
    let smin = if n == 0 {
        1.0
    } else {
        crate::numerics::singular_values(&stacked).last().copied().unwrap_or(0.0)
    };
    checks.push(Check::at_least("rep_injective", smin, 1e-8));

    let mut coassoc: f64 = 0.0;
    for i in 0..n {
        let di = h.coproduct_basis(i);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    // (Δ⊗id)Δ(b_i) at b_p⊗b_q⊗b_r versus (id⊗Δ)Δ(b_i)
                    let lhs: crate::numerics::C64 = (0..n).map(|j| di[(j, r)] * h.coproduct_basis(j)[(p, q)]).sum();
                    let rhs: crate::numerics::C64 = (0..n).map(|k| di[(p, k)] * h.coproduct_basis(k)[(q, r)]).sum();
                    coassoc = coassoc.max((lhs - rhs).norm());
                }
            }
        }
    }
    checks.push(Check::within("coassociativity", coassoc, tol));

    let eps = &h.coalgebra.counit;
    let mut counit_law: f64 = 0.0;
    for (i, b) in basis.iter().enumerate() {
        let di = h.coproduct_basis(i);
        counit_law = counit_law.max(max_abs_vec(&(di.transpose() * eps - b)));
        counit_law = counit_law.max(max_abs_vec(&(di * eps - b)));
    }
    checks.push(Check::within("counit_law", counit_law, tol));

    let mut character = (h.counit_of(a.unit()) - c(1.0)).norm();
    for i in 0..n {
        character = character.max((h.counit_of(&a.star(&basis[i])) - eps[i].conj()).norm());
        for j in 0..n {
            character = character.max((h.counit_of(&a.basis_product(i, j)) - eps[i] * eps[j]).norm());
        }
    }
    checks.push(Check::within("counit_character", character, tol));

    let u = a.unit();
    let unital = max_abs(&(h.coproduct_of(u) - u * u.transpose()));
    checks.push(Check::within("coproduct_unital", unital, tol));

    let star_t = |t: &CMatrix| a.star_matrix() * t.map(|z| z.conj()) * a.star_matrix().transpose();
    let mut d_star: f64 = 0.0;
    for (i, b) in basis.iter().enumerate() {
        d_star = d_star.max(max_abs(&(h.coproduct_of(&a.star(b)) - star_t(h.coproduct_basis(i)))));
    }
    checks.push(Check::within("coproduct_star", d_star, tol));

    let gram = cp_gram_matrix(h, |x| h.represent_tensor(&h.coproduct_of(x)));
    let cert = psd_certificate_unchecked(&gram, tol);
    checks.push(Check::within("coproduct_cp", cert.violation(), tol));

    let mut mult: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = h.coproduct_of(&a.basis_product(i, j));
            let rhs = h.tensor_mul(h.coproduct_basis(i), h.coproduct_basis(j));
            mult = mult.max(max_abs(&(lhs - rhs)));
        }
    }
    let mult_tol = if h.delta_multiplicative { tol } else { f64::INFINITY };
    checks.push(Check::within("coproduct_multiplicative", mult, mult_tol));

    checks
}
