//! Conditional expectations `P: A → Ã` and the sub-hyperbialgebras they cut
//! out: double cosets of a quantum subsemigroup and Delsarte fixed points.


use crate::algebra::groups::Table;
use crate::algebra::{cp_gram_matrix, Coalgebra, FiniteHyperbialgebra, FiniteStarAlgebra, Functional};
use crate::error::{Error, Result};
use crate::numerics::{c, max_abs, max_abs_vec, pinv, psd_certificate_unchecked, range_basis, CMatrix, CVector, C64};
use crate::report::{Check, Checks};

/// An idempotent map on coefficient space together with a basis of its range.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalExpectation {
    pub matrix: CMatrix,
    /// Columns span the range; kept in reduced row-echelon form.
    pub range_basis: CMatrix,
}

impl ConditionalExpectation {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        let range = echelon_basis(&range_basis(&matrix, 1e-10));
        ConditionalExpectation { matrix, range_basis: range }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(CMatrix::identity(n, n))
    }

    pub fn range_dim(&self) -> usize {
        self.range_basis.ncols()
    }

    /// Coordinates of `P(b_i)` in the range basis, one column per `i`.
    pub fn range_coordinates(&self) -> CMatrix {
        pinv(&self.range_basis) * &self.matrix
    }
}

/// Reduced row-echelon basis of the column span of `basis`.
fn echelon_basis(basis: &CMatrix) -> CMatrix {
    let mut m = basis.transpose();
    let (rows, cols) = m.shape();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let (best, best_abs) = (pivot_row..rows)
            .map(|r| (r, m[(r, col)].norm()))
            .fold((pivot_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_abs <= 1e-10 {
            continue;
        }
        m.swap_rows(pivot_row, best);
        let p = m[(pivot_row, col)];
        let row = m.row(pivot_row) / p;
        m.set_row(pivot_row, &row);
        for r in 0..rows {
            if r != pivot_row {
                let f = m[(r, col)];
                if f.norm() > 0.0 {
                    let sub = m.row(pivot_row) * f;
                    let new = m.row(r) - sub;
                    m.set_row(r, &new);
                }
            }
        }
        pivot_row += 1;
    }
    let mut out = m.rows(0, pivot_row).transpose();
    for z in out.iter_mut() {
        if z.re.abs() < 1e-13 {
            z.re = 0.0;
        }
        if z.im.abs() < 1e-13 {
            z.im = 0.0;
        }
    }
    out
}

/// Residuals for idempotence, unitality, complete positivity, the bimodule
/// property and the three coproduct intertwining identities
/// `(P⊗id)ΔP = (P⊗P)ΔP = (id⊗P)ΔP = (P⊗P)Δ`.
pub fn verify_conditional_expectation(h: &FiniteHyperbialgebra, p: &ConditionalExpectation, tol: f64) -> Checks {
    let a = &h.algebra;
    let n = h.dim();
    let pm = &p.matrix;
    let mut checks = Checks::new();

    checks.push(Check::within("idempotent", max_abs(&(pm * pm - pm)), tol));
    checks.push(Check::within("unital", max_abs_vec(&(pm * a.unit() - a.unit())), tol));

    let gram = cp_gram_matrix(h, |x| a.represent(&(pm * x)));
    checks.push(Check::within("completely_positive", psd_certificate_unchecked(&gram, tol).violation(), tol));

    let mut bimodule: f64 = 0.0;
    for r in p.range_basis.column_iter() {
        let r = r.into_owned();
        for i in 0..n {
            let x = a.basis(i);
            let px = pm * &x;
            bimodule = bimodule.max(max_abs_vec(&(pm * a.mul(&r, &x) - a.mul(&r, &px))));
            bimodule = bimodule.max(max_abs_vec(&(pm * a.mul(&x, &r) - a.mul(&px, &r))));
        }
    }
    checks.push(Check::within("bimodule", bimodule, tol));

    let (mut left, mut both, mut right) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..n {
        let target = pm * h.coproduct_basis(i) * pm.transpose();
        let dp = h.coproduct_of(&pm.column(i).into_owned());
        left = left.max(max_abs(&(pm * &dp - &target)));
        both = both.max(max_abs(&(pm * &dp * pm.transpose() - &target)));
        right = right.max(max_abs(&(&dp * pm.transpose() - &target)));
    }
    checks.push(Check::within("p_id_delta_p", left, tol));
    checks.push(Check::within("p_p_delta_p", both, tol));
    checks.push(Check::within("id_p_delta_p", right, tol));
    checks
}

/// `max_i |ε(P b_i) − ε(b_i)|`.
pub fn counit_invariance_residual(h: &FiniteHyperbialgebra, p: &ConditionalExpectation) -> f64 {
    let eps = &h.coalgebra.counit;
    max_abs_vec(&(p.matrix.transpose() * eps - eps))
}

/// The hyperbialgebra on the range of `P`, with maps between coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub hyper: FiniteHyperbialgebra,
    /// `n×r`: coordinates on the range basis to coefficients in `A`.
    pub inclusion: CMatrix,
    /// `r×n`: `a ↦` coordinates of `P(a)`.
    pub compression: CMatrix,
    pub multiplicativity_residual: f64,
}

pub fn quotient_hyperbialgebra(h: &FiniteHyperbialgebra, p: &ConditionalExpectation, tol: f64) -> Result<Quotient> {
    let report = verify_conditional_expectation(h, p, tol);
    if !report.passed() {
        let names: Vec<_> = report.failures().iter().map(|f| f.name.clone()).collect();
        return Err(Error::ExpectationInvalid(format!("failed checks: {}", names.join(", "))));
    }
    let a = &h.algebra;
    let basis = &p.range_basis;
    let r = basis.ncols();
    let coords = pinv(basis);
    let elems: Vec<CVector> = basis.column_iter().map(|x| x.into_owned()).collect();

    let mut left_mult = vec![CMatrix::zeros(r, r); r];
    for (al, x) in elems.iter().enumerate() {
        for (be, y) in elems.iter().enumerate() {
            left_mult[al].set_column(be, &(&coords * a.mul(x, y)));
        }
    }
    let mut star = CMatrix::zeros(r, r);
    for (al, x) in elems.iter().enumerate() {
        star.set_column(al, &(&coords * a.star(x)));
    }
    let unit = &coords * a.unit();
    let rep = elems.iter().map(|x| a.represent(x)).collect();
    let labels = (0..r).map(|i| format!("r{i}")).collect();
    let algebra = FiniteStarAlgebra::from_left_mult(labels, left_mult, star, unit, rep)?;

    let pm = &p.matrix;
    let coproduct =
        elems.iter().map(|x| &coords * (pm * h.coproduct_of(x) * pm.transpose()) * coords.transpose()).collect();
    let counit = CVector::from_iterator(r, elems.iter().map(|x| h.counit_of(x)));
    let mut hyper = FiniteHyperbialgebra::new(algebra, Coalgebra { coproduct, counit }, false)?;
    let mult = crate::algebra::verify_hyperbialgebra(&hyper, tol).residual("coproduct_multiplicative");
    hyper.delta_multiplicative = mult <= tol;
    Ok(Quotient { hyper, inclusion: basis.clone(), compression: p.range_coordinates(), multiplicativity_residual: mult })
}

/// A linear map `π: A₁ → A₂` (`n₂×n₁`) claimed to be a surjective unital
/// *-homomorphism intertwining coproducts and counits.
#[derive(Clone, Debug)]
pub struct BialgebraMorphism {
    pub matrix: CMatrix,
}

impl BialgebraMorphism {
    pub fn validate(&self, h1: &FiniteHyperbialgebra, h2: &FiniteHyperbialgebra, tol: f64) -> Result<()> {
        let pi = &self.matrix;
        let (n1, n2) = (h1.dim(), h2.dim());
        if pi.shape() != (n2, n1) {
            return Err(Error::NotMorphism(format!("matrix is {}x{}, expected {n2}x{n1}", pi.nrows(), pi.ncols())));
        }
        let fail = |what: &str, r: f64| Err(Error::NotMorphism(format!("{what} residual {r:.3e}")));
        let unital = max_abs_vec(&(pi * h1.algebra.unit() - h2.algebra.unit()));
        if unital > tol {
            return fail("unital", unital);
        }
        let (mut mult, mut star, mut co) = (0.0_f64, 0.0_f64, 0.0_f64);
        for i in 0..n1 {
            let bi = h1.algebra.basis(i);
            let pi_i = pi.column(i).into_owned();
            star = star.max(max_abs_vec(&(pi * h1.algebra.star(&bi) - h2.algebra.star(&pi_i))));
            co = co.max(max_abs(&(pi * h1.coproduct_basis(i) * pi.transpose() - h2.coproduct_of(&pi_i))));
            for j in 0..n1 {
                let lhs = pi * h1.algebra.basis_product(i, j);
                let rhs = h2.algebra.mul(&pi_i, &pi.column(j).into_owned());
                mult = mult.max(max_abs_vec(&(lhs - rhs)));
            }
        }
        for (what, r) in [("multiplicative", mult), ("star", star), ("coproduct", co)] {
            if r > tol {
                return fail(what, r);
            }
        }
        let counit = max_abs_vec(&(pi.transpose() * &h2.coalgebra.counit - &h1.coalgebra.counit));
        if counit > tol {
            return fail("counit", counit);
        }
        if crate::numerics::rank(pi, 1e-10) != n2 {
            return Err(Error::NotMorphism("not surjective".into()));
        }
        Ok(())
    }
}

/// Residual of the Haar property `(μ⊗id)Δ(a) = μ(a)1`, together with
/// `μ(1) = 1` and positivity of `μ`.
pub fn haar_residual(h: &FiniteHyperbialgebra, mu: &Functional) -> f64 {
    let mut r = (mu.eval(h.algebra.unit()) - c(1.0)).norm();
    for i in 0..h.dim() {
        let lhs = h.coproduct_basis(i).transpose() * &mu.0;
        r = r.max(max_abs_vec(&(lhs - h.algebra.unit() * mu.0[i])));
    }
    let cert = crate::algebra::is_positive_functional(mu, h, 1e-9);
    r.max(cert.violation())
}

/// `P(a) = ((μ∘π) ⊗ id ⊗ (μ∘π))(Δ⊗id)Δ(a)`, with the range checked against
/// the left and right coset conditions.
pub fn double_coset_expectation(
    h1: &FiniteHyperbialgebra,
    h2: &FiniteHyperbialgebra,
    pi: &BialgebraMorphism,
    mu: &Functional,
    tol: f64,
) -> Result<(ConditionalExpectation, Checks)> {
    pi.validate(h1, h2, tol)?;
    let residual = haar_residual(h2, mu);
    if residual > tol {
        return Err(Error::NotHaar { residual });
    }
    let n = h1.dim();
    let nu = pi.matrix.transpose() * &mu.0;
    let mut p = CMatrix::zeros(n, n);
    for i in 0..n {
        let weights = h1.coproduct_basis(i) * &nu;
        let mut col = CVector::zeros(n);
        for (j, w) in weights.iter().enumerate() {
            if w.norm() > 0.0 {
                col += (h1.coproduct_basis(j).transpose() * &nu) * *w;
            }
        }
        p.set_column(i, &col);
    }
    let e = ConditionalExpectation::from_matrix(p);

    let one2 = h2.algebra.unit();
    let (mut left, mut right) = (0.0_f64, 0.0_f64);
    for x in e.range_basis.column_iter() {
        let x = x.into_owned();
        let d = h1.coproduct_of(&x);
        left = left.max(max_abs(&(&d * pi.matrix.transpose() - &x * one2.transpose())));
        right = right.max(max_abs(&(&pi.matrix * &d - one2 * x.transpose())));
    }
    let mut notes = Checks::new();
    notes.push(Check::within("left_coset", left, tol));
    notes.push(Check::within("right_coset", right, tol));
    Ok((e, notes))
}

/// Double-coset expectation on `C(G)` for a subgroup `H`, with `π` the
/// restriction to `C(H)` and `μ` the uniform Haar state.
pub fn subgroup_double_coset(
    table: &Table,
    subgroup: &[usize],
    tol: f64,
) -> Result<(FiniteHyperbialgebra, ConditionalExpectation, Checks)> {
    let e = crate::algebra::groups::find_identity(table)
        .ok_or_else(|| Error::NoIdentity("group table has no identity".into()))?;
    let h1 = crate::algebra::function_algebra(table, e)?;
    let sub_table = crate::algebra::groups::subgroup_table(table, subgroup)?;
    let sub_e = crate::algebra::groups::find_identity(&sub_table).expect("subgroup contains the identity");
    let h2 = crate::algebra::function_algebra(&sub_table, sub_e)?;
    let pi = restriction_morphism(table.len(), subgroup);
    let m = subgroup.len();
    let mu = Functional(CVector::from_element(m, c(1.0 / m as f64)));
    let (p, notes) = double_coset_expectation(&h1, &h2, &pi, &mu, tol)?;
    Ok((h1, p, notes))
}

/// A finite group acting by coefficient-space matrices, one per element.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group_table: Table,
    pub automorphisms: Vec<CMatrix>,
}

impl GroupAction {
    pub fn validate(&self, h: &FiniteHyperbialgebra, tol: f64) -> Result<()> {
        let g = self.group_table.len();
        crate::algebra::groups::inverses(&self.group_table).map_err(|e| Error::NotAnAction(e.to_string()))?;
        let n = h.dim();
        if self.automorphisms.len() != g || self.automorphisms.iter().any(|m| m.shape() != (n, n)) {
            return Err(Error::NotAnAction("one n×n matrix per group element required".into()));
        }
        let fail = |what: String| Err(Error::NotAnAction(what));
        for x in 0..g {
            for y in 0..g {
                let r = max_abs(&(&self.automorphisms[x] * &self.automorphisms[y] - &self.automorphisms[self.group_table[x][y]]));
                if r > tol {
                    return fail(format!("not a homomorphism at ({x},{y}): {r:.3e}"));
                }
            }
        }
        let a = &h.algebra;
        for (k, gam) in self.automorphisms.iter().enumerate() {
            let mut res = max_abs_vec(&(gam * a.unit() - a.unit()));
            res = res.max(max_abs_vec(&(gam.transpose() * &h.coalgebra.counit - &h.coalgebra.counit)));
            for i in 0..n {
                let bi = a.basis(i);
                let gi = gam.column(i).into_owned();
                res = res.max(max_abs_vec(&(gam * a.star(&bi) - a.star(&gi))));
                res = res.max(max_abs(&(gam * h.coproduct_basis(i) * gam.transpose() - h.coproduct_of(&gi))));
                for j in 0..n {
                    let lhs = gam * a.basis_product(i, j);
                    res = res.max(max_abs_vec(&(lhs - a.mul(&gi, &gam.column(j).into_owned()))));
                }
            }
            if res > tol {
                return fail(format!("element {k} is not a bialgebra automorphism: {res:.3e}"));
            }
        }
        Ok(())
    }
}

/// `P = |Γ|⁻¹ Σ_γ γ`, projecting onto the fixed-point subalgebra.
pub fn delsarte_expectation(h: &FiniteHyperbialgebra, action: &GroupAction, tol: f64) -> Result<ConditionalExpectation> {
    action.validate(h, tol)?;
    let n = h.dim();
    let sum = action.automorphisms.iter().fold(CMatrix::zeros(n, n), |acc, m| acc + m);
    Ok(ConditionalExpectation::from_matrix(sum * C64::new(1.0 / action.automorphisms.len() as f64, 0.0)))
}

/// `C(G) → C(H)` restriction for a subgroup `H`, with `C(H)` indexed in the
/// order of `subgroup`.
pub fn restriction_morphism(group_size: usize, subgroup: &[usize]) -> BialgebraMorphism {
    let mut m = CMatrix::zeros(subgroup.len(), group_size);
    for (r, &g) in subgroup.iter().enumerate() {
        m[(r, g)] = c(1.0);
    }
    BialgebraMorphism { matrix: m }
}

/// Group-inversion action of `Z2` on `ℂ[G]`.
pub fn inversion_action(table: &Table) -> Result<GroupAction> {
    let inv = crate::algebra::groups::inverses(table)?;
    let n = table.len();
    let mut gamma = CMatrix::zeros(n, n);
    for (g, &gi) in inv.iter().enumerate() {
        gamma[(gi, g)] = c(1.0);
    }
    Ok(GroupAction { group_table: crate::algebra::groups::cyclic(2), automorphisms: vec![CMatrix::identity(n, n), gamma] })
}
