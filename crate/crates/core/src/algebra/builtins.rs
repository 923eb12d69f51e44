use super::groups::{self, Table};
use super::{Coalgebra, FiniteHyperbialgebra, FiniteStarAlgebra};
use crate::error::{Error, Result};
use crate::numerics::{c, CMatrix, CVector};

/// `C(M)` for a finite monoid `M`: pointwise product, `Δf(s,t) = f(st)`,
/// counit = evaluation at the identity, diagonal representation.
///
/// Basis element `i` is the indicator function of monoid element `i`.
pub fn function_algebra(table: &Table, identity: usize) -> Result<FiniteHyperbialgebra> {
    let n = groups::validate_square(table)?;
    groups::check_associative(table)?;
    if identity >= n || !groups::is_identity(table, identity) {
        return Err(Error::NoIdentity(format!("element {identity} is not a two-sided identity")));
    }
    let labels = (0..n).map(|i| format!("d{i}")).collect();
    let mult: Vec<_> = (0..n).map(|i| (i, i, i, c(1.0))).collect();
    let rep = (0..n)
        .map(|i| {
            let mut m = CMatrix::zeros(n, n);
            m[(i, i)] = c(1.0);
            m
        })
        .collect();
    let algebra = FiniteStarAlgebra::from_triplets(
        labels,
        &mult,
        CMatrix::identity(n, n),
        CVector::from_element(n, c(1.0)),
        rep,
    )?;
    let mut coproduct = vec![CMatrix::zeros(n, n); n];
    for x in 0..n {
        for y in 0..n {
            coproduct[table[x][y]][(x, y)] += c(1.0);
        }
    }
    let mut counit = CVector::zeros(n);
    counit[identity] = c(1.0);
    FiniteHyperbialgebra::new(algebra, Coalgebra { coproduct, counit }, true)
}

/// Group algebra `ℂ[G]` with group-like basis, `b_g* = b_{g⁻¹}`, `ε ≡ 1`
/// on the basis and the left regular representation.
pub fn group_algebra(table: &Table) -> Result<FiniteHyperbialgebra> {
    let inv = groups::inverses(table)?;
    let n = table.len();
    let e = groups::find_identity(table).expect("group has identity");
    let labels = (0..n).map(|i| format!("g{i}")).collect();
    let mult: Vec<_> = (0..n).flat_map(|g| (0..n).map(move |h| (g, h))).map(|(g, h)| (g, h, table[g][h], c(1.0))).collect();
    let mut star = CMatrix::zeros(n, n);
    for g in 0..n {
        star[(inv[g], g)] = c(1.0);
    }
    let rep = (0..n)
        .map(|g| {
            let mut m = CMatrix::zeros(n, n);
            for h in 0..n {
                m[(table[g][h], h)] = c(1.0);
            }
            m
        })
        .collect();
    let mut unit = CVector::zeros(n);
    unit[e] = c(1.0);
    let algebra = FiniteStarAlgebra::from_triplets(labels, &mult, star, unit, rep)?;
    let coproduct = (0..n)
        .map(|g| {
            let mut d = CMatrix::zeros(n, n);
            d[(g, g)] = c(1.0);
            d
        })
        .collect();
    let counit = CVector::from_element(n, c(1.0));
    FiniteHyperbialgebra::new(algebra, Coalgebra { coproduct, counit }, true)
}

impl FiniteHyperbialgebra {
    pub fn with_labels<S: AsRef<str>>(mut self, labels: &[S]) -> Self {
        assert_eq!(labels.len(), self.dim(), "label count must equal dimension");
        self.algebra.labels = labels.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups::{cyclic, symmetric3};
    use crate::algebra::verify_hyperbialgebra;

    #[test]
    fn trivial_monoid() {
        let h = function_algebra(&vec![vec![0]], 0).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.coproduct_basis(0)[(0, 0)], c(1.0));
        assert_eq!(h.coalgebra.counit[0], c(1.0));
    }

    #[test]
    fn z2_coproduct_of_u() {
        let h = function_algebra(&cyclic(2), 0).unwrap();
        let d = h.coproduct_basis(1);
        // Δ(δ_u) = δ_e⊗δ_u + δ_u⊗δ_e
        assert_eq!(d[(0, 1)], c(1.0));
        assert_eq!(d[(1, 0)], c(1.0));
        assert_eq!(d[(0, 0)], c(0.0));
        assert_eq!(d[(1, 1)], c(0.0));
    }

    #[test]
    fn function_algebra_rejects_bad_tables() {
        let not_assoc = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 1]];
        assert!(matches!(function_algebra(&not_assoc, 0), Err(Error::NotAssociative(..))));
        assert!(matches!(function_algebra(&cyclic(3), 1), Err(Error::NoIdentity(_))));
    }

    #[test]
    fn s3_function_algebra_axioms() {
        let h = function_algebra(&symmetric3(), 0).unwrap();
        let report = verify_hyperbialgebra(&h, 1e-12);
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn group_algebra_small_cases() {
        let h = group_algebra(&cyclic(1)).unwrap();
        assert_eq!(h.coproduct_basis(0)[(0, 0)], c(1.0));
        let h = group_algebra(&cyclic(2)).unwrap();
        assert_eq!(h.algebra.star(&h.algebra.basis(1)), h.algebra.basis(1));
        assert_eq!(h.counit_of(&h.algebra.basis(1)), c(1.0));
        let h = group_algebra(&cyclic(3)).unwrap();
        assert!(verify_hyperbialgebra(&h, 1e-12).passed());
    }

    #[test]
    fn group_algebra_rejects_monoid() {
        let monoid = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(group_algebra(&monoid), Err(Error::NotAGroup(_))));
    }
}
