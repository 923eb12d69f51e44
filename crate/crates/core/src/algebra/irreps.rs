use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::{c, hermitian_eigen, identity, kron, null_space, CMatrix, C64};

/// Basis of the commutant `{X : π_i X = X π_i ∀i}` as matrices.
pub fn commutant_basis(mats: &[CMatrix], tol: f64) -> Vec<CMatrix> {
    let m = mats.first().map(|x| x.nrows()).unwrap_or(0);
    if m == 0 {
        return Vec::new();
    }
    let id = identity(m);
    // vec(AX − XA) = (I⊗A − Aᵀ⊗I) vec(X) with column-major vec
    let mut stacked = CMatrix::zeros(mats.len() * m * m, m * m);
    for (i, a) in mats.iter().enumerate() {
        let block = kron(&id, a) - kron(&a.transpose(), &id);
        stacked.view_mut((i * m * m, 0), (m * m, m * m)).copy_from(&block);
    }
    let ns = null_space(&stacked, tol);
    (0..ns.ncols()).map(|k| CMatrix::from_column_slice(m, m, ns.column(k).as_slice())).collect()
}

/// Inequivalent irreducible subrepresentations of the *-representation
/// generated by `mats`, each returned as the list of restricted matrices.
///
/// A generic Hermitian element of the commutant splits the space into
/// irreducible invariant subspaces; copies are then identified by their
/// character. The random element is drawn from a fixed seed.
pub fn irreducible_representations(mats: &[CMatrix], tol: f64) -> Vec<Vec<CMatrix>> {
    let basis = commutant_basis(mats, tol);
    let m = mats.first().map(|x| x.nrows()).unwrap_or(0);
    if m == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1eed);
    let mut herm = CMatrix::zeros(m, m);
    for x in &basis {
        let w = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        herm += x * w;
    }
    herm = (&herm + herm.adjoint()) * c(0.5);
    let eig = hermitian_eigen(&herm);
    let scale = eig.values.iter().fold(1.0_f64, |s, v| s.max(v.abs()));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..m {
        match groups.last_mut() {
            Some(g) if (eig.values[g[0]] - eig.values[k]).abs() <= 1e-7 * scale => g.push(k),
            _ => groups.push(vec![k]),
        }
    }

    let mut out: Vec<Vec<CMatrix>> = Vec::new();
    let mut characters: Vec<Vec<C64>> = Vec::new();
    for g in groups {
        let v = CMatrix::from_fn(m, g.len(), |i, j| eig.vectors[(i, g[j])]);
        let restricted: Vec<CMatrix> = mats.iter().map(|a| v.adjoint() * a * &v).collect();
        let chi: Vec<C64> = restricted.iter().map(|r| r.trace()).collect();
        let seen = characters.iter().any(|other| {
            other.len() == chi.len() && other.iter().zip(&chi).all(|(a, b)| (a - b).norm() <= 1e-6)
        });
        if !seen {
            characters.push(chi);
            out.push(restricted);
        }
    }
    out
}
