use super::GeneratorMap;
use crate::algebra::FiniteHyperbialgebra;
use crate::error::{Error, Result};
use crate::numerics::{max_abs, minimal_rank_factor, pinv, psd_certificate_unchecked, CMatrix, CVector, PsdCertificate, PSD_TOL, RANK_TOL};

/// `[ψ(b_i, b_j)]` as one `n(1+dk)`-square matrix.
#[derive(Clone, Debug)]
pub struct GeneratorKernel {
    pub matrix: CMatrix,
    pub n: usize,
    pub dk: usize,
}

impl GeneratorKernel {
    pub fn certificate(&self) -> PsdCertificate {
        psd_certificate_unchecked(&self.matrix, PSD_TOL)
    }
}

pub fn build_kernel(phi: &GeneratorMap, h: &FiniteHyperbialgebra, tol: f64) -> Result<GeneratorKernel> {
    phi.check_algebra(h)?;
    let residual = phi.reality_residual(h);
    if residual > tol {
        return Err(Error::NotReal { residual });
    }
    let a = &h.algebra;
    let n = h.dim();
    let dk = phi.dk();
    let m = 1 + dk;
    let unit = a.unit();
    let lambda_one = phi.lambda(unit);
    let stars: Vec<CVector> = (0..n).map(|i| a.star(&a.basis(i))).collect();
    let mut out = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        let si = &stars[i];
        let eps_si = h.counit_of(si);
        for j in 0..n {
            let bj = a.basis(j);
            let x = a.star_product(i, j);
            let eps_j = h.coalgebra.counit[j];
            let mut blk = CMatrix::zeros(m, m);
            blk[(0, 0)] = phi.lambda(&x) - eps_si * phi.lambda(&bj) - phi.lambda(si) * eps_j + eps_si * lambda_one * eps_j;
            let row = phi.eta_dag(&x) - phi.eta_dag(&bj) * eps_si;
            let col = phi.eta(&x) - phi.eta(si) * eps_j;
            blk.view_mut((0, 1), (1, dk)).copy_from(&row);
            blk.view_mut((1, 0), (dk, 1)).copy_from(&col);
            blk.view_mut((1, 1), (dk, dk)).copy_from(&phi.sigma(&x, h.counit_of(&x)));
            out.view_mut((i * m, j * m), (m, m)).copy_from(&blk);
        }
    }
    Ok(GeneratorKernel { matrix: out, n, dk })
}

/// Minimal Kolmogorov factorization `χ(b_i)*χ(b_j) = ψ(b_i, b_j)`.
#[derive(Clone, Debug)]
pub struct KolmogorovData {
    pub k_dim: usize,
    /// `χ(b_i)`, each `K×(1+dk)`: column 0 is `δ(b_i)`, the rest `γ(b_i)`.
    pub chi: Vec<CMatrix>,
    /// `‖δ(1)‖`, zero for a genuine generator kernel.
    pub delta_one: f64,
}

impl KolmogorovData {
    pub fn delta(&self, i: usize) -> CVector {
        self.chi[i].column(0).into_owned()
    }

    pub fn gamma(&self, i: usize) -> CMatrix {
        let cols = self.chi[i].ncols() - 1;
        self.chi[i].view((0, 1), (self.k_dim, cols)).into_owned()
    }

    fn combine(&self, x: &CVector) -> CMatrix {
        let (k, m) = (self.k_dim, self.chi.first().map(|m| m.ncols()).unwrap_or(1));
        self.chi.iter().zip(x.iter()).fold(CMatrix::zeros(k, m), |acc, (ch, xi)| acc + ch * *xi)
    }

    pub fn delta_of(&self, x: &CVector) -> CVector {
        self.combine(x).column(0).into_owned()
    }

    pub fn gamma_of(&self, x: &CVector) -> CMatrix {
        let m = self.combine(x);
        m.view((0, 1), (self.k_dim, m.ncols() - 1)).into_owned()
    }

    /// All spanning columns `χ(b_i)e_j`, side by side.
    pub fn spanning_matrix(&self) -> CMatrix {
        let m = self.chi.first().map(|m| m.ncols()).unwrap_or(0);
        let mut out = CMatrix::zeros(self.k_dim, self.chi.len() * m);
        for (i, ch) in self.chi.iter().enumerate() {
            out.view_mut((0, i * m), (self.k_dim, m)).copy_from(ch);
        }
        out
    }
}

pub fn kolmogorov_extract(kern: &GeneratorKernel, h: &FiniteHyperbialgebra) -> Result<KolmogorovData> {
    let cert = kern.certificate();
    if !cert.is_psd {
        return Err(Error::KernelNotPsd { min_eigenvalue: cert.min_eigenvalue });
    }
    let x = minimal_rank_factor(&kern.matrix, RANK_TOL).map_err(|_| Error::KernelNotPsd { min_eigenvalue: cert.min_eigenvalue })?;
    let m = 1 + kern.dk;
    let k_dim = x.nrows();
    let chi = (0..kern.n).map(|i| x.view((0, i * m), (k_dim, m)).into_owned()).collect();
    let mut data = KolmogorovData { k_dim, chi, delta_one: 0.0 };
    data.delta_one = data.delta_of(h.algebra.unit()).norm();
    Ok(data)
}

/// `ρ`, `D = γ(1)` and the consistency residual of the induced action.
#[derive(Clone, Debug)]
pub struct InducedRepresentation {
    pub rho: Vec<CMatrix>,
    pub d_op: CMatrix,
    /// Largest of the action-fit residual and the *-representation residuals.
    pub residual: f64,
}

/// Solve `ρ(b_k)[δ(b_i) γ(b_i)] = [δ(b_k b_i) − δ(b_k)ε(b_i)  γ(b_k b_i)]` over
/// all spanning columns. Returns the residual without judging it.
pub fn induce_representation_unchecked(kd: &KolmogorovData, h: &FiniteHyperbialgebra) -> InducedRepresentation {
    let a = &h.algebra;
    let n = h.dim();
    let k = kd.k_dim;
    let m = kd.chi.first().map(|m| m.ncols()).unwrap_or(1);
    let dk = m - 1;
    let x = kd.spanning_matrix();
    let x_pinv = pinv(&x);
    let mut residual: f64 = 0.0;
    let mut rho = Vec::with_capacity(n);
    for kk in 0..n {
        let mut y = CMatrix::zeros(k, n * m);
        let delta_k = kd.delta(kk);
        for i in 0..n {
            let prod = a.basis_product(kk, i);
            let d = kd.delta_of(&prod) - &delta_k * h.coalgebra.counit[i];
            y.view_mut((0, i * m), (k, 1)).copy_from(&d);
            y.view_mut((0, i * m + 1), (k, dk)).copy_from(&kd.gamma_of(&prod));
        }
        let r = &y * &x_pinv;
        residual = residual.max(max_abs(&(&r * &x - &y)));
        rho.push(r);
    }
    let rho_of = |v: &CVector| rho.iter().zip(v.iter()).fold(CMatrix::zeros(k, k), |acc, (r, z)| acc + r * *z);
    residual = residual.max(max_abs(&(rho_of(a.unit()) - CMatrix::identity(k, k))));
    for i in 0..n {
        residual = residual.max(max_abs(&(rho_of(&a.star(&a.basis(i))) - rho[i].adjoint())));
        for j in 0..n {
            residual = residual.max(max_abs(&(rho_of(&a.basis_product(i, j)) - &rho[i] * &rho[j])));
        }
    }
    let d_op = kd.gamma_of(a.unit());
    InducedRepresentation { rho, d_op, residual }
}

pub fn induce_representation(kd: &KolmogorovData, h: &FiniteHyperbialgebra, tol: f64) -> Result<InducedRepresentation> {
    let ind = induce_representation_unchecked(kd, h);
    if ind.residual > tol {
        return Err(Error::InconsistentAction { residual: ind.residual });
    }
    Ok(ind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::function_algebra;
    use crate::generator::assemble_from_tuple;
    use crate::generator::tests::poisson;
    use crate::numerics::{c, real_matrix, EQ_TOL};

    #[test]
    fn zero_generator_has_zero_kernel() {
        let h = function_algebra(&crate::algebra::groups::cyclic(2), 0).unwrap();
        let k = build_kernel(&GeneratorMap::zero(2, 0), &h, EQ_TOL).unwrap();
        assert_eq!(k.matrix, CMatrix::zeros(2, 2));
        let kd = kolmogorov_extract(&k, &h).unwrap();
        assert_eq!(kd.k_dim, 0);
        let ind = induce_representation(&kd, &h, EQ_TOL).unwrap();
        assert_eq!(ind.d_op.shape(), (0, 0));
        assert_eq!(ind.residual, 0.0);
    }

    #[test]
    fn scalar_damping_kernel_vanishes() {
        let h = function_algebra(&vec![vec![0]], 0).unwrap();
        let phi = GeneratorMap::new(1, vec![real_matrix(2, 2, &[-1.0, 0.0, 0.0, -1.0])]).unwrap();
        let k = build_kernel(&phi, &h, EQ_TOL).unwrap();
        assert!(max_abs(&k.matrix) < 1e-15);
    }

    #[test]
    fn poisson_kernel_rank_and_representation() {
        let (h, tup) = poisson(0.5);
        let phi = assemble_from_tuple(&tup, &h, 1e-12).unwrap();
        let k = build_kernel(&phi, &h, EQ_TOL).unwrap();
        assert!(k.certificate().is_psd);
        assert_eq!(crate::numerics::rank(&k.matrix, 1e-10), 1);
        let kd = kolmogorov_extract(&k, &h).unwrap();
        assert_eq!(kd.k_dim, 1);
        assert!(kd.delta_one < 1e-14);
        let ind = induce_representation(&kd, &h, EQ_TOL).unwrap();
        assert!((ind.rho[0][(0, 0)]).norm() < 1e-12);
        assert!((ind.rho[1][(0, 0)] - c(1.0)).norm() < 1e-12);
        assert!((ind.d_op[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_real_generator_rejected() {
        let h = function_algebra(&vec![vec![0]], 0).unwrap();
        let phi = GeneratorMap::new(1, vec![real_matrix(2, 2, &[-1.0, 1.0, 0.0, -1.0])]).unwrap();
        assert!(matches!(build_kernel(&phi, &h, EQ_TOL), Err(Error::NotReal { .. })));
    }
}
