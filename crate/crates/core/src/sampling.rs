//! Seeded random inputs for the property suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{irreducible_representations, FiniteHyperbialgebra};
use crate::focksim::{Segment, StepFunction};
use crate::generator::GeneratorTuple;
use crate::numerics::{c, direct_sum, op_norm, psd_sqrt, rank, CMatrix, CVector, C64};

fn normal<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

pub fn random_vector<R: Rng>(n: usize, rng: &mut R) -> CVector {
    CVector::from_fn(n, |_, _| normal(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` pushed into `Q`.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let qr = random_matrix(n, n, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / c(d.norm()) } else { c(1.0) };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

/// Random matrix rescaled to operator norm `norm`.
pub fn random_contraction<R: Rng>(rows: usize, cols: usize, norm: f64, rng: &mut R) -> CMatrix {
    let m = random_matrix(rows, cols, rng);
    let n = op_norm(&m);
    if n == 0.0 {
        m
    } else {
        m * c(norm / n)
    }
}

/// A direct sum of randomly chosen irreducible representations of total
/// dimension at most `k_max`, conjugated by a random unitary.
pub fn random_representation<R: Rng>(h: &FiniteHyperbialgebra, k_max: usize, rng: &mut R) -> Vec<CMatrix> {
    let irreps = irreducible_representations(h.algebra.rep(), 1e-10);
    let target = rng.gen_range(0..=k_max);
    let mut chosen: Vec<&Vec<CMatrix>> = Vec::new();
    let mut dim = 0;
    for _ in 0..4 * k_max.max(1) {
        let pick = &irreps[rng.gen_range(0..irreps.len())];
        let d = pick[0].nrows();
        if dim + d <= target {
            chosen.push(pick);
            dim += d;
        }
        if dim == target {
            break;
        }
    }
    let u = random_unitary(dim, rng);
    (0..h.dim())
        .map(|i| {
            let blocks: Vec<&CMatrix> = chosen.iter().map(|irrep| &irrep[i]).collect();
            let sum = if blocks.is_empty() { CMatrix::zeros(0, 0) } else { direct_sum(&blocks) };
            &u * sum * u.adjoint()
        })
        .collect()
}

/// A valid tuple with `K ≤ k_max`, `‖D‖ < 1` and `‖e‖² ≤ −t`. The tuple
/// need not be minimal; see [`expected_minimal_k`].
pub fn random_tuple<R: Rng>(h: &FiniteHyperbialgebra, dk: usize, k_max: usize, rng: &mut R) -> GeneratorTuple {
    let rho = random_representation(h, k_max, rng);
    let k = rho.first().map(|r| r.nrows()).unwrap_or(0);
    let d_op = random_contraction(k, dk, rng.gen_range(0.1..0.95), rng);
    let xi = random_vector(k, rng);
    let e = random_vector(dk, rng) * c(rng.gen_range(0.0..1.0));
    let t = -e.norm_squared() - rng.gen_range(0.0..1.0);
    let root = psd_sqrt(&(CMatrix::identity(dk, dk) - d_op.adjoint() * &d_op)).expect("strict contraction");
    let d = root * &e;
    GeneratorTuple { k_dim: k, rho, d_op, xi, d, e, t }
}

/// Dimension of the span of `δ(b_i)` and `ρ(b_i)D`, i.e. the `K` of the
/// minimal equivalent tuple.
pub fn expected_minimal_k(tup: &GeneratorTuple, h: &FiniteHyperbialgebra) -> usize {
    let (k, dk, n) = (tup.k_dim, tup.dk(), h.dim());
    let mut span = CMatrix::zeros(k, n * (1 + dk));
    for i in 0..n {
        let x = h.algebra.basis(i);
        span.view_mut((0, i * (1 + dk)), (k, 1)).copy_from(&tup.delta(h, &x));
        span.view_mut((0, i * (1 + dk) + 1), (k, dk)).copy_from(&(&tup.rho[i] * &tup.d_op));
    }
    rank(&span, 1e-9)
}

/// Up to `max_segments` segments with breakpoints in `[0, horizon]` and
/// entries of modulus at most about `scale`.
pub fn random_step_function<R: Rng>(dim: usize, horizon: f64, max_segments: usize, scale: f64, rng: &mut R) -> StepFunction {
    let count = rng.gen_range(1..=max_segments.max(1));
    let mut cuts: Vec<f64> = (0..=count).map(|_| rng.gen_range(0.0..horizon)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let segments = cuts
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Segment { t0: w[0], t1: w[1], value: random_vector(dim, rng) * c(scale) })
        .collect();
    StepFunction::new(dim, segments).expect("sorted disjoint segments")
}

/// Random coefficient vector in `A`.
pub fn random_element<R: Rng>(h: &FiniteHyperbialgebra, rng: &mut R) -> CVector {
    random_vector(h.dim(), rng)
}
