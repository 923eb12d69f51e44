//! Matrix elements `⟨ε(f), l_t(a) ε(g)⟩` of the cocycle generated by `φ`,
//! for step functions `f, g`, via piecewise matrix exponentials.
//!
//! [`weak_evolution`] returns the normalized functional
//! `F_t(a) = ⟨ε(f), l_t(a) ε(g)⟩ / ⟨ε(f), ε(g)⟩`, which starts at `ε` and
//! solves `F_t' = F_t ∘ G_{f(t), g(t)}`. [`matrix_element`] restores the
//! normalization.

use crate::algebra::{conv_exp, FiniteHyperbialgebra, Functional, LinearMapOnAlgebra};
use crate::error::{Error, Result};
use crate::generator::{markov_generator, GeneratorMap};
use crate::numerics::{c, matrix_exp, max_abs_vec, psd_certificate_unchecked, CMatrix, CVector, PsdCertificate, C64, PSD_TOL};
use crate::report::{Check, Checks};

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    pub value: CVector,
}

/// Piecewise-constant `ℂ^dim`-valued function with compact support.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    dim: usize,
    segments: Vec<Segment>,
}

impl StepFunction {
    pub fn new(dim: usize, mut segments: Vec<Segment>) -> Result<Self> {
        segments.sort_by(|a, b| a.t0.total_cmp(&b.t0));
        for s in &segments {
            if !(s.t0 >= 0.0 && s.t0 < s.t1 && s.t1.is_finite()) {
                return Err(Error::InvalidInput(format!("bad segment [{}, {})", s.t0, s.t1)));
            }
            if s.value.len() != dim {
                return Err(Error::DimensionMismatch(format!("segment value has length {}, expected {dim}", s.value.len())));
            }
            if s.value.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("non-finite step function value".into()));
            }
        }
        if segments.windows(2).any(|w| w[0].t1 > w[1].t0) {
            return Err(Error::InvalidInput("overlapping segments".into()));
        }
        Ok(StepFunction { dim, segments })
    }

    pub fn zero(dim: usize) -> Self {
        StepFunction { dim, segments: Vec::new() }
    }

    /// `value · 1_[t0, t1)`.
    pub fn indicator(value: CVector, t0: f64, t1: f64) -> Result<Self> {
        StepFunction::new(value.len(), vec![Segment { t0, t1, value }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn value_at(&self, t: f64) -> CVector {
        self.segments
            .iter()
            .find(|s| s.t0 <= t && t < s.t1)
            .map(|s| s.value.clone())
            .unwrap_or_else(|| CVector::zeros(self.dim))
    }

    /// End of the support (0 for the zero function).
    pub fn support_end(&self) -> f64 {
        self.segments.last().map(|s| s.t1).unwrap_or(0.0)
    }

    fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().flat_map(|s| [s.t0, s.t1])
    }

    /// `t ↦ f(t + s)` restricted to `t ≥ 0`.
    pub fn shift_left(&self, s: f64) -> StepFunction {
        let segments = self
            .segments
            .iter()
            .filter(|seg| seg.t1 > s)
            .map(|seg| Segment { t0: (seg.t0 - s).max(0.0), t1: seg.t1 - s, value: seg.value.clone() })
            .collect();
        StepFunction { dim: self.dim, segments }
    }

    /// Zero-pad values into `ℂ^total` starting at coordinate `offset`.
    pub fn embed(&self, offset: usize, total: usize) -> Result<StepFunction> {
        if offset + self.dim > total {
            return Err(Error::DimensionMismatch(format!("cannot place ℂ^{} at offset {offset} in ℂ^{total}", self.dim)));
        }
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let mut v = CVector::zeros(total);
                v.rows_mut(offset, self.dim).copy_from(&s.value);
                Segment { value: v, ..s.clone() }
            })
            .collect();
        Ok(StepFunction { dim: total, segments })
    }

    /// Coordinates `offset..offset+len` of every value.
    pub fn component(&self, offset: usize, len: usize) -> Result<StepFunction> {
        if offset + len > self.dim {
            return Err(Error::DimensionMismatch(format!("component {offset}+{len} exceeds ℂ^{}", self.dim)));
        }
        let segments = self
            .segments
            .iter()
            .map(|s| Segment { value: s.value.rows(offset, len).into_owned(), ..s.clone() })
            .collect();
        Ok(StepFunction { dim: len, segments })
    }
}

/// Sorted distinct breakpoints of `f` and `g` inside `[from, to]`, with the
/// endpoints included.
fn refinement(f: &StepFunction, g: &StepFunction, from: f64, to: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = f.breakpoints().chain(g.breakpoints()).filter(|&p| p > from && p < to).collect();
    pts.push(from);
    pts.push(to);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `exp ∫_{from}^{to} ⟨f(s), g(s)⟩ ds`; `to` may be infinite.
pub fn exp_inner(f: &StepFunction, g: &StepFunction, from: f64, to: f64) -> C64 {
    let to = to.min(f.support_end().max(g.support_end()).max(from));
    let pts = refinement(f, g, from, to);
    let integral: C64 = pts
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            f.value_at(mid).dotc(&g.value_at(mid)) * c(w[1] - w[0])
        })
        .sum();
    integral.exp()
}

/// Which tensor leg of `Δa` the noise functional is applied to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LegConvention {
    /// `G(a) = (id ⊗ ω)(Δa)`; the increment property holds with this choice.
    #[default]
    Second,
    /// `G(a) = (ω ⊗ id)(Δa)`; kept for comparison only.
    First,
}

/// `ω(x) = ⟨ĉ, φ(x) d̂⟩` on the basis, `ĉ = (1, c)`.
fn noise_functional(phi: &GeneratorMap, cv: &CVector, dv: &CVector) -> Result<CVector> {
    let dk = phi.dk();
    if cv.len() != dk || dv.len() != dk {
        return Err(Error::DimensionMismatch(format!("noise vectors must have length {dk}")));
    }
    let mut ch = CVector::zeros(1 + dk);
    ch[0] = c(1.0);
    ch.rows_mut(1, dk).copy_from(cv);
    let mut dh = CVector::zeros(1 + dk);
    dh[0] = c(1.0);
    dh.rows_mut(1, dk).copy_from(dv);
    Ok(CVector::from_iterator(phi.dim(), phi.blocks.iter().map(|b| ch.dotc(&(b * &dh)))))
}

pub fn compressed_generator_with_leg(
    phi: &GeneratorMap,
    cv: &CVector,
    dv: &CVector,
    h: &FiniteHyperbialgebra,
    leg: LegConvention,
) -> Result<LinearMapOnAlgebra> {
    phi.check_algebra(h)?;
    let omega = noise_functional(phi, cv, dv)?;
    let n = h.dim();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let d = h.coproduct_basis(i);
        let col = match leg {
            LegConvention::Second => d * &omega,
            LegConvention::First => d.transpose() * &omega,
        };
        m.set_column(i, &col);
    }
    Ok(LinearMapOnAlgebra { matrix: m })
}

/// `G_{c,d}(a) = (id ⊗ ω_{c,d})(Δa)`.
pub fn compressed_generator(
    phi: &GeneratorMap,
    cv: &CVector,
    dv: &CVector,
    h: &FiniteHyperbialgebra,
) -> Result<LinearMapOnAlgebra> {
    compressed_generator_with_leg(phi, cv, dv, h, LegConvention::Second)
}

fn check_noise(phi: &GeneratorMap, f: &StepFunction, g: &StepFunction) -> Result<()> {
    if f.dim() != phi.dk() || g.dim() != phi.dk() {
        return Err(Error::DimensionMismatch(format!(
            "step functions live in ℂ^{} and ℂ^{}, noise dimension is {}",
            f.dim(),
            g.dim(),
            phi.dk()
        )));
    }
    Ok(())
}

pub fn weak_evolution_with_leg(
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
    h: &FiniteHyperbialgebra,
    leg: LegConvention,
) -> Result<Functional> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be nonnegative, got {t}")));
    }
    check_noise(phi, f, g)?;
    let mut row = h.coalgebra.counit.transpose();
    for w in refinement(f, g, 0.0, t).windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let gen = compressed_generator_with_leg(phi, &f.value_at(mid), &g.value_at(mid), h, leg)?;
        row = row * matrix_exp(&(gen.matrix * c(w[1] - w[0])));
    }
    Ok(Functional(row.transpose()))
}

/// Normalized `F_t`, earliest interval applied first.
pub fn weak_evolution(
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
    h: &FiniteHyperbialgebra,
) -> Result<Functional> {
    weak_evolution_with_leg(phi, f, g, t, h, LegConvention::Second)
}

/// `⟨ε(f), l_t(x) ε(g)⟩`.
pub fn matrix_element(
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
    x: &CVector,
    h: &FiniteHyperbialgebra,
) -> Result<C64> {
    Ok(weak_evolution(phi, f, g, t, h)?.eval(x) * exp_inner(f, g, 0.0, f64::INFINITY))
}

#[derive(Clone, Debug)]
pub struct WeakTrajectory {
    pub times: Vec<f64>,
    pub functionals: Vec<Functional>,
}

pub fn trajectory(
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    times: &[f64],
    h: &FiniteHyperbialgebra,
) -> Result<WeakTrajectory> {
    let functionals = times.iter().map(|&t| weak_evolution(phi, f, g, t, h)).collect::<Result<_>>()?;
    Ok(WeakTrajectory { times: times.to_vec(), functionals })
}

pub fn convolution_increment_residual(
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    s: f64,
    t: f64,
    h: &FiniteHyperbialgebra,
    leg: LegConvention,
) -> Result<f64> {
    let whole = weak_evolution_with_leg(phi, f, g, s + t, h, leg)?;
    let early = weak_evolution_with_leg(phi, f, g, s, h, leg)?;
    let late = weak_evolution_with_leg(phi, &f.shift_left(s), &g.shift_left(s), t, h, leg)?;
    let n = h.dim();
    let split = CVector::from_iterator(n, (0..n).map(|i| (early.0.transpose() * h.coproduct_basis(i) * &late.0)[(0, 0)]));
    Ok(max_abs_vec(&(whole.0 - split)))
}

/// `F_{s+t}(b_i) = Σ Δ_i[j,k] F_s(b_j) F'_t(b_k)` with `F'` driven by the
/// shifted step functions.
pub fn check_convolution_increment(
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    s: f64,
    t: f64,
    h: &FiniteHyperbialgebra,
    tol: f64,
) -> Result<Checks> {
    let r = convolution_increment_residual(phi, f, g, s, t, h, LegConvention::Second)?;
    let mut checks = Checks::new();
    checks.push(Check::within("increment", r, tol));
    Ok(checks)
}

/// `[⟨ε(f_i), l_t(a_i* a_j) ε(f_j)⟩]`.
pub fn process_gram_matrix(
    phi: &GeneratorMap,
    t: f64,
    fs: &[StepFunction],
    elems: &[CVector],
    h: &FiniteHyperbialgebra,
) -> Result<CMatrix> {
    if fs.len() != elems.len() {
        return Err(Error::DimensionMismatch("one algebra element per step function".into()));
    }
    let m = fs.len();
    let stars: Vec<CVector> = elems.iter().map(|a| h.algebra.star(a)).collect();
    let mut out = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let x = h.algebra.mul(&stars[i], &elems[j]);
            out[(i, j)] = matrix_element(phi, &fs[i], &fs[j], t, &x, h)?;
        }
    }
    Ok(out)
}

pub fn gram_positivity(
    phi: &GeneratorMap,
    t: f64,
    fs: &[StepFunction],
    elems: &[CVector],
    h: &FiniteHyperbialgebra,
) -> Result<PsdCertificate> {
    Ok(psd_certificate_unchecked(&process_gram_matrix(phi, t, fs, elems, h)?, PSD_TOL))
}

/// `[⟨ε(f_i), (1 − l_t(1)) ε(f_j)⟩]`.
pub fn contractivity_matrix(phi: &GeneratorMap, t: f64, fs: &[StepFunction], h: &FiniteHyperbialgebra) -> Result<CMatrix> {
    let m = fs.len();
    let unit = h.algebra.unit();
    let mut out = CMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let full = exp_inner(&fs[i], &fs[j], 0.0, f64::INFINITY);
            out[(i, j)] = full - matrix_element(phi, &fs[i], &fs[j], t, unit, h)?;
        }
    }
    Ok(out)
}

pub fn contractivity_gram(phi: &GeneratorMap, t: f64, fs: &[StepFunction], h: &FiniteHyperbialgebra) -> Result<PsdCertificate> {
    Ok(psd_certificate_unchecked(&contractivity_matrix(phi, t, fs, h)?, PSD_TOL))
}

/// `F^{ψ}` with zero-padded step functions against `F^{φ}`.
pub fn dilation_process_check(
    psi: &GeneratorMap,
    phi: &GeneratorMap,
    f0: &StepFunction,
    g0: &StepFunction,
    t: f64,
    h: &FiniteHyperbialgebra,
    tol: f64,
) -> Result<Checks> {
    if psi.dk() < phi.dk() {
        return Err(Error::DimensionMismatch(format!("dilation noise {} is smaller than {}", psi.dk(), phi.dk())));
    }
    let big = weak_evolution(psi, &f0.embed(0, psi.dk())?, &g0.embed(0, psi.dk())?, t, h)?;
    let small = weak_evolution(phi, f0, g0, t, h)?;
    let mut checks = Checks::new();
    checks.push(Check::within("dilation_process", max_abs_vec(&(big.0 - small.0)), tol));
    Ok(checks)
}

/// For `ψ = diag(φ, −εI₁)` on `k₀ ⊕ k₁`:
/// `⟨ε(f), k_t(a) ε(g)⟩ = ⟨ε(f₀), l_t(a) ε(g₀)⟩ · exp ∫_t^T ⟨f₁, g₁⟩`.
#[allow(clippy::too_many_arguments)]
pub fn stinespring_process_check(
    psi: &GeneratorMap,
    phi: &GeneratorMap,
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
    horizon: f64,
    h: &FiniteHyperbialgebra,
    tol: f64,
) -> Result<Checks> {
    let (dk0, dk) = (phi.dk(), psi.dk());
    if dk < dk0 {
        return Err(Error::DimensionMismatch(format!("ψ noise {dk} is smaller than φ noise {dk0}")));
    }
    if f.support_end().max(g.support_end()) > horizon {
        return Err(Error::InvalidInput(format!("step functions extend beyond the horizon {horizon}")));
    }
    let (f0, f1) = (f.component(0, dk0)?, f.component(dk0, dk - dk0)?);
    let (g0, g1) = (g.component(0, dk0)?, g.component(dk0, dk - dk0)?);
    let factor = exp_inner(&f1, &g1, t, horizon);
    let mut worst: f64 = 0.0;
    for i in 0..h.dim() {
        let b = h.algebra.basis(i);
        let lhs = matrix_element(psi, f, g, t, &b, h)?;
        let rhs = matrix_element(phi, &f0, &g0, t, &b, h)? * factor;
        worst = worst.max((lhs - rhs).norm());
    }
    let mut checks = Checks::new();
    checks.push(Check::within("stinespring_process", worst, tol));
    Ok(checks)
}

/// Vacuum matrix elements against the convolution semigroup of `λ`.
pub fn semigroup_consistency(phi: &GeneratorMap, times: &[f64], h: &FiniteHyperbialgebra, tol: f64) -> Result<Checks> {
    let zero = StepFunction::zero(phi.dk());
    let lambda = markov_generator(phi);
    let mut worst: f64 = 0.0;
    for &t in times {
        let weak = weak_evolution(phi, &zero, &zero, t, h)?;
        let semigroup = conv_exp(&lambda, t, h)?;
        worst = worst.max(max_abs_vec(&(weak.0 - semigroup.0)));
    }
    let mut checks = Checks::new();
    checks.push(Check::within("semigroup", worst, tol));
    Ok(checks)
}
