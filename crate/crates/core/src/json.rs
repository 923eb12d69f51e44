//! JSON wire formats. Complex scalars are `[re, im]`, matrices are lists of
//! rows.

use serde::{Deserialize, Serialize};

use crate::algebra::groups::Table;
use crate::algebra::{Coalgebra, FiniteHyperbialgebra, FiniteStarAlgebra, Functional};
use crate::error::{Error, Result};
use crate::expectation::{ConditionalExpectation, GroupAction};
use crate::focksim::{Segment, StepFunction, WeakTrajectory};
use crate::generator::{GeneratorMap, GeneratorTuple};
use crate::homdil::DilationResult;
use crate::numerics::{CMatrix, CVector, C64};
use crate::report::Checks;
use crate::stinespring::StinespringData;

pub type Cx = [f64; 2];
pub type MatrixJson = Vec<Vec<Cx>>;

pub fn cx_to(z: C64) -> Cx {
    [z.re, z.im]
}

pub fn cx_from(z: Cx) -> C64 {
    C64::new(z[0], z[1])
}

pub fn vector_to(v: &CVector) -> Vec<Cx> {
    v.iter().map(|z| cx_to(*z)).collect()
}

pub fn vector_from(v: &[Cx]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().map(|z| cx_from(*z)))
}

pub fn matrix_to(m: &CMatrix) -> MatrixJson {
    m.row_iter().map(|r| r.iter().map(|z| cx_to(*z)).collect()).collect()
}

/// Rows must have equal length. An empty list gives a `0 × cols_if_empty`
/// matrix, since the column count cannot be recovered from it.
pub fn matrix_from(m: &MatrixJson, cols_if_empty: usize) -> Result<CMatrix> {
    let rows = m.len();
    if rows == 0 {
        return Ok(CMatrix::zeros(0, cols_if_empty));
    }
    let cols = m[0].len();
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| cx_from(m[i][j])))
}

fn square_from(m: &MatrixJson, n: usize, what: &str) -> Result<CMatrix> {
    let out = matrix_from(m, n)?;
    if out.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("{what} must be {n}x{n}, got {}x{}", out.nrows(), out.ncols())));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepJson {
    pub dim: usize,
    pub matrices: Vec<MatrixJson>,
}

/// `mult` entries `[i, j, k, re, im]`: `b_i b_j ∋ z b_k`. `star` entries
/// `[i, j, re, im]`: `b_j* ∋ z b_i`. `coproduct` entries `[i, j, k, re, im]`:
/// `Δ(b_i) ∋ z b_j ⊗ b_k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub labels: Vec<String>,
    pub mult: Vec<(usize, usize, usize, f64, f64)>,
    pub star: Vec<(usize, usize, f64, f64)>,
    pub unit: Vec<Cx>,
    pub coproduct: Vec<(usize, usize, usize, f64, f64)>,
    pub counit: Vec<Cx>,
    pub rep: RepJson,
    pub multiplicative: bool,
}

impl AlgebraJson {
    pub fn from_hyper(h: &FiniteHyperbialgebra) -> Self {
        let a = &h.algebra;
        let n = h.dim();
        let mult = a.structure_triplets().into_iter().map(|(i, j, k, z)| (i, j, k, z.re, z.im)).collect();
        let s = a.star_matrix();
        let mut star = Vec::new();
        let mut coproduct = Vec::new();
        for j in 0..n {
            for i in 0..n {
                if s[(i, j)].norm() > 0.0 {
                    star.push((i, j, s[(i, j)].re, s[(i, j)].im));
                }
            }
        }
        for i in 0..n {
            let d = h.coproduct_basis(i);
            for j in 0..n {
                for k in 0..n {
                    if d[(j, k)].norm() > 0.0 {
                        coproduct.push((i, j, k, d[(j, k)].re, d[(j, k)].im));
                    }
                }
            }
        }
        AlgebraJson {
            dim: n,
            labels: a.labels().to_vec(),
            mult,
            star,
            unit: vector_to(a.unit()),
            coproduct,
            counit: vector_to(&h.coalgebra.counit),
            rep: RepJson { dim: a.rep_dim(), matrices: a.rep().iter().map(matrix_to).collect() },
            multiplicative: h.delta_multiplicative,
        }
    }

    pub fn build(&self) -> Result<FiniteHyperbialgebra> {
        let n = self.dim;
        if self.labels.len() != n {
            return Err(Error::DimensionMismatch(format!("{} labels for dimension {n}", self.labels.len())));
        }
        let mult: Vec<_> = self.mult.iter().map(|&(i, j, k, re, im)| (i, j, k, C64::new(re, im))).collect();
        let mut star = CMatrix::zeros(n, n);
        for &(i, j, re, im) in &self.star {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch(format!("star index ({i},{j}) out of range")));
            }
            star[(i, j)] += C64::new(re, im);
        }
        let rep = self
            .rep
            .matrices
            .iter()
            .map(|m| square_from(m, self.rep.dim, "representation matrix"))
            .collect::<Result<Vec<_>>>()?;
        let algebra = FiniteStarAlgebra::from_triplets(self.labels.clone(), &mult, star, vector_from(&self.unit), rep)?;
        let mut coproduct = vec![CMatrix::zeros(n, n); n];
        for &(i, j, k, re, im) in &self.coproduct {
            if i >= n || j >= n || k >= n {
                return Err(Error::DimensionMismatch(format!("coproduct index ({i},{j},{k}) out of range")));
            }
            coproduct[i][(j, k)] += C64::new(re, im);
        }
        let coalgebra = Coalgebra { coproduct, counit: vector_from(&self.counit) };
        FiniteHyperbialgebra::new(algebra, coalgebra, self.multiplicative)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub dk: usize,
    pub blocks: Vec<MatrixJson>,
}

impl GeneratorJson {
    pub fn from_map(phi: &GeneratorMap) -> Self {
        GeneratorJson { dk: phi.dk(), blocks: phi.blocks.iter().map(matrix_to).collect() }
    }

    pub fn build(&self) -> Result<GeneratorMap> {
        let blocks = self.blocks.iter().map(|b| matrix_from(b, 1 + self.dk)).collect::<Result<Vec<_>>>()?;
        GeneratorMap::new(self.dk, blocks)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleJson {
    pub k_dim: usize,
    pub rho: Vec<MatrixJson>,
    pub d_op: MatrixJson,
    pub xi: Vec<Cx>,
    pub d: Vec<Cx>,
    pub e: Vec<Cx>,
    pub t: f64,
}

impl TupleJson {
    pub fn from_tuple(t: &GeneratorTuple) -> Self {
        TupleJson {
            k_dim: t.k_dim,
            rho: t.rho.iter().map(matrix_to).collect(),
            d_op: matrix_to(&t.d_op),
            xi: vector_to(&t.xi),
            d: vector_to(&t.d),
            e: vector_to(&t.e),
            t: t.t,
        }
    }

    pub fn build(&self) -> Result<GeneratorTuple> {
        let dk = self.d.len();
        let rho = self.rho.iter().map(|m| matrix_from(m, self.k_dim)).collect::<Result<Vec<_>>>()?;
        let rho = rho
            .into_iter()
            .map(|m| if self.k_dim == 0 { CMatrix::zeros(0, 0) } else { m })
            .collect();
        Ok(GeneratorTuple {
            k_dim: self.k_dim,
            rho,
            d_op: matrix_from(&self.d_op, dk)?,
            xi: vector_from(&self.xi),
            d: vector_from(&self.d),
            e: vector_from(&self.e),
            t: self.t,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectationJson {
    pub matrix: MatrixJson,
    pub range_basis: MatrixJson,
}

impl ExpectationJson {
    pub fn from_expectation(p: &ConditionalExpectation) -> Self {
        ExpectationJson { matrix: matrix_to(&p.matrix), range_basis: matrix_to(&p.range_basis) }
    }
}

/// Double-coset input: a finite group and a subgroup given by element
/// indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DoubleCosetSpec {
    pub group: Table,
    pub subgroup: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionJson {
    pub group_table: Table,
    pub automorphisms: Vec<MatrixJson>,
}

impl ActionJson {
    pub fn from_action(a: &GroupAction) -> Self {
        ActionJson { group_table: a.group_table.clone(), automorphisms: a.automorphisms.iter().map(matrix_to).collect() }
    }

    pub fn build(&self, n: usize) -> Result<GroupAction> {
        let automorphisms = self.automorphisms.iter().map(|m| square_from(m, n, "automorphism")).collect::<Result<_>>()?;
        Ok(GroupAction { group_table: self.group_table.clone(), automorphisms })
    }
}

/// Delsarte input: an algebra and a finite group acting on it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DelsarteSpec {
    pub algebra: AlgebraJson,
    pub action: ActionJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SegmentJson {
    pub t0: f64,
    pub t1: f64,
    pub value: Vec<Cx>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepFunctionJson {
    pub segments: Vec<SegmentJson>,
}

impl StepFunctionJson {
    pub fn from_step(f: &StepFunction) -> Self {
        let segments = f
            .segments()
            .iter()
            .map(|s| SegmentJson { t0: s.t0, t1: s.t1, value: vector_to(&s.value) })
            .collect();
        StepFunctionJson { segments }
    }

    pub fn build(&self, dim: usize) -> Result<StepFunction> {
        let segments = self
            .segments
            .iter()
            .map(|s| Segment { t0: s.t0, t1: s.t1, value: vector_from(&s.value) })
            .collect();
        StepFunction::new(dim, segments)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryJson {
    pub times: Vec<f64>,
    pub functionals: Vec<Vec<Cx>>,
}

impl TrajectoryJson {
    pub fn from_trajectory(w: &WeakTrajectory) -> Self {
        TrajectoryJson { times: w.times.clone(), functionals: w.functionals.iter().map(|f: &Functional| vector_to(&f.0)).collect() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DilationJson {
    pub psi: GeneratorJson,
    pub dk0: usize,
    pub dk1: usize,
    pub dk2: usize,
    pub d1: Vec<Cx>,
    pub d2: f64,
    #[serde(rename = "D1")]
    pub d1_op: MatrixJson,
    pub report: Checks,
}

impl DilationJson {
    pub fn from_result(r: &DilationResult) -> Self {
        DilationJson {
            psi: GeneratorJson::from_map(&r.psi),
            dk0: r.dk0,
            dk1: r.dk1,
            dk2: r.dk2,
            d1: vector_to(&r.d1),
            d2: r.d2,
            d1_op: matrix_to(&r.d1_op),
            report: r.report.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StinespringJson {
    pub theta: GeneratorJson,
    pub tau: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    pub psi: GeneratorJson,
    pub residuals: Checks,
}

impl StinespringJson {
    pub fn from_data(s: &StinespringData) -> Self {
        StinespringJson {
            theta: GeneratorJson::from_map(&s.theta),
            tau: matrix_to(&s.tau),
            b: matrix_to(&s.b),
            psi: GeneratorJson::from_map(&s.psi),
            residuals: s.checks.clone(),
        }
    }
}

pub fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}
