use thiserror::Error;

/// Pipeline stage at which a CPC extraction failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Reality,
    Kernel,
    Kolmogorov,
    Representation,
    InnerVector,
    Contractivity,
    Reconstruction,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Reality => "reality",
            Stage::Kernel => "kernel",
            Stage::Kolmogorov => "kolmogorov",
            Stage::Representation => "representation",
            Stage::InnerVector => "inner_vector",
            Stage::Contractivity => "contractivity",
            Stage::Reconstruction => "reconstruction",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NonHermitian { asymmetry: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity: {0}")]
    NoIdentity(String),
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("conditional expectation fails verification: {0}")]
    ExpectationInvalid(String),
    #[error("functional is not a Haar state (residual {residual:.3e})")]
    NotHaar { residual: f64 },
    #[error("map is not a bialgebra morphism: {0}")]
    NotMorphism(String),
    #[error("not a group action by bialgebra automorphisms: {0}")]
    NotAnAction(String),
    #[error("invalid generator tuple: {0}")]
    InvalidTuple(String),
    #[error("generator is not real (residual {residual:.3e})")]
    NotReal { residual: f64 },
    #[error("generator kernel is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    KernelNotPsd { min_eigenvalue: f64 },
    #[error("induced action is inconsistent (residual {residual:.3e})")]
    InconsistentAction { residual: f64 },
    #[error("derivation is not inner (residual {residual:.3e})")]
    NotInner { residual: f64 },
    #[error("no vector e solves (I - D*D)^(1/2) e = d (residual {residual:.3e})")]
    NoSolution { residual: f64 },
    #[error("generator is not CPC (failed at {stage}): {detail}")]
    NotCpc { stage: Stage, detail: String },
    #[error("structure relations need a multiplicative coproduct")]
    NotABialgebra,
    #[error("structure relations fail (residual {residual:.3e})")]
    HomoldFailed { residual: f64 },
    #[error("B is not a contraction (norm {norm:.6})")]
    BNotContraction { norm: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
