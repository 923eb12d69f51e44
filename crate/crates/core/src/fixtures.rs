//! Built-in examples shipped with the library and the CLI.

use crate::algebra::groups::{cyclic, symmetric3, S3_LABELS};
use crate::algebra::{function_algebra, group_algebra, FiniteHyperbialgebra};
use crate::error::{Error, Result};
use crate::expectation::inversion_action;
use crate::generator::{assemble_from_tuple, GeneratorMap, GeneratorTuple};
use crate::json::{ActionJson, AlgebraJson, DelsarteSpec, DoubleCosetSpec, GeneratorJson};
use crate::numerics::{c, real_matrix, real_vector};

pub const NAMES: [&str; 7] = ["c_z2", "c_s3", "group_z3", "poisson", "d_zero", "s3_double_coset", "z3_delsarte"];

#[derive(Clone, Debug)]
pub enum Fixture {
    Algebra(FiniteHyperbialgebra),
    Generator { algebra: FiniteHyperbialgebra, generator: GeneratorMap },
    DoubleCoset(DoubleCosetSpec),
    Delsarte(DelsarteSpec),
}

impl Fixture {
    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::Algebra(_) => "algebra",
            Fixture::Generator { .. } => "generator",
            Fixture::DoubleCoset(_) => "double-coset",
            Fixture::Delsarte(_) => "delsarte",
        }
    }

    /// The JSON a user would pass on the command line. Generator fixtures
    /// export `{algebra, generator}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Fixture::Algebra(h) => serde_json::to_value(AlgebraJson::from_hyper(h)),
            Fixture::Generator { algebra, generator } => Ok(serde_json::json!({
                "algebra": AlgebraJson::from_hyper(algebra),
                "generator": GeneratorJson::from_map(generator),
            })),
            Fixture::DoubleCoset(s) => serde_json::to_value(s),
            Fixture::Delsarte(s) => serde_json::to_value(s),
        }
        .expect("fixtures serialize")
    }
}

pub fn c_z2() -> FiniteHyperbialgebra {
    function_algebra(&cyclic(2), 0).expect("Z2").with_labels(&["d_e", "d_u"])
}

pub fn c_s3() -> FiniteHyperbialgebra {
    let labels: Vec<String> = S3_LABELS.iter().map(|s| format!("d_{s}")).collect();
    function_algebra(&symmetric3(), 0).expect("S3").with_labels(&labels)
}

pub fn group_z3() -> FiniteHyperbialgebra {
    group_algebra(&cyclic(3)).expect("Z3").with_labels(&["e", "g", "g2"])
}

/// On `C(Z2)`: `K = ℂ`, `ρ = evaluation at u`, `D = 1`, `ξ = √rate`,
/// `d = e = 0`, `t = 0`. Its vacuum law is `λ_t(δ_u) = (1 − e^{−2·rate·t})/2`.
pub fn poisson_tuple(rate: f64) -> GeneratorTuple {
    GeneratorTuple {
        k_dim: 1,
        rho: vec![real_matrix(1, 1, &[0.0]), real_matrix(1, 1, &[1.0])],
        d_op: real_matrix(1, 1, &[1.0]),
        xi: real_vector(&[rate.sqrt()]),
        d: real_vector(&[0.0]),
        e: real_vector(&[0.0]),
        t: 0.0,
    }
}

/// On `C(Z2)`: `K = ℂ`, `ρ = evaluation at u`, `ξ = 1`, `D = 0`,
/// `d = e = 1`, `t = −2`.
pub fn d_zero_tuple() -> GeneratorTuple {
    GeneratorTuple {
        k_dim: 1,
        rho: vec![real_matrix(1, 1, &[0.0]), real_matrix(1, 1, &[1.0])],
        d_op: real_matrix(1, 1, &[0.0]),
        xi: real_vector(&[1.0]),
        d: real_vector(&[1.0]),
        e: real_vector(&[1.0]),
        t: -2.0,
    }
}

pub fn poisson_generator() -> GeneratorMap {
    assemble_from_tuple(&poisson_tuple(0.5), &c_z2(), 1e-12).expect("valid tuple")
}

pub fn d_zero_generator() -> GeneratorMap {
    assemble_from_tuple(&d_zero_tuple(), &c_z2(), 1e-12).expect("valid tuple")
}

/// `φ + s·ε(·)|e0⟩⟨e0|`: raises `φ(1)`'s vacuum entry by `s` and leaves the
/// kernel and reality untouched.
pub fn with_vacuum_shift(phi: &GeneratorMap, h: &FiniteHyperbialgebra, s: f64) -> GeneratorMap {
    let mut out = phi.clone();
    for (b, eps) in out.blocks.iter_mut().zip(h.coalgebra.counit.iter()) {
        b[(0, 0)] += eps * c(s);
    }
    out
}

/// The Poisson generator with `φ(1)`'s vacuum entry raised by `0.1`.
pub fn non_contractive_generator() -> GeneratorMap {
    with_vacuum_shift(&poisson_generator(), &c_z2(), 0.1)
}

pub fn s3_double_coset() -> DoubleCosetSpec {
    DoubleCosetSpec { group: symmetric3(), subgroup: vec![0, 1] }
}

pub fn z3_delsarte() -> DelsarteSpec {
    let h = group_z3();
    let action = inversion_action(&cyclic(3)).expect("abelian");
    DelsarteSpec { algebra: AlgebraJson::from_hyper(&h), action: ActionJson::from_action(&action) }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    Ok(match name {
        "c_z2" => Fixture::Algebra(c_z2()),
        "c_s3" => Fixture::Algebra(c_s3()),
        "group_z3" => Fixture::Algebra(group_z3()),
        "poisson" => Fixture::Generator { algebra: c_z2(), generator: poisson_generator() },
        "d_zero" => Fixture::Generator { algebra: c_z2(), generator: d_zero_generator() },
        "s3_double_coset" => Fixture::DoubleCoset(s3_double_coset()),
        "z3_delsarte" => Fixture::Delsarte(z3_delsarte()),
        other => return Err(Error::InvalidInput(format!("unknown fixture {other:?}; known: {}", NAMES.join(", ")))),
    })
}

pub fn all() -> Vec<(&'static str, Fixture)> {
    NAMES.iter().map(|n| (*n, fixture(n).expect("listed"))).collect()
}
