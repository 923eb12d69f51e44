use std::path::Path;

use anyhow::Result;
use qsconv::algebra::groups::double_cosets;
use qsconv::algebra::{verify_hyperbialgebra, FiniteHyperbialgebra};
use qsconv::expectation::{
    counit_invariance_residual, delsarte_expectation, quotient_hyperbialgebra, subgroup_double_coset,
    verify_conditional_expectation, ConditionalExpectation,
};
use qsconv::fixtures;
use qsconv::focksim::{
    contractivity_gram, convolution_increment_residual, dilation_process_check, gram_positivity, semigroup_consistency,
    stinespring_process_check, trajectory, LegConvention, StepFunction,
};
use qsconv::generator::{extract_tuple, is_cpc, GeneratorMap, GeneratorTuple};
use qsconv::homdil::{check_tuple_conditions, dilate as dilate_tuple, homold_residual};
use qsconv::json::{
    AlgebraJson, DelsarteSpec, DilationJson, DoubleCosetSpec, ExpectationJson, GeneratorJson, StinespringJson,
    TrajectoryJson, TupleJson,
};
use qsconv::numerics::{CVector, PsdCertificate};
use qsconv::report::{Check, Checks};
use qsconv::sampling::{random_element, random_step_function};
use qsconv::stinespring::verify_stinespring_identity;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::io::{load_algebra, load_generator, load_matrix, load_spec, load_step, parse_times, write_json};
use crate::report::Outcome;
use crate::{ExpectationKind, GenInput, Global, SimCheck};

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializes")
}

pub fn verify(source: &str, g: &Global) -> Result<Outcome> {
    let h = load_algebra(source)?;
    let checks = verify_hyperbialgebra(&h, g.tol);
    let results = json!({ "dim": h.dim(), "labels": h.algebra.labels(), "multiplicative": h.delta_multiplicative });
    Ok(Outcome::checked(checks, results))
}

pub fn expectation(kind: ExpectationKind, source: &str, output: Option<&Path>, g: &Global) -> Result<Outcome> {
    let mut checks = Checks::new();
    let mut results = serde_json::Map::new();
    let (h, p): (FiniteHyperbialgebra, ConditionalExpectation) = match kind {
        ExpectationKind::DoubleCoset => {
            let spec: DoubleCosetSpec = load_spec(source, "double-coset spec")?;
            let (h, p, notes) = subgroup_double_coset(&spec.group, &spec.subgroup, g.tol)?;
            checks.extend("construction.", notes);
            results.insert("double_cosets".into(), json!(double_cosets(&spec.group, &spec.subgroup)));
            (h, p)
        }
        ExpectationKind::Delsarte => {
            let spec: DelsarteSpec = load_spec(source, "Delsarte spec")?;
            let h = spec.algebra.build()?;
            let action = spec.action.build(h.dim())?;
            let p = delsarte_expectation(&h, &action, g.tol)?;
            checks.push(Check::within("counit_invariance", counit_invariance_residual(&h, &p), g.tol));
            (h, p)
        }
    };
    checks.extend("expectation.", verify_conditional_expectation(&h, &p, g.tol));
    let q = quotient_hyperbialgebra(&h, &p, g.tol)?;
    checks.extend("quotient.", verify_hyperbialgebra(&q.hyper, g.tol));
    results.insert("dim".into(), json!(q.hyper.dim()));
    results.insert("multiplicativity_residual".into(), json!(q.multiplicativity_residual));
    results.insert("multiplicative".into(), json!(q.hyper.delta_multiplicative));
    let payload = json!({
        "expectation": ExpectationJson::from_expectation(&p),
        "quotient": AlgebraJson::from_hyper(&q.hyper),
    });
    match output {
        Some(path) => {
            write_json(path, &payload)?;
            results.insert("output".into(), json!(path.display().to_string()));
        }
        None => {
            results.insert("payload".into(), payload);
        }
    }
    Ok(Outcome::checked(checks, Value::Object(results)))
}

fn load_pair(input: &GenInput) -> Result<(FiniteHyperbialgebra, GeneratorMap)> {
    let h = load_algebra(&input.algebra)?;
    let phi = load_generator(&input.generator, &h)?;
    Ok((h, phi))
}

/// The CPC checks and, when CPC, the extracted tuple.
fn cpc_stage(phi: &GeneratorMap, h: &FiniteHyperbialgebra, tol: f64) -> Result<(Checks, Option<GeneratorTuple>, Option<String>)> {
    let rep = is_cpc(phi, h, tol)?;
    let mut checks = Checks::new();
    checks.extend("cpc.", rep.checks.clone());
    let failure = rep.failure.as_ref().map(|e| e.to_string());
    let tuple = if rep.is_cpc() { rep.tuple } else { None };
    Ok((checks, tuple, failure))
}

fn not_cpc(checks: Checks, failure: Option<String>) -> Outcome {
    let error = Some(failure.unwrap_or_else(|| "generator is not CPC".into()));
    Outcome::Checked { checks, results: Value::Null, error }
}

pub fn analyze(input: &GenInput, g: &Global) -> Result<Outcome> {
    let (h, phi) = load_pair(input)?;
    let (checks, tuple, failure) = cpc_stage(&phi, &h, g.tol)?;
    let homold = h.delta_multiplicative.then(|| homold_residual(&phi, &h));
    let mut results = json!({
        "cpc": tuple.is_some(),
        "dk": phi.dk(),
        "homold_residual": homold,
        "homomorphic": homold.map(|r| r <= g.tol),
        "failure": failure,
    });
    if let Some(tup) = &tuple {
        results["K"] = json!(tup.k_dim);
        results["tuple"] = to_value(&TupleJson::from_tuple(tup));
        results["conditions"] = to_value(&check_tuple_conditions(tup, &h, g.tol));
    }
    Ok(Outcome::checked(checks, results))
}

pub fn dilate(input: &GenInput, output: Option<&Path>, g: &Global) -> Result<Outcome> {
    let (h, phi) = load_pair(input)?;
    let (mut checks, tuple, failure) = cpc_stage(&phi, &h, g.tol)?;
    let Some(tup) = tuple else { return Ok(not_cpc(checks, failure)) };
    let d = dilate_tuple(&tup, &h, g.tol)?;
    checks.extend("dilation.", d.report.clone());
    let mut results = json!({ "dk0": d.dk0, "dk1": d.dk1, "dk2": d.dk2, "dk": d.psi.dk() });
    let payload = json!({
        "algebra": AlgebraJson::from_hyper(&h),
        "generator": GeneratorJson::from_map(&d.psi),
        "dilation": DilationJson::from_result(&d),
    });
    match output {
        Some(path) => {
            write_json(path, &payload)?;
            results["output"] = json!(path.display().to_string());
        }
        None => results["payload"] = payload,
    }
    Ok(Outcome::checked(checks, results))
}

pub fn stinespring(input: &GenInput, contraction: Option<&str>, output: Option<&Path>, g: &Global) -> Result<Outcome> {
    let (h, phi) = load_pair(input)?;
    let b = contraction.map(load_matrix).transpose()?;
    let (mut checks, tuple, failure) = cpc_stage(&phi, &h, g.tol)?;
    let Some(tup) = tuple else { return Ok(not_cpc(checks, failure)) };
    let data = verify_stinespring_identity(&tup, b.as_ref(), &h, g.tol)?;
    checks.extend("stinespring.", data.checks.clone());
    let mut results = json!({ "K": tup.k_dim, "dk": tup.dk() });
    let payload = to_value(&StinespringJson::from_data(&data));
    match output {
        Some(path) => {
            write_json(path, &payload)?;
            results["output"] = json!(path.display().to_string());
        }
        None => results["payload"] = payload,
    }
    Ok(Outcome::checked(checks, results))
}

/// The certificate with the largest PSD violation.
fn worst(certs: impl IntoIterator<Item = PsdCertificate>) -> Option<PsdCertificate> {
    certs.into_iter().max_by(|a, b| a.violation().total_cmp(&b.violation()))
}

pub fn simulate(
    input: &GenInput,
    f_src: &str,
    g_src: &str,
    times: &str,
    requested: &[SimCheck],
    output: Option<&Path>,
    gl: &Global,
) -> Result<Outcome> {
    let (h, phi) = load_pair(input)?;
    let dk = phi.dk();
    let f = load_step(f_src, dk)?;
    let g = load_step(g_src, dk)?;
    let times = parse_times(times)?;
    let t_end = *times.last().expect("grid is non-empty");
    let tol = gl.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(gl.seed);

    let traj = trajectory(&phi, &f, &g, &times, &h)?;
    let mut checks = Checks::new();
    let mut seen = Vec::new();
    for &which in requested {
        if seen.contains(&which) {
            continue;
        }
        seen.push(which);
        match which {
            SimCheck::Increment => {
                let mut r: f64 = 0.0;
                for &s in &times {
                    r = r.max(convolution_increment_residual(&phi, &f, &g, s, t_end - s, &h, LegConvention::Second)?);
                }
                checks.push(Check::within("increment", r, tol));
            }
            SimCheck::Semigroup => checks.extend("", semigroup_consistency(&phi, &times, &h, tol)?),
            SimCheck::Gram | SimCheck::Contractivity => {
                let horizon = t_end.max(f.support_end()).max(g.support_end()).max(1e-3);
                let family = vec![StepFunction::zero(dk), f.clone(), g.clone(), random_step_function(dk, horizon, 3, 1.0, &mut rng)];
                let certs = if which == SimCheck::Gram {
                    let elems: Vec<CVector> = family.iter().map(|_| random_element(&h, &mut rng)).collect();
                    times.iter().map(|&t| gram_positivity(&phi, t, &family, &elems, &h)).collect::<qsconv::Result<Vec<_>>>()?
                } else {
                    times.iter().map(|&t| contractivity_gram(&phi, t, &family, &h)).collect::<qsconv::Result<Vec<_>>>()?
                };
                if let Some(c) = worst(certs) {
                    checks.push(Check::psd(which.to_string(), &c));
                }
            }
            SimCheck::Dilation | SimCheck::Stinespring => {
                let tup = match extract_tuple(&phi, &h, tol) {
                    Ok(t) => t,
                    Err(e) => {
                        checks.push(Check::flag(format!("{which}.cpc"), false));
                        return Ok(Outcome::Checked { checks, results: Value::Null, error: Some(e.to_string()) });
                    }
                };
                let mut r: f64 = 0.0;
                if which == SimCheck::Dilation {
                    let d = dilate_tuple(&tup, &h, tol)?;
                    for &t in &times {
                        r = r.max(dilation_process_check(&d.psi, &phi, &f, &g, t, &h, tol)?.residual("dilation_process"));
                    }
                    checks.push(Check::within("dilation_process", r, tol));
                } else {
                    let data = verify_stinespring_identity(&tup, None, &h, tol)?;
                    let big = data.psi.dk();
                    let (fb, gb) = (f.embed(0, big)?, g.embed(0, big)?);
                    let horizon = t_end.max(f.support_end()).max(g.support_end());
                    for &t in &times {
                        r = r.max(
                            stinespring_process_check(&data.psi, &phi, &fb, &gb, t, horizon, &h, tol)?
                                .residual("stinespring_process"),
                        );
                    }
                    checks.extend("stinespring.", data.checks);
                    checks.push(Check::within("stinespring_process", r, tol));
                }
            }
        }
    }

    let traj_json = to_value(&TrajectoryJson::from_trajectory(&traj));
    let mut results = json!({ "dk": dk, "points": times.len() });
    match output {
        Some(path) => {
            write_json(path, &traj_json)?;
            results["output"] = json!(path.display().to_string());
        }
        None => results["trajectory"] = traj_json,
    }
    Ok(Outcome::checked(checks, results))
}

pub fn fixtures_list() -> Result<Outcome> {
    let list: Vec<Value> = fixtures::all().iter().map(|(n, f)| json!({ "name": n, "kind": f.kind() })).collect();
    Ok(Outcome::checked(Checks::new(), json!({ "fixtures": list })))
}

pub fn fixtures_export(name: &str, output: Option<&Path>) -> Result<Outcome> {
    let v = fixtures::fixture(name)?.to_json();
    match output {
        Some(path) => {
            write_json(path, &v)?;
            Ok(Outcome::checked(Checks::new(), json!({ "name": name, "output": path.display().to_string() })))
        }
        None => Ok(Outcome::Raw(serde_json::to_string_pretty(&v).expect("serializes"))),
    }
}
