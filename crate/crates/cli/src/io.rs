use std::path::Path;

use anyhow::{bail, Context, Result};
use qsconv::algebra::FiniteHyperbialgebra;
use qsconv::fixtures;
use qsconv::focksim::StepFunction;
use qsconv::generator::GeneratorMap;
use qsconv::json::{matrix_from, AlgebraJson, GeneratorJson, MatrixJson, StepFunctionJson};
use qsconv::numerics::CMatrix;
use serde::de::DeserializeOwned;
use serde_json::Value;

/// A file path, or `fixture:<name>` for a built-in example.
pub fn read_json(source: &str) -> Result<Value> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return Ok(fixtures::fixture(name)?.to_json());
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("cannot read {source}"))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {source}"))
}

fn decode<T: DeserializeOwned>(v: Value, what: &str, source: &str) -> Result<T> {
    serde_json::from_value(v).with_context(|| format!("{source} is not a valid {what}"))
}

/// The object itself, or its `key` member when it bundles several parts.
fn member(v: Value, key: &str) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key(key) => m.remove(key).expect("checked"),
        other => other,
    }
}

pub fn load_algebra(source: &str) -> Result<FiniteHyperbialgebra> {
    let a: AlgebraJson = decode(member(read_json(source)?, "algebra"), "algebra", source)?;
    Ok(a.build()?)
}

pub fn load_generator(source: &str, h: &FiniteHyperbialgebra) -> Result<GeneratorMap> {
    let g: GeneratorJson = decode(member(read_json(source)?, "generator"), "generator", source)?;
    let phi = g.build()?;
    phi.check_algebra(h)?;
    Ok(phi)
}

pub fn load_spec<T: DeserializeOwned>(source: &str, what: &str) -> Result<T> {
    decode(read_json(source)?, what, source)
}

pub fn load_matrix(source: &str) -> Result<CMatrix> {
    let m: MatrixJson = decode(read_json(source)?, "matrix", source)?;
    Ok(matrix_from(&m, 0)?)
}

pub fn load_step(source: &str, dim: usize) -> Result<StepFunction> {
    let s: StepFunctionJson = decode(read_json(source)?, "step function", source)?;
    Ok(s.build(dim)?)
}

/// `t0:t1:dt`, inclusive of `t1` up to rounding.
pub fn parse_times(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [t0, t1, dt] = parts.as_slice() else {
        bail!("--times expects t0:t1:dt, got {spec:?}");
    };
    let parse = |s: &str| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?} in --times"));
    let (t0, t1, dt) = (parse(t0)?, parse(t1)?, parse(dt)?);
    if !(t0.is_finite() && t1.is_finite() && dt.is_finite()) || t0 < 0.0 || t1 < t0 || dt <= 0.0 {
        bail!("--times needs 0 <= t0 <= t1 and dt > 0");
    }
    let steps = ((t1 - t0) / dt + 1e-9).floor() as usize;
    if steps > 100_000 {
        bail!("--times grid has more than 100000 points");
    }
    Ok((0..=steps).map(|k| t0 + k as f64 * dt).collect())
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("values serialize") + "\n";
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
