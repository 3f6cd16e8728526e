//! JSON inputs (Hermitian data, extension specs) and report output.
//!
//! `J` is either an image map `{"1": "2", "3": "-4"}` (1-based, `J e_i = ±e_j`
//! with `J e_j = ∓e_i` filled in) or a matrix given by rows, whose column `j`
//! is `J e_j`. `g` is `"identity"` or a symmetric matrix. Matrix entries are
//! integers or exact scalar strings.

use std::collections::BTreeMap;

use hermlie_core::catalog::{AlgebraReport, GkPair, Structure};
use hermlie_core::constructions::ExtensionSpec;
use hermlie_core::hermitian::{ComplexStructure, HermitianData, Metric};
use hermlie_core::{Error as CoreError, LieAlgebra, Matrix, Scalar, Subspace};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::dsl::{parse_structure, DslError};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError::Invalid(msg.into()))
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, InputError> {
    match v {
        Value::String(s) => Ok(s.parse().map_err(CoreError::from)?),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Scalar::from_int(i)),
            None => invalid(format!("{n} is not an integer; write fractions as strings")),
        },
        _ => invalid(format!("expected a scalar, found {v}")),
    }
}

pub fn matrix_from_json(v: &Value, n: usize) -> Result<Matrix, InputError> {
    let rows = v.as_array().ok_or_else(|| InputError::Invalid("expected a matrix".into()))?;
    if rows.len() != n {
        return invalid(format!("matrix has {} rows, expected {n}", rows.len()));
    }
    let mut m = Matrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| InputError::Invalid("matrix rows must be arrays".into()))?;
        if row.len() != n {
            return invalid(format!("matrix row {} has {} entries, expected {n}", r + 1, row.len()));
        }
        for (c, x) in row.iter().enumerate() {
            m[(r, c)] = scalar_from_json(x)?;
        }
    }
    Ok(m)
}

fn one_based(key: &str, n: usize) -> Result<usize, InputError> {
    match key.trim().parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => invalid(format!("basis index {key:?} is out of range 1..={n}")),
    }
}

pub fn complex_structure_from_json(v: &Value, n: usize) -> Result<ComplexStructure, InputError> {
    let m = match v {
        Value::Object(map) => {
            let mut m = Matrix::zeros(n, n);
            let mut given = vec![false; n];
            for (k, img) in map {
                let i = one_based(k, n)?;
                let text = match img {
                    Value::String(s) => s.trim().to_string(),
                    Value::Number(x) => x.to_string(),
                    _ => return invalid(format!("image of e{k} must be a signed index")),
                };
                let (sign, idx) = match text.strip_prefix('-') {
                    Some(rest) => (-1, rest),
                    None => (1, text.trim_start_matches('+')),
                };
                let j = one_based(idx, n)?;
                m[(j, i)] = Scalar::from_int(sign);
                given[i] = true;
            }
            for i in 0..n {
                if !given[i] {
                    continue;
                }
                let j = (0..n).find(|&r| !m[(r, i)].is_zero()).expect("set above");
                if !given[j] && j != i {
                    m[(i, j)] = -m[(j, i)].clone();
                    given[j] = true;
                }
            }
            m
        }
        _ => matrix_from_json(v, n)?,
    };
    Ok(ComplexStructure::new(m)?)
}

pub fn metric_from_json(v: Option<&Value>, n: usize) -> Result<Metric, InputError> {
    match v {
        None => Ok(Metric::identity(n)),
        Some(Value::String(s)) if s == "identity" => Ok(Metric::identity(n)),
        Some(v) => Ok(Metric::new(matrix_from_json(v, n)?)?),
    }
}

/// Structures, GK pairs and an optional nilradical candidate.
#[derive(Clone, Debug, Default)]
pub struct HermitianFile {
    pub structures: Vec<Structure>,
    pub gk: Vec<GkPair>,
    pub nilradical: Option<Subspace>,
}

fn structure_from_json(obj: &Value, label: &str, n: usize) -> Result<Structure, InputError> {
    let j = obj
        .get("J")
        .ok_or_else(|| InputError::Invalid(format!("structure {label:?} has no J")))?;
    let label = obj.get("label").and_then(Value::as_str).unwrap_or(label).to_string();
    Ok(Structure {
        j: complex_structure_from_json(j, n)?,
        g: metric_from_json(obj.get("g"), n)?,
        label,
    })
}

pub fn indices_from_json(v: &Value, n: usize) -> Result<Vec<usize>, InputError> {
    let arr = v.as_array().ok_or_else(|| InputError::Invalid("expected an index list".into()))?;
    arr.iter()
        .map(|x| match x.as_u64() {
            Some(i) if (1..=n as u64).contains(&i) => Ok(i as usize - 1),
            _ => invalid(format!("index {x} is out of range 1..={n}")),
        })
        .collect()
}

/// Reads Hermitian data for an algebra of dimension `n`. Structures are
/// checked for `J² = −Id` and a symmetric positive definite metric here;
/// compatibility and integrability are reported, not rejected.
pub fn load_hermitian(text: &str, n: usize) -> Result<HermitianFile, InputError> {
    let v: Value = serde_json::from_str(text)?;
    if !v.is_object() {
        return invalid("Hermitian data must be a JSON object");
    }
    let mut out = HermitianFile::default();
    if v.get("J").is_some() {
        out.structures.push(structure_from_json(&v, "J", n)?);
    }
    if let Some(list) = v.get("structures") {
        let list = list.as_array().ok_or_else(|| InputError::Invalid("structures must be a list".into()))?;
        for (k, s) in list.iter().enumerate() {
            out.structures.push(structure_from_json(s, &format!("J{}", k + 1), n)?);
        }
    }
    if let Some(list) = v.get("gk") {
        let list = list.as_array().ok_or_else(|| InputError::Invalid("gk must be a list".into()))?;
        for pair in list {
            let labels: Vec<&str> = pair
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_str).collect())
                .unwrap_or_default();
            if labels.len() != 2 {
                return invalid("each gk entry is a pair of structure labels");
            }
            let find = |l: &str| {
                out.structures
                    .iter()
                    .position(|s| s.label == l)
                    .ok_or_else(|| InputError::Invalid(format!("unknown structure label {l:?}")))
            };
            let pair = GkPair {
                plus: find(labels[0])?,
                minus: find(labels[1])?,
            };
            out.gk.push(pair);
        }
    }
    if let Some(h) = v.get("nilradical") {
        out.nilradical = Some(Subspace::coordinate(n, &indices_from_json(h, n)?));
    }
    Ok(out)
}

fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| json!(m[(r, c)].to_string())).collect()))
            .collect(),
    )
}

/// Image map when every column is a signed basis vector, else the matrix.
pub fn complex_structure_to_json(j: &ComplexStructure) -> Value {
    let m = j.matrix();
    let n = m.rows();
    let mut map = Map::new();
    for c in 0..n {
        let nz: Vec<usize> = (0..n).filter(|&r| !m[(r, c)].is_zero()).collect();
        let x = nz.first().map(|&r| m[(r, c)].clone());
        match (nz.len(), x) {
            (1, Some(x)) if x.is_one() || (-x.clone()).is_one() => {
                // the partner column is implied
                let r = nz[0];
                if map.contains_key(&(r + 1).to_string()) {
                    continue;
                }
                let sign = if x.is_one() { "" } else { "-" };
                map.insert((c + 1).to_string(), json!(format!("{sign}{}", r + 1)));
            }
            _ => return matrix_to_json(m),
        }
    }
    Value::Object(map)
}

pub fn metric_to_json(g: &Metric) -> Value {
    if *g.matrix() == Matrix::identity(g.dim()) {
        json!("identity")
    } else {
        matrix_to_json(g.matrix())
    }
}

pub fn hermitian_to_json(file: &HermitianFile) -> Value {
    let structures: Vec<Value> = file
        .structures
        .iter()
        .map(|s| {
            json!({
                "label": s.label,
                "J": complex_structure_to_json(&s.j),
                "g": metric_to_json(&s.g),
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("structures".into(), Value::Array(structures));
    if !file.gk.is_empty() {
        let pairs = file
            .gk
            .iter()
            .map(|p| json!([file.structures[p.plus].label, file.structures[p.minus].label]))
            .collect();
        obj.insert("gk".into(), Value::Array(pairs));
    }
    if let Some(h) = &file.nilradical {
        if let Some(idx) = coordinate_indices(h) {
            obj.insert("nilradical".into(), json!(idx.iter().map(|i| i + 1).collect::<Vec<_>>()));
        }
    }
    Value::Object(obj)
}

/// Indices when `h` is spanned by standard basis vectors.
fn coordinate_indices(h: &Subspace) -> Option<Vec<usize>> {
    let n = h.ambient();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| h.contains(&hermlie_core::Vector::basis(n, i)))
        .collect();
    (idx.len() == h.dim()).then_some(idx)
}

/// `{"base": {"structure": "(…)", "J": …, "g": …}, "theta": [matrix, …]}`.
pub fn load_extension(text: &str) -> Result<ExtensionSpec, InputError> {
    let v: Value = serde_json::from_str(text)?;
    let base = v.get("base").ok_or_else(|| InputError::Invalid("missing \"base\"".into()))?;
    let structure = base
        .get("structure")
        .and_then(Value::as_str)
        .ok_or_else(|| InputError::Invalid("base needs a \"structure\" string".into()))?;
    let alg = parse_structure(structure)?;
    let n = alg.dim();
    let s = structure_from_json(base, "J", n)?;
    let hd = HermitianData::new(alg, s.j, s.g)?;
    let theta = v
        .get("theta")
        .and_then(Value::as_array)
        .ok_or_else(|| InputError::Invalid("missing \"theta\" list".into()))?
        .iter()
        .map(|m| matrix_from_json(m, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtensionSpec::new(hd, theta))
}

pub fn extension_to_json(spec: &ExtensionSpec, letter: char) -> Value {
    let doc = crate::dsl::DslDocument::from_algebra(spec.base.algebra(), letter);
    json!({
        "base": {
            "structure": crate::dsl::serialize(&doc).trim_end(),
            "J": complex_structure_to_json(spec.base.complex_structure()),
            "g": metric_to_json(spec.base.metric()),
        },
        "theta": spec.theta.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn emit_report(report: &AlgebraReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

/// Parses `k=v` pairs into parameter overrides.
pub fn parse_params(items: &[String]) -> Result<BTreeMap<String, Scalar>, InputError> {
    items
        .iter()
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| InputError::Invalid(format!("parameter {item:?} must read key=value")))?;
            Ok((k.trim().to_string(), v.trim().parse().map_err(CoreError::from)?))
        })
        .collect()
}

/// Convenience for tests and callers holding an algebra.
pub fn hermitian_data(alg: &LieAlgebra, s: &Structure) -> Result<HermitianData, InputError> {
    Ok(HermitianData::new(alg.clone(), s.j.clone(), s.g.clone())?)
}
