//! JSON text forms.
//!
//! * Supernatural number: `{"2": 3, "7": "inf"}`, keys sorted numerically.
//! * Diagram: `{"name": …, "levels": [1, 2, 2], "matrices": [[[1],[1]], …],
//!   "tail": "repeat-last"}`, matrices row-major.
//! * Group: `{"kind": "cyclic", "generators": [2, 3], "unit": 6}` or
//!   `{"kind": "quadratic", "H": {"2": "inf"}, "alpha_square": 2,
//!   "unit": {"k": "1", "z": 0}}`.
//! * Premorphism: `{"level_map": [0, 1, …], "matrices": [[[1]], …]}`.
//!
//! Integers that do not fit in 64 bits are written as decimal strings;
//! either form is accepted on input.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bratteli::{Matrix, Premorphism, RawDiagram, Tail, Violation};
use crate::ordered_group::{
    CyclicOrderedGroup, GroupElement, GroupError, OrderedGroup, QuadraticIrrationalGroup,
};
use crate::supernatural::{Exponent, SupernaturalError, SupernaturalNumber};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Supernatural(#[from] SupernaturalError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Schema(msg.into()))
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

pub fn nat_to_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(x) => json!(x),
        None => Value::String(n.to_string()),
    }
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => Value::String(n.to_string()),
    }
}

pub fn nat_from_json(v: &Value) -> Result<BigUint, FormatError> {
    match v {
        Value::Number(n) => match n.as_u64() {
            Some(x) => Ok(BigUint::from(x)),
            None => schema(format!("expected a natural number, got {n}")),
        },
        Value::String(s) => BigUint::from_str(s)
            .or_else(|_| schema(format!("expected a natural number, got {s:?}"))),
        other => schema(format!("expected a natural number, got {other}")),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(x) => Ok(BigInt::from(x)),
            None => schema(format!("expected an integer, got {n}")),
        },
        Value::String(s) => {
            BigInt::from_str(s).or_else(|_| schema(format!("expected an integer, got {s:?}")))
        }
        other => schema(format!("expected an integer, got {other}")),
    }
}

fn small_from_json(v: &Value, what: &str) -> Result<u64, FormatError> {
    v.as_u64().map_or_else(
        || schema(format!("{what}: expected a natural number, got {v}")),
        Ok,
    )
}

/// Parses `p/q` or `p`; the result is in lowest terms.
pub fn parse_rational(text: &str) -> Result<BigRational, FormatError> {
    let text = text.trim();
    let bad = || FormatError::Schema(format!("expected a rational p/q, got {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(text).map_err(|_| bad())?,
        )),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn sn_to_json(n: &SupernaturalNumber) -> Value {
    let map: Map<String, Value> = n
        .iter()
        .map(|(p, e)| {
            let v = match e {
                Exponent::Finite(k) => json!(k),
                Exponent::Omega => json!("inf"),
            };
            (p.to_string(), v)
        })
        .collect();
    Value::Object(map)
}

pub fn sn_from_json(v: &Value) -> Result<SupernaturalNumber, FormatError> {
    let Value::Object(map) = v else {
        return schema(format!("supernatural number must be an object, got {v}"));
    };
    let mut pairs = Vec::with_capacity(map.len());
    for (key, value) in map {
        let p = BigUint::from_str(key)
            .or_else(|_| schema(format!("prime key must be a decimal string, got {key:?}")))?;
        let e = match value {
            Value::String(s) if s == "inf" => Exponent::Omega,
            Value::Number(n) => match n.as_u64() {
                Some(k) => Exponent::Finite(k),
                None => return schema(format!("exponent of {key} must be a natural number")),
            },
            other => {
                return schema(format!(
                    "exponent of {key} must be a natural or \"inf\", got {other}"
                ))
            }
        };
        pairs.push((p, e));
    }
    Ok(SupernaturalNumber::from_prime_powers(pairs)?)
}

pub fn parse_sn(text: &str) -> Result<SupernaturalNumber, FormatError> {
    sn_from_json(&parse_json(text)?)
}

fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(nat_to_json).collect()))
            .collect(),
    )
}

fn rows_from_json(v: &Value) -> Result<Vec<Vec<BigUint>>, FormatError> {
    let Value::Array(rows) = v else {
        return schema("matrix must be an array of rows");
    };
    rows.iter()
        .map(|row| match row {
            Value::Array(entries) => entries.iter().map(nat_from_json).collect(),
            _ => schema("matrix row must be an array"),
        })
        .collect()
}

pub fn raw_diagram_to_json(d: &RawDiagram) -> Value {
    let mut obj = Map::new();
    if let Some(name) = &d.name {
        obj.insert("name".into(), json!(name));
    }
    obj.insert("levels".into(), json!(d.levels));
    obj.insert(
        "matrices".into(),
        Value::Array(
            d.matrices
                .iter()
                .map(|m| {
                    Value::Array(
                        m.iter()
                            .map(|row| Value::Array(row.iter().map(nat_to_json).collect()))
                            .collect(),
                    )
                })
                .collect(),
        ),
    );
    obj.insert("tail".into(), json!(d.tail.as_str()));
    Value::Object(obj)
}

pub fn diagram_to_json(d: &crate::BratteliDiagram) -> Value {
    raw_diagram_to_json(&d.to_raw())
}

/// Reads the diagram file form without validating the structure.
pub fn raw_diagram_from_json(v: &Value) -> Result<RawDiagram, FormatError> {
    let Value::Object(obj) = v else {
        return schema("diagram must be an object");
    };
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return schema(format!("name must be a string, got {other}")),
    };
    let levels = match obj.get("levels") {
        Some(Value::Array(ls)) => ls
            .iter()
            .map(|l| small_from_json(l, "levels").map(|k| k as usize))
            .collect::<Result<Vec<_>, _>>()?,
        _ => return schema("diagram needs a \"levels\" array"),
    };
    let matrices = match obj.get("matrices") {
        Some(Value::Array(ms)) => ms
            .iter()
            .map(rows_from_json)
            .collect::<Result<Vec<_>, _>>()?,
        _ => return schema("diagram needs a \"matrices\" array"),
    };
    let tail = match obj.get("tail") {
        None | Some(Value::Null) => Tail::None,
        Some(Value::String(s)) if s == "none" => Tail::None,
        Some(Value::String(s)) if s == "repeat-last" => Tail::RepeatLast,
        Some(other) => {
            return schema(format!(
                "tail must be \"none\" or \"repeat-last\", got {other}"
            ))
        }
    };
    Ok(RawDiagram {
        name,
        levels,
        matrices,
        tail,
    })
}

/// `{"kind": "zero-row", "level": 1, "row": 1, "message": …}`.
pub fn violation_to_json(v: &Violation) -> Value {
    let (kind, fields) = match *v {
        Violation::NoLevels => ("no-levels", json!({})),
        Violation::RootWidth { found } => ("root-width", json!({"found": found})),
        Violation::EmptyLevel { level } => ("empty-level", json!({"level": level})),
        Violation::MatrixCount { expected, found } => (
            "matrix-count",
            json!({"expected": expected, "found": found}),
        ),
        Violation::RowCount {
            level,
            expected,
            found,
        } => (
            "row-count",
            json!({"level": level, "expected": expected, "found": found}),
        ),
        Violation::RowLength {
            level,
            row,
            expected,
            found,
        } => (
            "row-length",
            json!({"level": level, "row": row, "expected": expected, "found": found}),
        ),
        Violation::ZeroRow { level, row } => ("zero-row", json!({"level": level, "row": row})),
        Violation::ZeroColumn { level, column } => {
            ("zero-column", json!({"level": level, "column": column}))
        }
        Violation::TailWithoutMatrix => ("tail-without-matrix", json!({})),
        Violation::TailNotSquare { level, rows, cols } => (
            "tail-not-square",
            json!({"level": level, "rows": rows, "cols": cols}),
        ),
    };
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(kind));
    if let Value::Object(extra) = fields {
        obj.extend(extra);
    }
    obj.insert("message".into(), json!(v.to_string()));
    Value::Object(obj)
}

pub fn group_to_json(g: &OrderedGroup) -> Value {
    match g {
        OrderedGroup::Cyclic(c) => json!({
            "kind": "cyclic",
            "generators": c.generators(),
            "unit": c.unit(),
        }),
        OrderedGroup::Quadratic(q) => {
            let (k, z) = q.unit();
            json!({
                "kind": "quadratic",
                "H": sn_to_json(q.h()),
                "alpha_square": q.alpha_square(),
                "unit": {"k": rational_to_string(k), "z": int_to_json(z)},
            })
        }
    }
}

fn rational_from_json(v: &Value) -> Result<BigRational, FormatError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(BigRational::from_integer(int_from_json(v)?)),
        other => schema(format!("expected a rational, got {other}")),
    }
}

pub fn group_from_json(v: &Value) -> Result<OrderedGroup, FormatError> {
    let Value::Object(obj) = v else {
        return schema("group descriptor must be an object");
    };
    match obj.get("kind").and_then(Value::as_str) {
        Some("cyclic") => {
            let gens = match obj.get("generators") {
                Some(Value::Array(gs)) => gs
                    .iter()
                    .map(|g| small_from_json(g, "generators"))
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return schema("cyclic group needs a \"generators\" array"),
            };
            let unit = small_from_json(obj.get("unit").unwrap_or(&Value::Null), "unit")?;
            Ok(OrderedGroup::Cyclic(CyclicOrderedGroup::new(&gens, unit)?))
        }
        Some("quadratic") => {
            let h = sn_from_json(obj.get("H").unwrap_or(&Value::Null))?;
            let d = small_from_json(
                obj.get("alpha_square").unwrap_or(&Value::Null),
                "alpha_square",
            )?;
            let Some(Value::Object(unit)) = obj.get("unit") else {
                return schema("quadratic group needs a \"unit\" object {\"k\", \"z\"}");
            };
            let k = rational_from_json(unit.get("k").unwrap_or(&Value::Null))?;
            let z = int_from_json(unit.get("z").unwrap_or(&Value::Null))?;
            Ok(OrderedGroup::Quadratic(QuadraticIrrationalGroup::new(
                h, d, k, z,
            )?))
        }
        _ => schema("group kind must be \"cyclic\" or \"quadratic\""),
    }
}

/// `"7"` for cyclic groups, `"3/4,0"` (rational part, √d coefficient) for
/// quadratic ones.
pub fn parse_element(g: &OrderedGroup, text: &str) -> Result<GroupElement, FormatError> {
    match g {
        OrderedGroup::Cyclic(_) => BigInt::from_str(text.trim())
            .map(GroupElement::Integer)
            .or_else(|_| schema(format!("expected an integer element, got {text:?}"))),
        OrderedGroup::Quadratic(_) => {
            let Some((q, z)) = text.split_once(',') else {
                return schema(format!("expected \"q,z\" for q + z·α, got {text:?}"));
            };
            Ok(GroupElement::Quadratic {
                rational: parse_rational(q)?,
                irrational: BigInt::from_str(z.trim())
                    .or_else(|_| schema(format!("expected an integer α-coefficient, got {z:?}")))?,
            })
        }
    }
}

pub fn element_to_json(e: &GroupElement) -> Value {
    match e {
        GroupElement::Integer(x) => int_to_json(x),
        GroupElement::Quadratic {
            rational,
            irrational,
        } => json!({"q": rational_to_string(rational), "z": int_to_json(irrational)}),
    }
}

pub fn premorphism_to_json(p: &Premorphism) -> Value {
    json!({
        "level_map": p.level_map,
        "matrices": p.matrices.iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn premorphism_from_json(v: &Value) -> Result<Premorphism, FormatError> {
    let level_map = match v.get("level_map") {
        Some(Value::Array(ls)) => ls
            .iter()
            .map(|l| small_from_json(l, "level_map").map(|k| k as usize))
            .collect::<Result<Vec<_>, _>>()?,
        _ => return schema("premorphism needs a \"level_map\" array"),
    };
    let matrices = match v.get("matrices") {
        Some(Value::Array(ms)) => ms
            .iter()
            .map(|m| {
                let rows = rows_from_json(m)?;
                let cols = rows.first().map_or(0, Vec::len);
                if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
                    return schema("premorphism matrices must be nonempty and rectangular");
                }
                Ok(Matrix::from_rows(rows))
            })
            .collect::<Result<Vec<_>, _>>()?,
        _ => return schema("premorphism needs a \"matrices\" array"),
    };
    Ok(Premorphism {
        level_map,
        matrices,
    })
}
