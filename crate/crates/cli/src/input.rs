//! Arrangement file schema:
//! `{"group": {"free_rank": int, "torsion": [int...]}, "vectors": [[int...]...], "name": str?}`.

use arrangement_core::linalg::{smith_normal_form, FgAbelianGroup, IntegerMatrix};
use arrangement_core::{json, Arrangement, Int};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementFile {
    pub name: Option<String>,
    pub arrangement: Arrangement,
    /// Vectors whose torsion coordinates were reduced on load.
    pub reduced: Vec<usize>,
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, String> {
    obj.get(key).ok_or_else(|| format!("field `{path}{key}`: missing"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, String> {
    v.as_object().ok_or_else(|| format!("field `{path}`: expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, String> {
    v.as_array().ok_or_else(|| format!("field `{path}`: expected an array"))
}

fn integer(v: &Value, path: &str) -> Result<Int, String> {
    match v {
        Value::Number(n) => {
            n.to_string().parse().map_err(|_| format!("field `{path}`: expected an integer, found {n}"))
        }
        other => Err(format!("field `{path}`: expected an integer, found {other}")),
    }
}

pub fn parse(text: &str) -> Result<ArrangementFile, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("line {} column {}: {e}", e.line(), e.column()))?;
    let root = object(&doc, "")?;
    for key in root.keys() {
        if !["group", "vectors", "name"].contains(&key.as_str()) {
            return Err(format!("field `{key}`: unknown field"));
        }
    }
    let group = object(field(root, "", "group")?, "group")?;
    let free_rank = integer(field(group, "group.", "free_rank")?, "group.free_rank")?;
    let free_rank: usize = (&free_rank)
        .try_into()
        .map_err(|_| format!("field `group.free_rank`: expected a non-negative integer, found {free_rank}"))?;
    let torsion = match group.get("torsion") {
        None => Vec::new(),
        Some(t) => array(t, "group.torsion")?
            .iter()
            .enumerate()
            .map(|(i, x)| integer(x, &format!("group.torsion[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
    };
    if let Some((i, o)) = torsion.iter().enumerate().find(|(_, o)| **o < Int::from(1)) {
        return Err(format!("field `group.torsion[{i}]`: cyclic order {o} is not positive"));
    }
    let gamma = FgAbelianGroup::from_cyclic_orders(free_rank, &torsion).map_err(|e| format!("field `group`: {e}"))?;
    let width = free_rank + torsion.len();
    let mut vectors = Vec::new();
    for (i, v) in array(field(root, "", "vectors")?, "vectors")?.iter().enumerate() {
        let entries = array(v, &format!("vectors[{i}]"))?;
        if entries.len() != width {
            return Err(format!(
                "field `vectors[{i}]`: length {} but the group has {width} coordinates",
                entries.len()
            ));
        }
        let vec = entries
            .iter()
            .enumerate()
            .map(|(j, x)| integer(x, &format!("vectors[{i}][{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        vectors.push(vec);
    }
    let name = match root.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(format!("field `name`: expected a string, found {other}")),
    };
    // Judged against the declared orders, before any change of basis.
    let reduced = vectors
        .iter()
        .enumerate()
        .filter(|(_, v)| v[free_rank..].iter().zip(&torsion).any(|(x, d)| *x < Int::from(0) || x >= d))
        .map(|(i, _)| i)
        .collect();
    if gamma.torsion() != torsion.as_slice() {
        vectors = vectors.iter().map(|v| to_invariant_factors(v, free_rank, &torsion)).collect();
    }
    let arrangement = Arrangement::new(gamma, vectors).map_err(|e| format!("field `vectors`: {e}"))?;
    Ok(ArrangementFile { name, arrangement, reduced })
}

/// Rewrites coordinates over `Z/o_1 ⊕ ... ⊕ Z/o_k` in the invariant-factor
/// basis, dropping the coordinates of trivial factors.
fn to_invariant_factors(v: &[Int], free_rank: usize, orders: &[Int]) -> Vec<Int> {
    let smith = smith_normal_form(&IntegerMatrix::diagonal(orders.len(), orders));
    let moved = smith.v.left_apply(&v[free_rank..]).expect("width checked");
    let diag = smith.diagonal();
    let kept = moved.into_iter().zip(&diag).filter(|(_, d)| **d > Int::from(1)).map(|(x, _)| x);
    v[..free_rank].iter().cloned().chain(kept).collect()
}

/// Canonical document for an arrangement; `parse(emit(a))` recovers `a`.
pub fn emit(name: Option<&str>, arr: &Arrangement) -> Value {
    let gamma = arr.gamma();
    let mut doc = json!({
        "group": {
            "free_rank": gamma.free_rank(),
            "torsion": gamma.torsion().iter().map(json::int).collect::<Vec<_>>(),
        },
        "vectors": arr.elements().iter().map(|v| v.iter().map(json::int).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    if let Some(n) = name {
        doc["name"] = Value::String(n.to_string());
    }
    doc
}
