//! JSON encodings with exact decimal integers.

use serde_json::{json, Value};

use crate::invariants::QuasiPolynomial;
use crate::{Int, Poly, TuttePoly};

pub fn int(x: &Int) -> Value {
    serde_json::from_str(&x.to_string()).expect("decimal integers are valid JSON numbers")
}

/// Ascending coefficient array.
pub fn poly(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(int).collect())
}

/// `[[i, j, c], ...]` sorted by `(i, j)`.
pub fn tutte(t: &TuttePoly) -> Value {
    Value::Array(t.triples().iter().map(|(i, j, c)| json!([i, j, int(c)])).collect())
}

/// `{"period", "constituents"}` with the full list when it is short enough,
/// and `{"period", "constituents_by_gcd"}` keyed by divisor otherwise.
pub fn quasi(q: &QuasiPolynomial) -> Value {
    match q.constituents() {
        Ok(list) => json!({
            "period": q.period(),
            "constituents": list.iter().map(poly).collect::<Vec<_>>(),
        }),
        Err(_) => {
            let by_gcd: serde_json::Map<String, Value> =
                q.classes().iter().map(|(d, p)| (d.to_string(), poly(p))).collect();
            json!({ "period": q.period(), "constituents_by_gcd": by_gcd })
        }
    }
}
