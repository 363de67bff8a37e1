//! Family interchange format.
//!
//! ```json
//! { "bases": [ { "exponents": [[0,0],[0,1]], "label": "a=0", "standard": false } ],
//!   "construction": "...", "dimension": 2, "parameters": {}, "root_order": 2 }
//! ```
//!
//! Keys are written sorted and the document is compact, so identical
//! families always produce identical bytes. `exponents` is omitted for the
//! standard basis.

use serde_json::{json, Map, Value};

use super::{ExponentBasis, MubFamily};
use crate::error::{Error, Result};

fn basis_to_value(b: &ExponentBasis) -> Value {
    let mut obj = Map::new();
    obj.insert("label".into(), json!(b.label()));
    obj.insert("standard".into(), json!(b.is_standard()));
    if !b.is_standard() {
        let rows: Vec<Value> = b.rows().map(|r| json!(r)).collect();
        obj.insert("exponents".into(), Value::Array(rows));
    }
    Value::Object(obj)
}

/// Serialize a family to its canonical JSON text (trailing newline).
pub fn export_family(f: &MubFamily) -> String {
    let doc = json!({
        "dimension": f.dimension(),
        "root_order": f.root_order(),
        "construction": f.construction(),
        "parameters": Value::Object(f.parameters().clone()),
        "bases": f.bases().iter().map(basis_to_value).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string(&doc).expect("family documents always serialize");
    s.push('\n');
    s
}

fn schema(msg: impl Into<String>) -> Error {
    Error::SchemaViolation(msg.into())
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("unknown key '{k}' in {what}"))),
        None => Ok(()),
    }
}

fn positive_int(obj: &Map<String, Value>, key: &str) -> Result<u64> {
    obj.get(key)
        .ok_or_else(|| schema(format!("missing '{key}'")))?
        .as_u64()
        .filter(|&v| v > 0)
        .ok_or_else(|| schema(format!("'{key}' must be a positive integer")))
}

fn parse_basis(v: &Value, d: usize, m: u64, idx: usize) -> Result<ExponentBasis> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema(format!("basis {idx} is not an object")))?;
    check_keys(obj, &["label", "standard", "exponents"], "basis")?;
    let label = obj
        .get("label")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(format!("basis {idx}: 'label' must be a string")))?;
    let standard = obj
        .get("standard")
        .and_then(Value::as_bool)
        .ok_or_else(|| schema(format!("basis {idx}: 'standard' must be a boolean")))?;
    if standard {
        if obj.contains_key("exponents") {
            return Err(schema(format!(
                "basis {idx}: standard basis carries exponents"
            )));
        }
        return Ok(ExponentBasis::standard(d).with_label(label));
    }
    let rows = obj
        .get("exponents")
        .and_then(Value::as_array)
        .ok_or_else(|| schema(format!("basis {idx}: 'exponents' must be an array")))?;
    if rows.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "basis {idx}: {} rows, dimension {d}",
            rows.len()
        )));
    }
    let mut exps = Vec::with_capacity(d * d);
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| schema(format!("basis {idx}: exponent rows must be arrays")))?;
        if row.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis {idx}: row of length {}, dimension {d}",
                row.len()
            )));
        }
        for e in row {
            let value = e
                .as_i64()
                .ok_or_else(|| schema(format!("basis {idx}: exponents must be integers")))?;
            if value < 0 || value as u64 >= m {
                return Err(Error::ExponentOutOfRange {
                    value,
                    root_order: m,
                });
            }
            exps.push(value as u32);
        }
    }
    ExponentBasis::flat(d, m, label, exps)
}

/// Parse and validate a family document.
pub fn import_family(text: &str) -> Result<MubFamily> {
    let doc: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("document is not an object"))?;
    check_keys(
        obj,
        &[
            "dimension",
            "root_order",
            "construction",
            "parameters",
            "bases",
        ],
        "family",
    )?;
    let d = positive_int(obj, "dimension")? as usize;
    let m = positive_int(obj, "root_order")?;
    let construction = obj
        .get("construction")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("'construction' must be a string"))?;
    let parameters = obj
        .get("parameters")
        .and_then(Value::as_object)
        .cloned()
        .ok_or_else(|| schema("'parameters' must be an object"))?;
    let bases = obj
        .get("bases")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("'bases' must be an array"))?
        .iter()
        .enumerate()
        .map(|(i, b)| parse_basis(b, d, m, i))
        .collect::<Result<Vec<_>>>()?;
    MubFamily::new(d, m, construction, parameters, bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{prime_power_family, wootters_fields};
    use crate::finite_field::make_field;

    #[test]
    fn round_trip_and_bytes() {
        let f = wootters_fields(&make_field(3, 1, None).unwrap()).unwrap();
        let text = export_family(&f);
        assert_eq!(import_family(&text).unwrap(), f);
        assert_eq!(export_family(&import_family(&text).unwrap()), text);
        assert!(text.starts_with(
            r#"{"bases":[{"label":"standard","standard":true},{"exponents":[[0,0,0],"#
        ));
        assert!(text.ends_with("\"construction\":\"wootters-fields\",\"dimension\":3,\"parameters\":{\"modulus\":[0,1],\"n\":1,\"p\":3},\"root_order\":3}\n"));
        assert!(!text.contains('.'));
    }

    fn doc_with(bases: &str, m: u64) -> String {
        format!(
            r#"{{"dimension":2,"root_order":{m},"construction":"t","parameters":{{}},"bases":{bases}}}"#
        )
    }

    #[test]
    fn import_errors() {
        let ok = doc_with(
            r#"[{"label":"s","standard":true},{"label":"f","standard":false,"exponents":[[0,0],[0,1]]}]"#,
            2,
        );
        assert_eq!(import_family(&ok).unwrap().len(), 2);
        let out_of_range = doc_with(
            r#"[{"label":"f","standard":false,"exponents":[[0,0],[0,2]]}]"#,
            2,
        );
        assert!(matches!(
            import_family(&out_of_range),
            Err(Error::ExponentOutOfRange { value: 2, .. })
        ));
        let negative = doc_with(
            r#"[{"label":"f","standard":false,"exponents":[[0,0],[0,-1]]}]"#,
            2,
        );
        assert!(matches!(
            import_family(&negative),
            Err(Error::ExponentOutOfRange { value: -1, .. })
        ));
        let two_std = doc_with(
            r#"[{"label":"s","standard":true},{"label":"t","standard":true}]"#,
            2,
        );
        assert!(matches!(
            import_family(&two_std),
            Err(Error::SchemaViolation(_))
        ));
        let short = doc_with(r#"[{"label":"f","standard":false,"exponents":[[0,0]]}]"#, 2);
        assert!(matches!(
            import_family(&short),
            Err(Error::DimensionMismatch(_))
        ));
        let ragged = doc_with(
            r#"[{"label":"f","standard":false,"exponents":[[0,0],[0]]}]"#,
            2,
        );
        assert!(matches!(
            import_family(&ragged),
            Err(Error::DimensionMismatch(_))
        ));
        let float = doc_with(
            r#"[{"label":"f","standard":false,"exponents":[[0,0],[0,0.5]]}]"#,
            2,
        );
        assert!(matches!(
            import_family(&float),
            Err(Error::SchemaViolation(_))
        ));
        let extra = ok.replacen("{", r#"{"extra":1,"#, 1);
        assert!(matches!(
            import_family(&extra),
            Err(Error::SchemaViolation(_))
        ));
        assert!(matches!(
            import_family("not json"),
            Err(Error::SchemaViolation(_))
        ));
        assert!(matches!(
            import_family("{}"),
            Err(Error::SchemaViolation(_))
        ));
    }

    #[test]
    fn round_trip_tensor_family() {
        let f = crate::constructions::macneish_tensor(&[
            prime_power_family(4).unwrap(),
            prime_power_family(3).unwrap(),
        ])
        .unwrap();
        assert_eq!(import_family(&export_family(&f)).unwrap(), f);
    }
}
