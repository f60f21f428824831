//! The module file format: a single JSON object with fields `n`, `char`,
//! `components` (degree → dimension) and `action` (generator index →
//! degree → row-major matrix; absent = zero). Integers are reduced into the
//! field; in characteristic 0 entries are strings "p" or "p/q".
//!
//! The writer is canonical (numeric key order, fixed layout), so
//! write(parse(write(M))) is byte-identical to write(M).

use crate::error::{Error, Result};
use crate::exterior::Ctx;
use crate::field::{parse_scalar, Field, PrimeField, Rationals};
use crate::matrix::Mat;
use crate::module::LambdaModule;
use serde_json::Value;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Canonical text form of a module.
pub fn write_module<F: Field>(m: &LambdaModule<F>) -> String {
    let f = m.field();
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"n\": {},\n", m.ctx().n()));
    out.push_str(&format!("  \"char\": {},\n", f.characteristic()));
    let comps: Vec<String> = m
        .dims()
        .iter()
        .map(|(d, v)| format!("\"{d}\": {v}"))
        .collect();
    out.push_str(&format!("  \"components\": {{{}}},\n", comps.join(", ")));
    out.push_str("  \"action\": {\n");
    let mut gen_lines = Vec::new();
    for i in 0..=m.ctx().n() {
        let mut deg_lines = Vec::new();
        for &d in m.dims().keys() {
            if m.dim(d + 1) == 0 {
                continue;
            }
            let mat = m.act(d, i);
            if mat.is_zero(f) {
                continue;
            }
            let rows: Vec<String> = (0..mat.rows())
                .map(|r| {
                    let cells: Vec<String> = (0..mat.cols())
                        .map(|c| render_entry(f, &mat[(r, c)]))
                        .collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            deg_lines.push(format!("      \"{d}\": [{}]", rows.join(", ")));
        }
        if !deg_lines.is_empty() {
            gen_lines.push(format!(
                "    \"{i}\": {{\n{}\n    }}",
                deg_lines.join(",\n")
            ));
        }
    }
    out.push_str(&gen_lines.join(",\n"));
    if !gen_lines.is_empty() {
        out.push('\n');
    }
    out.push_str("  }\n}\n");
    out
}

fn render_entry<F: Field>(f: &F, e: &F::Elem) -> String {
    let s = f.render(e);
    if f.characteristic() == 0 {
        format!("\"{s}\"")
    } else {
        s
    }
}

/// The characteristic recorded in a module file (0 for the rationals).
pub fn module_char(text: &str) -> Result<u64> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    v.get("char")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or invalid \"char\"".into()))
}

/// Parse a module file against a field context (characteristics must agree).
pub fn read_module<F: Field>(field: F, text: &str) -> Result<LambdaModule<F>> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("module file must be a JSON object".into()))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or invalid \"n\"".into()))? as usize;
    if n < 1 {
        return Err(Error::Parse("need n ≥ 1".into()));
    }
    let ch = obj
        .get("char")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or invalid \"char\"".into()))?;
    if ch != field.characteristic() {
        return Err(Error::Parse(format!(
            "file characteristic {ch} ≠ context characteristic {}",
            field.characteristic()
        )));
    }
    let ctx = Ctx::new(n, field);
    let comps = obj
        .get("components")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("missing \"components\"".into()))?;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for (k, val) in comps {
        let d: i64 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree key {k:?}")))?;
        let dim = val
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("bad dimension at degree {d}")))?
            as usize;
        if dim > 0 {
            dims.insert(d, dim);
        }
    }
    let mut act: BTreeMap<i64, Vec<Mat<F>>> = BTreeMap::new();
    let zero_row = |ctx: &Ctx<F>, d: i64, dims: &BTreeMap<i64, usize>| -> Vec<Mat<F>> {
        let rows = dims.get(&d).copied().unwrap_or(0);
        let cols = dims.get(&(d + 1)).copied().unwrap_or(0);
        vec![Mat::zeros(&ctx.field, rows, cols); ctx.n() + 1]
    };
    if let Some(action) = obj.get("action") {
        let action = action
            .as_object()
            .ok_or_else(|| Error::Parse("\"action\" must be an object".into()))?;
        for (ik, degs) in action {
            let i: usize = ik
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator key {ik:?}")))?;
            if i > n {
                return Err(Error::Parse(format!(
                    "generator index {i} out of range 0..{n}"
                )));
            }
            let degs = degs
                .as_object()
                .ok_or_else(|| Error::Parse(format!("action of e{i} must be an object")))?;
            for (dk, mat) in degs {
                let d: i64 = dk
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree key {dk:?}")))?;
                let rows = dims.get(&d).copied().unwrap_or(0);
                let cols = dims.get(&(d + 1)).copied().unwrap_or(0);
                let parsed = parse_matrix(&ctx.field, rows, cols, mat)
                    .map_err(|e| Error::Parse(format!("action e{i} at degree {d}: {e}")))?;
                act.entry(d).or_insert_with(|| zero_row(&ctx, d, &dims))[i] = parsed;
            }
        }
    }
    let m = LambdaModule::new(ctx, dims, act)?;
    m.validate()?;
    Ok(m)
}

fn parse_matrix<F: Field>(
    f: &F,
    rows: usize,
    cols: usize,
    v: &Value,
) -> std::result::Result<Mat<F>, String> {
    let arr = v.as_array().ok_or("matrix must be an array of rows")?;
    if arr.len() != rows {
        return Err(format!("expected {rows} rows, found {}", arr.len()));
    }
    let mut m = Mat::zeros(f, rows, cols);
    for (r, row) in arr.iter().enumerate() {
        let row = row.as_array().ok_or("row must be an array")?;
        if row.len() != cols {
            return Err(format!("expected {cols} columns, found {}", row.len()));
        }
        for (c, cell) in row.iter().enumerate() {
            m[(r, c)] = parse_entry(f, cell)?;
        }
    }
    Ok(m)
}

fn parse_entry<F: Field>(f: &F, v: &Value) -> std::result::Result<F::Elem, String> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or("entry out of integer range")?;
            Ok(f.from_i64(i))
        }
        Value::String(s) => parse_scalar(f, s),
        _ => Err("entry must be an integer or a string".into()),
    }
}

/// Read a module file with either supported scalar type, dispatching on the
/// recorded characteristic.
pub enum AnyModule {
    Fp(Arc<LambdaModule<PrimeField>>),
    Rat(Arc<LambdaModule<Rationals>>),
}

pub fn read_module_any(text: &str) -> Result<AnyModule> {
    let ch = module_char(text)?;
    if ch == 0 {
        Ok(AnyModule::Rat(Arc::new(read_module(Rationals, text)?)))
    } else {
        let p = u32::try_from(ch).map_err(|_| Error::Parse("characteristic too large".into()))?;
        Ok(AnyModule::Fp(Arc::new(read_module(
            PrimeField::new(p),
            text,
        )?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::builders::truncated;
    use crate::field::DEFAULT_PRIME;
    use crate::random::{random_module, rng};

    #[test]
    fn roundtrip_is_bit_exact() {
        let ctx = Ctx::new(2, PrimeField::new(DEFAULT_PRIME));
        let m = truncated(&ctx, 2, 1);
        let text = write_module(&m);
        let parsed = read_module(PrimeField::new(DEFAULT_PRIME), &text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(write_module(&parsed), text);
    }

    #[test]
    fn roundtrip_random_modules() {
        let ctx = Ctx::new(2, PrimeField::new(DEFAULT_PRIME));
        let mut r = rng(11);
        for _ in 0..10 {
            let m = random_module(&ctx, &mut r, 40);
            let text = write_module(&m);
            let parsed = read_module(PrimeField::new(DEFAULT_PRIME), &text).unwrap();
            assert_eq!(parsed, *m);
            assert_eq!(write_module(&parsed), text);
        }
    }

    #[test]
    fn rational_entries() {
        let ctx = Ctx::new(1, Rationals);
        let m = truncated(&ctx, 2, 0);
        let text = write_module(&m);
        assert!(text.contains("\"char\": 0"));
        let parsed = read_module(Rationals, &text).unwrap();
        assert_eq!(parsed, m);
    }

    #[test]
    fn malformed_files_are_parse_errors() {
        assert!(matches!(read_module_any("not json"), Err(Error::Parse(_))));
        assert!(matches!(
            read_module_any("{\"n\": 2}"),
            Err(Error::Parse(_))
        ));
        // wrong shape matrix
        let bad = r#"{"n": 1, "char": 32003, "components": {"0": 1, "1": 2},
                      "action": {"0": {"0": [[1]]}}}"#;
        assert!(matches!(read_module_any(bad), Err(Error::Parse(_))));
        // inconsistent action (fails the module axioms, not a parse error)
        let bad_axioms = r#"{"n": 1, "char": 7, "components": {"0": 1, "1": 1, "2": 1},
                      "action": {"0": {"0": [[1]], "1": [[1]]}}}"#;
        assert!(matches!(
            read_module_any(bad_axioms),
            Err(Error::InvalidModule(_))
        ));
    }
}
