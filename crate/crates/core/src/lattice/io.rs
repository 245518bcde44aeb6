//! Text and JSON serialisation of square bases.
//!
//! Text layout: first line `N`, then `N` lines of `N` space-separated integers.
//! JSON layout: `{"dim": N, "rows": [[...], ...]}`; entries that do not fit in
//! an `i64` are written as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::basis::Basis;
use crate::error::{Error, Result};

pub fn to_text(b: &Basis) -> String {
    let mut out = format!("{}\n", b.nrows());
    for row in b.rows() {
        let line: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(s: &str) -> Result<Basis> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or(Error::EmptyInput)?
        .parse()
        .map_err(|e| Error::Parse(format!("dimension line: {e}")))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
        let row = line
            .split_whitespace()
            .map(|t| BigInt::from_str(t).map_err(|e| Error::Parse(format!("row {i}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        rows.push(row);
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after basis".into()));
    }
    Basis::new(rows)
}

fn int_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Parse(format!("non-integer entry {n}"))),
        Value::String(s) => BigInt::from_str(s).map_err(|e| Error::Parse(e.to_string())),
        other => Err(Error::Parse(format!("unexpected entry {other}"))),
    }
}

pub fn to_json_value(b: &Basis) -> Value {
    let rows: Vec<Value> = b
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(int_to_json).collect()))
        .collect();
    json!({ "dim": b.nrows(), "rows": rows })
}

pub fn to_json(b: &Basis) -> String {
    to_json_value(b).to_string()
}

pub fn from_json_value(v: &Value) -> Result<Basis> {
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing `rows` array".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse("row is not an array".into()))?
                .iter()
                .map(int_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(dim) = v.get("dim").and_then(Value::as_u64) {
        if dim as usize != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: dim as usize,
                got: rows.len(),
            });
        }
    }
    Basis::new(rows)
}

pub fn from_json(s: &str) -> Result<Basis> {
    from_json_value(&serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let b = Basis::from_i64(&[[1, 2], [0, -2]]).unwrap();
        assert_eq!(to_text(&b), "2\n1 2\n0 -2\n");
        assert_eq!(from_text("2\n1 2\n0 -2\n").unwrap(), b);
        assert!(from_text("2\n1 2\n").is_err());
        assert!(from_text("2\n1 2 3\n0 1\n").is_err());
    }

    #[test]
    fn json_big_entries() {
        let big: BigInt = BigInt::from(i64::MAX) * 1000 + 7;
        let b = Basis::new(vec![
            vec![big.clone(), BigInt::from(-3)],
            vec![BigInt::from(0), -big],
        ])
        .unwrap();
        let s = to_json(&b);
        assert!(s.contains('"'));
        assert_eq!(from_json(&s).unwrap(), b);
    }
}
