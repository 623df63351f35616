//! Canonical JSON text form for forms and supermatrices.
//!
//! A form is an array of `[monomial, coefficient]` pairs in canonical
//! monomial order, with coefficients as decimal `"p/q"` strings so big
//! integers survive any JSON reader. On input a plain expression string is
//! accepted as well.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::parse::parse_form;
use crate::algebra::rational::{parse_rational, Q};
use crate::algebra::{Form, SuperMatrix, Universe};
use crate::error::{Error, Result};

pub fn rational_to_json(x: &Q) -> Value {
    Value::String(x.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`")))
        }
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

pub fn form_to_json(f: &Form) -> Value {
    let u = f.universe();
    Value::Array(
        f.terms()
            .map(|(m, c)| json!([m.render(u), c.to_string()]))
            .collect(),
    )
}

pub fn form_from_json(u: &Arc<Universe>, v: &Value) -> Result<Form> {
    match v {
        Value::String(s) => parse_form(u, s),
        Value::Number(_) => Ok(Form::constant(u, rational_from_json(v)?)),
        Value::Array(items) => {
            let mut f = Form::zero(u);
            for item in items {
                let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    Error::Parse("form terms are [monomial, coefficient] pairs".into())
                })?;
                let mono = pair[0]
                    .as_str()
                    .ok_or_else(|| Error::Parse("monomial must be a string".into()))?;
                let c = rational_from_json(&pair[1])?;
                f += &parse_form(u, mono)?.scale(&c);
            }
            Ok(f)
        }
        _ => Err(Error::Parse(format!("cannot read a form from {v}"))),
    }
}

pub fn matrix_to_json(m: &SuperMatrix) -> Value {
    let n = m.dim();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| form_to_json(m.get(i, j))).collect()))
        .collect();
    let (p, q) = m.dims();
    json!({ "plus": p, "minus": q, "entries": rows })
}

/// Reads `{"plus", "minus", "entries"}` or a bare row array with known dims.
pub fn matrix_from_json(u: &Arc<Universe>, dims: (usize, usize), v: &Value) -> Result<SuperMatrix> {
    let rows = match v {
        Value::Object(o) => o
            .get("entries")
            .ok_or_else(|| Error::Parse("missing `entries`".into()))?,
        other => other,
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| Error::Parse("matrix rows must be an array".into()))?;
    let n = dims.0 + dims.1;
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} rows, found {}",
            rows.len()
        )));
    }
    let mut m = SuperMatrix::zero(u, dims.0, dims.1);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, form_from_json(u, e)?);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qr;

    #[test]
    fn form_roundtrip() {
        let u = Universe::builder().base(2).laurent("u").build().unwrap();
        let f = parse_form(&u, "2/3*z1^2*dz1*dz2 - u^-1*exp(-1)*log(6) + 5").unwrap();
        let v = form_to_json(&f);
        assert_eq!(form_from_json(&u, &v).unwrap(), f);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&form_to_json(&f)).unwrap()
        );
    }

    #[test]
    fn matrix_roundtrip() {
        let u = Universe::base(1);
        let m = SuperMatrix::from_fn(&u, 1, 1, |i, j| {
            Form::var(&u, "z1").scale(&qr(i as i64 + 1, j as i64 + 1))
        });
        let back = matrix_from_json(&u, (1, 1), &matrix_to_json(&m)).unwrap();
        assert_eq!(back, m);
    }
}
