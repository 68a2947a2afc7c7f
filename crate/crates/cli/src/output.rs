use std::io::{self, Write};

use num_complex::Complex64;
use serde_json::{Map, Value};

/// One JSON object per line, each tagged with its `record_type`.
pub struct Emitter<W: Write> {
    out: W,
}

impl<W: Write> Emitter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn record(&mut self, record_type: &str, body: Value) -> io::Result<()> {
        let mut map = match body {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        map.insert("record_type".into(), Value::from(record_type));
        serde_json::to_writer(&mut self.out, &Value::Object(map))?;
        self.out.write_all(b"\n")
    }

    pub fn line(&mut self, text: &str) -> io::Result<()> {
        self.out.write_all(text.as_bytes())?;
        self.out.write_all(b"\n")
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Non-finite values become `null`.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Writes `name` with the real part and `name_im` with the imaginary part.
pub fn put_scalar(map: &mut Map<String, Value>, name: &str, z: Complex64) {
    map.insert(name.into(), num(z.re));
    map.insert(format!("{name}_im"), num(z.im));
}

pub fn put_scalars(map: &mut Map<String, Value>, name: &str, zs: &[Complex64]) {
    map.insert(name.into(), Value::Array(zs.iter().map(|z| num(z.re)).collect()));
    map.insert(format!("{name}_im"), Value::Array(zs.iter().map(|z| num(z.im)).collect()));
}

pub fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tagged_lines() {
        let mut buf = Vec::new();
        let mut e = Emitter::new(&mut buf);
        e.record("a", json!({"x": 1})).unwrap();
        e.record("b", Value::Null).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[0]["record_type"], "a");
        assert_eq!(lines[0]["x"], 1);
        assert_eq!(lines[1]["record_type"], "b");
    }

    #[test]
    fn scalars_split() {
        let mut m = Map::new();
        put_scalar(&mut m, "kappa", Complex64::new(-2.0, 0.5));
        put_scalar(&mut m, "bad", Complex64::new(f64::NAN, 0.0));
        assert_eq!(m["kappa"], json!(-2.0));
        assert_eq!(m["kappa_im"], json!(0.5));
        assert_eq!(m["bad"], Value::Null);
    }
}
