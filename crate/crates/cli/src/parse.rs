use num_complex::Complex64;

fn number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

/// Position of the sign separating the real and imaginary parts of `1-2i`,
/// skipping exponent signs such as `1e-3`.
fn split_at_sign(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
}

fn imaginary(s: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => number(s),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` and `i`.
pub fn parse_scalar(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    match s.strip_suffix('i') {
        None => Ok(Complex64::new(number(s)?, 0.0)),
        Some(body) => match split_at_sign(body) {
            Some(k) => Ok(Complex64::new(number(&body[..k])?, imaginary(&body[k..])?)),
            None => Ok(Complex64::new(0.0, imaginary(body)?)),
        },
    }
}

pub fn parse_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_scalar).collect()
}

pub fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<i64>().map_err(|_| format!("not an integer: {v:?}")))
        .collect()
}
