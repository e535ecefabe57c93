use std::fs;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quadpencil::DiagonalPencil;
use serde::Deserialize;
use serde_json::Value;

use crate::args::CurveArgs;
use crate::CliError;

fn bigint(s: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(s.trim()).map_err(|_| CliError::Usage(format!("`{s}` is not an integer")))
}

pub fn parse_bound(s: &str) -> Result<BigInt, CliError> {
    let b = bigint(s)?;
    if b < BigInt::one() {
        return Err(CliError::Usage(format!("height bound must be at least 1, got {b}")));
    }
    Ok(b)
}

fn quadruple(s: &str, name: &str) -> Result<[BigInt; 4], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!("--{name} needs four comma-separated integers, got `{s}`")));
    }
    let v = parts.iter().map(|p| bigint(p)).collect::<Result<Vec<_>, _>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

#[derive(Deserialize)]
struct CurveFile {
    a: Vec<Value>,
    b: Vec<Value>,
}

fn json_quadruple(v: &[Value], name: &str) -> Result<[BigInt; 4], CliError> {
    if v.len() != 4 {
        return Err(CliError::Usage(format!("curve file: `{name}` must have four entries")));
    }
    let parse = |x: &Value| match x {
        Value::Number(n) => bigint(&n.to_string()),
        Value::String(s) => bigint(s),
        other => Err(CliError::Usage(format!("curve file: `{other}` is not an integer"))),
    };
    let v = v.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

pub fn parse_curve(args: &CurveArgs) -> Result<DiagonalPencil, CliError> {
    let (a, b) = match (&args.a, &args.b, &args.curve) {
        (Some(a), Some(b), None) => (quadruple(a, "a")?, quadruple(b, "b")?),
        (None, None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let f: CurveFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{} is not a curve file: {e}", path.display())))?;
            (json_quadruple(&f.a, "a")?, json_quadruple(&f.b, "b")?)
        }
        _ => return Err(CliError::Usage("give either --a and --b, or --curve FILE".into())),
    };
    Ok(DiagonalPencil::new(a, b)?)
}

/// An exact rational from `n`, `n/d` or a decimal such as `0.0075`.
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not a rational number"));
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(BigInt::from_str(n.trim()).map_err(|_| bad())?, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}
