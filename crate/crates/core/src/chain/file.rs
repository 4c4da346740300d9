//! JSON chain files: `{"kind": "discrete" | "continuous", "matrix": [[entry, ...], ...]}`.
//!
//! An entry is a JSON integer, a decimal string (`"0.25"`, `"-1.5e-2"`) or a
//! fraction string (`"a/b"`, `b > 0`). Every entry is converted to an exact
//! rational; bare JSON floats are rejected.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::Serialize;
use serde_json::Value;

use super::{AbsorbingChain, Chain, ChainError, ChainKind, Matrix};
use crate::Rational;

/// `"a/b"` in lowest terms, or `"a"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, unsigned) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let magnitude = if shift >= 0 {
        Rational::from_integer(digits * Pow::pow(&ten, shift as u32))
    } else {
        Rational::new(digits, Pow::pow(&ten, (-shift) as u32))
    };
    Some(if negative { -magnitude } else { magnitude })
}

/// Parses `"a/b"`, an integer, or a decimal string into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ChainError> {
    let s = text.trim();
    let bad = || ChainError::Syntax(format!("not a rational number: {text:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let num = parse_int(a.trim()).ok_or_else(bad)?;
        let b = b.trim();
        if b.starts_with(['+', '-']) {
            return Err(bad());
        }
        let den = parse_int(b).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(ChainError::Syntax(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_entry(v: &Value, row: usize, col: usize) -> Result<Rational, ChainError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(ChainError::Syntax(format!(
                    "entry ({row}, {col}) is a binary float {n}; write it as a decimal or fraction string"
                )))
            }
        }
        other => Err(ChainError::Syntax(format!(
            "entry ({row}, {col}) must be a number or string, got {other}"
        ))),
    }
}

/// Parses and validates a chain file.
pub fn parse_chain_file(text: &str) -> Result<Chain, ChainError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| ChainError::Syntax(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| ChainError::Syntax("top level must be an object".into()))?;
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("discrete") => ChainKind::Discrete,
        Some("continuous") => ChainKind::Continuous,
        Some(other) => return Err(ChainError::Syntax(format!("unknown kind {other:?}"))),
        None => return Err(ChainError::Syntax("missing string field \"kind\"".into())),
    };
    let rows = obj
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| ChainError::Syntax("missing array field \"matrix\"".into()))?;
    let matrix: Matrix = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| ChainError::Shape(format!("row {i} is not an array")))?;
            row.iter()
                .enumerate()
                .map(|(j, v)| parse_entry(v, i, j))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Chain::from_matrix(kind, matrix)
}

#[derive(Serialize)]
struct ChainFileOut<'a> {
    kind: &'a str,
    matrix: Vec<Vec<String>>,
}

/// Canonical serialization: compact JSON, every entry a lowest-terms string.
pub fn to_chain_file(chain: &impl AbsorbingChain) -> String {
    let out = ChainFileOut {
        kind: chain.kind().as_str(),
        matrix: chain
            .matrix()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect(),
    };
    serde_json::to_string(&out).expect("string matrix serializes")
}
