use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::chain::{format_rational, to_chain_file, AbsorbingChain};
use crate::{RatPoly, Rational};

/// `sha256:` followed by the hex digest of the canonical chain file.
pub fn chain_digest(chain: &impl AbsorbingChain) -> String {
    let hash = Sha256::digest(to_chain_file(chain).as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Shortest decimal that parses back to the same double.
pub fn format_float(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

pub(crate) fn coeff_strings(p: &RatPoly) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(format_rational).collect()
}

pub(crate) fn to_f64(x: &Rational) -> f64 {
    crate::algebra::Scalar::to_f64_lossy(x)
}

/// Single JSON object per run; field order is fixed by the struct.
#[derive(Serialize)]
pub(crate) struct OutputRecord<T: Serialize> {
    pub command: &'static str,
    pub arguments: Vec<String>,
    pub chain_digest: String,
    pub kind: &'static str,
    pub d: usize,
    pub results: T,
    pub warnings: Vec<String>,
}

impl<T: Serialize> OutputRecord<T> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

pub(crate) fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
