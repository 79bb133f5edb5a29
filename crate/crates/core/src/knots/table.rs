use std::path::Path;

use serde::Deserialize;

use super::{signature, KnotRecord, TwoBridgeKnot};
use crate::error::{Error, Result};

// name, p, q, σ, slice genus; q picked so that σ ≥ 0 and q ≤ q⁻¹ mod p
const BUILTIN: &[(&str, u64, u64, i64, u32)] = &[
    ("unknot", 1, 1, 0, 0),
    ("3_1", 3, 2, 2, 1),
    ("4_1", 5, 2, 0, 1),
    ("5_1", 5, 4, 4, 2),
    ("5_2", 7, 2, 2, 1),
    ("6_1", 9, 2, 0, 0),
    ("6_2", 11, 7, 2, 1),
    ("6_3", 13, 5, 0, 1),
    ("7_4", 15, 4, 2, 1),
    ("11a365", 51, 16, 6, 3),
];

pub fn builtin_knots() -> Vec<KnotRecord> {
    BUILTIN
        .iter()
        .map(|&(name, p, q, s, g)| KnotRecord {
            name: name.to_string(),
            determinant: p,
            signature: s,
            two_bridge: Some(TwoBridgeKnot { p, q }),
            slice_genus: Some(g),
        })
        .collect()
}

pub fn builtin_knot(name: &str) -> Option<KnotRecord> {
    builtin_knots().into_iter().find(|k| k.name == name)
}

#[derive(Debug, Deserialize)]
struct Row {
    name: String,
    determinant: u64,
    signature: i64,
    two_bridge_p: Option<u64>,
    two_bridge_q: Option<u64>,
    slice_genus: Option<u32>,
}

pub fn ingest_table(path: &Path) -> Result<Vec<KnotRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ingest_table_str(&text)
}

/// Parses and validates a CSV knot table. Row numbers in errors are file
/// line numbers (the header is line 1).
pub fn ingest_table_str(text: &str) -> Result<Vec<KnotRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Table { row: 1, msg: e.to_string() })?.clone();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::Table { row, msg: e.to_string() }
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let parsed: Row = rec.deserialize(Some(&headers)).map_err(|e| Error::Table { row, msg: e.to_string() })?;
        out.push(validate(parsed, row)?);
    }
    Ok(out)
}

fn validate(r: Row, row: usize) -> Result<KnotRecord> {
    let fail = |msg: String| Error::Table { row, msg };
    if r.determinant % 2 == 0 {
        return Err(fail(format!("determinant {} of a knot must be odd", r.determinant)));
    }
    if (r.determinant as i64 - r.signature - 1).rem_euclid(4) != 0 {
        return Err(fail(format!(
            "determinant {} and signature {} violate det ≡ σ + 1 (mod 4)",
            r.determinant, r.signature
        )));
    }
    let two_bridge = match (r.two_bridge_p, r.two_bridge_q) {
        (None, None) => None,
        (Some(p), Some(q)) => {
            let k = TwoBridgeKnot::new(p, q).map_err(|e| fail(e.to_string()))?;
            if p != r.determinant {
                return Err(fail(format!("two-bridge p = {p} differs from determinant {}", r.determinant)));
            }
            let s = signature(&k);
            if s.abs() != r.signature.abs() {
                return Err(fail(format!("signature {} but S({p},{q}) has signature ±{}", r.signature, s.abs())));
            }
            Some(k)
        }
        _ => return Err(fail("two_bridge_p and two_bridge_q must both be present or both empty".into())),
    };
    Ok(KnotRecord {
        name: r.name,
        determinant: r.determinant,
        signature: r.signature,
        two_bridge,
        slice_genus: r.slice_genus,
    })
}
