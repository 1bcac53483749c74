//! Plain-text polynomial files.
//!
//! One term per line as `j k re im`; `#` starts a comment; an optional
//! `n <N>` header bounds every `j + k`. Inline polynomials use the same
//! grammar with `;` separating lines.
//!
//! ```text
//! # z^2 + z + zbar + 1
//! n 2
//! 2 0 1 0
//! 1 0 1 0
//! 0 1 1 0
//! 0 0 1 0
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::PolyPoly;

/// Parses the polynomial text format. Duplicate index pairs are an error.
pub fn parse_poly(text: &str) -> Result<PolyPoly> {
    let mut header: Option<(usize, usize)> = None;
    let mut terms: BTreeMap<(usize, usize), (usize, Complex64)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields[0] == "n" {
            if fields.len() != 2 {
                return Err(err("header must be `n <N>`".into()));
            }
            if header.is_some() || !terms.is_empty() {
                return Err(err("header `n` must come once, before any term".into()));
            }
            let n = fields[1]
                .parse::<usize>()
                .map_err(|e| err(format!("bad degree bound {:?}: {e}", fields[1])))?;
            header = Some((n, line));
            continue;
        }
        if fields.len() != 4 {
            return Err(err(format!("expected `j k re im`, found {} fields", fields.len())));
        }
        let j = parse_index(fields[0]).map_err(&err)?;
        let k = parse_index(fields[1]).map_err(&err)?;
        let re = parse_real(fields[2]).map_err(&err)?;
        let im = parse_real(fields[3]).map_err(&err)?;
        if let Some((n, _)) = header {
            if j + k > n {
                return Err(err(format!("term ({j},{k}) exceeds declared degree bound n = {n}")));
            }
        }
        if let Some((first, _)) = terms.get(&(j, k)) {
            return Err(err(format!("duplicate term ({j},{k}), first given on line {first}")));
        }
        terms.insert((j, k), (line, Complex64::new(re, im)));
    }
    PolyPoly::from_terms(terms.into_iter().map(|((j, k), (_, c))| (j, k, c)))
}

fn parse_index(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>().map_err(|e| format!("bad index {s:?}: {e}"))
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let v = s.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite number {s:?}"))
    }
}

/// Parses an inline polynomial, `;` separating lines.
pub fn parse_inline(s: &str) -> Result<PolyPoly> {
    parse_poly(&s.replace(';', "\n"))
}

pub fn read_poly(path: impl AsRef<Path>) -> Result<PolyPoly> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_poly(&text)
}

/// Serializes with a header and nonzero terms by descending total degree.
pub fn write_poly_string(p: &PolyPoly) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", p.degree_bound());
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by_key(|t| std::cmp::Reverse((t.0 + t.1, t.0)));
    for (j, k, c) in terms {
        let _ = writeln!(out, "{j} {k} {} {}", fmt_num(c.re), fmt_num(c.im));
    }
    out
}

pub fn write_poly(p: &PolyPoly, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_poly_string(p)).map_err(|e| Error::io(path, e))
}

/// Shortest round-trip decimal; exponent notation outside `[1e-5, 1e16)`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
