//! Line-oriented text format for bigraded complexes.
//!
//! ```text
//! [meta]
//! name = P1
//! variance = cohomological
//! dimension = 1
//!
//! [dims]
//! 0 0 1
//! 1 1 1
//!
//! [sigma]
//! @ 0 0
//! 1
//! @ 1 1
//! 1
//! ```
//!
//! Matrix blocks are keyed by the source bidegree (`@ p q`) and list one row
//! per line. Entries are exact literals such as `-3/2`, `1/2+3/4·i` or `2*i`.
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dolbeault::{validate_dolbeault, Bidegree, BigradedComplex, ComplexError, Variance};
use crate::exactnum::{CMatrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Meta,
    Dims,
    Matrix(usize),
}

const MATRIX_BLOCKS: [&str; 3] = ["del", "delbar", "sigma"];

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, (byte, c)) in s.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((col, b0)) = start.take() {
                out.push((col, &s[b0..byte]));
            }
        } else if start.is_none() {
            start = Some((k + 1, byte));
        }
    }
    if let Some((col, b0)) = start {
        out.push((col, &s[b0..]));
    }
    out
}

struct PendingBlock {
    which: usize,
    key: Bidegree,
    line: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

fn parse_int(line: usize, (col, t): (usize, &str)) -> Result<i64, ParseError> {
    t.parse().map_err(|_| err(line, col, format!("expected an integer, found `{t}`")))
}

/// Parse and validate a complex description.
pub fn parse_complex_file(text: &str) -> Result<BigradedComplex, FileError> {
    let mut section = None;
    let mut meta: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut dims: BTreeMap<Bidegree, usize> = BTreeMap::new();
    let mut blocks: Vec<PendingBlock> = Vec::new();
    let mut last_line = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len() + 1;
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, indent, "unterminated section header"))?;
            section = Some(match name {
                "meta" => Section::Meta,
                "dims" => Section::Dims,
                other => match MATRIX_BLOCKS.iter().position(|b| *b == other) {
                    Some(i) => Section::Matrix(i),
                    None => return Err(err(line, indent, format!("unknown section `{other}`")).into()),
                },
            });
            continue;
        }
        let toks = tokens(body);
        match section {
            None => return Err(err(line, indent, "content before the first section").into()),
            Some(Section::Meta) => {
                let (key, value) = trimmed
                    .split_once('=')
                    .ok_or_else(|| err(line, indent, "expected `key = value`"))?;
                let key = key.trim().to_string();
                if !["name", "variance", "dimension"].contains(&key.as_str()) {
                    return Err(err(line, indent, format!("unknown meta key `{key}`")).into());
                }
                if meta.contains_key(&key) {
                    return Err(err(line, indent, format!("duplicate meta key `{key}`")).into());
                }
                meta.insert(key, (line, value.trim().to_string()));
            }
            Some(Section::Dims) => {
                if toks.len() != 3 {
                    return Err(err(line, indent, "expected `p q dim`").into());
                }
                let p = parse_int(line, toks[0])?;
                let q = parse_int(line, toks[1])?;
                let d = parse_int(line, toks[2])?;
                if d < 0 {
                    return Err(err(line, toks[2].0, "negative dimension").into());
                }
                if dims.insert((p, q), d as usize).is_some() {
                    return Err(err(line, indent, format!("bidegree ({p}, {q}) declared twice")).into());
                }
            }
            Some(Section::Matrix(which)) => {
                if toks[0].1 == "@" {
                    if toks.len() != 3 {
                        return Err(err(line, indent, "expected `@ p q`").into());
                    }
                    let key = (parse_int(line, toks[1])?, parse_int(line, toks[2])?);
                    if blocks.iter().any(|b| b.which == which && b.key == key) {
                        return Err(err(line, indent, format!("{} block at ({}, {}) given twice", MATRIX_BLOCKS[which], key.0, key.1)).into());
                    }
                    blocks.push(PendingBlock { which, key, line, rows: Vec::new() });
                } else {
                    let Some(cur) = blocks.last_mut().filter(|b| b.which == which) else {
                        return Err(err(line, indent, "matrix row before any `@ p q` key").into());
                    };
                    let mut row = Vec::with_capacity(toks.len());
                    for (col, t) in toks {
                        row.push(t.parse::<Scalar>().map_err(|_| err(line, col, format!("invalid exact literal `{t}`")))?);
                    }
                    cur.rows.push((line, row));
                }
            }
        }
    }
    let meta_value = |key: &str| meta.get(key).map(|(l, v)| (*l, v.as_str()));
    let variance = match meta_value("variance") {
        Some((_, "cohomological")) => Variance::Cohomological,
        Some((_, "homological")) => Variance::Homological,
        Some((l, other)) => return Err(err(l, 1, format!("variance must be cohomological or homological, got `{other}`")).into()),
        None => return Err(err(last_line.max(1), 1, "missing meta key `variance`").into()),
    };
    let name = meta_value("name").map(|(_, v)| v.to_string()).unwrap_or_else(|| "unnamed".into());
    let dimension = match meta_value("dimension") {
        Some((l, v)) => Some(v.parse::<i64>().map_err(|_| err(l, 1, format!("dimension must be an integer, got `{v}`")))?),
        None => None,
    };
    let s = variance.sign();
    let dim_at = |b: Bidegree| dims.get(&b).copied().unwrap_or(0);
    let mut maps: [BTreeMap<Bidegree, CMatrix>; 3] = Default::default();
    for b in blocks {
        // user bidegree of the target
        let tgt = match b.which {
            0 => (b.key.0 - s, b.key.1),
            1 => (b.key.0, b.key.1 - s),
            _ => (b.key.1, b.key.0),
        };
        let (rows, cols) = (dim_at(tgt), dim_at(b.key));
        let label = MATRIX_BLOCKS[b.which];
        let shape_err = |line: usize, what: String| -> FileError {
            err(line, 1, format!("{label} block at ({}, {}): {what}, expected {rows}x{cols}", b.key.0, b.key.1)).into()
        };
        if b.rows.len() != rows {
            return Err(shape_err(b.line, format!("{} rows", b.rows.len())));
        }
        let mut m = CMatrix::zeros(rows, cols);
        for (i, (line, r)) in b.rows.iter().enumerate() {
            if r.len() != cols {
                return Err(shape_err(*line, format!("row with {} entries", r.len())));
            }
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        maps[b.which].insert(b.key, m);
    }
    let [del, delbar, sigma] = maps;
    let complex = BigradedComplex::new(name, variance, dimension, dims, del, delbar, sigma).map_err(|e| match e {
        e @ ComplexError::Shape { .. } => FileError::Parse(err(1, 1, e.to_string())),
        ComplexError::Invalid(r) => FileError::Validation(r),
    })?;
    let report = validate_dolbeault(&complex);
    if !report.is_empty() {
        return Err(FileError::Validation(report));
    }
    Ok(complex)
}

/// Canonical text: meta in fixed order, bidegrees sorted, zero blocks
/// omitted, literals in canonical form.
pub fn serialize(a: &BigradedComplex) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[meta]");
    let _ = writeln!(out, "name = {}", a.name);
    let _ = writeln!(out, "variance = {}", a.variance.name());
    if let Some(d) = a.dimension {
        let _ = writeln!(out, "dimension = {d}");
    }
    let _ = writeln!(out, "\n[dims]");
    for ((p, q), d) in a.dims() {
        let _ = writeln!(out, "{p} {q} {d}");
    }
    for which in MATRIX_BLOCKS {
        let blocks: Vec<(Bidegree, CMatrix)> = a.blocks(which).into_iter().filter(|(_, m)| !m.is_zero()).collect();
        if blocks.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n[{which}]");
        for ((p, q), m) in blocks {
            let _ = writeln!(out, "@ {p} {q}");
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet_model, kahler_model};

    const POINT: &str = "[meta]\nvariance = cohomological\n[dims]\n0 0 1\n[sigma]\n@ 0 0\n1\n";

    #[test]
    fn minimal_file_is_the_point() {
        let a = parse_complex_file(POINT).unwrap();
        assert_eq!(a.dims(), BTreeMap::from([((0, 0), 1)]));
        assert_eq!(a.sigma_h(0), CMatrix::identity(1));
    }

    #[test]
    fn shape_mismatch_names_the_block() {
        let text = "[meta]\nvariance = cohomological\n[dims]\n0 0 1\n0 1 1\n[delbar]\n@ 0 0\n1 2\n";
        match parse_complex_file(text) {
            Err(FileError::Parse(e)) => {
                assert!(e.message.contains("delbar"), "{e}");
                assert_eq!(e.line, 8);
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let text = "[meta]\nvariance = cohomological\n[dims]\n0 0 1\n[sigma]\n@ 0 0\n  0.5\n";
        let Err(FileError::Parse(e)) = parse_complex_file(text) else { panic!() };
        assert_eq!((e.line, e.column), (7, 3));
        let Err(FileError::Parse(e)) = parse_complex_file("[nope]\n") else { panic!() };
        assert_eq!(e.line, 1);
        let Err(FileError::Parse(e)) = parse_complex_file("[dims]\n0 x 1\n") else { panic!() };
        assert_eq!((e.line, e.column), (2, 3));
    }

    #[test]
    fn invalid_complex_is_a_validation_error() {
        // σ² ≠ 1
        let text = "[meta]\nvariance = cohomological\n[dims]\n0 0 1\n[sigma]\n@ 0 0\n2\n";
        assert!(matches!(parse_complex_file(text), Err(FileError::Validation(_))));
    }

    #[test]
    fn round_trip_is_canonical() {
        let messy = "# a point\n[sigma]\n@ 0 0\n 2/2 \n[dims]\n0 0 1\n[meta]\nvariance=cohomological\nname = pt\n";
        let a = parse_complex_file(messy).unwrap();
        let canon = serialize(&a);
        assert_eq!(canon, "[meta]\nname = pt\nvariance = cohomological\n\n[dims]\n0 0 1\n\n[sigma]\n@ 0 0\n1\n");
        assert_eq!(serialize(&parse_complex_file(&canon).unwrap()), canon);
        for m in [kahler_model("elliptic").unwrap(), jet_model(3).unwrap()] {
            let text = serialize(&m.complex);
            let back = parse_complex_file(&text).unwrap();
            assert_eq!(back, m.complex);
            assert_eq!(serialize(&back), text);
        }
    }
}
