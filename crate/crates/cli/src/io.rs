//! JSON input formats.
//!
//! * Matrix: `{"q": 4, "rows": [[0, 1, 0, 0], ...]}`. Entries are JSON numbers
//!   or strings holding an integer or a fraction such as `"-3/7"`.
//! * Algebra: `{"q": 4, "basis": [matrix, ...]}` where each matrix is either a
//!   matrix object or a bare array of rows.
//! * Coordinate map `φ`: `{"rows": [[...], ...]}` or a bare array of rows.

use std::fs;
use std::path::Path;

use conjloc_core::algebra::SubspaceW;
use conjloc_core::exact::{Rational, RationalSkewMatrix};
use conjloc_core::linalg::Matrix;
use conjloc_core::spectral::{SkewMatrix, SKEW_TOL};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// A matrix entry as written in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub q: usize,
    pub rows: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Full(MatrixFile),
    Rows(Vec<Vec<Entry>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub q: usize,
    pub basis: Vec<MatrixSpec>,
}

/// Gram residual up to which an input basis counts as orthonormal as given.
const ORTHONORMAL_KEEP: f64 = 1e-14;

fn bad(field: impl Into<String>, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {}", field.into(), msg))
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: cannot read: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed JSON: {e}", path.display())))
}

fn parse_int(s: &str, field: &str) -> Result<BigInt, CliError> {
    s.trim().parse::<BigInt>().map_err(|_| bad(field, format!("'{s}' is not an integer or fraction")))
}

impl Entry {
    /// Exact value; JSON numbers convert to the rational they denote in
    /// binary floating point.
    pub fn to_rational(&self, field: &str) -> Result<Rational, CliError> {
        match self {
            Entry::Number(x) => {
                Rational::from_float(*x).ok_or_else(|| bad(field, "number is not finite"))
            }
            Entry::Text(s) => match s.split_once('/') {
                Some((n, d)) => {
                    let den = parse_int(d, field)?;
                    if den.is_zero() {
                        return Err(bad(field, "zero denominator"));
                    }
                    Ok(Rational::new(parse_int(n, field)?, den))
                }
                None => Ok(Rational::from_integer(parse_int(s, field)?)),
            },
        }
    }

    pub fn to_f64(&self, field: &str) -> Result<f64, CliError> {
        match self {
            Entry::Number(x) if x.is_finite() => Ok(*x),
            Entry::Number(_) => Err(bad(field, "number is not finite")),
            Entry::Text(_) => self
                .to_rational(field)?
                .to_f64()
                .ok_or_else(|| bad(field, "value out of range")),
        }
    }
}

fn check_shape(rows: &[Vec<Entry>], q: usize, field: &str) -> Result<(), CliError> {
    if q < 2 {
        return Err(bad(format!("{field}.q"), format!("must be at least 2, got {q}")));
    }
    if rows.len() != q {
        return Err(bad(format!("{field}.rows"), format!("expected {q} rows, found {}", rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != q {
            return Err(bad(format!("{field}.rows[{i}]"), format!("expected {q} entries, found {}", r.len())));
        }
    }
    Ok(())
}

fn float_rows(rows: &[Vec<Entry>], field: &str) -> Result<Vec<Vec<f64>>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| e.to_f64(&format!("{field}.rows[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn skew_from_rows(rows: &[Vec<Entry>], field: &str) -> Result<SkewMatrix, CliError> {
    let rows = float_rows(rows, field)?;
    SkewMatrix::from_rows(&rows, SKEW_TOL).map_err(|e| bad(format!("{field}.rows"), e))
}

fn parse<T: for<'de> Deserialize<'de>>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| bad(what, e))
}

pub fn matrix_from_value(value: Value) -> Result<MatrixFile, CliError> {
    let m: MatrixFile = parse(value, "matrix")?;
    check_shape(&m.rows, m.q, "matrix")?;
    Ok(m)
}

pub fn skew_from_value(value: Value) -> Result<SkewMatrix, CliError> {
    let m = matrix_from_value(value)?;
    skew_from_rows(&m.rows, "matrix")
}

pub fn rational_skew_from_value(value: Value) -> Result<RationalSkewMatrix, CliError> {
    let m = matrix_from_value(value)?;
    let rows = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, e)| e.to_rational(&format!("matrix.rows[{i}][{j}]")))
                .collect()
        })
        .collect::<Result<Vec<Vec<Rational>>, _>>()?;
    RationalSkewMatrix::from_rows(rows).map_err(|e| bad("matrix.rows", e))
}

pub fn read_skew(path: &Path) -> Result<SkewMatrix, CliError> {
    skew_from_value(read_json(path)?)
}

pub fn read_rational_skew(path: &Path) -> Result<RationalSkewMatrix, CliError> {
    rational_skew_from_value(read_json(path)?)
}

pub fn algebra_from_value(value: Value) -> Result<SubspaceW, CliError> {
    let a: AlgebraFile = parse(value, "algebra")?;
    if a.basis.is_empty() {
        return Err(bad("algebra.basis", "must contain at least one matrix"));
    }
    let mut raw = Vec::with_capacity(a.basis.len());
    for (k, spec) in a.basis.iter().enumerate() {
        let field = format!("algebra.basis[{k}]");
        let rows = match spec {
            MatrixSpec::Full(m) => {
                if m.q != a.q {
                    return Err(bad(format!("{field}.q"), format!("expected {}, found {}", a.q, m.q)));
                }
                &m.rows
            }
            MatrixSpec::Rows(r) => r,
        };
        check_shape(rows, a.q, &field)?;
        raw.push(skew_from_rows(rows, &field)?);
    }
    // A basis that is already orthonormal to rounding is kept verbatim, so
    // files written by `algebra_file` read back to the identical plane.
    if let Ok(w) = SubspaceW::from_orthonormal(raw.clone()) {
        if w.gram_residual() <= ORTHONORMAL_KEEP {
            return Ok(w);
        }
    }
    SubspaceW::orthonormalize(a.q, &raw).map_err(|e| bad("algebra.basis", e))
}

pub fn read_algebra(path: &Path) -> Result<SubspaceW, CliError> {
    algebra_from_value(read_json(path)?)
}

pub fn phi_from_value(value: Value) -> Result<Matrix, CliError> {
    let value = match value {
        Value::Object(mut o) => o.remove("rows").ok_or_else(|| bad("phi.rows", "missing"))?,
        v => v,
    };
    let rows: Vec<Vec<Entry>> = parse(value, "phi.rows")?;
    let p = rows.len();
    if p == 0 {
        return Err(bad("phi.rows", "must not be empty"));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != p {
            return Err(bad(format!("phi.rows[{i}]"), format!("expected {p} entries, found {}", r.len())));
        }
    }
    let rows = float_rows(&rows, "phi")?;
    Ok(Matrix::from_rows(&rows).expect("checked square"))
}

pub fn read_phi(path: &Path) -> Result<Matrix, CliError> {
    phi_from_value(read_json(path)?)
}

/// Matrix file for `z` with plain JSON numbers.
pub fn matrix_file(z: &SkewMatrix) -> MatrixFile {
    MatrixFile {
        q: z.dim(),
        rows: z.matrix().to_rows().into_iter().map(|r| r.into_iter().map(Entry::Number).collect()).collect(),
    }
}

/// Algebra file listing the orthonormal basis of `w`.
pub fn algebra_file(w: &SubspaceW) -> AlgebraFile {
    AlgebraFile {
        q: w.q(),
        basis: w.basis().iter().map(|z| MatrixSpec::Full(matrix_file(z))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use conjloc_core::exact::rational;
    use serde_json::json;

    #[test]
    fn fractions_and_numbers() {
        let z = rational_skew_from_value(json!({"q": 2, "rows": [[0, "3/4"], ["-3/4", 0]]})).unwrap();
        assert_eq!(*z.matrix().get(0, 1), rational(3, 4));
        let f = skew_from_value(json!({"q": 2, "rows": [[0, "1/2"], [-0.5, 0]]})).unwrap();
        assert_eq!(f.get(1, 0), -0.5);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = skew_from_value(json!({"q": 3, "rows": [[0, 1, 0], [-1, 0]]})).unwrap_err();
        assert!(e.to_string().contains("matrix.rows"), "{e}");
        let e = skew_from_value(json!({"q": 2, "rows": [[0, "x"], [0, 0]]})).unwrap_err();
        assert!(e.to_string().contains("matrix.rows[0][1]"), "{e}");
        let e = skew_from_value(json!({"rows": [[0]]})).unwrap_err();
        assert!(e.to_string().contains("matrix"), "{e}");
        let e = rational_skew_from_value(json!({"q": 2, "rows": [[0, "1/0"], [0, 0]]})).unwrap_err();
        assert!(e.to_string().contains("zero denominator"), "{e}");
        let e = algebra_from_value(json!({"q": 2, "basis": []})).unwrap_err();
        assert!(e.to_string().contains("algebra.basis"), "{e}");
    }

    #[test]
    fn algebra_round_trip() {
        let w = algebra_from_value(json!({"q": 3, "basis": [
            [[0, 1, 0], [-1, 0, 0], [0, 0, 0]],
            {"q": 3, "rows": [[0, 0, 2], [0, 0, 0], [-2, 0, 0]]}
        ]}))
        .unwrap();
        assert_eq!(w.p(), 2);
        let back = algebra_from_value(serde_json::to_value(algebra_file(&w)).unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn phi_formats() {
        let a = phi_from_value(json!({"rows": [[1, 0], [0, "1/2"]]})).unwrap();
        let b = phi_from_value(json!([[1, 0], [0, 0.5]])).unwrap();
        assert_eq!(a, b);
        let e = phi_from_value(json!({"rows": [[1, 0], [0]]})).unwrap_err();
        assert!(e.to_string().contains("phi.rows[1]"), "{e}");
    }
}
