//! JSON matrix files: `{"dim": m, "re": [[…]], "im": [[…]]}`, row-major,
//! `"im"` optional. Writers emit every entry with 17 significant digits.

use std::fmt::Write as _;

use num_complex::Complex;
use serde::Deserialize;

use super::matrix::ComplexMatrix;
use crate::error::Error;

#[derive(Debug, Deserialize)]
struct MatrixFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixIoError {
    #[error("malformed matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix file declares dim {declared} but {field} has shape {rows}x{cols}")]
    Shape { declared: usize, field: &'static str, rows: usize, cols: usize },
    #[error(transparent)]
    Matrix(#[from] Error),
}

fn check_shape(declared: usize, field: &'static str, rows: &[Vec<f64>]) -> std::result::Result<(), MatrixIoError> {
    if rows.len() != declared {
        return Err(MatrixIoError::Shape { declared, field, rows: rows.len(), cols: rows.first().map_or(0, Vec::len) });
    }
    for r in rows {
        if r.len() != declared {
            return Err(MatrixIoError::Shape { declared, field, rows: rows.len(), cols: r.len() });
        }
    }
    Ok(())
}

/// Parses a matrix file.
pub fn parse_matrix(text: &str) -> std::result::Result<ComplexMatrix<f64>, MatrixIoError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    if file.dim == 0 {
        return Err(Error::EmptyMatrix.into());
    }
    check_shape(file.dim, "re", &file.re)?;
    if let Some(im) = &file.im {
        check_shape(file.dim, "im", im)?;
    }
    let m = ComplexMatrix::from_fn(file.dim, |i, j| {
        let im = file.im.as_ref().map_or(0.0, |im| im[i][j]);
        Complex::new(file.re[i][j], im)
    });
    m.check_finite()?;
    Ok(m)
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows(out: &mut String, m: &ComplexMatrix<f64>, part: impl Fn(&Complex<f64>) -> f64) {
    let n = m.dim();
    out.push('[');
    for i in 0..n {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for j in 0..n {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&fmt_num(part(&m[(i, j)])));
        }
        out.push(']');
    }
    out.push(']');
}

/// Serializes a matrix; the imaginary block is always written.
pub fn format_matrix(m: &ComplexMatrix<f64>) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\"dim\": {}, \"re\": ", m.dim());
    write_rows(&mut out, m, |z| z.re);
    out.push_str(", \"im\": ");
    write_rows(&mut out, m, |z| z.im);
    out.push_str("}\n");
    out
}

/// Parses a weights file: a JSON array of numbers.
pub fn parse_weights(text: &str) -> std::result::Result<Vec<f64>, MatrixIoError> {
    Ok(serde_json::from_str(text)?)
}
