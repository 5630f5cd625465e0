//! JSON matrix files.
//!
//! ```json
//! { "rows": 2, "cols": 2, "real": [[1, 0], [0, 0]], "dual": [[1, 0], [0, 1]] }
//! ```
//!
//! `dual` may be omitted and defaults to zero. Unknown keys are rejected.
//! Numbers are written in the shortest form that parses back to the same
//! binary64 value.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dual::{DualMatrix, Matrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<Vec<f64>>>,
}

fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(part: &str, rows: usize, cols: usize, data: &[Vec<f64>]) -> Result<Matrix> {
    if data.len() != rows {
        return Err(Error::Parse(format!("{part} has {} rows, header says {rows}", data.len())));
    }
    if let Some((i, r)) = data.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::Parse(format!(
            "{part} row {i} has {} entries, header says {cols}",
            r.len()
        )));
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| data[i][j]))
}

impl MatrixFile {
    pub fn from_dual(x: &DualMatrix) -> Self {
        Self {
            rows: x.rows(),
            cols: x.cols(),
            real: to_rows(x.real()),
            dual: Some(to_rows(x.dual())),
        }
    }

    pub fn to_dual(&self) -> Result<DualMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parse(format!("empty shape {}x{}", self.rows, self.cols)));
        }
        let real = from_rows("real", self.rows, self.cols, &self.real)?;
        let dual = match &self.dual {
            Some(d) => from_rows("dual", self.rows, self.cols, d)?,
            None => Matrix::zeros(self.rows, self.cols),
        };
        DualMatrix::new(real, dual)
    }
}

pub fn parse_matrix(text: &str) -> Result<DualMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_dual()
}

pub fn to_json(x: &DualMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_dual(x)).expect("matrix files always serialize")
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DualMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_matrix(path: impl AsRef<Path>, x: &DualMatrix) -> Result<()> {
    let mut text = to_json(x);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
