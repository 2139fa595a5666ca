//! Matrix interchange format and canonical JSON emission.
//!
//! The matrix file schema is
//!
//! ```text
//! {"rows": n, "cols": m, "entries": [[re, im], ...]}
//! ```
//!
//! with entries row-major. All floats in emitted JSON are written as
//! `{:.16e}` (17 significant digits), which round-trips f64 exactly and
//! keeps output byte-stable across runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix};

/// JSON formatter writing every f64 with 17 significant digits.
#[derive(Clone, Copy, Default)]
pub struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value to single-line JSON with canonical float formatting.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("JSON serialization cannot fail for report types");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// On-disk matrix representation: row-major `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(a: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(a.nrows() * a.ncols());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let z = a[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self {
            rows: a.nrows(),
            cols: a.ncols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parse(
                "matrix dimensions must be at least 1x1".into(),
            ));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.entries.len()
            )));
        }
        if self
            .entries
            .iter()
            .any(|e| !e[0].is_finite() || !e[1].is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let e = self.entries[i * self.cols + j];
            c(e[0], e[1])
        }))
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
