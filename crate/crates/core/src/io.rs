//! JSON interchange formats. Matrices are row-major with separate real and
//! imaginary parts; complex scalars are `{"re": .., "im": ..}` objects.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, ComplexVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        c64(z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn finite(path: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(parse_err(path, format!("non-finite entry {x}")))
    }
}

impl MatrixJson {
    /// Converts to a matrix; `path` names this object in error messages.
    pub fn to_matrix(&self, path: &str) -> Result<ComplexMatrix> {
        let rows = self.re.len();
        if rows == 0 {
            return Err(parse_err(&format!("{path}.re"), "empty matrix"));
        }
        let cols = self.re[0].len();
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in self.re.iter().enumerate() {
            if row.len() != cols {
                return Err(parse_err(
                    &format!("{path}.re[{i}]"),
                    format!("row has {} entries, expected {cols}", row.len()),
                ));
            }
            let im_row = match &self.im {
                Some(im) => {
                    let r = im.get(i).ok_or_else(|| {
                        parse_err(&format!("{path}.im"), format!("missing row {i}"))
                    })?;
                    if r.len() != cols {
                        return Err(parse_err(
                            &format!("{path}.im[{i}]"),
                            format!("row has {} entries, expected {cols}", r.len()),
                        ));
                    }
                    Some(r)
                }
                None => None,
            };
            for (j, &x) in row.iter().enumerate() {
                let y = im_row.map_or(0.0, |r| r[j]);
                entries.push(c64(
                    finite(&format!("{path}.re[{i}][{j}]"), x)?,
                    finite(&format!("{path}.im[{i}][{j}]"), y)?,
                ));
            }
        }
        if let Some(im) = &self.im {
            if im.len() != rows {
                return Err(parse_err(
                    &format!("{path}.im"),
                    format!("{} rows, expected {rows}", im.len()),
                ));
            }
        }
        let m = ComplexMatrix::from_row_major(rows, cols, &entries)
            .map_err(|e| parse_err(path, e.to_string()))?;
        match &self.dims {
            Some(d) => m
                .with_dims(d.clone())
                .map_err(|e| parse_err(&format!("{path}.dims"), e.to_string())),
            None => Ok(m),
        }
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = m.to_row_major();
        Self {
            dims: m.dims().map(<[usize]>::to_vec),
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: Some(rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect()),
        }
    }
}

impl VectorJson {
    pub fn to_vector(&self, path: &str) -> Result<ComplexVector> {
        if let Some(im) = &self.im {
            if im.len() != self.re.len() {
                return Err(parse_err(
                    &format!("{path}.im"),
                    format!("{} entries, expected {}", im.len(), self.re.len()),
                ));
            }
        }
        let mut entries = Vec::with_capacity(self.re.len());
        for (j, &x) in self.re.iter().enumerate() {
            let y = self.im.as_ref().map_or(0.0, |im| im[j]);
            entries.push(c64(
                finite(&format!("{path}.re[{j}]"), x)?,
                finite(&format!("{path}.im[{j}]"), y)?,
            ));
        }
        let v = ComplexVector::new(entries).map_err(|e| parse_err(path, e.to_string()))?;
        match &self.dims {
            Some(d) => v
                .with_dims(d.clone())
                .map_err(|e| parse_err(&format!("{path}.dims"), e.to_string())),
            None => Ok(v),
        }
    }

    pub fn from_vector(v: &ComplexVector) -> Self {
        Self {
            dims: v.dims().map(<[usize]>::to_vec),
            re: v.entries().iter().map(|z| z.re).collect(),
            im: Some(v.entries().iter().map(|z| z.im).collect()),
        }
    }
}

/// Parses JSON text, mapping serde errors to [`Error::Parse`] with the given
/// source name.
pub fn from_json_str<T: for<'de> Deserialize<'de>>(text: &str, source: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_err(source, e.to_string()))
}
